#pragma once

// Minimization of the disk energy
//   E(u, B_R) = int 1/2 |grad u|^2 dx + int W(u)/eps^2 * 4/(1-|x|^2)^2 dx
// on a lattice, with the ring of boundary nodes constrained between the
// barriers and continuation in eps.

#include <memory>
#include <string>
#include <vector>

#include "hyperphase/barriers.hpp"
#include "hyperphase/grid.hpp"

namespace hyperphase {

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, std::vector<double> history = {})
        : std::runtime_error(what), history_(std::move(history)) {}
    const std::vector<double>& history() const { return history_; }

private:
    std::vector<double> history_;
};

/// Spacing eps (1 - R^2) / 6 that resolves the layer up to |x| = R.
double auto_spacing(double eps, double R);

/// Throws std::invalid_argument echoing the bound when h is too coarse.
void require_layer_bound(double h, double eps, double R);

/// Edge sum of (u_a - u_b)^2 / 2 plus node sum of h^2 w W(u)/eps^2.
double discrete_energy(const Field& u, double eps, const Potential& pot);
/// Same, restricted to nodes with |x| < r and edges whose midpoint has |x| < r.
double discrete_energy_within(const Field& u, double eps, const Potential& pot, double r);
/// Restriction to r0 <= |x| < r1 by the same rule; annuli partition the energy.
double discrete_energy_annulus(const Field& u, double eps, const Potential& pot, double r0, double r1);

/// Max interior defect of Lap u + 4/(1-|x|^2)^2 f_eps(u).
double residual_norm(const Field& u, double eps, const Potential& pot);

/// eps E(u, B_R).
double local_energy_bound_check(const Field& u, double eps, const Potential& pot, double R);

struct SolveOptions {
    std::vector<double> eps_ladder;  // empty: max(target, 0.4) halved down to the target
    double tol = 1e-6;
    int max_newton = 200;
    int max_cg = 4000;
    bool deterministic = true;
    double sandwich_slack = -1.0;    // negative: 1e-6 + (h / (eps (1 - R^2)))^2 / 2
    int profile_nodes = 0;
    FamilyPolicy policy;
};

std::vector<double> continuation_ladder(double target, const SolveOptions& opts);

struct StageReport {
    double eps = 0.0;
    int newton_iterations = 0;
    int cg_iterations = 0;
    double residual = 0.0;
    double energy = 0.0;
    double initial_energy = 0.0;
    std::vector<double> history;  // residual after each Newton step
};

struct SolveResult {
    Field u;
    std::vector<StageReport> stages;
    double residual = 0.0;
    double energy = 0.0;
    double midpoint_energy = 0.0;  // energy of (lower + upper)/2 at the target eps
    double slack = 0.0;
    SandwichReport sandwich;
    std::shared_ptr<const BarrierPair> barriers;
};

/// Box-constrained minimization on a fixed eps with the ring between
/// bp's grid values; returns the stage report and updates u in place.
StageReport minimize_stage(Field& u, const Potential& pot, const BarrierPair& bp, const SolveOptions& opts);

/// Continuation solve ending at bp's eps. Families of bp are reused with
/// profiles at every ladder value.
SolveResult solve_minimizer(std::shared_ptr<const Grid> grid, double eps, const Potential& pot,
                            std::shared_ptr<BarrierPair> bp, const SolveOptions& opts = {});

/// Builds profile and barriers for the data, then calls solve_minimizer.
SolveResult solve_data(const BoundaryData& bd, double eps, const Potential& pot, double R, double h,
                       const SolveOptions& opts = {});

struct ExhaustionReport {
    std::vector<double> radii;
    std::vector<double> differences;       // max-norm gap of successive solutions on B_{radii[0]}
    std::vector<double> inner_energies;    // energy on B_{radii[0]}
    std::vector<std::string> warnings;
    std::vector<SolveResult> solves;
};

/// h <= 0 selects the auto spacing per radius.
ExhaustionReport exhaustion_solve(const BoundaryData& bd, double eps, const Potential& pot,
                                  const std::vector<double>& R_list, double h, const SolveOptions& opts = {});

}  // namespace hyperphase
