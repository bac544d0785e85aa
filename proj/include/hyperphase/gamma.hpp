#pragma once

// The eps -> 0 side: rescaled energies, sign fields and their jump sets,
// recovery fields built from the optimal profile, annulus gluing, and
// convergence sweeps over an eps ladder.

#include <string>
#include <vector>

#include "hyperphase/analysis.hpp"
#include "hyperphase/pdesolver.hpp"

namespace hyperphase {

struct EnergyReport {
    double eps = 0.0;
    double E = 0.0;       // E_eps(u, B_R)
    double F = 0.0;       // sqrt(2) eps E
    double mu = 0.0;      // eps E
    double length = 0.0;  // hyperbolic length of the interface inside B_R
    double target = 0.0;  // C_W * 2 * length
};

/// Length is taken from the zero set of u unless reference_length >= 0.
EnergyReport rescaled_energy(const Field& u, double eps, const Potential& pot, double R,
                             double reference_length = -1.0);

class SignField {
public:
    /// sgn(u) with u >= 0 mapped to +1.
    static SignField threshold(const Field& u);
    static SignField from_function(std::shared_ptr<const Grid> grid, const std::function<double(DiskPoint)>& f);

    const Field& field() const { return field_; }
    const std::vector<Polyline>& jumps() const { return jumps_; }
    /// |D_g v|(B_R) = 2 x hyperbolic length of the jump set.
    double total_variation() const { return 2.0 * hyperbolic_length(jumps_); }

private:
    explicit SignField(Field f);
    Field field_;
    std::vector<Polyline> jumps_;
};

/// Geodesic through two disk points.
Geodesic geodesic_through(DiskPoint a, DiskPoint b);

/// h_eps(v(x) * min_j |d(x, Sigma_j)|) where Sigma_j is the geodesic through
/// the ends of the j-th jump polyline. Every jump vertex must lie within
/// Euclidean distance 2h of its geodesic.
Field recovery_sequence(const SignField& v, const ProfileSolution& profile);

/// Euclidean L1 distance between two fields on the same grid.
double l1_distance(const Field& a, const Field& b);

struct GlueResult {
    Field glued;
    int slices = 0;
    int chosen = 0;                 // 0-based slice index
    double slice_width = 0.0;       // delta / slices
    double r_inner = 0.0, r_outer = 0.0;
    std::vector<double> mismatch;   // (1/width) int_slice |v - w| dx
};

/// Blends v_inner into w_outer across the slice of B_R \ B_{R-delta} with the
/// least scaled L1 mismatch; floor(delta / (eta eps)) slices.
GlueResult glue_boundary(const Field& v_inner, const Field& w_outer, double R, double delta, double eta, double eps);

struct GlueEstimate {
    double glued_slice = 0.0;     // eps E(glued, slice)
    double v_annulus = 0.0;       // eps E(v, C_delta)
    double w_annulus = 0.0;       // eps E(w, C_delta)
    double mismatch_term = 0.0;   // chosen mismatch / eta
    double area_term = 0.0;       // weighted slice area / eps
    double constant = 0.0;        // glued_slice / (sum of the four terms)
    double glued_total = 0.0;     // eps E(glued, B_R)
    double split_total = 0.0;     // eps E(v, B_R') + eps E(glued, slice) + eps E(w, B_R \ B_R'')
};

GlueEstimate glue_estimate(const GlueResult& g, const Field& v_inner, const Field& w_outer, double R, double delta,
                           double eta, double eps, const Potential& pot);

/// h_eps of max(min(d_in, rho - rad), min(d_out, rad - rho)), rad the hyperbolic
/// radial coordinate: the jump of `inner` inside |x| < rho, of `outer` beyond,
/// joined by arcs of |x| = rho where they disagree.
Field recovery_with_boundary(std::shared_ptr<const Grid> grid, const Geodesic& inner, const Geodesic& outer, double rho,
                             const ProfileSolution& profile);

struct SweepReport {
    std::vector<EnergyReport> reports;
    std::vector<double> l1_prev;   // L1 distance to the previous eps, on the finer grid
    std::vector<std::string> warnings;
    std::vector<Field> fields;
    SignField limit() const { return SignField::threshold(fields.back()); }
};

SweepReport gamma_sweep(const BoundaryData& bd, const std::vector<double>& eps_list, double R, const Potential& pot,
                        const SolveOptions& opts = {});

}  // namespace hyperphase
