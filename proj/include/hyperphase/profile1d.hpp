#pragma once

// Odd increasing transition profile h_eps of the weighted one-dimensional
// problem  h'' + (n-1) tanh(tau) h' = W'(h)/eps^2,  h(+-inf) = +-1,  h(0) = 0,
// obtained by direct minimization of the weighted energy
//   E(h) = int (h'^2/2 + W(h)/eps^2) cosh^{n-1}(tau) dtau.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperphase/potential.hpp"

namespace hyperphase {

class ProfileError : public std::runtime_error {
public:
    ProfileError(const std::string& what, double last_residual = 0.0)
        : std::runtime_error(what), last_residual_(last_residual) {}
    double last_residual() const { return last_residual_; }

private:
    double last_residual_;
};

enum class ProfileSeed { Tanh, LinearRamp };

struct ProfileOptions {
    double T = 0.0;          // truncation; 0 selects 20 max(eps, 1)
    int node_count = 0;      // minimum element count; the graded grid is bisected until reached
    double tol = 1e-8;       // max interior discrete Euler-Lagrange defect
    int max_iterations = 500;
    ProfileSeed seed = ProfileSeed::Tanh;
};

struct ProfileTail {
    double amplitude = 0.0;  // 1 - h(T)
    double rate = 0.0;       // decay exponent beyond T
};

class ProfileSolution {
public:
    int n() const { return n_; }
    double eps() const { return eps_; }
    double T() const { return nodes_.back(); }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& values() const { return values_; }
    double slope0() const { return slopes_.front(); }
    const ProfileTail& tail() const { return tail_; }
    const Potential& potential() const { return pot_; }
    int iterations() const { return iterations_; }

    /// Monotone cubic interpolation on [-T, T], exponential tail beyond.
    double evaluate(double tau) const;
    double derivative(double tau) const;
    /// 1 - |h(tau)| without cancellation: continued from the last node where
    /// it exceeds 1e-6 by the exponential tail rate.
    double one_minus(double tau) const;
    /// g_eps(xi) = h_eps(asinh xi).
    double g_of_xi(double xi) const { return evaluate(std::asinh(xi)); }

    /// Weighted energy over the whole line (odd extension plus tails); +inf
    /// when the tail decays too slowly for the weight.
    double energy() const { return energy_; }
    /// Energy carried by |tau| <= a.
    double energy_within(double a) const;
    /// Max interior defect of the discrete Euler-Lagrange equations.
    double residual() const { return residual_; }
    /// Upper bound on |h'| over the line.
    double lipschitz() const { return lipschitz_; }

private:
    friend ProfileSolution solve_profile(int, double, const Potential&, const ProfileOptions&);

    int n_ = 2;
    double eps_ = 0.1;
    Potential pot_;
    std::vector<double> nodes_;
    std::vector<double> values_;
    std::vector<double> slopes_;
    ProfileTail tail_;
    double energy_ = 0.0;
    double residual_ = 0.0;
    double lipschitz_ = 0.0;
    int iterations_ = 0;

    double value_pos(double t) const;
    double slope_pos(double t) const;
};

/// Minimizes the discrete weighted energy over piecewise-linear h with
/// h(0) = 0 and free right value in [0, 1].
ProfileSolution solve_profile(int n, double eps, const Potential& pot, const ProfileOptions& opts = {});

/// Graded grid on [0, T]: spacing eps/10 on [0, 10 eps], geometric beyond.
std::vector<double> graded_grid(double eps, double T, int min_elements);

double profile_energy(const ProfileSolution& p);
double profile_residual(const ProfileSolution& p);

/// Finite-difference defect of the tau-form ODE applied to the interpolant.
double tau_form_defect(const ProfileSolution& p, double tau, double step);
/// Finite-difference defect of the xi-form ODE (1+xi^2) g'' + n xi g' + f(g).
double xi_form_defect(const ProfileSolution& p, double xi, double step);

}  // namespace hyperphase
