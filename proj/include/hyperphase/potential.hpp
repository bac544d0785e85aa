#pragma once

#include <functional>
#include <string>
#include <vector>

namespace hyperphase {

/// Even double-well potential W with wells at +-1. The phase-field scaling
/// enters only through 1/eps^2 at the call sites.
class Potential {
public:
    enum class Kind { Quartic, Custom };
    using Fn = std::function<double(double)>;

    /// W(t) = (1 - t^2)^2 / 4.
    static Potential quartic();
    static Potential custom(std::string name, Fn w, Fn w_prime, Fn w_second);

    /// Built-in wells by name; only "quartic" exists.
    static Potential from_name(const std::string& name);

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }

    double w(double t) const;
    double w_prime(double t) const;
    double w_second(double t) const;

    /// f_eps(t) = -W'(t) / eps^2.
    double f_eps(double t, double eps) const { return -w_prime(t) / (eps * eps); }

    double curvature() const { return w_second(1.0); }

    /// Linearized decay rate of 1 - h at the well for the weighted profile
    /// ODE with weight exponent n - 1.
    double decay_rate(int n, double eps) const;

private:
    Kind kind_ = Kind::Quartic;
    std::string name_ = "quartic";
    Fn w_, w_prime_, w_second_;
};

enum class WellClause { Even = 1, ZeroSet = 2, Curvature = 3, Monotone = 4 };

struct WellViolation {
    WellClause clause;
    std::string message;
};

struct WellReport {
    std::vector<WellViolation> violations;

    bool ok() const { return violations.empty(); }
    bool violates(WellClause c) const;
    std::string summary() const;
};

/// Checks the four structural assumptions on a 10^4-point sample of [-3, 3].
WellReport validate_assumptions(const Potential& pot);

/// Throws std::invalid_argument naming every violated clause.
void require_valid(const Potential& pot);

/// Surface tension C_W = integral of sqrt(W) over [-1, 1].
double cw_constant(const Potential& pot);

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol);

}  // namespace hyperphase
