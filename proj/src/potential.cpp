#include "hyperphase/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hyperphase {

Potential Potential::quartic() { return Potential{}; }

Potential Potential::custom(std::string name, Fn w, Fn w_prime, Fn w_second) {
    Potential p;
    p.kind_ = Kind::Custom;
    p.name_ = std::move(name);
    p.w_ = std::move(w);
    p.w_prime_ = std::move(w_prime);
    p.w_second_ = std::move(w_second);
    return p;
}

Potential Potential::from_name(const std::string& name) {
    if (name == "quartic") return quartic();
    throw std::invalid_argument("unknown well '" + name + "' (available: quartic)");
}

double Potential::w(double t) const {
    if (kind_ == Kind::Quartic) {
        const double s = 1.0 - t * t;
        return 0.25 * s * s;
    }
    return w_(t);
}

double Potential::w_prime(double t) const {
    if (kind_ == Kind::Quartic) return t * t * t - t;
    return w_prime_(t);
}

double Potential::w_second(double t) const {
    if (kind_ == Kind::Quartic) return 3.0 * t * t - 1.0;
    return w_second_(t);
}

double Potential::decay_rate(int n, double eps) const {
    const double a = static_cast<double>(n - 1);
    return 0.5 * (-a + std::sqrt(a * a + 4.0 * curvature() / (eps * eps)));
}

bool WellReport::violates(WellClause c) const {
    return std::any_of(violations.begin(), violations.end(), [c](const WellViolation& v) { return v.clause == c; });
}

std::string WellReport::summary() const {
    if (ok()) return "all assumptions hold";
    std::ostringstream os;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i) os << "; ";
        os << "(" << static_cast<int>(violations[i].clause) << ") " << violations[i].message;
    }
    return os.str();
}

WellReport validate_assumptions(const Potential& pot) {
    WellReport rep;
    constexpr int kSamples = 10000;
    constexpr double kLo = -3.0, kHi = 3.0;
    const double step = (kHi - kLo) / (kSamples - 1);

    double worst_odd = 0.0;
    double min_w = 0.0;
    bool first = true;
    int spurious_zeros = 0;
    for (int i = 0; i < kSamples; ++i) {
        const double t = kLo + i * step;
        const double wt = pot.w(t);
        worst_odd = std::max(worst_odd, std::abs(wt - pot.w(-t)) / (1.0 + std::abs(wt)));
        if (first || wt < min_w) min_w = wt;
        first = false;
        if (std::abs(std::abs(t) - 1.0) > 0.5 * step && wt <= 0.0) ++spurious_zeros;
    }
    if (worst_odd > 1e-12) rep.violations.push_back({WellClause::Even, "W is not even"});

    const double at_wells = std::max(std::abs(pot.w(1.0)), std::abs(pot.w(-1.0)));
    if (min_w < 0.0 || at_wells > 1e-14 || spurious_zeros > 0) {
        std::ostringstream os;
        os << "min W = 0 with zero set {-1, 1} fails (W(+-1) = " << at_wells << ", sampled min " << min_w
           << ", other zeros " << spurious_zeros << ")";
        rep.violations.push_back({WellClause::ZeroSet, os.str()});
    }

    if (!(pot.w_second(1.0) > 0.0)) rep.violations.push_back({WellClause::Curvature, "W''(1) must be positive"});

    bool monotone = true;
    double prev = pot.w(0.0);
    for (int i = 1; i <= kSamples / 2 && monotone; ++i) {
        const double t = static_cast<double>(i) / (kSamples / 2);
        const double wt = pot.w(t);
        if (!(wt < prev)) monotone = false;
        prev = wt;
    }
    prev = pot.w(1.0);
    for (int i = 1; i <= kSamples / 2 && monotone; ++i) {
        const double t = 1.0 + 2.0 * i / (kSamples / 2);
        const double wt = pot.w(t);
        if (!(wt > prev)) monotone = false;
        prev = wt;
    }
    if (!monotone)
        rep.violations.push_back({WellClause::Monotone, "W must decrease on [0,1] and increase for t > 1"});
    return rep;
}

void require_valid(const Potential& pot) {
    const auto rep = validate_assumptions(pot);
    if (!rep.ok()) throw std::invalid_argument("well '" + pot.name() + "' rejected: " + rep.summary());
}

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, tol, 50);
}

double cw_constant(const Potential& pot) {
    return adaptive_simpson([&pot](double s) { return std::sqrt(std::max(0.0, pot.w(s))); }, -1.0, 1.0, 1e-10);
}

}  // namespace hyperphase
