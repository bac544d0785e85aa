#include "hyperphase/profile1d.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace hyperphase {

namespace {

// Gauss-Legendre on [0, 1].
constexpr std::array<double, 4> kGx = {0.0694318442029737, 0.3300094782075719, 0.6699905217924281,
                                       0.9305681557970263};
constexpr std::array<double, 4> kGw = {0.1739274225687269, 0.3260725774312731, 0.3260725774312731,
                                       0.1739274225687269};

double weight(int n, double tau) { return n == 1 ? 1.0 : std::pow(std::cosh(tau), n - 1); }

struct Assembly {
    double energy = 0.0;
    std::vector<double> grad;  // index 0 unused (h(0) pinned)
    std::vector<double> diag;
    std::vector<double> off;   // off[i] couples i and i+1
    std::vector<double> mass;
    std::vector<double> gabs;  // sum of magnitudes entering grad, for the rounding floor
};

Assembly assemble(int n, double eps, const Potential& pot, const std::vector<double>& x,
                  const std::vector<double>& h, bool hessian) {
    const std::size_t N = x.size();
    const double ie2 = 1.0 / (eps * eps);
    Assembly a;
    a.grad.assign(N, 0.0);
    a.mass.assign(N, 0.0);
    a.gabs.assign(N, 0.0);
    if (hessian) {
        a.diag.assign(N, 0.0);
        a.off.assign(N, 0.0);
    }
    for (std::size_t i = 0; i + 1 < N; ++i) {
        const double dx = x[i + 1] - x[i];
        const double s = (h[i + 1] - h[i]) / dx;
        double k = 0.0;
        for (int q = 0; q < 4; ++q) {
            const double xi = kGx[q];
            const double c = kGw[q] * dx * weight(n, x[i] + xi * dx);
            const double hq = (1.0 - xi) * h[i] + xi * h[i + 1];
            k += c;
            a.energy += c * pot.w(hq) * ie2;
            const double wp = c * pot.w_prime(hq) * ie2;
            a.grad[i] += wp * (1.0 - xi);
            a.grad[i + 1] += wp * xi;
            a.gabs[i] += std::abs(wp) * (1.0 - xi);
            a.gabs[i + 1] += std::abs(wp) * xi;
            a.mass[i] += c * (1.0 - xi);
            a.mass[i + 1] += c * xi;
            if (hessian) {
                const double wpp = c * pot.w_second(hq) * ie2;
                a.diag[i] += wpp * (1.0 - xi) * (1.0 - xi);
                a.diag[i + 1] += wpp * xi * xi;
                a.off[i] += wpp * xi * (1.0 - xi);
            }
        }
        a.energy += 0.5 * k * s * s;
        a.grad[i] -= k * s / dx;
        a.grad[i + 1] += k * s / dx;
        a.gabs[i] += k * (std::abs(h[i]) + std::abs(h[i + 1])) / (dx * dx);
        a.gabs[i + 1] += k * (std::abs(h[i]) + std::abs(h[i + 1])) / (dx * dx);
        if (hessian) {
            const double kk = k / (dx * dx);
            a.diag[i] += kk;
            a.diag[i + 1] += kk;
            a.off[i] -= kk;
        }
    }
    return a;
}

double interior_defect(const Assembly& a) {
    double r = 0.0;
    for (std::size_t i = 1; i + 1 < a.grad.size(); ++i) r = std::max(r, std::abs(a.grad[i]) / a.mass[i]);
    return r;
}

// Defect in excess of the tolerance plus the rounding floor of each equation;
// converged when nonpositive.
double excess_defect(const Assembly& a, bool right_clamped, double tol) {
    const std::size_t N = a.grad.size();
    const std::size_t top = right_clamped ? N - 1 : N;
    double r = -tol;
    for (std::size_t i = 1; i < top; ++i) {
        const double floor = 64.0 * 2.2e-16 * a.gabs[i];
        r = std::max(r, (std::abs(a.grad[i]) - floor) / a.mass[i] - tol);
    }
    return r;
}

// Solves the tridiagonal system on unknowns 1..N-1 of (H + mu M) d = -g.
// Returns false when a pivot is not positive.
bool thomas(const Assembly& a, double mu, std::vector<double>& d) {
    const std::size_t N = a.grad.size();
    std::vector<double> c(N, 0.0), r(N, 0.0);
    d.assign(N, 0.0);
    double prev_c = 0.0, prev_r = 0.0;
    for (std::size_t i = 1; i < N; ++i) {
        const double lower = i > 1 ? a.off[i - 1] : 0.0;
        const double piv = a.diag[i] + mu * a.mass[i] - lower * prev_c;
        if (!(piv > 1e-300) || !std::isfinite(piv)) return false;
        c[i] = i + 1 < N ? a.off[i] / piv : 0.0;
        r[i] = (-a.grad[i] - lower * prev_r) / piv;
        prev_c = c[i];
        prev_r = r[i];
    }
    d[N - 1] = r[N - 1];
    for (std::size_t i = N - 1; i-- > 1;) d[i] = r[i] - c[i] * d[i + 1];
    return true;
}

double tail_energy(int n, double eps, const Potential& pot, double T, const ProfileTail& tail) {
    if (tail.amplitude <= 0.0) return 0.0;
    const double span = 60.0 / tail.rate;
    const int pieces = 60;
    const double dx = span / pieces;
    const double ie2 = 1.0 / (eps * eps);
    double e = 0.0;
    for (int k = 0; k < pieces; ++k) {
        for (int q = 0; q < 4; ++q) {
            const double s = (k + kGx[q]) * dx;
            const double decay = tail.amplitude * std::exp(-tail.rate * s);
            const double hp = tail.rate * decay;
            e += kGw[q] * dx * (0.5 * hp * hp + pot.w(1.0 - decay) * ie2) * weight(n, T + s);
        }
    }
    return e;
}

double hermite(double h0, double h1, double d0, double d1, double dx, double t) {
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * h0 + (t3 - 2 * t2 + t) * dx * d0 + (-2 * t3 + 3 * t2) * h1 +
           (t3 - t2) * dx * d1;
}

double hermite_slope(double h0, double h1, double d0, double d1, double dx, double t) {
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * h0 + (-6 * t2 + 6 * t) * h1) / dx + (3 * t2 - 4 * t + 1) * d0 +
           (3 * t2 - 2 * t) * d1;
}

// Derivative at x0 of the interpolating polynomial through five points.
double lagrange_slope(const double* t, const double* v, double x0) {
    double sum = 0.0;
    for (int j = 0; j < 5; ++j) {
        double denom = 1.0;
        for (int m = 0; m < 5; ++m)
            if (m != j) denom *= t[j] - t[m];
        double num = 0.0;
        for (int m = 0; m < 5; ++m) {
            if (m == j) continue;
            double prod = 1.0;
            for (int l = 0; l < 5; ++l)
                if (l != j && l != m) prod *= x0 - t[l];
            num += prod;
        }
        sum += v[j] * num / denom;
    }
    return sum;
}

}  // namespace

std::vector<double> graded_grid(double eps, double T, int min_elements) {
    const double fine = eps / 10.0;
    std::vector<double> x{0.0};
    const double inner = std::min(10.0 * eps, T);
    const int m = std::max(1, static_cast<int>(std::lround(inner / fine)));
    for (int i = 1; i <= m; ++i) x.push_back(inner * i / m);
    double step = fine;
    while (x.back() < T) {
        step *= 1.08;
        double next = x.back() + step;
        if (next > T - 0.5 * step) next = T;
        x.push_back(next);
    }
    while (static_cast<int>(x.size()) - 1 < min_elements) {
        std::vector<double> y;
        y.reserve(2 * x.size());
        for (std::size_t i = 0; i + 1 < x.size(); ++i) {
            y.push_back(x[i]);
            y.push_back(0.5 * (x[i] + x[i + 1]));
        }
        y.push_back(x.back());
        x.swap(y);
    }
    return x;
}

ProfileSolution solve_profile(int n, double eps, const Potential& pot, const ProfileOptions& opts) {
    if (n < 1) throw std::invalid_argument("profile: n must be >= 1");
    if (!(eps > 0.0)) throw std::invalid_argument("profile: eps must be positive");
    require_valid(pot);
    const double T = opts.T > 0.0 ? opts.T : 20.0 * std::max(eps, 1.0);
    const double T_min = 10.0 * eps * std::max(1.0, std::sqrt(2.0 / pot.curvature()));
    if (T < T_min) {
        std::ostringstream os;
        os << "profile: truncation T = " << T << " below 10 eps max(1, sqrt(2/W''(1))) = " << T_min;
        throw std::invalid_argument(os.str());
    }
    const double rate = pot.decay_rate(n, eps);
    // with 2 rate <= n - 1 the weighted tail energy is infinite; h itself is fine
    const bool finite_energy = 2.0 * rate > n - 1;

    ProfileSolution sol;
    sol.n_ = n;
    sol.eps_ = eps;
    sol.pot_ = pot;
    sol.nodes_ = graded_grid(eps, T, opts.node_count);
    const auto& x = sol.nodes_;
    const std::size_t N = x.size();

    std::vector<double> h(N);
    for (std::size_t i = 0; i < N; ++i) {
        h[i] = opts.seed == ProfileSeed::Tanh ? std::tanh(x[i] / (std::sqrt(2.0) * eps))
                                              : std::min(1.0, x[i] / (4.0 * eps));
    }
    h[0] = 0.0;

    auto clamp_right = [&](const std::vector<double>& v) { return v[N - 1] >= 1.0; };
    Assembly a = assemble(n, eps, pot, x, h, true);
    double res = excess_defect(a, clamp_right(h), opts.tol);
    int it = 0;
    std::vector<double> d, trial(N);
    for (; it < opts.max_iterations && res > 0.0; ++it) {
        double mu = 0.0;
        bool stepped = false;
        for (int attempt = 0; attempt < 80 && !stepped; ++attempt) {
            if (!thomas(a, mu, d)) {
                mu = mu == 0.0 ? 1.0 / (eps * eps) : 4.0 * mu;
                continue;
            }
            double slope = 0.0;
            for (std::size_t i = 1; i < N; ++i) slope += a.grad[i] * d[i];
            if (slope >= 0.0) {
                mu = mu == 0.0 ? 1.0 / (eps * eps) : 4.0 * mu;
                continue;
            }
            double alpha = 1.0;
            for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
                trial[0] = 0.0;
                for (std::size_t i = 1; i < N; ++i) trial[i] = std::clamp(h[i] + alpha * d[i], -1.0, 1.0);
                Assembly b = assemble(n, eps, pot, x, trial, false);
                const double rb = excess_defect(b, clamp_right(trial), opts.tol);
                const bool armijo = b.energy <= a.energy + 1e-4 * alpha * slope;
                const bool flat = std::abs(b.energy - a.energy) <= 1e-14 * std::abs(a.energy) && rb < res;
                if (armijo || flat) {
                    h = trial;
                    stepped = true;
                    break;
                }
            }
            if (!stepped) mu = mu == 0.0 ? 1.0 / (eps * eps) : 4.0 * mu;
        }
        if (!stepped) break;
        a = assemble(n, eps, pot, x, h, true);
        res = excess_defect(a, clamp_right(h), opts.tol);
    }
    if (res > 0.0) {
        const double raw = interior_defect(a);
        std::ostringstream os;
        os << "profile: no convergence after " << it << " iterations (residual " << raw << ")";
        throw ProfileError(os.str(), raw);
    }
    for (std::size_t i = 0; i + 1 < N; ++i) {
        if (h[i + 1] > h[i]) continue;
        // past double-precision saturation at the well only rounding noise remains
        if (1.0 - h[i] > 1e-12) {
            std::ostringstream os;
            os << "profile: minimizer is not monotone at tau = " << x[i] << " (h = " << h[i] << ", next " << h[i + 1] << ")";
            throw ProfileError(os.str(), interior_defect(a));
        }
        h[i + 1] = h[i];
    }
    if (h[N - 1] < 0.99) throw ProfileError("truncation too small", interior_defect(a));

    sol.values_ = h;
    sol.iterations_ = it;
    sol.residual_ = interior_defect(a);
    sol.tail_ = {1.0 - h[N - 1], rate};

    // five-point slopes on the odd extension, limited to keep the cubic monotone
    auto& dsl = sol.slopes_;
    dsl.assign(N, 0.0);
    std::vector<double> delta(N - 1);
    for (std::size_t i = 0; i + 1 < N; ++i) delta[i] = (h[i + 1] - h[i]) / (x[i + 1] - x[i]);
    const long last = static_cast<long>(N) - 1;
    auto ext_x = [&](long j) { return j < 0 ? -x[-j] : x[j]; };
    auto ext_h = [&](long j) { return j < 0 ? -h[-j] : h[j]; };
    for (long k = 0; k < last; ++k) {
        const long lo = std::min(k - 2, last - 4);
        double t[5], v[5];
        for (int j = 0; j < 5; ++j) {
            t[j] = ext_x(lo + j);
            v[j] = ext_h(lo + j);
        }
        dsl[k] = lagrange_slope(t, v, x[k]);
        const double left = k > 0 ? delta[k - 1] : delta[0];
        dsl[k] = std::clamp(dsl[k], 0.0, 3.0 * std::min(left, delta[k]));
    }
    dsl[N - 1] = std::clamp(sol.tail_.amplitude * rate, 0.0, 3.0 * delta[N - 2]);

    double lip = sol.tail_.amplitude * rate;
    for (std::size_t k = 0; k + 1 < N; ++k) {
        const double dx = x[k + 1] - x[k];
        for (int j = 0; j <= 8; ++j)
            lip = std::max(lip, std::abs(hermite_slope(h[k], h[k + 1], dsl[k], dsl[k + 1], dx, j / 8.0)));
    }
    sol.lipschitz_ = lip * (1.0 + 1e-6);
    sol.energy_ = finite_energy ? 2.0 * (a.energy + tail_energy(n, eps, pot, T, sol.tail_))
                                : std::numeric_limits<double>::infinity();
    return sol;
}

double ProfileSolution::value_pos(double t) const {
    const double T = nodes_.back();
    if (t >= T) return 1.0 - tail_.amplitude * std::exp(-tail_.rate * (t - T));
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    const double dx = nodes_[k + 1] - nodes_[k];
    return hermite(values_[k], values_[k + 1], slopes_[k], slopes_[k + 1], dx, (t - nodes_[k]) / dx);
}

double ProfileSolution::slope_pos(double t) const {
    const double T = nodes_.back();
    if (t >= T) return tail_.amplitude * tail_.rate * std::exp(-tail_.rate * (t - T));
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    const double dx = nodes_[k + 1] - nodes_[k];
    return hermite_slope(values_[k], values_[k + 1], slopes_[k], slopes_[k + 1], dx, (t - nodes_[k]) / dx);
}

double ProfileSolution::evaluate(double tau) const {
    if (tau == 0.0) return 0.0;
    return tau < 0.0 ? -value_pos(-tau) : value_pos(tau);
}

double ProfileSolution::derivative(double tau) const { return slope_pos(std::abs(tau)); }

double ProfileSolution::one_minus(double tau) const {
    const double t = std::abs(tau);
    const auto it = std::upper_bound(values_.begin(), values_.end(), 1.0 - 1e-6);
    const std::size_t a = it == values_.begin() ? 0 : static_cast<std::size_t>(it - values_.begin()) - 1;
    if (t <= nodes_[a]) return 1.0 - value_pos(t);
    return (1.0 - values_[a]) * std::exp(-tail_.rate * (t - nodes_[a]));
}

double ProfileSolution::energy_within(double a) const {
    a = std::min(std::abs(a), nodes_.back());
    const double ie2 = 1.0 / (eps_ * eps_);
    double e = 0.0;
    for (std::size_t i = 0; i + 1 < nodes_.size() && nodes_[i] < a; ++i) {
        const double x0 = nodes_[i], dx = nodes_[i + 1] - x0;
        const double s = (values_[i + 1] - values_[i]) / dx;
        const double top = std::min(a, nodes_[i + 1]) - x0;
        for (int q = 0; q < 4; ++q) {
            const double t = kGx[q] * top;
            const double hq = values_[i] + s * t;
            e += kGw[q] * top * (0.5 * s * s + pot_.w(hq) * ie2) * weight(n_, x0 + t);
        }
    }
    return 2.0 * e;
}

double profile_energy(const ProfileSolution& p) { return p.energy(); }

double profile_residual(const ProfileSolution& p) {
    return interior_defect(assemble(p.n(), p.eps(), p.potential(), p.nodes(), p.values(), false));
}

double tau_form_defect(const ProfileSolution& p, double tau, double step) {
    const double hm = p.evaluate(tau - step), h0 = p.evaluate(tau), hp = p.evaluate(tau + step);
    const double d2 = (hp - 2.0 * h0 + hm) / (step * step);
    const double d1 = (hp - hm) / (2.0 * step);
    return d2 + (p.n() - 1) * std::tanh(tau) * d1 + p.potential().f_eps(h0, p.eps());
}

double xi_form_defect(const ProfileSolution& p, double xi, double step) {
    const double gm = p.g_of_xi(xi - step), g0 = p.g_of_xi(xi), gp = p.g_of_xi(xi + step);
    const double d2 = (gp - 2.0 * g0 + gm) / (step * step);
    const double d1 = (gp - gm) / (2.0 * step);
    return (1.0 + xi * xi) * d2 + p.n() * xi * d1 + p.potential().f_eps(g0, p.eps());
}

}  // namespace hyperphase
