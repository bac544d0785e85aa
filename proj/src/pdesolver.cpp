#include "hyperphase/pdesolver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hyperphase {

double auto_spacing(double eps, double R) { return eps * (1.0 - R * R) / 6.0; }

void require_layer_bound(double h, double eps, double R) {
    const double bound = auto_spacing(eps, R);
    if (h > bound * (1.0 + 1e-12)) {
        std::ostringstream os;
        os.precision(6);
        os << "grid spacing h = " << h << " violates the layer bound h <= eps (1 - R^2) / 6 = " << bound;
        throw std::invalid_argument(os.str());
    }
}

double discrete_energy_annulus(const Field& u, double eps, const Potential& pot, double r0, double r1) {
    const Grid& g = *u.grid;
    const double c = g.h() * g.h() / (eps * eps);
    auto inside = [r0, r1](DiskPoint p) {
        const double r = std::abs(p);
        return r >= r0 && r < r1;
    };
    double grad = 0.0, potl = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const DiskPoint p = g.position(k);
        const auto& nb = g.neighbours(k);
        for (int m : {nb[0], nb[2]}) {
            if (m < 0 || !inside(0.5 * (p + g.position(m)))) continue;
            const double d = u.values[k] - u.values[m];
            grad += 0.5 * d * d;
        }
        if (inside(p)) potl += c * g.area_weight(k) * pot.w(u.values[k]);
    }
    return grad + potl;
}

double discrete_energy_within(const Field& u, double eps, const Potential& pot, double r) {
    return discrete_energy_annulus(u, eps, pot, 0.0, r);
}

double discrete_energy(const Field& u, double eps, const Potential& pot) {
    return discrete_energy_within(u, eps, pot, 2.0);
}

double residual_norm(const Field& u, double eps, const Potential& pot) { return field_defect(u, eps, pot); }

double local_energy_bound_check(const Field& u, double eps, const Potential& pot, double R) {
    return eps * discrete_energy_within(u, eps, pot, R);
}

std::vector<double> continuation_ladder(double target, const SolveOptions& opts) {
    if (!opts.eps_ladder.empty()) {
        for (std::size_t i = 1; i < opts.eps_ladder.size(); ++i)
            if (!(opts.eps_ladder[i] < opts.eps_ladder[i - 1]))
                throw std::invalid_argument("eps ladder must be strictly decreasing");
        if (std::abs(opts.eps_ladder.back() - target) > 1e-15 * target)
            throw std::invalid_argument("eps ladder must end at the target eps");
        return opts.eps_ladder;
    }
    std::vector<double> ladder;
    double e = std::max(target, 0.4);
    while (e > target * (1.0 + 1e-12)) {
        ladder.push_back(e);
        e *= 0.5;
    }
    ladder.push_back(target);
    if (ladder.size() >= 2 && ladder[ladder.size() - 2] < target * 1.2) ladder.erase(ladder.end() - 2);
    return ladder;
}

namespace {

struct Problem {
    const Grid& g;
    const Potential& pot;
    std::vector<double> c;   // h^2 w / eps^2
    std::vector<double> lo, hi;
    std::vector<int> nb;     // 4 per node
    double h2;

    Problem(const Grid& grid, const Potential& p, const BarrierPair& bp) : g(grid), pot(p), h2(grid.h() * grid.h()) {
        const std::size_t n = g.size();
        const double ie2 = 1.0 / (bp.eps() * bp.eps());
        c.resize(n);
        lo.assign(n, -1.0);
        hi.assign(n, 1.0);
        nb.resize(4 * n);
        for (std::size_t k = 0; k < n; ++k) {
            c[k] = h2 * g.area_weight(k) * ie2;
            const auto& a = g.neighbours(k);
            for (int j = 0; j < 4; ++j) nb[4 * k + j] = a[j];
            if (g.on_ring(k)) {
                lo[k] = bp.lower_values()[k];
                hi[k] = bp.upper_values()[k];
                if (lo[k] > hi[k]) lo[k] = hi[k] = 0.5 * (lo[k] + hi[k]);
            }
        }
    }

    double energy(const std::vector<double>& v) const {
        double e = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) {
            for (int j : {0, 2}) {
                const int m = nb[4 * k + j];
                if (m >= 0) {
                    const double d = v[k] - v[m];
                    e += 0.5 * d * d;
                }
            }
            e += c[k] * pot.w(v[k]);
        }
        return e;
    }

    void gradient(const std::vector<double>& v, std::vector<double>& gr) const {
        gr.resize(v.size());
        for (std::size_t k = 0; k < v.size(); ++k) {
            double s = c[k] * pot.w_prime(v[k]);
            for (int j = 0; j < 4; ++j) {
                const int m = nb[4 * k + j];
                if (m >= 0) s += v[k] - v[m];
            }
            gr[k] = s;
        }
    }

    // Stationarity measure in PDE units: interior |grad|/h^2, projected on the ring.
    double stationarity(const std::vector<double>& v, const std::vector<double>& gr) const {
        double r = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) {
            double pg = gr[k];
            if (g.on_ring(k)) {
                if (lo[k] == hi[k]) pg = 0.0;
                else if (v[k] <= lo[k]) pg = std::min(pg, 0.0);
                else if (v[k] >= hi[k]) pg = std::max(pg, 0.0);
            }
            r = std::max(r, std::abs(pg) / h2);
        }
        return r;
    }

    void project(std::vector<double>& v) const {
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::clamp(v[k], lo[k], hi[k]);
    }
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

StageReport minimize_stage(Field& u, const Potential& pot, const BarrierPair& bp, const SolveOptions& opts) {
    if (!bp.grid() || bp.grid() != u.grid) throw std::invalid_argument("solver: barriers not attached to the field grid");
    const Grid& g = *u.grid;
    const Problem P(g, pot, bp);
    const std::size_t n = g.size();
    std::vector<double>& v = u.values;
    P.project(v);

    StageReport rep;
    rep.eps = bp.eps();
    double E = P.energy(v);
    rep.initial_energy = E;
    std::vector<double> gr, d(n), r(n), z(n), p(n), Hp(n), diag(n), trial(n);
    std::vector<char> freev(n);
    P.gradient(v, gr);
    double res = P.stationarity(v, gr);
    const double g0 = std::sqrt(dot(gr, gr)) + 1e-300;

    for (int it = 0; it < opts.max_newton && res > opts.tol; ++it) {
        for (std::size_t k = 0; k < n; ++k) {
            bool fixed = false;
            if (g.on_ring(k)) {
                fixed = P.lo[k] == P.hi[k] || (v[k] <= P.lo[k] && gr[k] > 0.0) || (v[k] >= P.hi[k] && gr[k] < 0.0);
            }
            freev[k] = !fixed;
            double deg = 0.0;
            for (int j = 0; j < 4; ++j) deg += P.nb[4 * k + j] >= 0 ? 1.0 : 0.0;
            const double dk = deg + P.c[k] * pot.w_second(v[k]);
            diag[k] = std::max(dk, 0.05 * deg);
        }
        auto hess = [&](const std::vector<double>& x, std::vector<double>& y) {
            for (std::size_t k = 0; k < n; ++k) {
                if (!freev[k]) {
                    y[k] = 0.0;
                    continue;
                }
                double s = P.c[k] * pot.w_second(v[k]) * x[k];
                for (int j = 0; j < 4; ++j) {
                    const int m = P.nb[4 * k + j];
                    if (m >= 0) s += x[k] - (freev[m] ? x[m] : 0.0);
                }
                y[k] = s;
            }
        };

        // truncated preconditioned CG on the free variables
        double gnorm2 = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            r[k] = freev[k] ? -gr[k] : 0.0;
            gnorm2 += r[k] * r[k];
            z[k] = r[k] / diag[k];
            p[k] = z[k];
            d[k] = 0.0;
        }
        const double gnorm = std::sqrt(gnorm2);
        const double forcing = std::min(0.1, std::sqrt(gnorm / g0));
        double rz = dot(r, z);
        int cg = 0;
        for (; cg < opts.max_cg; ++cg) {
            hess(p, Hp);
            const double pHp = dot(p, Hp);
            if (pHp <= 1e-14 * dot(p, p)) {
                if (cg == 0) d = z;
                break;
            }
            const double alpha = rz / pHp;
            double rn2 = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                d[k] += alpha * p[k];
                r[k] -= alpha * Hp[k];
                rn2 += r[k] * r[k];
            }
            if (std::sqrt(rn2) <= forcing * gnorm) {
                ++cg;
                break;
            }
            for (std::size_t k = 0; k < n; ++k) z[k] = r[k] / diag[k];
            const double rz_new = dot(r, z);
            const double beta = rz_new / rz;
            rz = rz_new;
            for (std::size_t k = 0; k < n; ++k) p[k] = z[k] + beta * p[k];
        }
        rep.cg_iterations += cg;

        // projected backtracking line search, then a preconditioned gradient step as fallback
        bool accepted = false;
        for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
            if (attempt == 1)
                for (std::size_t k = 0; k < n; ++k) d[k] = freev[k] ? -gr[k] / diag[k] : 0.0;
            double alpha = 1.0;
            for (int ls = 0; ls < 50; ++ls, alpha *= 0.5) {
                for (std::size_t k = 0; k < n; ++k) trial[k] = v[k] + alpha * d[k];
                P.project(trial);
                double slope = 0.0;
                for (std::size_t k = 0; k < n; ++k) slope += gr[k] * (trial[k] - v[k]);
                if (slope >= 0.0) continue;
                const double Et = P.energy(trial);
                bool ok = Et <= E + 1e-4 * slope;
                if (!ok && std::abs(Et - E) <= 1e-13 * std::abs(E)) {
                    std::vector<double> gt;
                    P.gradient(trial, gt);
                    ok = P.stationarity(trial, gt) < res;
                }
                if (ok) {
                    v.swap(trial);
                    E = Et;
                    accepted = true;
                    break;
                }
            }
        }
        if (!accepted) break;
        P.gradient(v, gr);
        res = P.stationarity(v, gr);
        rep.history.push_back(res);
        rep.newton_iterations = it + 1;
    }
    rep.residual = res;
    rep.energy = E;
    if (res > opts.tol) {
        std::ostringstream os;
        os << "solver: Newton stalled at eps = " << bp.eps() << " with residual " << res << " after "
           << rep.newton_iterations << " iterations";
        throw SolverError(os.str(), rep.history);
    }
    return rep;
}

SolveResult solve_minimizer(std::shared_ptr<const Grid> grid, double eps, const Potential& pot,
                            std::shared_ptr<BarrierPair> bp, const SolveOptions& opts) {
    if (!bp) throw std::invalid_argument("solver: missing barriers");
    if (std::abs(bp->eps() - eps) > 1e-15 * eps) throw std::invalid_argument("solver: barrier eps differs from target");
    require_layer_bound(grid->h(), eps, grid->R());
    const auto ladder = continuation_ladder(eps, opts);

    SolveResult out;
    out.u = Field(grid);
    if (bp->grid() != grid) bp->attach(grid);
    out.slack = opts.sandwich_slack >= 0.0
                    ? opts.sandwich_slack
                    : 1e-6 + 0.5 * std::pow(grid->h() / (eps * (1.0 - grid->R() * grid->R())), 2);

    Field mid(grid);
    for (std::size_t k = 0; k < grid->size(); ++k) mid.values[k] = 0.5 * (bp->lower_values()[k] + bp->upper_values()[k]);
    out.midpoint_energy = discrete_energy(mid, eps, pot);

    for (std::size_t s = 0; s < ladder.size(); ++s) {
        std::shared_ptr<const BarrierPair> stage_bp;
        if (s + 1 == ladder.size()) {
            stage_bp = bp;
        } else {
            ProfileOptions po;
            po.node_count = opts.profile_nodes;
            auto prof = std::make_shared<const ProfileSolution>(solve_profile(2, ladder[s], pot, po));
            auto b = std::make_shared<BarrierPair>(bp->families(), prof, opts.policy);
            b->attach(grid);
            stage_bp = b;
        }
        if (s == 0) {
            for (std::size_t k = 0; k < grid->size(); ++k)
                out.u.values[k] = 0.5 * (stage_bp->lower_values()[k] + stage_bp->upper_values()[k]);
        }
        out.stages.push_back(minimize_stage(out.u, pot, *stage_bp, opts));
    }
    out.barriers = bp;
    out.energy = discrete_energy(out.u, eps, pot);
    out.residual = residual_norm(out.u, eps, pot);
    out.sandwich = sandwich_check(*bp, out.u, out.slack);
    if (!out.sandwich.passed) {
        const DiskPoint p = grid->position(out.sandwich.worst_node);
        std::ostringstream os;
        os << "comparison failure: sandwich violated by " << out.sandwich.max_violation << " at (" << p.real() << ", "
           << p.imag() << "), slack " << out.slack;
        throw SolverError(os.str(), out.stages.back().history);
    }
    return out;
}

SolveResult solve_data(const BoundaryData& bd, double eps, const Potential& pot, double R, double h,
                       const SolveOptions& opts) {
    if (h <= 0.0) h = auto_spacing(eps, R);
    require_layer_bound(h, eps, R);
    ProfileOptions po;
    po.node_count = opts.profile_nodes;
    auto prof = std::make_shared<const ProfileSolution>(solve_profile(2, eps, pot, po));
    auto bp = std::make_shared<BarrierPair>(build_families(bd, opts.policy), prof, opts.policy);
    return solve_minimizer(Grid::make(R, h), eps, pot, bp, opts);
}

ExhaustionReport exhaustion_solve(const BoundaryData& bd, double eps, const Potential& pot,
                                  const std::vector<double>& R_list, double h, const SolveOptions& opts) {
    if (R_list.empty()) throw std::invalid_argument("exhaustion: empty radius list");
    for (std::size_t i = 1; i < R_list.size(); ++i)
        if (!(R_list[i] > R_list[i - 1])) throw std::invalid_argument("exhaustion: radii must increase");
    ExhaustionReport rep;
    rep.radii = R_list;
    for (double R : R_list) {
        rep.solves.push_back(solve_data(bd, eps, pot, R, h, opts));
        rep.inner_energies.push_back(discrete_energy_within(rep.solves.back().u, eps, pot, R_list.front()));
    }
    const Grid& base = *rep.solves.front().u.grid;
    for (std::size_t k = 1; k < rep.solves.size(); ++k) {
        double gap = 0.0;
        for (std::size_t m = 0; m < base.size(); ++m) {
            const DiskPoint p = base.position(m);
            gap = std::max(gap, std::abs(rep.solves[k].u.interpolate(p) - rep.solves[k - 1].u.interpolate(p)));
        }
        rep.differences.push_back(gap);
    }
    for (std::size_t k = 1; k < rep.differences.size(); ++k)
        if (!(rep.differences[k] < rep.differences[k - 1])) {
            rep.warnings.push_back("exhaustion not settled");
            break;
        }
    return rep;
}

}  // namespace hyperphase
