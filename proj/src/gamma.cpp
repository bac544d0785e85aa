#include "hyperphase/gamma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hyperphase {

namespace {

double clipped_length(const std::vector<Polyline>& pls, double R) {
    double total = 0.0;
    for (const auto& pl : pls) {
        const auto& p = pl.points;
        const std::size_t n = p.size();
        const std::size_t segs = pl.closed && n > 2 ? n : (n > 0 ? n - 1 : 0);
        for (std::size_t i = 0; i < segs; ++i) {
            const DiskPoint a = p[i], b = p[(i + 1) % n];
            if (std::abs(a) < R && std::abs(b) < R) total += segment_hyperbolic_length(a, b);
        }
    }
    return total;
}

}  // namespace

EnergyReport rescaled_energy(const Field& u, double eps, const Potential& pot, double R, double reference_length) {
    EnergyReport rep;
    rep.eps = eps;
    rep.E = discrete_energy_within(u, eps, pot, R);
    rep.mu = eps * rep.E;
    rep.F = std::sqrt(2.0) * rep.mu;
    rep.length = reference_length >= 0.0 ? reference_length : clipped_length(extract_zero_set(u), R);
    rep.target = cw_constant(pot) * 2.0 * rep.length;
    return rep;
}

SignField::SignField(Field f) : field_(std::move(f)), jumps_(extract_zero_set(field_)) {}

SignField SignField::threshold(const Field& u) {
    Field s(u.grid);
    for (std::size_t k = 0; k < s.values.size(); ++k) s.values[k] = u.values[k] >= 0.0 ? 1.0 : -1.0;
    return SignField(std::move(s));
}

SignField SignField::from_function(std::shared_ptr<const Grid> grid, const std::function<double(DiskPoint)>& f) {
    return threshold(Field::sample(std::move(grid), f));
}

Geodesic geodesic_through(DiskPoint a, DiskPoint b) {
    const MobiusMap T = MobiusMap::translation_to_origin(a);
    const DiskPoint bb = T(b);
    if (std::abs(bb) == 0.0) throw GeometryError("geodesic through coincident points");
    const MobiusMap back = T.inverse();
    const DiskPoint dir = bb / std::abs(bb);
    const double ta = std::arg(back(-dir)), tb = std::arg(back(dir));
    return Geodesic(IdealPoint(ta), IdealPoint(tb));
}

Field recovery_sequence(const SignField& v, const ProfileSolution& profile) {
    const Field& s = v.field();
    const Grid& g = *s.grid;
    std::vector<MobiusMap> maps;
    for (const auto& pl : v.jumps()) {
        if (pl.closed || pl.points.size() < 2) throw GeometryError("recovery requires geodesic jumps");
        const Geodesic geo = geodesic_through(pl.points.front(), pl.points.back());
        const MobiusMap T = to_diameter_map(geo);
        for (const DiskPoint& p : pl.points) {
            const double off = std::abs(signed_distance_mapped(p, T)) / conformal_factor(p);
            if (off > 2.0 * g.h()) {
                std::ostringstream os;
                os << "recovery requires geodesic jumps (vertex (" << p.real() << ", " << p.imag() << ") lies " << off
                   << " off the geodesic)";
                throw GeometryError(os.str());
            }
        }
        maps.push_back(T);
    }
    Field out(s.grid);
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (maps.empty()) {
            out.values[k] = s.values[k];
            continue;
        }
        double dmin = std::numeric_limits<double>::infinity();
        for (const auto& T : maps) dmin = std::min(dmin, std::abs(signed_distance_mapped(g.position(k), T)));
        out.values[k] = profile.evaluate(s.values[k] * dmin);
    }
    return out;
}

double l1_distance(const Field& a, const Field& b) {
    if (a.grid != b.grid) throw std::invalid_argument("l1_distance: fields on different grids");
    const double h2 = a.grid->h() * a.grid->h();
    double s = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k) s += std::abs(a.values[k] - b.values[k]);
    return s * h2;
}

GlueResult glue_boundary(const Field& v_inner, const Field& w_outer, double R, double delta, double eta, double eps) {
    if (v_inner.grid != w_outer.grid) throw std::invalid_argument("glue: fields on different grids");
    const Grid& g = *v_inner.grid;
    if (!(delta > 0.0 && delta < R && R <= g.R() + 1e-12)) throw std::invalid_argument("glue: annulus outside the grid");
    if (!(eta > 0.0 && eps > 0.0)) throw std::invalid_argument("glue: eta and eps must be positive");
    GlueResult out;
    out.slices = static_cast<int>(std::floor(delta / (eta * eps) * (1.0 + 1e-12)));
    if (out.slices < 3) throw std::invalid_argument("annulus under-resolved");
    out.slice_width = delta / out.slices;
    if (out.slice_width < g.h()) throw std::invalid_argument("annulus under-resolved (slice thinner than the grid)");
    const double r0 = R - delta;
    out.mismatch.assign(out.slices, 0.0);
    const double h2 = g.h() * g.h();
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double r = std::abs(g.position(k));
        if (r < r0 || r >= R) continue;
        const int s = std::min(out.slices - 1, static_cast<int>((r - r0) / out.slice_width));
        out.mismatch[s] += std::abs(v_inner.values[k] - w_outer.values[k]) * h2;
    }
    for (double& m : out.mismatch) m /= out.slice_width;
    out.chosen = static_cast<int>(std::min_element(out.mismatch.begin(), out.mismatch.end()) - out.mismatch.begin());
    out.r_inner = r0 + out.chosen * out.slice_width;
    out.r_outer = out.r_inner + out.slice_width;
    out.glued = Field(v_inner.grid);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double r = std::abs(g.position(k));
        const double phi = std::clamp((out.r_outer - r) / out.slice_width, 0.0, 1.0);
        out.glued.values[k] = w_outer.values[k] + phi * (v_inner.values[k] - w_outer.values[k]);
    }
    return out;
}

GlueEstimate glue_estimate(const GlueResult& g, const Field& v_inner, const Field& w_outer, double R, double delta,
                           double eta, double eps, const Potential& pot) {
    (void)eta;
    GlueEstimate est;
    const double r0 = R - delta;
    est.glued_slice = eps * discrete_energy_annulus(g.glued, eps, pot, g.r_inner, g.r_outer);
    est.v_annulus = eps * discrete_energy_annulus(v_inner, eps, pot, r0, R);
    est.w_annulus = eps * discrete_energy_annulus(w_outer, eps, pot, r0, R);
    const double eta_eff = g.slice_width / eps;
    est.mismatch_term = g.mismatch[g.chosen] / eta_eff;
    const Grid& grid = *g.glued.grid;
    double area = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double r = std::abs(grid.position(k));
        if (r >= g.r_inner && r < g.r_outer) area += grid.area_weight(k) * grid.h() * grid.h();
    }
    est.area_term = area / eps;
    est.constant = est.glued_slice / (est.v_annulus + est.w_annulus + eta_eff + est.mismatch_term);
    est.glued_total = eps * discrete_energy_within(g.glued, eps, pot, R);
    est.split_total = eps * discrete_energy_within(v_inner, eps, pot, g.r_inner) + est.glued_slice +
                      eps * discrete_energy_annulus(w_outer, eps, pot, g.r_outer, R);
    return est;
}

Field recovery_with_boundary(std::shared_ptr<const Grid> grid, const Geodesic& inner, const Geodesic& outer, double rho,
                             const ProfileSolution& profile) {
    const MobiusMap Ti = to_diameter_map(inner), To = to_diameter_map(outer);
    const double rho_h = 2.0 * std::atanh(rho);
    return Field::sample(std::move(grid), [&](DiskPoint p) {
        const double rad = 2.0 * std::atanh(std::abs(p));
        const double din = signed_distance_mapped(p, Ti), dout = signed_distance_mapped(p, To);
        return profile.evaluate(std::max(std::min(din, rho_h - rad), std::min(dout, rad - rho_h)));
    });
}

SweepReport gamma_sweep(const BoundaryData& bd, const std::vector<double>& eps_list, double R, const Potential& pot,
                        const SolveOptions& opts) {
    if (eps_list.empty()) throw std::invalid_argument("gamma sweep: empty eps list");
    for (std::size_t i = 1; i < eps_list.size(); ++i)
        if (!(eps_list[i] < eps_list[i - 1])) throw std::invalid_argument("gamma sweep: eps list must decrease");
    SweepReport rep;
    for (double eps : eps_list) {
        SolveResult s = solve_data(bd, eps, pot, R, 0.0, opts);
        rep.reports.push_back(rescaled_energy(s.u, eps, pot, R));
        if (!rep.fields.empty()) {
            const Field& prev = rep.fields.back();
            const Grid& g = *s.u.grid;
            double l1 = 0.0;
            for (std::size_t k = 0; k < g.size(); ++k)
                l1 += std::abs(s.u.values[k] - prev.interpolate(g.position(k)));
            rep.l1_prev.push_back(l1 * g.h() * g.h());
        } else {
            rep.l1_prev.push_back(std::nan(""));
        }
        rep.fields.push_back(std::move(s.u));
    }
    for (std::size_t k = 1; k < rep.reports.size(); ++k)
        if (rep.reports[k].F > rep.reports[k - 1].F) {
            rep.warnings.push_back("no Γ-trend");
            break;
        }
    for (std::size_t k = 2; k < rep.l1_prev.size(); ++k)
        if (!(rep.l1_prev[k] < rep.l1_prev[k - 1])) {
            rep.warnings.push_back("L1 sequence not Cauchy");
            break;
        }
    return rep;
}

}  // namespace hyperphase
