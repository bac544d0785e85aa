#include "hyperphase/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace hyperphase {

namespace {

constexpr double kGolden = 0.6180339887498949;

// Maximizes f on [a, b] by golden-section search; returns the best point seen.
double golden_max(const std::function<double(double)>& f, double a, double b, int iterations, double& best) {
    double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
    double f1 = f(x1), f2 = f(x2);
    double arg = f1 > f2 ? x1 : x2;
    best = std::max(f1, f2);
    for (int it = 0; it < iterations; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = f(x2);
            if (f2 > best) best = f2, arg = x2;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = f(x1);
            if (f1 > best) best = f1, arg = x1;
        }
    }
    return arg;
}

double reach_of(DiskPoint p, const CapFamily& fam) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& c : fam.samples) best = std::max(best, cap_distance(p, c));
    return best;
}

}  // namespace

SampledCap::SampledCap(IdealArc a, int src)
    : arc(a), source(src), rot(std::polar(1.0, -a.center)), cos_w(std::cos(a.halfwidth)), sin_w(std::sin(a.halfwidth)) {}

double cap_distance(DiskPoint p, double center, double halfwidth) {
    const double num = 2.0 * (p * std::polar(1.0, -center)).real() - (1.0 + std::norm(p)) * std::cos(halfwidth);
    return std::asinh(num / (std::sin(halfwidth) * (1.0 - std::norm(p))));
}

double cap_distance(DiskPoint p, const SampledCap& cap) {
    const double num = 2.0 * (p * cap.rot).real() - (1.0 + std::norm(p)) * cap.cos_w;
    return std::asinh(num / (cap.sin_w * (1.0 - std::norm(p))));
}

CapPair CapFamily::pair(std::size_t k) const {
    const IdealArc& a = samples[k].arc;
    return side == Side::Plus ? CapPair{a} : CapPair{a.complement()};
}

Families build_families(const BoundaryData& bd, const FamilyPolicy& policy) {
    bd.validate();
    if (bd.omega_plus.empty() && bd.omega_minus.empty()) throw GeometryError("no boundary data");
    if (policy.centers < 1 || policy.halfwidths < 1) throw std::invalid_argument("family policy needs positive counts");
    Families fam;
    fam.plus.side = Side::Plus;
    fam.minus.side = Side::Minus;
    fam.plus.arcs = bd.omega_plus;
    fam.minus.arcs = bd.omega_minus;
    auto fill = [&policy](CapFamily& f) {
        for (std::size_t s = 0; s < f.arcs.size(); ++s) {
            const IdealArc& src = f.arcs[s];
            const double top = src.halfwidth - policy.full_gap;
            const double bottom = src.halfwidth * policy.smallest_fraction;
            for (int k = 0; k < policy.halfwidths; ++k) {
                const double w = policy.halfwidths == 1
                                     ? top
                                     : top * std::pow(bottom / top, static_cast<double>(k) / (policy.halfwidths - 1));
                const double slack = src.halfwidth - w - policy.full_gap;
                const int nc = slack > 0.0 ? policy.centers : 1;
                for (int c = 0; c < nc; ++c) {
                    const double off = nc == 1 ? 0.0 : slack * (2.0 * c / (nc - 1) - 1.0);
                    f.samples.emplace_back(IdealArc(src.center + off, w), static_cast<int>(s));
                }
            }
        }
    };
    fill(fam.plus);
    fill(fam.minus);
    return fam;
}

BarrierPair::BarrierPair(Families fam, std::shared_ptr<const ProfileSolution> profile, FamilyPolicy policy)
    : fam_(std::move(fam)), profile_(std::move(profile)), policy_(policy) {
    if (!profile_) throw std::invalid_argument("barriers: missing profile");
    if (profile_->n() != 2) throw std::invalid_argument("barriers: disk barriers need the n = 2 profile");
}

double BarrierPair::plus_reach(DiskPoint p) const { return reach_of(p, fam_.plus); }
double BarrierPair::minus_reach(DiskPoint p) const { return reach_of(p, fam_.minus); }

double BarrierPair::lower(DiskPoint p) const {
    if (fam_.plus.samples.empty()) return -kEmptyFamilyBound;
    return profile_->evaluate(plus_reach(p));
}

double BarrierPair::upper(DiskPoint p) const {
    if (fam_.minus.samples.empty()) return kEmptyFamilyBound;
    return -profile_->evaluate(minus_reach(p));
}

double BarrierPair::refine(DiskPoint p, const CapFamily& fam) const {
    double overall = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < fam.arcs.size(); ++s) {
        const IdealArc& src = fam.arcs[s];
        double best = -std::numeric_limits<double>::infinity();
        double t = 0.0, w = src.halfwidth * 0.5;
        for (const auto& c : fam.samples) {
            if (c.source != static_cast<int>(s)) continue;
            const double d = cap_distance(p, c);
            if (d > best) {
                best = d;
                t = angle_diff(c.arc.center, src.center);
                w = c.arc.halfwidth;
            }
        }
        const double wmin = src.halfwidth * 1e-6;
        for (int sweep = 0; sweep < policy_.refine_sweeps; ++sweep) {
            const double span = std::max(0.0, src.halfwidth - w - policy_.full_gap);
            if (span > 0.0) {
                double val;
                const double tn = golden_max([&](double x) { return cap_distance(p, src.center + x, w); }, -span, span,
                                             policy_.refine_iterations, val);
                if (val > best) best = val, t = tn;
            }
            const double wmax = src.halfwidth - std::abs(t) - policy_.full_gap;
            if (wmax > wmin) {
                double val;
                const double wn = golden_max([&](double x) { return cap_distance(p, src.center + t, x); }, wmin, wmax,
                                             policy_.refine_iterations, val);
                if (val > best) best = val, w = wn;
            }
        }
        overall = std::max(overall, best);
    }
    return overall;
}

double BarrierPair::lower_refined(DiskPoint p) const {
    if (fam_.plus.samples.empty()) return -kEmptyFamilyBound;
    return profile_->evaluate(std::max(plus_reach(p), refine(p, fam_.plus)));
}

double BarrierPair::upper_refined(DiskPoint p) const {
    if (fam_.minus.samples.empty()) return kEmptyFamilyBound;
    return -profile_->evaluate(std::max(minus_reach(p), refine(p, fam_.minus)));
}

void BarrierPair::attach(std::shared_ptr<const Grid> grid) {
    grid_ = std::move(grid);
    lo_.resize(grid_->size());
    hi_.resize(grid_->size());
    for (std::size_t k = 0; k < grid_->size(); ++k) {
        lo_[k] = lower(grid_->position(k));
        hi_[k] = upper(grid_->position(k));
    }
}

double lower_barrier(const BarrierPair& bp, DiskPoint p) { return bp.lower_refined(p); }
double upper_barrier(const BarrierPair& bp, DiskPoint p) { return bp.upper_refined(p); }

namespace {

double margin(const ProfileSolution& prof, double reach) {
    return reach >= 0.0 ? 1.0 + prof.evaluate(reach) : prof.one_minus(reach);
}

}  // namespace

double lower_margin(const BarrierPair& bp, DiskPoint p) {
    if (bp.families().plus.samples.empty()) return 1.0 - kEmptyFamilyBound;
    return margin(bp.profile(), std::max(bp.plus_reach(p), bp.refine_reach(p, Side::Plus)));
}

double upper_margin(const BarrierPair& bp, DiskPoint p) {
    if (bp.families().minus.samples.empty()) return 1.0 - kEmptyFamilyBound;
    return margin(bp.profile(), std::max(bp.minus_reach(p), bp.refine_reach(p, Side::Minus)));
}

SandwichReport sandwich_check(const BarrierPair& bp, const Field& u, double slack) {
    SandwichReport rep;
    const bool cached = bp.grid() && bp.grid() == u.grid;
    for (std::size_t k = 0; k < u.values.size(); ++k) {
        const DiskPoint p = u.grid->position(k);
        const double lo = cached ? bp.lower_values()[k] : bp.lower(p);
        const double hi = cached ? bp.upper_values()[k] : bp.upper(p);
        const double v = std::max({lo - u.values[k], u.values[k] - hi, 0.0});
        if (v > rep.max_violation) {
            rep.max_violation = v;
            rep.worst_node = k;
        }
    }
    rep.passed = rep.max_violation <= slack;
    return rep;
}

}  // namespace hyperphase
