#include "hyperphase/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hyperphase {

double normalize_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    if (t >= kTwoPi) t -= kTwoPi;
    return t;
}

double angle_diff(double a, double b) {
    double d = std::remainder(a - b, kTwoPi);
    if (d <= -kPi) d += kTwoPi;
    return d;
}

double ccw_length(double from, double to) { return normalize_angle(to - from); }

IdealArc::IdealArc(double c, double w) : center(normalize_angle(c)), halfwidth(w) {
    if (!(w > 0.0 && w < kPi)) {
        std::ostringstream os;
        os << "arc halfwidth " << w << " outside (0, pi)";
        throw GeometryError(os.str());
    }
}

bool IdealArc::contains(double theta) const {
    return std::abs(angle_diff(theta, center)) < halfwidth - kAngleTol;
}

bool IdealArc::inside(const IdealArc& other) const {
    return std::abs(angle_diff(center, other.center)) + halfwidth <= other.halfwidth + kAngleTol;
}

bool IdealArc::disjoint(const IdealArc& other) const {
    return std::abs(angle_diff(center, other.center)) >= halfwidth + other.halfwidth - kAngleTol;
}

bool ClosedArc::contains(double theta, double tol) const {
    if (ccw_length(start, theta) <= length + tol) return true;
    return ccw_length(theta, start) <= tol;
}

namespace {

std::string describe(const char* side, std::size_t i, const IdealArc& a) {
    std::ostringstream os;
    os << side << "[" << i << "] (" << a.center << "," << a.halfwidth << ")";
    return os.str();
}

struct SidedArc {
    IdealArc arc;
    int side;
};

std::vector<SidedArc> sorted_arcs(const BoundaryData& bd) {
    std::vector<SidedArc> all;
    for (const auto& a : bd.omega_plus) all.push_back({a, +1});
    for (const auto& a : bd.omega_minus) all.push_back({a, -1});
    std::sort(all.begin(), all.end(),
              [](const SidedArc& x, const SidedArc& y) { return x.arc.start() < y.arc.start(); });
    return all;
}

// Gap length between consecutive arcs; abutting arcs give 0 rather than ~2pi.
double gap_length(double from, double to) {
    const double g = ccw_length(from, to);
    return g > kTwoPi - 1e-9 ? 0.0 : g;
}

}  // namespace

void BoundaryData::validate() const {
    struct Named {
        const char* side;
        std::size_t index;
        const IdealArc* arc;
    };
    std::vector<Named> all;
    for (std::size_t i = 0; i < omega_plus.size(); ++i) all.push_back({"plus", i, &omega_plus[i]});
    for (std::size_t i = 0; i < omega_minus.size(); ++i) all.push_back({"minus", i, &omega_minus[i]});
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            if (!all[i].arc->disjoint(*all[j].arc)) {
                throw GeometryError("boundary arcs overlap: " + describe(all[i].side, all[i].index, *all[i].arc) +
                                    " and " + describe(all[j].side, all[j].index, *all[j].arc));
            }
        }
    }
}

std::vector<ClosedArc> BoundaryData::free_set() const {
    const auto all = sorted_arcs(*this);
    if (all.empty()) return {ClosedArc{0.0, kTwoPi}};
    std::vector<ClosedArc> gaps;
    for (std::size_t i = 0; i < all.size(); ++i) {
        const auto& cur = all[i].arc;
        const auto& next = all[(i + 1) % all.size()].arc;
        gaps.push_back(ClosedArc{cur.end(), gap_length(cur.end(), next.start())});
    }
    std::sort(gaps.begin(), gaps.end(), [](const ClosedArc& x, const ClosedArc& y) { return x.start < y.start; });
    return gaps;
}

std::vector<IdealPoint> BoundaryData::interface_points() const {
    const auto all = sorted_arcs(*this);
    std::vector<IdealPoint> pts;
    if (all.size() < 2) return pts;
    for (std::size_t i = 0; i < all.size(); ++i) {
        const auto& cur = all[i];
        const auto& next = all[(i + 1) % all.size()];
        if (cur.side != next.side && gap_length(cur.arc.end(), next.arc.start()) <= 10.0 * kAngleTol) {
            pts.emplace_back(cur.arc.end());
        }
    }
    std::sort(pts.begin(), pts.end(), [](IdealPoint x, IdealPoint y) { return x.theta < y.theta; });
    return pts;
}

int BoundaryData::side_of(double theta) const {
    for (const auto& a : omega_plus)
        if (a.contains(theta)) return +1;
    for (const auto& a : omega_minus)
        if (a.contains(theta)) return -1;
    return 0;
}

BoundaryData BoundaryData::rotated(double phi) const {
    BoundaryData out;
    for (const auto& a : omega_plus) out.omega_plus.emplace_back(a.center + phi, a.halfwidth);
    for (const auto& a : omega_minus) out.omega_minus.emplace_back(a.center + phi, a.halfwidth);
    return out;
}

Geodesic::Geodesic(IdealPoint pa, IdealPoint pb) : a(pa), b(pb) {
    const double d = ccw_length(a.theta, b.theta);
    if (d < kAngleTol || d > kTwoPi - kAngleTol) throw GeometryError("geodesic endpoints coincide");
}

bool Geodesic::is_diameter() const { return std::abs(ccw_length(a.theta, b.theta) - kPi) < 1e-9; }

std::optional<GeodesicCircle> Geodesic::circle() const {
    if (is_diameter()) return std::nullopt;
    const double half = 0.5 * ccw_length(a.theta, b.theta);
    const double mid = a.theta + half;
    return GeodesicCircle{std::polar(1.0 / std::cos(half), mid), std::abs(std::tan(half))};
}

IdealArc Geodesic::positive_arc() const {
    const double half = 0.5 * ccw_length(a.theta, b.theta);
    return IdealArc(a.theta + half, half);
}

MobiusMap::MobiusMap(std::complex<double> alpha, std::complex<double> beta, std::complex<double> gamma,
                     std::complex<double> delta, bool conjugate)
    : alpha_(alpha), beta_(beta), gamma_(gamma), delta_(delta), conjugate_(conjugate) {}

MobiusMap MobiusMap::rotation(double phi) { return MobiusMap(std::polar(1.0, phi), 0.0, 0.0, 1.0); }

MobiusMap MobiusMap::translation_to_origin(DiskPoint z0) { return MobiusMap(1.0, -z0, -std::conj(z0), 1.0); }

MobiusMap MobiusMap::conjugation() { return MobiusMap(1.0, 0.0, 0.0, 1.0, true); }

DiskPoint MobiusMap::operator()(DiskPoint z) const {
    const DiskPoint w = conjugate_ ? std::conj(z) : z;
    return (alpha_ * w + beta_) / (gamma_ * w + delta_);
}

IdealPoint MobiusMap::operator()(IdealPoint p) const { return IdealPoint(std::arg((*this)(p.position()))); }

Geodesic MobiusMap::operator()(const Geodesic& g) const {
    const IdealPoint ta = (*this)(g.a);
    const IdealPoint tb = (*this)(g.b);
    return conjugate_ ? Geodesic(tb, ta) : Geodesic(ta, tb);
}

MobiusMap MobiusMap::compose(const MobiusMap& other) const {
    auto c = [this](std::complex<double> v) { return conjugate_ ? std::conj(v) : v; };
    const auto a2 = c(other.alpha_), b2 = c(other.beta_), c2 = c(other.gamma_), d2 = c(other.delta_);
    return MobiusMap(alpha_ * a2 + beta_ * c2, alpha_ * b2 + beta_ * d2, gamma_ * a2 + delta_ * c2,
                     gamma_ * b2 + delta_ * d2, conjugate_ != other.conjugate_);
}

MobiusMap MobiusMap::inverse() const {
    auto c = [this](std::complex<double> v) { return conjugate_ ? std::conj(v) : v; };
    return MobiusMap(c(delta_), c(-beta_), c(-gamma_), c(alpha_), conjugate_);
}

double hyperbolic_distance(DiskPoint p, DiskPoint q) {
    const double r = std::abs(p - q) / std::abs(1.0 - std::conj(p) * q);
    return 2.0 * std::atanh(std::min(r, 1.0));
}

MobiusMap to_diameter_map(const Geodesic& g) {
    const double span = ccw_length(g.a.theta, g.b.theta);
    const double mid = g.a.theta + 0.5 * span;
    // Rotate the positive arc to be centred at i, then slide along the
    // imaginary axis until the geodesic passes through the origin.
    const MobiusMap rot = MobiusMap::rotation(0.5 * kPi - mid);
    const double t = std::tan(0.25 * (kPi - span));
    const std::complex<double> it(0.0, t);
    const MobiusMap slide(1.0, -it, it, 1.0);
    return slide.compose(rot);
}

Geodesic geodesic_of_cap(const CapPair& c) {
    return Geodesic(IdealPoint(c.plus.center - c.plus.halfwidth), IdealPoint(c.plus.center + c.plus.halfwidth));
}

double signed_distance(DiskPoint p, const Geodesic& g) { return signed_distance_mapped(p, to_diameter_map(g)); }

ConvexHull convex_hull(const std::vector<ClosedArc>& free_set) {
    if (free_set.empty()) throw GeometryError("empty ideal set");
    ConvexHull hull;
    for (const auto& f : free_set) {
        if (f.length >= kTwoPi - kAngleTol) {
            hull.whole_disk = true;
            return hull;
        }
    }
    auto pieces = free_set;
    std::sort(pieces.begin(), pieces.end(), [](const ClosedArc& x, const ClosedArc& y) { return x.start < y.start; });

    std::size_t point_count = 0;
    bool all_points = true;
    for (const auto& f : pieces) {
        if (f.length > kAngleTol) all_points = false;
        ++point_count;
    }
    hull.degenerate = all_points && point_count <= 2;
    if (all_points && point_count == 1) {
        hull.empty = true;
        return hull;
    }

    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const double gap_start = pieces[i].end();
        const double gap_end = pieces[(i + 1) % pieces.size()].start;
        const double len = ccw_length(gap_start, gap_end);
        if (len <= kAngleTol || len >= kTwoPi - kAngleTol) continue;
        const Geodesic g{IdealPoint(gap_end), IdealPoint(gap_start)};
        hull.bounding.push_back({g, to_diameter_map(g)});
    }
    return hull;
}

double hull_outward_distance(DiskPoint p, const ConvexHull& h) {
    if (h.empty) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (const auto& b : h.bounding) worst = std::max(worst, -signed_distance_mapped(p, b.to_diameter));
    return worst;
}

bool hull_contains(DiskPoint p, const ConvexHull& h, double slack) {
    return hull_outward_distance(p, h) <= slack;
}

double distance_to_ray(DiskPoint p, IdealPoint ray) {
    const DiskPoint dir = ray.position();
    auto f = [&](double sigma) { return hyperbolic_distance(p, std::tanh(0.5 * sigma) * dir); };
    const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = 0.0;
    double hi = 2.0 * hyperbolic_distance(0.0, p) + 1.0;
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > 1e-10) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = f(x2);
        }
    }
    return std::min({f(0.5 * (lo + hi)), f(0.0), f1, f2});
}

double cone_signed_distance(DiskPoint p, const IdealCone& cone, const BoundaryData& bd) {
    if (std::abs(p) == 0.0 || cone.rays.empty()) return 0.0;
    double d = std::numeric_limits<double>::infinity();
    for (const auto& r : cone.rays) d = std::min(d, distance_to_ray(p, r));
    const double th = std::arg(p);
    int s = bd.side_of(th);
    if (s == 0) {
        // endpoint shared by two arcs of the same sign
        const int a = bd.side_of(th - 1e-9), b = bd.side_of(th + 1e-9);
        if (a == b) s = a;
    }
    return s * d;
}

DiskPoint disk_to_half_plane(DiskPoint z, IdealPoint base) {
    const DiskPoint zp = -z * std::conj(base.position());
    return DiskPoint(0.0, 1.0) * (1.0 + zp) / (1.0 - zp);
}

DiskPoint half_plane_to_disk(DiskPoint w, IdealPoint base) {
    const DiskPoint i(0.0, 1.0);
    const DiskPoint zp = (w - i) / (w + i);
    return -zp * base.position();
}

}  // namespace hyperphase
