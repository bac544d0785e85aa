#include "hyperphase/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

namespace hyperphase {

namespace {

struct Segment {
    long e0, e1;
};

}  // namespace

std::vector<Polyline> extract_zero_set(const Field& u) {
    const Grid& g = *u.grid;
    const int side = g.side();
    auto val = [&](int idx) {
        const double v = u.values[idx];
        return v == 0.0 ? 1e-15 : v;
    };
    auto hid = [side](int i, int j) { return 2L * (static_cast<long>(j) * side + i); };
    auto vid = [side](int i, int j) { return 2L * (static_cast<long>(j) * side + i) + 1; };

    std::unordered_map<long, DiskPoint> point_of;
    std::vector<Segment> segs;
    auto crossing = [&](long id, int a, int b) {
        if (point_of.count(id)) return;
        const double va = val(a), vb = val(b);
        const double t = va / (va - vb);
        point_of[id] = g.position(a) + t * (g.position(b) - g.position(a));
    };

    for (int j = 0; j + 1 < side; ++j) {
        for (int i = 0; i + 1 < side; ++i) {
            const int c0 = g.index(i, j), c1 = g.index(i + 1, j), c2 = g.index(i + 1, j + 1), c3 = g.index(i, j + 1);
            if (c0 < 0 || c1 < 0 || c2 < 0 || c3 < 0) continue;
            const bool s0 = val(c0) > 0, s1 = val(c1) > 0, s2 = val(c2) > 0, s3 = val(c3) > 0;
            std::vector<long> edges;
            const long bottom = hid(i, j), right = vid(i + 1, j), top = hid(i, j + 1), left = vid(i, j);
            if (s0 != s1) crossing(bottom, c0, c1), edges.push_back(bottom);
            if (s1 != s2) crossing(right, c1, c2), edges.push_back(right);
            if (s3 != s2) crossing(top, c3, c2), edges.push_back(top);
            if (s0 != s3) crossing(left, c0, c3), edges.push_back(left);
            if (edges.size() == 2) {
                segs.push_back({edges[0], edges[1]});
            } else if (edges.size() == 4) {
                const double centre = 0.25 * (val(c0) + val(c1) + val(c2) + val(c3));
                if ((centre > 0) == s0) {
                    segs.push_back({bottom, right});
                    segs.push_back({top, left});
                } else {
                    segs.push_back({bottom, left});
                    segs.push_back({right, top});
                }
            }
        }
    }

    std::map<long, std::vector<std::size_t>> incident;
    for (std::size_t s = 0; s < segs.size(); ++s) {
        incident[segs[s].e0].push_back(s);
        incident[segs[s].e1].push_back(s);
    }
    std::vector<char> used(segs.size(), 0);
    std::vector<Polyline> out;
    auto walk = [&](long start, std::size_t first_seg) {
        Polyline pl;
        pl.points.push_back(point_of[start]);
        long cur = start;
        std::size_t s = first_seg;
        while (true) {
            used[s] = 1;
            const long next = segs[s].e0 == cur ? segs[s].e1 : segs[s].e0;
            if (next == start) {
                pl.closed = true;
                break;
            }
            const DiskPoint q = point_of[next];
            if (std::abs(q - pl.points.back()) > 0.0) pl.points.push_back(q);
            cur = next;
            std::size_t nxt = segs.size();
            for (std::size_t t : incident[cur])
                if (!used[t]) nxt = t;
            if (nxt == segs.size()) break;
            s = nxt;
        }
        return pl;
    };
    for (const auto& [e, list] : incident) {
        if (list.size() == 1 && !used[list[0]]) out.push_back(walk(e, list[0]));
    }
    for (const auto& [e, list] : incident) {
        for (std::size_t s : list)
            if (!used[s]) out.push_back(walk(e, s));
    }
    return out;
}

double segment_hyperbolic_length(DiskPoint a, DiskPoint b) {
    const DiskPoint v = b - a;
    const double L2 = std::norm(v);
    if (L2 == 0.0) return 0.0;
    const double L = std::sqrt(L2);
    const double beta = (a * std::conj(v)).real();
    const double c = std::sqrt(1.0 - std::norm(a) + beta * beta / L2);
    const double s0 = beta / L2, s1 = 1.0 + beta / L2;
    return 2.0 / c * (std::atanh(L * s1 / c) - std::atanh(L * s0 / c));
}

double hyperbolic_length(const Polyline& pl) {
    auto segment = [](DiskPoint a, DiskPoint b) {
        const double len = std::abs(b - a);
        double prev = 0.0;
        for (int n = 1;; n *= 2) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) {
                const DiskPoint m = a + (k + 0.5) / n * (b - a);
                s += 2.0 / (1.0 - std::norm(m));
            }
            s *= len / n;
            if (n > 1 && std::abs(s - prev) <= 1e-8 * std::abs(s)) return s;
            if (n >= (1 << 20)) return s;
            prev = s;
        }
    };
    double total = 0.0;
    const auto& p = pl.points;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) total += segment(p[i], p[i + 1]);
    if (pl.closed && p.size() > 2) total += segment(p.back(), p.front());
    return total;
}

double hyperbolic_length(const std::vector<Polyline>& pls) {
    double s = 0.0;
    for (const auto& pl : pls) s += hyperbolic_length(pl);
    return s;
}

TrappingReport trapping_report(const std::vector<Polyline>& pls, const ConvexHull& hull) {
    TrappingReport rep;
    for (const auto& pl : pls) {
        for (const DiskPoint& p : pl.points) {
            const double d = hull_outward_distance(p, hull);
            const double e = d / conformal_factor(p);
            if (e > rep.euclidean) {
                rep.euclidean = e;
                rep.hyperbolic = d;
                rep.worst = p;
            }
        }
    }
    return rep;
}

double ideal_end_angle(const Polyline& pl, bool front) {
    const std::size_t n = pl.points.size();
    const std::size_t back = std::min<std::size_t>(5, n - 1);
    const DiskPoint b = front ? pl.points.front() : pl.points.back();
    const DiskPoint a = front ? pl.points[back] : pl.points[n - 1 - back];
    if (back == 0 || std::abs(a - b) == 0.0) return normalize_angle(std::arg(b));
    const MobiusMap T = MobiusMap::translation_to_origin(a);
    const DiskPoint bb = T(b);
    return normalize_angle(std::arg(T.inverse()(bb / std::abs(bb))));
}

double contact_inclusion(const std::vector<Polyline>& pls, const std::vector<ClosedArc>& free_set, double inflate,
                         EndEstimate estimate) {
    double worst = 0.0;
    for (const auto& pl : pls) {
        if (pl.closed || pl.points.empty()) continue;
        for (bool front : {true, false}) {
            const double th = estimate == EndEstimate::Vertex
                                  ? normalize_angle(std::arg(front ? pl.points.front() : pl.points.back()))
                                  : ideal_end_angle(pl, front);
            double best = kPi;
            for (const auto& arc : free_set) {
                if (arc.contains(th)) {
                    best = 0.0;
                    break;
                }
                best = std::min({best, ccw_length(arc.end(), th), ccw_length(th, arc.start)});
            }
            worst = std::max(worst, best - inflate);
        }
    }
    return std::max(worst, 0.0);
}

DiskPoint contact_direction(IdealPoint p, const BoundaryData& bd) {
    const DiskPoint ccw = DiskPoint(0.0, 1.0) * p.position();
    if (bd.side_of(p.theta + 1e-6) > 0) return ccw;
    if (bd.side_of(p.theta - 1e-6) > 0) return -ccw;
    return bd.side_of(p.theta + 1e-6) < 0 ? -ccw : ccw;
}

ContactReport contact_angles(const std::vector<Polyline>& pls, const std::vector<IdealPoint>& L,
                             const BoundaryData& bd, const std::vector<double>& radii, double window) {
    ContactReport rep;
    for (const IdealPoint& P : L) {
        ContactEndpoint ep;
        ep.point = P;
        const DiskPoint nu = contact_direction(P, bd);
        for (std::size_t s = 0; s + 1 < radii.size(); ++s) {
            std::vector<DiskPoint> pts;
            for (const auto& pl : pls)
                for (const DiskPoint& v : pl.points) {
                    const double r = std::abs(v);
                    if (r >= radii[s] && r < radii[s + 1] && std::abs(angle_diff(std::arg(v), P.theta)) < window)
                        pts.push_back(v);
                }
            std::sort(pts.begin(), pts.end(), [](DiskPoint a, DiskPoint b) { return std::abs(a) > std::abs(b); });
            if (pts.size() > 10) pts.resize(10);
            if (pts.size() < 3) continue;
            DiskPoint m(0.0, 0.0);
            for (auto& q : pts) m += q;
            m /= static_cast<double>(pts.size());
            double sxx = 0, syy = 0, sxy = 0;
            for (auto& q : pts) {
                const DiskPoint d = q - m;
                sxx += d.real() * d.real();
                syy += d.imag() * d.imag();
                sxy += d.real() * d.imag();
            }
            const double phi = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
            const DiskPoint normal = std::polar(1.0, phi + 0.5 * kPi);
            ContactShell sh;
            sh.radius = std::abs(m);
            sh.normal_angle = phi + 0.5 * kPi;
            const double c = std::min(1.0, std::abs((normal * std::conj(nu)).real()));
            sh.deviation_deg = std::acos(c) * 180.0 / kPi;
            sh.vertices = static_cast<int>(pts.size());
            ep.shells.push_back(sh);
        }
        ep.contact = !ep.shells.empty() && ep.shells.back().radius >= radii[radii.size() - 2];
        rep.endpoints.push_back(ep);
    }
    return rep;
}

std::vector<BlowupRow> blowup_check(const Field& u, IdealPoint p, const std::vector<double>& lambdas,
                                    const ProfileSolution& profile, const BoundaryData& bd) {
    const double probe = 1e-3;
    int s = bd.side_of(std::arg(half_plane_to_disk(DiskPoint(probe, 0.0), p)));
    if (s == 0) s = -bd.side_of(std::arg(half_plane_to_disk(DiskPoint(-probe, 0.0), p)));
    if (s == 0) s = 1;
    const Grid& g = *u.grid;
    const double limit = g.R() - 2.0 * g.h();
    std::vector<BlowupRow> rows;
    for (double lam : lambdas) {
        BlowupRow row;
        row.lambda = lam;
        for (double t : {1.0, 1.5, 2.0, 3.0, 4.0}) {
            for (int k = -4; k <= 4; ++k) {
                const double xi = k * profile.eps();
                const DiskPoint z = half_plane_to_disk(lam * DiskPoint(xi * t, t), p);
                if (std::abs(z) >= limit) {
                    ++row.skipped;
                    continue;
                }
                ++row.used;
                row.deviation = std::max(row.deviation, std::abs(u.interpolate(z) - profile.g_of_xi(s * xi)));
            }
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<ExpansionShell> expansion_error(const Field& u, const BoundaryData& bd, const ProfileSolution& profile,
                                            const std::vector<double>& radii) {
    for (const auto& a : bd.free_set())
        if (a.length > 1e-12)
            throw std::invalid_argument("expansion requires the free set to be the finite interface set");
    IdealCone cone{bd.interface_points()};
    std::vector<ExpansionShell> out;
    for (std::size_t s = 0; s + 1 < radii.size(); ++s) out.push_back({radii[s], radii[s + 1], 0.0, 0});
    const Grid& g = *u.grid;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double r = std::abs(g.position(k));
        const auto it = std::upper_bound(radii.begin(), radii.end(), r);
        if (it == radii.begin() || it == radii.end()) continue;
        auto& sh = out[static_cast<std::size_t>(it - radii.begin()) - 1];
        const double e = u.values[k] - profile.evaluate(cone_signed_distance(g.position(k), cone, bd));
        sh.sup_error = std::max(sh.sup_error, std::abs(e));
        ++sh.nodes;
    }
    return out;
}

}  // namespace hyperphase
