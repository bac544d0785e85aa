#include "hyperphase/elementary.hpp"

#include <algorithm>
#include <cmath>

namespace hyperphase {

ElementarySolution::ElementarySolution(CapPair cap, std::shared_ptr<const ProfileSolution> profile)
    : cap_(cap), geodesic_(geodesic_of_cap(cap)), to_diameter_(to_diameter_map(geodesic_)),
      profile_(std::move(profile)) {
    if (!profile_) throw std::invalid_argument("elementary: missing profile");
    if (profile_->n() != 2) throw std::invalid_argument("elementary: disk solutions need the n = 2 profile");
}

double elementary_eval(const ElementarySolution& sol, DiskPoint p) { return sol(p); }

double field_defect(const Field& u, double eps, const Potential& pot) {
    const Grid& g = *u.grid;
    const double ih2 = 1.0 / (g.h() * g.h());
    double worst = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (g.on_ring(k)) continue;
        const auto& nb = g.neighbours(k);
        const double lap = (u.values[nb[0]] + u.values[nb[1]] + u.values[nb[2]] + u.values[nb[3]] - 4.0 * u.values[k]) * ih2;
        worst = std::max(worst, std::abs(lap + g.area_weight(k) * pot.f_eps(u.values[k], eps)));
    }
    return worst;
}

double elementary_residual(const ElementarySolution& sol, std::shared_ptr<const Grid> grid) {
    const Field u = Field::sample(std::move(grid), [&sol](DiskPoint p) { return sol(p); });
    return field_defect(u, sol.eps(), sol.profile().potential());
}

OrderingReport ordering_check(const ElementarySolution& s1, const ElementarySolution& s2,
                              const std::vector<DiskPoint>& samples) {
    OrderingReport rep;
    rep.samples = samples.size();
    bool first = true;
    for (const DiskPoint& p : samples) {
        const double u1 = s1(p), u2 = s2(p);
        int cmp;
        if (u1 != u2) {
            cmp = u1 < u2 ? -1 : 1;
        } else {
            const double d1 = s1.distance(p), d2 = s2.distance(p);
            const double tol = 1e-12 * (1.0 + std::abs(d1));
            cmp = std::abs(d1 - d2) <= tol ? 0 : (d1 < d2 ? -1 : 1);
        }
        if (cmp > 0) rep.ordered = false;
        if (cmp >= 0) rep.strict = false;
        if (cmp != 0) rep.equal = false;
        const double v = u1 - u2;
        if (first || v > rep.worst_violation) {
            rep.worst_violation = v;
            rep.witness = p;
            first = false;
        }
    }
    return rep;
}

std::vector<DiskPoint> random_disk_points(std::size_t count, double r, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<DiskPoint> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double rad = r * std::sqrt(U(rng));
        out.push_back(std::polar(rad, kTwoPi * U(rng)));
    }
    return out;
}

}  // namespace hyperphase
