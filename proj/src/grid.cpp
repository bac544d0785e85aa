#include "hyperphase/grid.hpp"

#include <cmath>
#include <sstream>

namespace hyperphase {

std::shared_ptr<const Grid> Grid::make(double R, double h) {
    if (!(R > 0.0 && R < 1.0)) throw std::invalid_argument("grid: R must lie in (0, 1)");
    if (!(h > 0.0) || h > R) throw std::invalid_argument("grid: spacing must lie in (0, R]");
    auto g = std::make_shared<Grid>();
    g->R_ = R;
    g->h_ = h;
    int half = static_cast<int>(std::ceil(R / h + 0.5));
    g->side_ = 2 * half;
    const int side = g->side_;
    g->lookup_.assign(static_cast<std::size_t>(side) * side, -1);
    for (int j = 0; j < side; ++j) {
        for (int i = 0; i < side; ++i) {
            const DiskPoint p(g->coord(i), g->coord(j));
            if (std::abs(p) >= R) continue;
            g->lookup_[static_cast<std::size_t>(j) * side + i] = static_cast<int>(g->pos_.size());
            g->pos_.push_back(p);
            g->ij_.push_back({i, j});
        }
    }
    const std::size_t n = g->pos_.size();
    g->nbr_.resize(n);
    g->ring_.assign(n, 0);
    g->weight_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const int i = g->ij_[k][0], j = g->ij_[k][1];
        g->nbr_[k] = {g->index(i + 1, j), g->index(i - 1, j), g->index(i, j + 1), g->index(i, j - 1)};
        for (int m : g->nbr_[k])
            if (m < 0) g->ring_[k] = 1;
        if (g->ring_[k]) ++g->ring_count_;
        const double s = 1.0 - std::norm(g->pos_[k]);
        g->weight_[k] = 4.0 / (s * s);
    }
    if (g->ring_count_ == 0 || n == 0) throw std::invalid_argument("grid: empty lattice");
    return g;
}

int Grid::index(int i, int j) const {
    if (i < 0 || j < 0 || i >= side_ || j >= side_) return -1;
    return lookup_[static_cast<std::size_t>(j) * side_ + i];
}

Field Field::sample(std::shared_ptr<const Grid> g, const std::function<double(DiskPoint)>& f) {
    Field u(std::move(g));
    for (std::size_t k = 0; k < u.values.size(); ++k) u.values[k] = f(u.grid->position(k));
    return u;
}

double Field::interpolate(DiskPoint p) const {
    const Grid& g = *grid;
    const double fx = p.real() / g.h() + 0.5 * (g.side() - 1);
    const double fy = p.imag() / g.h() + 0.5 * (g.side() - 1);
    const int i0 = static_cast<int>(std::floor(fx)), j0 = static_cast<int>(std::floor(fy));
    const double tx = fx - i0, ty = fy - j0;
    const int ci[4] = {i0, i0 + 1, i0, i0 + 1};
    const int cj[4] = {j0, j0, j0 + 1, j0 + 1};
    const double cw[4] = {(1 - tx) * (1 - ty), tx * (1 - ty), (1 - tx) * ty, tx * ty};
    double acc = 0.0, wsum = 0.0;
    int idx[4];
    for (int c = 0; c < 4; ++c) {
        idx[c] = g.index(ci[c], cj[c]);
        if (idx[c] >= 0) {
            acc += cw[c] * values[idx[c]];
            wsum += cw[c];
        }
    }
    if (wsum == 1.0 || (idx[0] >= 0 && idx[1] >= 0 && idx[2] >= 0 && idx[3] >= 0)) return acc;
    if (wsum <= 0.0) {
        // fall back to the nearest lattice node inside the disk
        int best = -1;
        double bd = 0.0;
        for (int dj = -1; dj <= 2; ++dj)
            for (int di = -1; di <= 2; ++di) {
                const int m = g.index(i0 + di, j0 + dj);
                if (m < 0) continue;
                const double d = std::abs(g.position(m) - p);
                if (best < 0 || d < bd) best = m, bd = d;
            }
        if (best < 0) {
            std::ostringstream os;
            os << "field: point (" << p.real() << ", " << p.imag() << ") outside the solved disk";
            throw std::out_of_range(os.str());
        }
        return values[best];
    }
    return acc / wsum;
}

}  // namespace hyperphase
