#pragma once

// Cell-centred Cartesian lattice restricted to the disk |x| < R, and nodal
// fields on it.

#include <array>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "hyperphase/geometry.hpp"

namespace hyperphase {

class Grid {
public:
    /// Lattice points x_i = (i - (side-1)/2) h, i = 0..side-1, kept when |x| < R.
    /// side is even, so no node lies on a coordinate axis.
    static std::shared_ptr<const Grid> make(double R, double h);

    double R() const { return R_; }
    double h() const { return h_; }
    int side() const { return side_; }
    std::size_t size() const { return pos_.size(); }

    DiskPoint position(std::size_t k) const { return pos_[k]; }
    int col(std::size_t k) const { return ij_[k][0]; }
    int row(std::size_t k) const { return ij_[k][1]; }
    /// Neighbours in order +x, -x, +y, -y; -1 when outside the disk.
    const std::array<int, 4>& neighbours(std::size_t k) const { return nbr_[k]; }
    /// Nodes with at least one missing neighbour.
    bool on_ring(std::size_t k) const { return ring_[k] != 0; }
    std::size_t ring_count() const { return ring_count_; }
    /// Hyperbolic area density 4 / (1 - |x|^2)^2 at the node.
    double area_weight(std::size_t k) const { return weight_[k]; }
    /// Node index at lattice position (i, j), or -1.
    int index(int i, int j) const;
    double coord(int i) const { return (i - 0.5 * (side_ - 1)) * h_; }

private:
    double R_ = 0.0, h_ = 0.0;
    int side_ = 0;
    std::vector<DiskPoint> pos_;
    std::vector<std::array<int, 2>> ij_;
    std::vector<std::array<int, 4>> nbr_;
    std::vector<char> ring_;
    std::vector<double> weight_;
    std::vector<int> lookup_;
    std::size_t ring_count_ = 0;
};

struct Field {
    std::shared_ptr<const Grid> grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(std::shared_ptr<const Grid> g, double fill = 0.0) : grid(std::move(g)), values(grid->size(), fill) {}

    static Field sample(std::shared_ptr<const Grid> g, const std::function<double(DiskPoint)>& f);

    /// Bilinear interpolation from the lattice; nodes outside the disk are
    /// replaced by the nearest available corner values. Throws outside the lattice.
    double interpolate(DiskPoint p) const;
};

}  // namespace hyperphase
