#pragma once

// Sub- and supersolutions built as the sup (resp. inf) of one-dimensional
// solutions over caps inscribed in the plus (resp. minus) boundary arcs.

#include <complex>
#include <memory>
#include <vector>

#include "hyperphase/elementary.hpp"
#include "hyperphase/grid.hpp"

namespace hyperphase {

enum class Side { Plus, Minus };

struct FamilyPolicy {
    int centers = 16;
    int halfwidths = 12;
    double smallest_fraction = 0.02;  // smallest halfwidth relative to the source arc
    double full_gap = 1e-10;          // the largest cap falls short of the source arc by this
    int refine_iterations = 40;
    int refine_sweeps = 3;
};

/// A cap on the circle at infinity with the trigonometric data used by the
/// closed-form distance to its geodesic.
struct SampledCap {
    IdealArc arc;
    int source = 0;
    std::complex<double> rot;  // exp(-i center)
    double cos_w = 0.0, sin_w = 1.0;

    SampledCap() = default;
    SampledCap(IdealArc a, int src);
};

/// Signed distance from p to the geodesic bounding `cap`, positive toward the cap.
double cap_distance(DiskPoint p, double center, double halfwidth);
double cap_distance(DiskPoint p, const SampledCap& cap);

struct CapFamily {
    Side side = Side::Plus;
    std::vector<IdealArc> arcs;
    std::vector<SampledCap> samples;

    /// The cap pair whose elementary solution the sample represents: for the
    /// plus side C+ is the sample, for the minus side C- is.
    CapPair pair(std::size_t k) const;
};

struct Families {
    CapFamily plus;
    CapFamily minus;
};

Families build_families(const BoundaryData& bd, const FamilyPolicy& policy = {});

class BarrierPair {
public:
    BarrierPair(Families fam, std::shared_ptr<const ProfileSolution> profile, FamilyPolicy policy = {});

    const Families& families() const { return fam_; }
    const ProfileSolution& profile() const { return *profile_; }
    std::shared_ptr<const ProfileSolution> profile_ptr() const { return profile_; }
    double eps() const { return profile_->eps(); }

    /// Max over the sampled plus family of U(p).
    double lower(DiskPoint p) const;
    /// Min over the sampled minus family of U(p).
    double upper(DiskPoint p) const;
    /// Sampled value improved by alternating golden-section search in
    /// (center, halfwidth) within the containing arc.
    double lower_refined(DiskPoint p) const;
    double upper_refined(DiskPoint p) const;
    /// Largest reach over the family of `side`, refined by golden section.
    double refine_reach(DiskPoint p, Side side) const { return refine(p, side == Side::Plus ? fam_.plus : fam_.minus); }

    /// Largest signed distance over the sampled plus caps (-inf if empty).
    double plus_reach(DiskPoint p) const;
    double minus_reach(DiskPoint p) const;

    /// Precomputes sampled values at every node of `grid`.
    void attach(std::shared_ptr<const Grid> grid);
    const std::shared_ptr<const Grid>& grid() const { return grid_; }
    const std::vector<double>& lower_values() const { return lo_; }
    const std::vector<double>& upper_values() const { return hi_; }

private:
    Families fam_;
    std::shared_ptr<const ProfileSolution> profile_;
    FamilyPolicy policy_;
    std::shared_ptr<const Grid> grid_;
    std::vector<double> lo_, hi_;

    double refine(DiskPoint p, const CapFamily& fam) const;
};

double lower_barrier(const BarrierPair& bp, DiskPoint p);
double upper_barrier(const BarrierPair& bp, DiskPoint p);

/// 1 + lower_barrier and 1 - upper_barrier, resolved where the barriers
/// round to -1 or +1.
double lower_margin(const BarrierPair& bp, DiskPoint p);
double upper_margin(const BarrierPair& bp, DiskPoint p);

struct SandwichReport {
    double max_violation = 0.0;
    std::size_t worst_node = 0;
    bool passed = true;
};

/// Max over nodes of max(lower - u, u - upper, 0), using the attached grid
/// values when the field lives on the attached grid.
SandwichReport sandwich_check(const BarrierPair& bp, const Field& u, double slack);

inline constexpr double kEmptyFamilyBound = 1.0 - 1e-12;

}  // namespace hyperphase
