#pragma once

// One-dimensional solutions U(x) = h_eps(d(x, Sigma)) on the disk, where
// Sigma is the geodesic bounding a pair of complementary caps.

#include <memory>
#include <random>
#include <vector>

#include "hyperphase/geometry.hpp"
#include "hyperphase/grid.hpp"
#include "hyperphase/profile1d.hpp"

namespace hyperphase {

class ElementarySolution {
public:
    /// The profile must be the n = 2 profile.
    ElementarySolution(CapPair cap, std::shared_ptr<const ProfileSolution> profile);

    const CapPair& cap() const { return cap_; }
    const Geodesic& geodesic() const { return geodesic_; }
    const ProfileSolution& profile() const { return *profile_; }
    std::shared_ptr<const ProfileSolution> profile_ptr() const { return profile_; }
    double eps() const { return profile_->eps(); }

    double distance(DiskPoint p) const { return signed_distance_mapped(p, to_diameter_); }
    double operator()(DiskPoint p) const { return profile_->evaluate(distance(p)); }

private:
    CapPair cap_;
    Geodesic geodesic_;
    MobiusMap to_diameter_;
    std::shared_ptr<const ProfileSolution> profile_;
};

double elementary_eval(const ElementarySolution& sol, DiskPoint p);

/// Max over nodes with four neighbours of |Lap_h u + 4/(1-|x|^2)^2 f_eps(u)|.
double field_defect(const Field& u, double eps, const Potential& pot);

/// Defect of the sampled elementary solution on the grid.
double elementary_residual(const ElementarySolution& sol, std::shared_ptr<const Grid> grid);

struct OrderingReport {
    bool ordered = true;          // U1 <= U2 at every sample
    bool strict = true;           // U1 < U2 at every sample
    bool equal = true;            // U1 == U2 at every sample
    double worst_violation = 0.0; // max of U1 - U2
    DiskPoint witness{0.0, 0.0};  // sample attaining worst_violation
    std::size_t samples = 0;
};

/// Compares U1 <= U2 pointwise. When both values saturate to the same double
/// the signed distances decide, since the profile is strictly increasing.
OrderingReport ordering_check(const ElementarySolution& s1, const ElementarySolution& s2,
                              const std::vector<DiskPoint>& samples);

/// Points uniformly distributed in the Euclidean disk of radius r.
std::vector<DiskPoint> random_disk_points(std::size_t count, double r, std::mt19937_64& rng);

}  // namespace hyperphase
