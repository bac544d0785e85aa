#pragma once

// Interface extraction and measurement: zero level sets, hyperbolic length,
// hull trapping, contact angles at the ideal boundary, blow-ups at ideal
// points and the expansion against the cone over the interface points.

#include <string>
#include <vector>

#include "hyperphase/geometry.hpp"
#include "hyperphase/grid.hpp"
#include "hyperphase/profile1d.hpp"

namespace hyperphase {

struct Polyline {
    std::vector<DiskPoint> points;
    bool closed = false;
};

/// Marching squares on lattice cells whose four corners lie in the disk.
/// Exact zeros are moved to +1e-15 first.
std::vector<Polyline> extract_zero_set(const Field& u);

/// Integral of 2|dx|/(1-|x|^2) along the segments, by composite midpoint
/// rule refined until the relative change is below 1e-8.
double hyperbolic_length(const Polyline& pl);
double hyperbolic_length(const std::vector<Polyline>& pls);

/// Closed form of the same integral along one straight segment.
double segment_hyperbolic_length(DiskPoint a, DiskPoint b);

struct TrappingReport {
    double hyperbolic = 0.0;  // max outward hyperbolic distance beyond the hull
    double euclidean = 0.0;   // same displacement divided by the conformal factor
    DiskPoint worst{0.0, 0.0};
    double violation(double slack) const { return euclidean - slack; }
};

TrappingReport trapping_report(const std::vector<Polyline>& pls, const ConvexHull& hull);

/// How a polyline end is carried to the circle at infinity: the angle of the
/// outermost vertex, or the ideal endpoint of the geodesic through the
/// outermost vertex and the fifth vertex before it.
enum class EndEstimate { Vertex, Geodesic };

/// Ideal angle of one end of an open polyline by geodesic continuation.
double ideal_end_angle(const Polyline& pl, bool front);

/// Max angular excess of each open polyline end beyond the free set, with
/// the free arcs inflated by `inflate` radians.
double contact_inclusion(const std::vector<Polyline>& pls, const std::vector<ClosedArc>& free_set, double inflate,
                         EndEstimate estimate = EndEstimate::Geodesic);

struct ContactShell {
    double radius = 0.0;      // mean radius of the fitted vertices
    double normal_angle = 0.0;
    double deviation_deg = 0.0;
    int vertices = 0;
};

struct ContactEndpoint {
    IdealPoint point;
    bool contact = false;      // false: "no contact"
    std::vector<ContactShell> shells;
};

struct ContactReport {
    std::vector<ContactEndpoint> endpoints;
};

/// Shell edges `radii` (increasing); the normal in each shell comes from a
/// least-squares line through the 10 outermost vertices near the endpoint.
ContactReport contact_angles(const std::vector<Polyline>& pls, const std::vector<IdealPoint>& L,
                             const BoundaryData& bd, const std::vector<double>& radii, double window = 0.35);

/// Tangent of the circle at infinity at p pointing into omega_plus.
DiskPoint contact_direction(IdealPoint p, const BoundaryData& bd);

struct BlowupRow {
    double lambda = 0.0;
    double deviation = 0.0;
    int used = 0;
    int skipped = 0;
};

/// Stencil y = (xi t, t) in the upper half plane chart based at p, compared
/// with g_eps(s y_1 / y_2) where s orients omega_plus.
std::vector<BlowupRow> blowup_check(const Field& u, IdealPoint p, const std::vector<double>& lambdas,
                                    const ProfileSolution& profile, const BoundaryData& bd);

struct ExpansionShell {
    double r_inner = 0.0, r_outer = 0.0;
    double sup_error = 0.0;
    int nodes = 0;
};

/// Sup over shells r_i <= |x| < r_{i+1} of |u - h_eps(cone distance)|.
std::vector<ExpansionShell> expansion_error(const Field& u, const BoundaryData& bd, const ProfileSolution& profile,
                                            const std::vector<double>& radii);

}  // namespace hyperphase
