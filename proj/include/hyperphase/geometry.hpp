#pragma once

// Poincare disk primitives: ideal points and arcs on the circle at infinity,
// geodesics, disk isometries, signed hyperbolic distance, geodesic convex
// hulls of ideal sets and cones over finite ideal sets.

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperphase {

using DiskPoint = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Tolerance used for all angular containment decisions.
inline constexpr double kAngleTol = 1e-12;

class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Maps any angle to [0, 2pi).
double normalize_angle(double theta);

/// Signed angular difference a - b mapped to (-pi, pi].
double angle_diff(double a, double b);

/// Length of the counter-clockwise arc from `from` to `to`, in [0, 2pi).
double ccw_length(double from, double to);

struct IdealPoint {
    double theta = 0.0;

    IdealPoint() = default;
    explicit IdealPoint(double angle) : theta(normalize_angle(angle)) {}

    DiskPoint position() const { return std::polar(1.0, theta); }
};

/// Open arc {center + s : |s| < halfwidth} of the circle at infinity.
struct IdealArc {
    double center = 0.0;
    double halfwidth = 0.0;

    IdealArc() = default;
    IdealArc(double c, double w);

    double start() const { return normalize_angle(center - halfwidth); }
    double end() const { return normalize_angle(center + halfwidth); }

    /// Open containment with tolerance kAngleTol.
    bool contains(double theta) const;
    /// True when this open arc is a subset of `other`.
    bool inside(const IdealArc& other) const;
    /// True when the two open arcs do not intersect.
    bool disjoint(const IdealArc& other) const;

    /// The open complementary arc (common boundary, center shifted by pi).
    IdealArc complement() const { return IdealArc(center + kPi, kPi - halfwidth); }
};

/// Closed arc of the circle at infinity; length 0 denotes a single point.
struct ClosedArc {
    double start = 0.0;
    double length = 0.0;

    bool contains(double theta, double tol = kAngleTol) const;
    double end() const { return normalize_angle(start + length); }
};

/// Prescribed data at infinity: u -> +1 on omega_plus, u -> -1 on omega_minus.
struct BoundaryData {
    std::vector<IdealArc> omega_plus;
    std::vector<IdealArc> omega_minus;

    /// Throws GeometryError naming the offending pair when arcs overlap.
    void validate() const;

    /// The closed complement F of the union of all arcs, as closed arcs sorted
    /// by start angle. Empty data gives the whole circle.
    std::vector<ClosedArc> free_set() const;

    /// Points of the common boundary of omega_plus and omega_minus.
    std::vector<IdealPoint> interface_points() const;

    /// +1 / -1 when theta lies in omega_plus / omega_minus, 0 otherwise.
    int side_of(double theta) const;

    /// Rotates all arcs by phi.
    BoundaryData rotated(double phi) const;
};

/// Complementary caps with common boundary; distance is positive toward plus.
struct CapPair {
    IdealArc plus;

    IdealArc minus() const { return plus.complement(); }
    CapPair swapped() const { return CapPair{plus.complement()}; }
};

/// Euclidean circle representing a non-diametral geodesic.
struct GeodesicCircle {
    DiskPoint center;
    double radius = 0.0;
};

/// The geodesic with ideal endpoints a and b. Its positive side is the half
/// plane whose ideal boundary is the counter-clockwise arc from a to b.
struct Geodesic {
    IdealPoint a;
    IdealPoint b;

    Geodesic() = default;
    Geodesic(IdealPoint pa, IdealPoint pb);

    Geodesic flipped() const { return Geodesic(b, a); }
    bool is_diameter() const;
    /// Circle carrying the geodesic; nullopt for diameters.
    std::optional<GeodesicCircle> circle() const;
    /// The ideal arc bounding the positive side.
    IdealArc positive_arc() const;
};

/// z -> (alpha w + beta) / (gamma w + delta) with w = conj(z) when `conjugate`.
class MobiusMap {
public:
    MobiusMap() = default;
    MobiusMap(std::complex<double> alpha, std::complex<double> beta,
              std::complex<double> gamma, std::complex<double> delta,
              bool conjugate = false);

    static MobiusMap identity() { return {}; }
    static MobiusMap rotation(double phi);
    /// Disk automorphism sending z0 to the origin, z -> (z - z0) / (1 - conj(z0) z).
    static MobiusMap translation_to_origin(DiskPoint z0);
    /// Reflection across the real axis.
    static MobiusMap conjugation();

    DiskPoint operator()(DiskPoint z) const;
    IdealPoint operator()(IdealPoint p) const;
    Geodesic operator()(const Geodesic& g) const;

    /// (*this) o other.
    MobiusMap compose(const MobiusMap& other) const;
    MobiusMap inverse() const;
    bool reverses_orientation() const { return conjugate_; }

private:
    std::complex<double> alpha_{1.0}, beta_{0.0}, gamma_{0.0}, delta_{1.0};
    bool conjugate_ = false;
};

/// Hyperbolic distance between two disk points.
double hyperbolic_distance(DiskPoint p, DiskPoint q);

/// Conformal factor 2 / (1 - |p|^2) of the disk metric.
inline double conformal_factor(DiskPoint p) { return 2.0 / (1.0 - std::norm(p)); }

/// Isometry T with T(a) = 1, T(b) = -1, positive side mapped to the upper half.
MobiusMap to_diameter_map(const Geodesic& g);

Geodesic geodesic_of_cap(const CapPair& c);

/// Signed hyperbolic distance to g, positive on its positive side.
double signed_distance(DiskPoint p, const Geodesic& g);

/// Signed distance through a precomputed to_diameter_map.
inline double signed_distance_mapped(DiskPoint p, const MobiusMap& to_diameter) {
    const DiskPoint q = to_diameter(p);
    return std::asinh(2.0 * q.imag() / (1.0 - std::norm(q)));
}

struct HullBoundary {
    Geodesic geodesic;  // positive side faces the hull interior
    MobiusMap to_diameter;
};

struct ConvexHull {
    std::vector<HullBoundary> bounding;
    bool degenerate = false;      // empty interior
    bool empty = false;           // single ideal point: no disk points at all
    bool whole_disk = false;      // F is the full circle
};

/// Hull of a closed ideal set; bounding geodesics span the gaps of F.
ConvexHull convex_hull(const std::vector<ClosedArc>& free_set);

/// Largest outward hyperbolic distance of p beyond the hull, 0 when inside.
double hull_outward_distance(DiskPoint p, const ConvexHull& h);

bool hull_contains(DiskPoint p, const ConvexHull& h, double slack = 0.0);

/// Union of the radii from the origin to a finite set of ideal points.
struct IdealCone {
    std::vector<IdealPoint> rays;
};

/// Hyperbolic distance from p to the ray from 0 toward `ray`, by golden
/// section over the arclength parameter.
double distance_to_ray(DiskPoint p, IdealPoint ray);

/// Signed distance to the cone, + in the sector over omega_plus.
double cone_signed_distance(DiskPoint p, const IdealCone& cone, const BoundaryData& bd);

/// Cayley-type chart sending the ideal point `base` to 0 of the upper half
/// plane and the disk onto {Im w > 0}.
DiskPoint disk_to_half_plane(DiskPoint z, IdealPoint base);
DiskPoint half_plane_to_disk(DiskPoint w, IdealPoint base);

}  // namespace hyperphase
