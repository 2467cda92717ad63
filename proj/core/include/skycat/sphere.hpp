#pragma once
// Spherical coordinates and angular metrics. Two representations are used
// throughout: J2000 equatorial (ra, dec) in degrees, and the unit vector
// (x, y, z) that makes arc-angle computations cheap. Angles cross module
// boundaries in degrees or arcminutes; radians stay internal.

#include <cmath>

namespace skycat {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegPerRad = 180.0 / kPi;
inline constexpr double kArcminPerRad = 180.0 * 60.0 / kPi;
inline constexpr double kQuarterTurnArcmin = 5400.0;  // 90 degrees
inline constexpr double kHalfTurnArcmin = 10800.0;    // 180 degrees

// ra in [0, 360), dec in [-90, +90], both degrees.
struct EquatorialCoord {
    double ra = 0.0;
    double dec = 0.0;
};

struct UnitVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline constexpr double dot(const UnitVector& a, const UnitVector& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline constexpr UnitVector cross(const UnitVector& a, const UnitVector& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double length(const UnitVector& v) { return std::sqrt(dot(v, v)); }

// Scales v onto the sphere. Throws std::domain_error on a zero vector.
UnitVector normalized(const UnitVector& v);

// Wraps any finite ra into [0, 360).
double normalize_ra(double ra_deg);

// x = cos(dec)cos(ra), y = cos(dec)sin(ra), z = sin(dec).
// ra is wrapped; dec outside [-90, 90] throws std::domain_error.
UnitVector eq_to_vec(const EquatorialCoord& c);
UnitVector eq_to_vec(double ra_deg, double dec_deg);

// Inverse of eq_to_vec. Input must be unit within 1e-9 (std::domain_error
// otherwise). At the poles ra is fixed to 0 by convention.
EquatorialCoord vec_to_eq(const UnitVector& v);

// Arc angle between two unit vectors, in arcminutes. Uses the chord form
// 2*asin(|a-b|/2), which stays accurate near 0 and 180 degrees.
double arc_angle_arcmin(const UnitVector& a, const UnitVector& b);

}  // namespace skycat
