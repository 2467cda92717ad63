#include "skycat/sphere.hpp"

#include <algorithm>
#include <stdexcept>

namespace skycat {

UnitVector normalized(const UnitVector& v) {
    double n = length(v);
    if (n == 0.0 || !std::isfinite(n)) {
        throw std::domain_error("cannot normalize zero or non-finite vector");
    }
    return {v.x / n, v.y / n, v.z / n};
}

double normalize_ra(double ra_deg) {
    double r = std::fmod(ra_deg, 360.0);
    if (r < 0.0) r += 360.0;
    if (r == 360.0) r = 0.0;  // fmod can land exactly on 360 after the add
    return r;
}

UnitVector eq_to_vec(const EquatorialCoord& c) {
    if (!(c.dec >= -90.0 && c.dec <= 90.0)) {
        throw std::domain_error("dec out of range [-90, 90]");
    }
    double ra = normalize_ra(c.ra) / kDegPerRad;
    double dec = c.dec / kDegPerRad;
    double cd = std::cos(dec);
    return {cd * std::cos(ra), cd * std::sin(ra), std::sin(dec)};
}

UnitVector eq_to_vec(double ra_deg, double dec_deg) {
    return eq_to_vec(EquatorialCoord{ra_deg, dec_deg});
}

EquatorialCoord vec_to_eq(const UnitVector& v) {
    if (std::abs(dot(v, v) - 1.0) > 2e-9) {
        throw std::domain_error("vec_to_eq requires a unit vector");
    }
    double z = std::clamp(v.z, -1.0, 1.0);
    double dec = std::asin(z) * kDegPerRad;
    if (v.x == 0.0 && v.y == 0.0) {
        return {0.0, dec};  // pole convention
    }
    double ra = std::atan2(v.y, v.x) * kDegPerRad;
    return {normalize_ra(ra), dec};
}

double arc_angle_arcmin(const UnitVector& a, const UnitVector& b) {
    UnitVector d{a.x - b.x, a.y - b.y, a.z - b.z};
    double half = std::min(length(d) * 0.5, 1.0);
    return 2.0 * std::asin(half) * kArcminPerRad;
}

}  // namespace skycat
