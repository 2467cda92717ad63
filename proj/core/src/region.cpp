#include "skycat/region.hpp"

#include <algorithm>
#include <cmath>

#include "skycat/errors.hpp"

namespace skycat {

namespace {

// Classification margin: boundary-grazing cases resolve toward Partial so
// covers stay sound under floating-point noise.
constexpr double kClassifyMargin = 1e-11;

// Does the geodesic edge from u1 to u2 cross the small circle axis.p = gam?
// The edge is parametrized p(t) = (1-t)u1 + t u2 (normalized); substituting
// into axis.p = gam|p| and squaring yields a quadratic in t whose roots in
// [0, 1] (with the sign of axis.p matching gam) are crossings.
bool edge_crosses_circle(const UnitVector& u1, const UnitVector& u2,
                         const UnitVector& axis, double gam) {
    double a1 = dot(axis, u1);
    double a2 = dot(axis, u2);
    double c = dot(u1, u2);
    double g2 = gam * gam;
    double qa = (a2 - a1) * (a2 - a1) - 2.0 * g2 * (1.0 - c);
    double qb = 2.0 * a1 * (a2 - a1) + 2.0 * g2 * (1.0 - c);
    double qc = a1 * a1 - g2;

    double roots[2];
    int nroots = 0;
    if (std::abs(qa) < 1e-15) {
        if (std::abs(qb) > 1e-15) roots[nroots++] = -qc / qb;
    } else {
        double disc = qb * qb - 4.0 * qa * qc;
        if (disc < 0.0) return false;
        double sq = std::sqrt(disc);
        roots[nroots++] = (-qb - sq) / (2.0 * qa);
        roots[nroots++] = (-qb + sq) / (2.0 * qa);
    }
    constexpr double kSlop = 1e-9;
    for (int i = 0; i < nroots; ++i) {
        double t = roots[i];
        if (t < -kSlop || t > 1.0 + kSlop) continue;
        double d = (1.0 - t) * a1 + t * a2;
        if (gam == 0.0 || d * gam >= -kClassifyMargin) return true;
    }
    return false;
}

Coverage classify_cap_impl(const UnitVector& axis, double radius_arcmin,
                           const Trixel& tri) {
    if (radius_arcmin >= kHalfTurnArcmin) return Coverage::Full;
    if (radius_arcmin > kQuarterTurnArcmin) {
        // Complement cap: swap Full and Disjoint.
        Coverage c = classify_cap_impl({-axis.x, -axis.y, -axis.z},
                                       kHalfTurnArcmin - radius_arcmin, tri);
        if (c == Coverage::Full) return Coverage::Disjoint;
        if (c == Coverage::Disjoint) return Coverage::Full;
        return Coverage::Partial;
    }
    if (radius_arcmin <= 0.0) return Coverage::Disjoint;

    double gam = std::cos(radius_arcmin / kArcminPerRad);
    double d0 = dot(axis, tri.v0);
    double d1 = dot(axis, tri.v1);
    double d2 = dot(axis, tri.v2);

    // radius <= 90 deg: the cap is geodesically convex, so three corners
    // inside certify the whole triangle.
    if (d0 >= gam - kClassifyMargin && d1 >= gam - kClassifyMargin &&
        d2 >= gam - kClassifyMargin) {
        return Coverage::Full;
    }
    if (d0 < gam - kClassifyMargin && d1 < gam - kClassifyMargin &&
        d2 < gam - kClassifyMargin) {
        if (tri.contains(axis)) return Coverage::Partial;  // cap inside trixel
        if (edge_crosses_circle(tri.v0, tri.v1, axis, gam) ||
            edge_crosses_circle(tri.v1, tri.v2, axis, gam) ||
            edge_crosses_circle(tri.v2, tri.v0, axis, gam)) {
            return Coverage::Partial;
        }
        return Coverage::Disjoint;
    }
    return Coverage::Partial;
}

}  // namespace

Cap make_cap(const EquatorialCoord& center, double radius_arcmin) {
    if (!(radius_arcmin > 0.0 && radius_arcmin <= kHalfTurnArcmin)) {
        throw GeometryError("cap radius must be in (0, 10800] arcmin");
    }
    return Cap{eq_to_vec(center), radius_arcmin};
}

bool ConvexRegion::contains(const UnitVector& p) const {
    // Closed test with the mesh's edge tolerance: polygon vertices sit on
    // their two edge planes and must count as inside.
    for (const auto& h : constraints) {
        if (dot(h.normal, p) < h.offset - kEdgeEpsilon) return false;
    }
    return true;
}

bool region_contains(const Region& r, const UnitVector& p) {
    if (const Cap* cap = std::get_if<Cap>(&r)) {
        return dot(cap->axis, p) >= std::cos(cap->radius_arcmin / kArcminPerRad);
    }
    return std::get<ConvexRegion>(r).contains(p);
}

ConvexRegion polygon_region(std::span<const EquatorialCoord> points) {
    if (points.size() < 3) {
        throw GeometryError("polygon needs at least 3 vertices");
    }
    std::vector<UnitVector> verts;
    verts.reserve(points.size());
    for (const auto& p : points) verts.push_back(eq_to_vec(p));

    ConvexRegion region;
    region.constraints.reserve(verts.size());
    for (std::size_t i = 0; i < verts.size(); ++i) {
        const UnitVector& a = verts[i];
        const UnitVector& b = verts[(i + 1) % verts.size()];
        UnitVector n = cross(a, b);
        if (length(n) < 1e-12) {
            throw GeometryError("degenerate edge " + std::to_string(i) +
                                ": adjacent vertices coincide or are antipodal");
        }
        region.constraints.push_back({normalized(n), 0.0});
    }
    // Every vertex must satisfy every edge constraint; a violation means the
    // polygon is clockwise or non-convex at that edge. A polygon whose
    // vertices all lie on one edge plane has no interior.
    for (std::size_t e = 0; e < region.constraints.size(); ++e) {
        const auto& h = region.constraints[e];
        bool any_strict = false;
        for (std::size_t v = 0; v < verts.size(); ++v) {
            double d = dot(h.normal, verts[v]);
            if (d < -1e-12) {
                throw GeometryError("polygon not convex/counterclockwise at edge " +
                                    std::to_string(e) + " (vertex " + std::to_string(v) +
                                    " outside)");
            }
            if (d > 1e-9) any_strict = true;
        }
        if (!any_strict) {
            throw GeometryError("degenerate polygon: all vertices on plane of edge " +
                                std::to_string(e));
        }
    }
    return region;
}

Coverage classify(const Cap& cap, const Trixel& tri) {
    return classify_cap_impl(cap.axis, cap.radius_arcmin, tri);
}

Coverage classify(const ConvexRegion& region, const Trixel& tri) {
    // Each halfspace normal.p >= offset is the cap about `normal` of radius
    // acos(offset); classify per constraint and combine conservatively.
    if (region.constraints.empty()) {
        throw GeometryError("convex region needs at least one constraint");
    }
    bool all_full = true;
    for (const auto& h : region.constraints) {
        double off = std::clamp(h.offset, -1.0, 1.0);
        double radius = std::acos(off) * kArcminPerRad;
        Coverage c = classify_cap_impl(h.normal, radius, tri);
        if (c == Coverage::Disjoint) return Coverage::Disjoint;
        if (c != Coverage::Full) all_full = false;
    }
    return all_full ? Coverage::Full : Coverage::Partial;
}

Coverage classify(const Region& r, const Trixel& tri) {
    if (const Cap* cap = std::get_if<Cap>(&r)) return classify(*cap, tri);
    return classify(std::get<ConvexRegion>(r), tri);
}

bool HtmRangeSet::contains(std::uint64_t id) const {
    auto it = std::upper_bound(ranges.begin(), ranges.end(), id,
                               [](std::uint64_t v, const auto& r) { return v < r.first; });
    if (it == ranges.begin()) return false;
    --it;
    return id <= it->second;
}

std::uint64_t HtmRangeSet::trixel_count() const {
    std::uint64_t n = 0;
    for (const auto& [lo, hi] : ranges) n += hi - lo + 1;
    return n;
}

double HtmRangeSet::solid_angle_sr() const {
    double total = 0.0;
    for (const auto& [lo, hi] : ranges) {
        for (std::uint64_t id = lo; id <= hi; ++id) {
            total += trixel_vertices(TrixelId(id)).solid_angle_sr();
        }
    }
    return total;
}

void HtmRangeSet::normalize() {
    std::sort(ranges.begin(), ranges.end());
    std::vector<std::pair<std::uint64_t, std::uint64_t>> merged;
    merged.reserve(ranges.size());
    for (const auto& r : ranges) {
        if (!merged.empty() && r.first <= merged.back().second + 1) {
            merged.back().second = std::max(merged.back().second, r.second);
        } else {
            merged.push_back(r);
        }
    }
    ranges = std::move(merged);
}

HtmRangeSet cover(const Region& r, int index_depth, std::size_t budget,
                  std::vector<CoverStep>* trace) {
    if (index_depth < 0 || index_depth > kMaxHtmDepth) {
        throw DepthLimitError("cover index depth out of [0, 20]");
    }
    if (budget < 8) {
        throw ConfigError("cover budget must be at least 8");
    }

    HtmRangeSet rs;
    rs.index_depth = index_depth;

    auto emit = [&](TrixelId id, Coverage c) {
        rs.ranges.push_back(id_to_index_range(id, index_depth));
        if (trace) trace->push_back({id, c});
    };

    std::vector<std::pair<TrixelId, Trixel>> frontier(base_trixels().begin(),
                                                      base_trixels().end());
    for (int depth = 0; !frontier.empty(); ++depth) {
        std::vector<std::pair<TrixelId, Trixel>> partial;
        for (const auto& [id, tri] : frontier) {
            Coverage c = classify(r, tri);
            if (c == Coverage::Disjoint) continue;
            if (c == Coverage::Full || depth == index_depth) {
                emit(id, c);
            } else {
                partial.emplace_back(id, tri);
            }
        }
        if (depth == index_depth || partial.empty()) break;
        if (rs.ranges.size() + 4 * partial.size() > budget) {
            for (const auto& [id, tri] : partial) {
                (void)tri;
                emit(id, Coverage::Partial);
            }
            break;
        }
        frontier.clear();
        frontier.reserve(partial.size() * 4);
        for (const auto& [id, tri] : partial) {
            auto kid_ids = children(id);
            auto kid_tris = tri.subdivide();
            for (int k = 0; k < 4; ++k) {
                frontier.emplace_back(kid_ids[k], kid_tris[k]);
            }
        }
    }
    rs.normalize();
    return rs;
}

}  // namespace skycat
