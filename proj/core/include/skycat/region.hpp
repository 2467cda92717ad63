#pragma once
// Query geometry and the trixel cover. A region is a cap (cone about an
// axis) or a convex intersection of halfspaces; cover() descends the mesh
// classifying trixels as Full/Partial/Disjoint and returns merged id ranges
// at a fixed index depth. Covers are conservative supersets: every point of
// the region maps into some range.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "skycat/htm.hpp"
#include "skycat/sphere.hpp"

namespace skycat {

// All points p with axis . p >= cos(radius).
struct Cap {
    UnitVector axis;
    double radius_arcmin = 0.0;  // (0, 10800]
};

// Throws GeometryError unless radius in (0, 10800].
Cap make_cap(const EquatorialCoord& center, double radius_arcmin);

// One constraint normal . p >= offset.
struct Halfspace {
    UnitVector normal;
    double offset = 0.0;  // [-1, 1]
};

// Intersection of halfspaces; may be empty (detected by an empty cover,
// not forbidden).
struct ConvexRegion {
    std::vector<Halfspace> constraints;

    // Closed test normal . p >= offset - kEdgeEpsilon per constraint, so
    // polygon vertices (which lie on two edge planes) are inside.
    bool contains(const UnitVector& p) const;
};

using Region = std::variant<Cap, ConvexRegion>;

bool region_contains(const Region& r, const UnitVector& p);

// Builds the convex region of a counterclockwise convex spherical polygon:
// one zero-offset constraint per edge, normal = v_i x v_{i+1}. Clockwise,
// non-convex, or degenerate input throws GeometryError naming the offending
// edge.
ConvexRegion polygon_region(std::span<const EquatorialCoord> points);

enum class Coverage { Full, Partial, Disjoint };

// Trixel classification against a region. Exact for caps; conservative for
// general convex regions (uncertain cases report Partial).
Coverage classify(const Cap& cap, const Trixel& tri);
Coverage classify(const ConvexRegion& region, const Trixel& tri);
Coverage classify(const Region& r, const Trixel& tri);

// Sorted, non-overlapping, non-adjacent (lo, hi) id ranges, all at one
// index depth.
struct HtmRangeSet {
    int index_depth = 0;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;

    bool contains(std::uint64_t id) const;
    std::uint64_t trixel_count() const;
    double solid_angle_sr() const;  // exact sum over member trixels

    // Sort + merge into normal form; idempotent.
    void normalize();
};

inline constexpr std::size_t kDefaultCoverBudget = 10000;

// One emitted node of the cover descent, for diagnostics and tests.
struct CoverStep {
    TrixelId id;
    Coverage coverage;
};

// Recursive cover of a region at index_depth. The budget caps the number of
// emitted (pre-merge) ranges; on exhaustion remaining Partial trixels are
// emitted whole. Throws ConfigError when budget < 8 and DepthLimitError for
// index_depth outside [0, 20].
HtmRangeSet cover(const Region& r, int index_depth,
                  std::size_t budget = kDefaultCoverBudget,
                  std::vector<CoverStep>* trace = nullptr);

}  // namespace skycat
