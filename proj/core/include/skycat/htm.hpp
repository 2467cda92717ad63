#pragma once
// Hierarchical Triangular Mesh. The sphere is inscribed in an octahedron
// whose 8 faces are recursively split into 4 spherical triangles (trixels)
// via normalized edge midpoints. A trixel's 64-bit id encodes its whole
// subdivision path: base faces S0..S3 take ids 8..11 and N0..N3 take 12..15,
// and each level appends two bits (id*4 + child). Depth d ids therefore
// occupy exactly 4 + 2d bits, so every descendant of id t at a deeper level
// lies in the contiguous range [t*4^k, (t+1)*4^k - 1] -- the property the
// catalog's range index is built on.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include "skycat/sphere.hpp"

namespace skycat {

inline constexpr int kMaxHtmDepth = 20;

// Validated trixel id. Construction rejects values whose bit pattern is not
// a base face plus whole 2-bit digits, or whose depth exceeds kMaxHtmDepth.
class TrixelId {
public:
    TrixelId() = default;  // S0
    explicit TrixelId(std::uint64_t id);

    std::uint64_t value() const { return id_; }
    int depth() const;

    // Integer division by 4; requires depth >= 1.
    TrixelId parent() const;

    friend bool operator==(TrixelId a, TrixelId b) { return a.id_ == b.id_; }
    friend auto operator<=>(TrixelId a, TrixelId b) { return a.id_ <=> b.id_; }

private:
    std::uint64_t id_ = 8;
};

// One spherical triangle; vertices are unit and counterclockwise seen from
// outside the sphere, i.e. (v0 x v1) . v2 > 0.
struct Trixel {
    UnitVector v0, v1, v2;

    // Closed point-in-trixel test: all three edge-plane dot products
    // >= -kEdgeEpsilon.
    bool contains(const UnitVector& p) const;
    // Strict interior test: all three edge-plane dot products > +kEdgeEpsilon.
    bool contains_strict(const UnitVector& p) const;

    UnitVector centroid() const;
    double solid_angle_sr() const;
    double max_edge_arcmin() const;
    std::array<Trixel, 4> subdivide() const;
};

// Tolerance for the edge-plane tests; boundary points count as inside and
// the first passing trixel (in child order) wins, so location is total and
// deterministic.
inline constexpr double kEdgeEpsilon = 1e-12;

// The 8 octahedron faces, ids 8..15 paired with their vertices.
const std::array<std::pair<TrixelId, Trixel>, 8>& base_trixels();

// Ids {4t, 4t+1, 4t+2, 4t+3}. Throws DepthLimitError at depth 20.
std::array<TrixelId, 4> children(TrixelId t);

// Deterministic descent to the trixel containing v at the given depth.
TrixelId lookup_id(const UnitVector& v, int depth);

// Replays the subdivision path encoded in the id.
Trixel trixel_vertices(TrixelId t);

// Textual form [NS]<face digit><subdivision digits>, e.g. "N32".
TrixelId name_to_id(std::string_view name);
std::string id_to_name(TrixelId t);

// Range of descendant ids of t at index_depth:
// [t * 4^(index_depth - depth), (t+1) * 4^(index_depth - depth) - 1].
// Throws DepthLimitError when depth(t) > index_depth.
std::pair<std::uint64_t, std::uint64_t> id_to_index_range(TrixelId t, int index_depth);

// Smallest and largest valid id at a depth.
std::uint64_t first_id_at_depth(int depth);
std::uint64_t last_id_at_depth(int depth);

// Maximum trixel edge length at a depth, by beam search over the widest
// candidates per level (exact: verified against exhaustive enumeration at
// shallow depths).
double max_edge_arcmin_at_depth(int depth, int beam_width = 512);

}  // namespace skycat
