#include "skycat/htm.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <vector>

#include "skycat/errors.hpp"

namespace skycat {

namespace {

constexpr UnitVector kNorthPole{0, 0, 1};
constexpr UnitVector kSouthPole{0, 0, -1};
constexpr UnitVector kXPlus{1, 0, 0};
constexpr UnitVector kYPlus{0, 1, 0};
constexpr UnitVector kXMinus{-1, 0, 0};
constexpr UnitVector kYMinus{0, -1, 0};

// Base face vertex table (JHU HTM convention).
constexpr std::array<Trixel, 8> kBaseFaces{{
    {kXPlus, kSouthPole, kYPlus},   // S0 = 8
    {kYPlus, kSouthPole, kXMinus},  // S1 = 9
    {kXMinus, kSouthPole, kYMinus}, // S2 = 10
    {kYMinus, kSouthPole, kXPlus},  // S3 = 11
    {kXPlus, kNorthPole, kYMinus},  // N0 = 12
    {kYMinus, kNorthPole, kXMinus}, // N1 = 13
    {kXMinus, kNorthPole, kYPlus},  // N2 = 14
    {kYPlus, kNorthPole, kXPlus},   // N3 = 15
}};

int depth_of(std::uint64_t id) {
    return (std::bit_width(id) - 4) / 2;
}

bool valid_id(std::uint64_t id) {
    if (id < 8) return false;
    int bits = std::bit_width(id);
    if (bits % 2 != 0) return false;
    return depth_of(id) <= kMaxHtmDepth;
}

UnitVector midpoint(const UnitVector& a, const UnitVector& b) {
    return normalized({a.x + b.x, a.y + b.y, a.z + b.z});
}

}  // namespace

TrixelId::TrixelId(std::uint64_t id) : id_(id) {
    if (!valid_id(id)) {
        throw EncodingError("malformed trixel id " + std::to_string(id));
    }
}

int TrixelId::depth() const { return depth_of(id_); }

TrixelId TrixelId::parent() const {
    if (depth() == 0) {
        throw EncodingError("base trixel has no parent");
    }
    return TrixelId(id_ >> 2);
}

bool Trixel::contains(const UnitVector& p) const {
    return dot(cross(v0, v1), p) >= -kEdgeEpsilon &&
           dot(cross(v1, v2), p) >= -kEdgeEpsilon &&
           dot(cross(v2, v0), p) >= -kEdgeEpsilon;
}

bool Trixel::contains_strict(const UnitVector& p) const {
    return dot(cross(v0, v1), p) > kEdgeEpsilon &&
           dot(cross(v1, v2), p) > kEdgeEpsilon &&
           dot(cross(v2, v0), p) > kEdgeEpsilon;
}

UnitVector Trixel::centroid() const {
    return normalized({v0.x + v1.x + v2.x, v0.y + v1.y + v2.y, v0.z + v1.z + v2.z});
}

double Trixel::solid_angle_sr() const {
    // van Oosterom-Strackee: tan(omega/2) = |v0.(v1 x v2)| / (1 + sum of dots)
    double num = std::abs(dot(v0, cross(v1, v2)));
    double den = 1.0 + dot(v0, v1) + dot(v1, v2) + dot(v2, v0);
    return 2.0 * std::atan2(num, den);
}

double Trixel::max_edge_arcmin() const {
    return std::max({arc_angle_arcmin(v0, v1), arc_angle_arcmin(v1, v2),
                     arc_angle_arcmin(v2, v0)});
}

std::array<Trixel, 4> Trixel::subdivide() const {
    UnitVector w0 = midpoint(v1, v2);
    UnitVector w1 = midpoint(v0, v2);
    UnitVector w2 = midpoint(v0, v1);
    return {{{v0, w2, w1}, {v1, w0, w2}, {v2, w1, w0}, {w0, w1, w2}}};
}

const std::array<std::pair<TrixelId, Trixel>, 8>& base_trixels() {
    static const std::array<std::pair<TrixelId, Trixel>, 8> table = [] {
        std::array<std::pair<TrixelId, Trixel>, 8> t;
        for (int i = 0; i < 8; ++i) {
            t[i] = {TrixelId(static_cast<std::uint64_t>(8 + i)), kBaseFaces[i]};
        }
        return t;
    }();
    return table;
}

std::array<TrixelId, 4> children(TrixelId t) {
    if (t.depth() >= kMaxHtmDepth) {
        throw DepthLimitError("children beyond depth " + std::to_string(kMaxHtmDepth));
    }
    std::uint64_t base = t.value() << 2;
    return {TrixelId(base), TrixelId(base + 1), TrixelId(base + 2), TrixelId(base + 3)};
}

TrixelId lookup_id(const UnitVector& v, int depth) {
    if (depth < 0 || depth > kMaxHtmDepth) {
        throw DepthLimitError("lookup depth out of [0, 20]");
    }
    std::uint64_t id = 0;
    Trixel tri = kBaseFaces[0];
    for (int i = 0; i < 8; ++i) {
        if (kBaseFaces[i].contains(v)) {
            id = static_cast<std::uint64_t>(8 + i);
            tri = kBaseFaces[i];
            break;
        }
    }
    // Coverage of the base faces is total under the closed test.
    for (int d = 0; d < depth; ++d) {
        auto kids = tri.subdivide();
        for (int k = 0; k < 4; ++k) {
            if (kids[k].contains(v)) {
                id = id * 4 + static_cast<std::uint64_t>(k);
                tri = kids[k];
                break;
            }
        }
    }
    return TrixelId(id);
}

Trixel trixel_vertices(TrixelId t) {
    std::uint64_t id = t.value();
    int depth = t.depth();
    Trixel tri = kBaseFaces[(id >> (2 * depth)) - 8];
    for (int d = depth - 1; d >= 0; --d) {
        tri = tri.subdivide()[(id >> (2 * d)) & 3];
    }
    return tri;
}

TrixelId name_to_id(std::string_view name) {
    if (name.size() < 2 || name.size() > static_cast<std::size_t>(kMaxHtmDepth + 2)) {
        throw ParseError("trixel name must match [NS][0-3]{1,21}");
    }
    std::uint64_t id;
    if (name[0] == 'N') {
        id = 12;
    } else if (name[0] == 'S') {
        id = 8;
    } else {
        throw ParseError("trixel name must start with N or S");
    }
    if (name[1] < '0' || name[1] > '3') {
        throw ParseError("base face digit must be 0..3");
    }
    id += static_cast<std::uint64_t>(name[1] - '0');
    for (std::size_t i = 2; i < name.size(); ++i) {
        if (name[i] < '0' || name[i] > '3') {
            throw ParseError("subdivision digits must be 0..3");
        }
        id = id * 4 + static_cast<std::uint64_t>(name[i] - '0');
    }
    return TrixelId(id);
}

std::string id_to_name(TrixelId t) {
    std::uint64_t id = t.value();
    int depth = t.depth();
    std::uint64_t face = (id >> (2 * depth)) - 8;
    std::string name;
    name += (face < 4) ? 'S' : 'N';
    name += static_cast<char>('0' + (face & 3));
    for (int d = depth - 1; d >= 0; --d) {
        name += static_cast<char>('0' + ((id >> (2 * d)) & 3));
    }
    return name;
}

std::pair<std::uint64_t, std::uint64_t> id_to_index_range(TrixelId t, int index_depth) {
    if (index_depth > kMaxHtmDepth) {
        throw DepthLimitError("index depth beyond 20");
    }
    int shift = index_depth - t.depth();
    if (shift < 0) {
        throw DepthLimitError("trixel deeper than index depth");
    }
    std::uint64_t lo = t.value() << (2 * shift);
    std::uint64_t hi = ((t.value() + 1) << (2 * shift)) - 1;
    return {lo, hi};
}

std::uint64_t first_id_at_depth(int depth) {
    return std::uint64_t{8} << (2 * depth);
}

std::uint64_t last_id_at_depth(int depth) {
    return (std::uint64_t{16} << (2 * depth)) - 1;
}

double max_edge_arcmin_at_depth(int depth, int beam_width) {
    if (depth < 0 || depth > kMaxHtmDepth) {
        throw DepthLimitError("depth out of [0, 20]");
    }
    std::vector<Trixel> beam;
    for (const auto& [id, tri] : base_trixels()) {
        (void)id;
        beam.push_back(tri);
    }
    for (int d = 0; d < depth; ++d) {
        std::vector<Trixel> next;
        next.reserve(beam.size() * 4);
        for (const auto& tri : beam) {
            for (const auto& kid : tri.subdivide()) {
                next.push_back(kid);
            }
        }
        if (next.size() > static_cast<std::size_t>(beam_width)) {
            std::nth_element(next.begin(), next.begin() + beam_width, next.end(),
                             [](const Trixel& a, const Trixel& b) {
                                 return a.max_edge_arcmin() > b.max_edge_arcmin();
                             });
            next.resize(static_cast<std::size_t>(beam_width));
        }
        beam = std::move(next);
    }
    double best = 0.0;
    for (const auto& tri : beam) {
        best = std::max(best, tri.max_edge_arcmin());
    }
    return best;
}

}  // namespace skycat
