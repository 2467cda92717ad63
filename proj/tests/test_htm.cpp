#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "skycat/errors.hpp"
#include "skycat/htm.hpp"

using namespace skycat;

namespace {

std::mt19937_64 rng(19277);

UnitVector random_vec() {
    std::uniform_real_distribution<double> uz(-1.0, 1.0);
    std::uniform_real_distribution<double> ut(0.0, 2.0 * kPi);
    double z = uz(rng);
    double t = ut(rng);
    double r = std::sqrt(1.0 - z * z);
    return {r * std::cos(t), r * std::sin(t), z};
}

TrixelId random_id(int depth) {
    std::uniform_int_distribution<std::uint64_t> face(8, 15);
    std::uniform_int_distribution<std::uint64_t> digit(0, 3);
    std::uint64_t id = face(rng);
    for (int d = 0; d < depth; ++d) id = id * 4 + digit(rng);
    return TrixelId(id);
}

}  // namespace

TEST_CASE("TrixelId validation and accessors") {
    CHECK(TrixelId().value() == 8);
    CHECK(TrixelId(8).depth() == 0);
    CHECK(TrixelId(15).depth() == 0);
    CHECK(TrixelId(32).depth() == 1);
    CHECK(TrixelId(35).parent() == TrixelId(8));

    CHECK_THROWS_AS(TrixelId(0), EncodingError);
    CHECK_THROWS_AS(TrixelId(7), EncodingError);
    CHECK_THROWS_AS(TrixelId(16), EncodingError);  // odd bit length
    CHECK_THROWS_AS(TrixelId(std::uint64_t{8} << 42), EncodingError);  // depth 21
    CHECK_THROWS_AS(TrixelId(8).parent(), EncodingError);

    // Depth 20 is the deepest valid id.
    CHECK(TrixelId(std::uint64_t{8} << 40).depth() == 20);
}

TEST_CASE("base trixels: ids, orientation, areas") {
    const auto& bases = base_trixels();
    CHECK(bases.size() == 8);
    double total = 0.0;
    for (int i = 0; i < 8; ++i) {
        CHECK(bases[i].first.value() == static_cast<std::uint64_t>(8 + i));
        const Trixel& t = bases[i].second;
        CHECK(dot(cross(t.v0, t.v1), t.v2) > 0.0);
        double a = t.solid_angle_sr();
        CHECK(std::abs(a - kPi / 2.0) < 1e-12);  // octant, Girard
        total += a;
    }
    CHECK(std::abs(total - 4.0 * kPi) < 1e-12);
}

TEST_CASE("children ids and area partition") {
    auto kids = children(TrixelId(8));
    CHECK(kids[0].value() == 32);
    CHECK(kids[1].value() == 33);
    CHECK(kids[2].value() == 34);
    CHECK(kids[3].value() == 35);

    for (int trial = 0; trial < 200; ++trial) {
        TrixelId t = random_id(rng() % 8);
        Trixel tri = trixel_vertices(t);
        double sum = 0.0;
        for (const auto& kid : tri.subdivide()) sum += kid.solid_angle_sr();
        CHECK(std::abs(sum - tri.solid_angle_sr()) < 1e-12);
    }

    TrixelId deep(first_id_at_depth(20));
    CHECK_THROWS_AS(children(deep), DepthLimitError);
}

TEST_CASE("descendant ids of a trixel form one contiguous range") {
    // Points inside a depth-2 trixel get ids inside its arithmetic range at
    // any deeper depth.
    TrixelId t = name_to_id("N122");
    auto [lo, hi] = id_to_index_range(t, 6);
    Trixel tri = trixel_vertices(t);
    int found = 0;
    while (found < 2000) {
        UnitVector p = random_vec();
        if (!tri.contains_strict(p)) continue;
        ++found;
        std::uint64_t id = lookup_id(p, 6).value();
        CHECK(id >= lo);
        CHECK(id <= hi);
    }
}

TEST_CASE("lookup of north pole picks first containing N trixel") {
    CHECK(lookup_id({0, 0, 1}, 0).value() == 12);
}

TEST_CASE("centroid of N0 at depth 5 follows the middle-child path") {
    const Trixel n0 = base_trixels()[4].second;
    TrixelId got = lookup_id(n0.centroid(), 5);
    // Centroid lands in the middle child (digit 3) at every level.
    CHECK(got.value() == ((std::uint64_t{12} << 10) | 0x3FF));
    CHECK(got.value() == 13311);
    CHECK((got.value() >> 10) == 12);  // prefix property
}

TEST_CASE("prefix nesting over random points") {
    for (int i = 0; i < 20000; ++i) {
        UnitVector v = random_vec();
        TrixelId deep = lookup_id(v, 8);
        std::uint64_t id = deep.value();
        for (int d = 7; d >= 0; --d) {
            id >>= 2;
            CHECK(lookup_id(v, d).value() == id);
        }
    }
}

TEST_CASE("strict interiors are disjoint across one depth") {
    for (int i = 0; i < 20000; ++i) {
        UnitVector v = random_vec();
        int hits = 0;
        for (const auto& [id, tri] : base_trixels()) {
            (void)id;
            if (tri.contains_strict(v)) ++hits;
        }
        // A random point is interior to exactly one base trixel (prob. of
        // hitting an edge plane exactly is zero).
        CHECK(hits == 1);
    }
}

TEST_CASE("trixel_vertices replays the path") {
    const Trixel s0 = trixel_vertices(TrixelId(8));
    const Trixel& base = base_trixels()[0].second;
    CHECK(s0.v0.x == base.v0.x);
    CHECK(s0.v1.z == base.v1.z);
    CHECK(s0.v2.y == base.v2.y);

    for (int trial = 0; trial < 10000; ++trial) {
        int depth = static_cast<int>(rng() % 9);
        TrixelId t = random_id(depth);
        Trixel tri = trixel_vertices(t);
        CHECK(lookup_id(tri.centroid(), depth) == t);
        CHECK(tri.contains(tri.v0));
        CHECK(tri.contains(tri.v1));
        CHECK(tri.contains(tri.v2));
        CHECK(tri.contains(tri.centroid()));
        CHECK(dot(cross(tri.v0, tri.v1), tri.v2) > 0.0);
    }
}

TEST_CASE("name round trip and fixed points") {
    CHECK(name_to_id("S0").value() == 8);
    CHECK(name_to_id("N2").value() == 14);
    CHECK(name_to_id("N32").value() == 62);
    CHECK(id_to_name(TrixelId(62)) == "N32");
    CHECK(id_to_name(TrixelId(8)) == "S0");

    CHECK_THROWS_AS(name_to_id(""), ParseError);
    CHECK_THROWS_AS(name_to_id("X0"), ParseError);
    CHECK_THROWS_AS(name_to_id("N"), ParseError);
    CHECK_THROWS_AS(name_to_id("N4"), ParseError);
    CHECK_THROWS_AS(name_to_id("N15"), ParseError);
    CHECK_THROWS_AS(name_to_id("N3222222222222222222222"), ParseError);

    for (int trial = 0; trial < 2000; ++trial) {
        TrixelId t = random_id(static_cast<int>(rng() % 21));
        CHECK(name_to_id(id_to_name(t)) == t);
    }
}

TEST_CASE("id_to_index_range arithmetic") {
    CHECK(id_to_index_range(TrixelId(8), 2) ==
          std::pair<std::uint64_t, std::uint64_t>{128, 143});
    CHECK(id_to_index_range(TrixelId(62), 1) ==
          std::pair<std::uint64_t, std::uint64_t>{62, 62});

    // Children partition the parent's range.
    TrixelId t = random_id(3);
    auto [plo, phi] = id_to_index_range(t, 9);
    std::uint64_t expect = plo;
    for (TrixelId kid : children(t)) {
        auto [lo, hi] = id_to_index_range(kid, 9);
        CHECK(lo == expect);
        expect = hi + 1;
    }
    CHECK(expect == phi + 1);

    CHECK_THROWS_AS(id_to_index_range(TrixelId(32), 0), DepthLimitError);
    CHECK_THROWS_AS(id_to_index_range(TrixelId(8), 21), DepthLimitError);
}

TEST_CASE("depth id bounds") {
    CHECK(first_id_at_depth(0) == 8);
    CHECK(last_id_at_depth(0) == 15);
    CHECK(first_id_at_depth(2) == 128);
    CHECK(last_id_at_depth(2) == 255);
}

TEST_CASE("max edge length shrinks monotonically; depth-8 value pinned") {
    double prev = max_edge_arcmin_at_depth(0);
    CHECK(prev == doctest::Approx(5400.0).epsilon(1e-12));
    for (int d = 1; d <= 8; ++d) {
        double e = max_edge_arcmin_at_depth(d);
        CHECK(e < prev);
        prev = e;
    }
    // Beam search agrees with exhaustive enumeration at depth 8.
    CHECK(max_edge_arcmin_at_depth(8) ==
          doctest::Approx(32.89308237331983).epsilon(1e-12));
}
