#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "skycat/sphere.hpp"

using namespace skycat;

namespace {

std::mt19937_64 rng(20010104);

EquatorialCoord random_coord() {
    // Area-correct: uniform in z, not in dec.
    std::uniform_real_distribution<double> uz(-1.0, 1.0);
    std::uniform_real_distribution<double> ura(0.0, 360.0);
    return {ura(rng), std::asin(uz(rng)) * kDegPerRad};
}

UnitVector random_vec() { return eq_to_vec(random_coord()); }

}  // namespace

TEST_CASE("eq_to_vec axis cases") {
    auto v = eq_to_vec(0, 0);
    CHECK(v.x == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(v.y == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(v.z == doctest::Approx(0.0).epsilon(1e-15));

    v = eq_to_vec(90, 0);
    CHECK(std::abs(v.x) < 1e-15);
    CHECK(v.y == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(v.z) < 1e-15);
}

TEST_CASE("eq_to_vec reference point") {
    auto v = eq_to_vec(185, -0.5);
    CHECK(v.x == doctest::Approx(-0.99615676605015339051).epsilon(1e-14));
    CHECK(v.y == doctest::Approx(-0.087152424124034467311).epsilon(1e-14));
    CHECK(v.z == doctest::Approx(-0.0087265354983739349649).epsilon(1e-14));
    CHECK(dot(v, v) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eq_to_vec rejects out-of-range dec") {
    CHECK_THROWS_AS(eq_to_vec(0, 90.0001), std::domain_error);
    CHECK_THROWS_AS(eq_to_vec(0, -91), std::domain_error);
    CHECK_NOTHROW(eq_to_vec(0, 90));
    CHECK_NOTHROW(eq_to_vec(0, -90));
}

TEST_CASE("normalize_ra wraps into [0, 360)") {
    CHECK(normalize_ra(0) == 0.0);
    CHECK(normalize_ra(360) == 0.0);
    CHECK(normalize_ra(-90) == 270.0);
    CHECK(normalize_ra(725) == doctest::Approx(5.0));
    CHECK(normalize_ra(-720) == 0.0);
}

TEST_CASE("vec_to_eq axis and pole conventions") {
    auto c = vec_to_eq({0, 0, 1});
    CHECK(c.ra == 0.0);
    CHECK(c.dec == doctest::Approx(90.0));

    c = vec_to_eq({0, 0, -1});
    CHECK(c.ra == 0.0);
    CHECK(c.dec == doctest::Approx(-90.0));

    c = vec_to_eq({1, 0, 0});
    CHECK(c.ra == 0.0);
    CHECK(c.dec == doctest::Approx(0.0));
}

TEST_CASE("vec_to_eq inverts the reference point") {
    auto c = vec_to_eq(eq_to_vec(185, -0.5));
    CHECK(c.ra == doctest::Approx(185.0).epsilon(1e-12));
    CHECK(c.dec == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("vec_to_eq rejects non-unit input") {
    CHECK_THROWS_AS(vec_to_eq({0.5, 0, 0}), std::domain_error);
    CHECK_THROWS_AS(vec_to_eq({1.1, 0, 0}), std::domain_error);
}

TEST_CASE("arc_angle identity, quarter circle, reference pair") {
    auto a = eq_to_vec(185, -0.5);
    CHECK(arc_angle_arcmin(a, a) == 0.0);

    CHECK(arc_angle_arcmin(eq_to_vec(0, 0), eq_to_vec(90, 0)) ==
          doctest::Approx(5400.0).epsilon(1e-12));

    auto b = eq_to_vec(185.01, -0.5);
    CHECK(arc_angle_arcmin(a, b) ==
          doctest::Approx(0.59997715383789910602).epsilon(1e-12));
}

TEST_CASE("arc_angle handles antipodes without NaN") {
    double d = arc_angle_arcmin({1, 0, 0}, {-1, 0, 0});
    CHECK(d == doctest::Approx(kHalfTurnArcmin).epsilon(1e-12));
}

TEST_CASE("round trip over random coordinates") {
    for (int i = 0; i < 100000; ++i) {
        auto c = random_coord();
        if (std::abs(c.dec) > 89.9) continue;
        auto back = vec_to_eq(eq_to_vec(c));
        CHECK(std::abs(back.ra - c.ra) < 1e-9);
        CHECK(std::abs(back.dec - c.dec) < 1e-9);
    }
}

TEST_CASE("triangle inequality on random triples") {
    for (int i = 0; i < 2000; ++i) {
        auto a = random_vec(), b = random_vec(), c = random_vec();
        double ab = arc_angle_arcmin(a, b);
        double bc = arc_angle_arcmin(b, c);
        double ac = arc_angle_arcmin(a, c);
        CHECK(ac <= ab + bc + 1e-9);
    }
}

TEST_CASE("chord formula matches acos(dot) away from the endpoints") {
    for (int i = 0; i < 5000; ++i) {
        auto a = random_vec(), b = random_vec();
        double chord = arc_angle_arcmin(a, b);
        if (chord < 60.0) continue;  // below 1 degree acos itself degrades
        double ref = std::acos(std::clamp(dot(a, b), -1.0, 1.0)) * kArcminPerRad;
        CHECK(std::abs(chord - ref) <= 1e-9 * ref);
    }
}
