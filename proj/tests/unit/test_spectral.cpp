#include "support.hpp"

#include "anisomhd/errors.hpp"
#include "anisomhd/fft.hpp"
#include "anisomhd/spectral.hpp"

#include <doctest.h>

#include <thread>

using namespace anisomhd;
using namespace testsupport;

TEST_SUITE("spectral") {

TEST_CASE("grid rejects odd, tiny and non-positive boxes") {
    CHECK_THROWS_AS(Grid(15, 16, 16), ConfigError);
    CHECK_THROWS_AS(Grid(2, 16, 16), ConfigError);
    CHECK_THROWS_AS(Grid({16, 16, 16}, {1.0, -1.0, 1.0}), ConfigError);
    const Grid g(8, 8, 8);
    CHECK(g.index_of_mode({-1, 0, 3}) == g.index(7, 0, 3));
    CHECK_THROWS_AS(g.index_of_mode({4, 0, 0}), ConfigError);
    CHECK(g.index_of_mode({-4, 0, 0}) == g.index(4, 0, 0));
}

TEST_CASE("2/3 rule keeps 3|m| < n") {
    const Grid g(48, 48, 48);
    CHECK(g.retained(0, g.storage(0, 15)));
    CHECK_FALSE(g.retained(0, g.storage(0, 16)));
    CHECK_FALSE(g.retained(0, g.storage(0, -16)));
}

TEST_CASE("single cosine transforms to its samples") {
    const Grid g({8, 6, 10}, {2.0, 3.0, 5.0});
    ScalarField f(g);
    f.set_mode_pair({1, -2, 3}, Complex(0.5, 0.25));
    const PhysicalField p = to_physical(f);
    double worst = 0.0;
    for (int i0 = 0; i0 < g.n[0]; ++i0)
        for (int i1 = 0; i1 < g.n[1]; ++i1)
            for (int i2 = 0; i2 < g.n[2]; ++i2) {
                const double x[3] = {g.spacing(0) * i0, g.spacing(1) * i1, g.spacing(2) * i2};
                const double th = 2 * std::numbers::pi * (1 * x[0] / g.length[0] - 2 * x[1] / g.length[1] +
                                                          3 * x[2] / g.length[2]);
                const double exact = 2 * (0.5 * std::cos(th) - 0.25 * std::sin(th));
                worst = std::max(worst, std::abs(p.values[g.index(i0, i1, i2)] - exact));
            }
    CHECK(worst < 1e-14);
    const ScalarField back = to_spectral(p, false);
    CHECK(max_diff(back, f) < 1e-15);
}

TEST_CASE("spectral derivative of sin(2x) cos(3y) e^{...}") {
    const Grid g(16, 16, 16);
    // f = sin(2 x0) cos(3 x1): analytic d0 f = 2 cos(2 x0) cos(3 x1)
    PhysicalField p(g), dexact(g), d2exact(g);
    for (int i0 = 0; i0 < 16; ++i0)
        for (int i1 = 0; i1 < 16; ++i1)
            for (int i2 = 0; i2 < 16; ++i2) {
                const double x0 = g.spacing(0) * i0, x1 = g.spacing(1) * i1;
                p.values[g.index(i0, i1, i2)] = std::sin(2 * x0) * std::cos(3 * x1);
                dexact.values[g.index(i0, i1, i2)] = 2 * std::cos(2 * x0) * std::cos(3 * x1);
                d2exact.values[g.index(i0, i1, i2)] = -9 * std::sin(2 * x0) * std::cos(3 * x1);
            }
    const ScalarField f = to_spectral(p, false);
    const PhysicalField d = to_physical(derivative(f, 0));
    const PhysicalField dd = to_physical(derivative(f, 1, 2));
    double e1 = 0.0, e2 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        e1 = std::max(e1, std::abs(d.values[i] - dexact.values[i]));
        e2 = std::max(e2, std::abs(dd.values[i] - d2exact.values[i]));
    }
    CHECK(e1 < 1e-12);
    CHECK(e2 < 1e-12);
}

TEST_CASE("odd derivatives annihilate the Nyquist plane") {
    const Grid g(8, 8, 8);
    ScalarField f(g);
    f.at_mode({-4, 1, 0}) = 1.0;
    CHECK(max_abs(derivative(f, 0)) == 0.0);
    CHECK(max_abs(derivative(f, 0, 2)) > 0.0);
}

TEST_CASE("Parseval: coefficient norm equals the sampled norm") {
    const Grid g({12, 8, 10}, {1.0, 2.0, 7.0});
    const ScalarField f = random_field(g, 3, 42, false);
    const double spectral = l2_norm_sq(f);
    const double sampled = l2_norm_sq(to_physical(f));
    CHECK(rel_diff(spectral, sampled) < 1e-13);
    CHECK(hermitian_defect(f) == 0.0);
}

TEST_CASE("product-to-sum identity through the dealiased product") {
    const Grid g(16, 16, 16);
    ScalarField a(g), b(g);
    a.set_mode_pair({1, 0, 0}, 0.5);  // cos x0
    b.set_mode_pair({0, 2, 0}, 0.5);  // cos 2x1
    const ScalarField ab = dealiased_product(a, b);
    // cos x0 cos 2x1 = (cos(x0 + 2x1) + cos(x0 - 2x1)) / 2
    CHECK(std::abs(ab.at_mode({1, 2, 0}) - Complex(0.25)) < 1e-15);
    CHECK(std::abs(ab.at_mode({1, -2, 0}) - Complex(0.25)) < 1e-15);
    CHECK(std::abs(ab.at_mode({-1, 2, 0}) - Complex(0.25)) < 1e-15);
    double rest = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) rest += std::norm(ab[i]);
    CHECK(std::abs(rest - 4 * 0.0625) < 1e-15);
}

TEST_CASE("dealiasing removes exactly the modes outside the retained set") {
    const Grid g(12, 12, 12);
    ScalarField a(g), b(g);
    a.set_mode_pair({3, 0, 0}, 0.5);
    b.set_mode_pair({2, 0, 0}, 0.5);
    const ScalarField ab = dealiased_product(a, b);
    CHECK(std::abs(ab.at_mode({1, 0, 0}) - Complex(0.25)) < 1e-15);
    CHECK(std::abs(ab.at_mode({5, 0, 0})) == 0.0);  // 3*5 >= 12
}

TEST_CASE("Leray projection is idempotent, solenoidal and keeps solenoidal fields") {
    const Grid g(16, 16, 16);
    VectorField v(g);
    for (int a = 0; a < 3; ++a) v[a] = random_field(g, 5, 7 + a);
    const VectorField p = leray_project(v);
    CHECK(max_relative_divergence(p) < 1e-15);
    CHECK(max_diff(leray_project(p), p) < 1e-15);
    const VectorField s = random_solenoidal(g, 5, 9);
    CHECK(max_diff(leray_project(s), s) < 1e-12 * max_abs(s));
    // the removed part is a gradient: orthogonal to the projected part
    VectorField grad = v;
    for (int a = 0; a < 3; ++a) grad[a] -= p[a];
    double cross = 0.0;
    for (int a = 0; a < 3; ++a) cross += inner_mean(grad[a], p[a]);
    CHECK(std::abs(cross) < 1e-13 * l2_norm_sq(v));
}

TEST_CASE("transform round trip is the identity on Hermitian data") {
    const Grid g(8, 10, 12);
    const ScalarField f = random_field(g, 3, 5, false);
    CHECK(max_diff(transform_roundtrip(f), f) < 1e-15);
}

TEST_CASE("resample to a finer grid preserves point values") {
    const Grid coarse(8, 8, 8), fine(16, 16, 16);
    const ScalarField f = random_field(coarse, 3, 11, false);
    const ScalarField r = resample(f, fine);
    CHECK(rel_diff(l2_norm_sq(f), l2_norm_sq(r)) < 1e-14);
    const PhysicalField pc = to_physical(f), pf = to_physical(r);
    double worst = 0.0;
    for (int i0 = 0; i0 < 8; ++i0)
        for (int i1 = 0; i1 < 8; ++i1)
            for (int i2 = 0; i2 < 8; ++i2) {
                worst = std::max(worst, std::abs(pc.values[coarse.index(i0, i1, i2)] -
                                                 pf.values[fine.index(2 * i0, 2 * i1, 2 * i2)]));
            }
    CHECK(worst < 1e-13);
}

TEST_CASE("engines on separate threads agree") {
    const Grid g(16, 16, 16);
    const ScalarField f = random_field(g, 5, 3, false);
    const PhysicalField here = to_physical(f);
    PhysicalField there;
    std::thread([&] { there = to_physical(f); }).join();
    CHECK(here.values == there.values);
}

}
