#include "support.hpp"

#include "anisomhd/errors.hpp"
#include "anisomhd/waves.hpp"

#include <doctest.h>

using namespace anisomhd;
using namespace testsupport;

namespace {

/// exp(tM) by scaling and squaring of a 30-term Taylor series.
Mat2 taylor_expm(const Mat2& m, double t) {
    int squarings = 0;
    double norm = 0.0;
    for (auto& r : m)
        for (auto& x : r) norm = std::max(norm, std::abs(x) * t);
    while (norm > 0.5) {
        norm /= 2;
        ++squarings;
    }
    const double h = t / std::pow(2.0, squarings);
    Mat2 result{{{1.0, 0.0}, {0.0, 1.0}}};
    Mat2 term = result;
    for (int n = 1; n <= 30; ++n) {
        Mat2 next{};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                next[i][j] = (term[i][0] * m[0][j] + term[i][1] * m[1][j]) * (h / n);
        term = next;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) result[i][j] += term[i][j];
    }
    for (int s = 0; s < squarings; ++s) {
        Mat2 sq{};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) sq[i][j] = result[i][0] * result[0][j] + result[i][1] * result[1][j];
        result = sq;
    }
    return result;
}

}  // namespace

TEST_SUITE("waves") {

TEST_CASE("stable quadratic roots avoid cancellation") {
    const auto r = stable_quadratic_roots(1e8, 1.0);
    CHECK(rel_diff(r[0].real() * r[1].real(), 1.0) < 1e-14);
    CHECK(rel_diff(r[0].real(), -1e-8) < 1e-12);
    CHECK(rel_diff(r[1].real(), -1e8) < 1e-12);
    const auto c = stable_quadratic_roots(0.0, 4.0);
    CHECK(std::abs(c[0].imag()) == doctest::Approx(2.0));
    CHECK(c[0].real() == 0.0);
}

TEST_CASE("dispersion roots satisfy the characteristic polynomial") {
    for (auto k : {std::array<double, 3>{1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0, 1, 1}, {3, 2, 5}, {0.1, 7, 0}}) {
        const WaveMode w = dispersion_roots(k);
        const double kh = k[0] * k[0] + k[1] * k[1];
        CHECK(w.kh_sq == kh);
        for (Complex l : {w.plus, w.minus}) {
            const Complex p = l * l + (k[0] * k[0] + kh) * l + (k[0] * k[0] * kh + k[1] * k[1]);
            CHECK(std::abs(p) < 1e-12 * (1 + std::norm(l)));
        }
        CHECK(w.plus.real() >= w.minus.real());
        const WaveMode b = block_roots(k, ModelConfig{});
        CHECK(std::abs(b.plus - w.plus) < 1e-12 * (1 + std::abs(w.plus)));
        CHECK(std::abs(b.minus - w.minus) < 1e-12 * (1 + std::abs(w.minus)));
    }
}

TEST_CASE("x2-regularisation: Re lambda = -1/2 at k = (0, 1, 0)") {
    const WaveMode w = dispersion_roots({0, 1, 0});
    CHECK(std::abs(w.plus.real() + 0.5) < 1e-15);
    CHECK(std::abs(w.minus.real() + 0.5) < 1e-15);
    CHECK(std::abs(std::abs(w.plus.imag()) - std::sqrt(3.0) / 2) < 1e-15);
}

TEST_CASE("k = (0, 0, 1) is a neutral mode") {
    const WaveMode w = dispersion_roots({0, 0, 1});
    CHECK(std::abs(w.plus) == 0.0);
    CHECK(std::abs(w.minus) == 0.0);
}

TEST_CASE("closed-form 2x2 exponential matches the Taylor oracle") {
    const ModelConfig c;
    for (auto k : {std::array<double, 3>{1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0, 1, 1}, {2, 3, 1}, {0, 0, 1}}) {
        const Mat2 m = linear_block(k, c);
        for (double t : {0.0, 0.3, 1.0, 2.5}) {
            const Mat2 a = expm(m, t);
            const Mat2 b = taylor_expm(m, t);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) CHECK(std::abs(a[i][j] - b[i][j]) < 1e-13);
        }
    }
    // degenerate split: repeated eigenvalue with a nilpotent part
    const Mat2 jordan{{{Complex(-1.0), Complex(1.0)}, {Complex(0.0), Complex(-1.0)}}};
    const Mat2 a = expm(jordan, 0.7), b = taylor_expm(jordan, 0.7);
    CHECK(std::abs(a[0][1] - b[0][1]) < 1e-14);
}

TEST_CASE("linear block needs the perturbation variant") {
    ModelConfig c;
    c.variant = Variant::navier_stokes_only;
    CHECK_THROWS_AS(linear_block({1, 0, 0}, c), ConfigError);
}

TEST_CASE("decay map ordering and schema") {
    const auto rows = decay_map({0, 0, 0}, {1, 2, 1}, ModelConfig{});
    REQUIRE(rows.size() == 12);
    CHECK(rows[0].k == std::array<int, 3>{0, 0, 0});
    CHECK(rows[1].k == std::array<int, 3>{0, 0, 1});
    CHECK(rows[2].k == std::array<int, 3>{0, 1, 0});
    CHECK(rows.back().k == std::array<int, 3>{1, 2, 1});
    CHECK(rows[2].re_plus == doctest::Approx(-0.5));
    CHECK(decay_csv_header() == "k1,k2,k3,re_lambda_plus,im_lambda_plus,re_lambda_minus,im_lambda_minus");
    CHECK(to_csv_row(rows[2]).rfind("0,1,0,", 0) == 0);
}

TEST_CASE("simulator linear validation helper") {
    const auto v = validate_simulator_linear({{1, 0, 0}, {0, 1, 1}}, 0.2, 1e-3);
    CHECK(v.per_mode_error.size() == 2);
    CHECK(v.max_relative_error < 1e-8);
}

}
