#include "fraccont/illposed.hpp"

#include "fraccont/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace fraccont;
using namespace fraccont::illposed;

TEST_CASE("half-line Abel witness closed forms") {
    const double pi = std::numbers::pi;
    auto w4 = abel_halfline_instability(4);
    CHECK(w4.data_norm * w4.data_norm == doctest::Approx(1.0 / (4.0 * pi)).epsilon(1e-14));
    CHECK(w4.solution_norm_lower * w4.solution_norm_lower ==
          doctest::Approx(4.0 / pi).epsilon(1e-14));

    auto w2 = abel_halfline_instability(2);
    CHECK(w2.data_norm * w2.data_norm == doctest::Approx(1.0 / (2.0 * pi)).epsilon(1e-14));
    CHECK(w2.solution_norm_lower * w2.solution_norm_lower ==
          doctest::Approx(2.0 / pi).epsilon(1e-14));

    CHECK_THROWS_AS((void)abel_halfline_instability(1), ValidationError);
}

TEST_CASE("half-line family is a Definition-(b) witness") {
    auto ws = abel_halfline_family(2, 12);
    for (std::size_t k = 0; k + 1 < ws.size(); ++k) {
        CHECK(ws[k + 1].data_norm < ws[k].data_norm);
        CHECK(ws[k + 1].solution_norm_lower > ws[k].solution_norm_lower);
    }
    for (auto& w : ws) {
        REQUIRE(w.solution_norm_exact.has_value());
        CHECK(*w.solution_norm_exact >= w.solution_norm_lower);
    }
}

TEST_CASE("exponential multiplier witness") {
    auto w5 = exp_multiplier_instability(5, 1.0, 0.5);
    CHECK(w5.data_norm == doctest::Approx(0.2));
    CHECK(w5.combined_distance == doctest::Approx(0.4));

    auto w3 = exp_multiplier_instability(3, 1.0, 0.5);
    CHECK(w3.solution_norm_lower * w3.solution_norm_lower ==
          doctest::Approx(std::exp(6.0) / 3.0).epsilon(1e-12));

    auto ws = exp_multiplier_family(2, 20, 1.0, 0.5);
    for (std::size_t k = 0; k + 1 < ws.size(); ++k) {
        CHECK(ws[k + 1].data_norm < ws[k].data_norm);
        CHECK(ws[k + 1].solution_norm_lower > ws[k].solution_norm_lower);
    }
    CHECK_THROWS_AS((void)exp_multiplier_instability(1, 1.0, 0.5), ValidationError);
    CHECK_THROWS_AS((void)exp_multiplier_instability(4, -1.0, 0.5), ValidationError);
}

TEST_CASE("overflow safety up to n = 50, a = 2") {
    for (int n = 2; n <= 50; ++n) {
        auto w = abel_halfline_instability(n);
        CHECK(std::isfinite(w.data_norm));
        CHECK(std::isfinite(w.solution_norm_lower));
        REQUIRE(w.solution_norm_exact.has_value());
        CHECK(std::isfinite(*w.solution_norm_exact));
        CHECK(*w.solution_norm_exact >= w.solution_norm_lower);

        auto e = exp_multiplier_instability(n, 2.0, 0.5);
        CHECK(std::isfinite(e.solution_norm_lower));
        CHECK(std::isfinite(e.combined_distance));
    }
}
