#include "fraccont/grid.hpp"

#include "fraccont/errors.hpp"
#include "fraccont/mlf.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace fraccont;

namespace {
const TimeGrid kGrid = TimeGrid::uniform(1.0, 512);
}

TEST_CASE("fractional integral on powers") {
    auto one = GridFn::constant(kGrid, 1.0);
    auto J1 = frac_integral(one, 0.5);
    // J^alpha 1 = t^alpha / Gamma(alpha+1)
    CHECK(J1[kGrid.cells()] == doctest::Approx(2.0 / std::sqrt(M_PI)).epsilon(1e-6));

    auto id = GridFn::sample(kGrid, [](double t) { return t; });
    auto Jt = frac_integral(id, 0.5);
    CHECK(Jt[kGrid.cells()] == doctest::Approx(1.0 / std::tgamma(2.5)).epsilon(1e-6));

    // semigroup J^{1/2} J^{1/2} = J^1
    auto JJ = frac_integral(J1, 0.5);
    CHECK(JJ[kGrid.cells()] == doctest::Approx(1.0).epsilon(1e-4));

    CHECK_THROWS_AS((void)frac_integral(one, 0.0), ValidationError);
}

TEST_CASE("Riemann-Liouville derivative") {
    auto one = GridFn::constant(kGrid, 1.0);
    auto D = rl_derivative(one, 0.5);
    // constants map to c t^-alpha / Gamma(1-alpha), exactly by construction
    CHECK(D[kGrid.cells()] == doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-12));
    CHECK(D[128] == doctest::Approx(std::pow(0.25, -0.5) / std::tgamma(0.5)).epsilon(1e-12));

    // inversion D^alpha J^alpha f = f for smooth f
    auto f = GridFn::sample(kGrid, [](double t) { return std::sin(3.0 * t); });
    auto DJ = rl_derivative(frac_integral(f, 0.4), 0.4);
    double worst = 0.0;
    for (std::size_t i = 1; i < kGrid.size(); ++i)
        worst = std::max(worst, std::abs(DJ[i] - f[i]));
    CHECK(worst < 5e-3);

    // power rule D^0.3 t^0.7 = Gamma(1.7)/Gamma(1.4) t^0.4
    auto p = GridFn::sample(kGrid, [](double t) { return std::pow(t, 0.7); });
    auto Dp = rl_derivative(p, 0.3);
    CHECK(Dp[kGrid.cells()] ==
          doctest::Approx(std::tgamma(1.7) / std::tgamma(1.4)).epsilon(2e-3));

    CHECK_THROWS_AS((void)rl_derivative(one, 1.0), ValidationError);
    CHECK_THROWS_AS((void)rl_derivative(one, 0.0), ValidationError);
}

TEST_CASE("Caputo derivative") {
    auto c = GridFn::constant(kGrid, 3.7);
    auto Dc = caputo_derivative(c, 0.5);
    for (std::size_t i = 0; i < kGrid.size(); i += 64) CHECK(Dc[i] == doctest::Approx(0.0));

    // the relaxation profile is an eigenfunction: caputo E_{a,1}(-t^a) = -E_{a,1}(-t^a)
    auto ml = GridFn::sample(kGrid, [](double t) {
        return mlf::ml_eval(mlf::MLQuery(0.5, 1.0, -std::sqrt(t)));
    });
    auto Dml = caputo_derivative(ml, 0.5);
    CHECK(Dml[kGrid.cells()] == doctest::Approx(-oracles::ml_half_one(1.0)).epsilon(5e-4));

    // equals the RL derivative when f(0) = 0
    auto f0 = GridFn::sample(kGrid, [](double t) { return t * (1.0 - t); });
    auto a = caputo_derivative(f0, 0.3);
    auto b = rl_derivative(f0, 0.3);
    for (std::size_t i = 1; i < kGrid.size(); i += 37)
        CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));

    GridFn weighted = GridFn::sample(kGrid, [](double t) { return std::pow(t, -0.2); }, 0.2);
    CHECK_THROWS_AS((void)caputo_derivative(weighted, 0.5), ValidationError);
}

TEST_CASE("sequential derivatives") {
    // single factor reduces to the RL derivative
    auto f = GridFn::sample(kGrid, [](double t) { return t * t; });
    auto s1 = sequential_derivative(f, SequentialOrders({0.6}));
    auto d1 = rl_derivative(f, 0.6);
    for (std::size_t i = 1; i < kGrid.size(); i += 41)
        CHECK(s1[i] == doctest::Approx(d1[i]).epsilon(1e-12));

    // D^{1/2} D^{1/2} t = 1 away from the origin
    auto id = GridFn::sample(kGrid, [](double t) { return t; });
    auto s2 = sequential_derivative(id, SequentialOrders({0.5, 0.5}));
    for (std::size_t i = kGrid.size() / 4; i < kGrid.size(); i += 64)
        CHECK(s2[i] == doctest::Approx(1.0).epsilon(2e-2));

    auto z = GridFn::constant(kGrid, 0.0);
    auto sz = sequential_derivative(z, SequentialOrders({0.5, 0.5}));
    CHECK(grid_sup_norm(sz) == doctest::Approx(0.0));

    CHECK_THROWS_AS(SequentialOrders({0.5, 1.2}), ValidationError);
    CHECK_THROWS_AS(SequentialOrders({0.0}), ValidationError);

    // overflowing intermediates are reported as a composition blowup
    auto huge = GridFn::constant(kGrid, 1e308);
    CHECK_THROWS_AS((void)sequential_derivative(huge, SequentialOrders({0.9, 0.9})),
                    SolverError);
}

TEST_CASE("convergence under refinement for t^2") {
    // closed form J^0.5 t^2 = Gamma(3)/Gamma(3.5) t^2.5
    std::vector<double> errs;
    for (int n : {64, 128, 256, 512}) {
        auto g = TimeGrid::uniform(1.0, n);
        auto f = GridFn::sample(g, [](double t) { return t * t; });
        auto J = frac_integral(f, 0.5);
        double worst = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            worst = std::max(worst, std::abs(J[i] - std::pow(g.t(i), 2.5) * std::tgamma(3.0) /
                                                         std::tgamma(3.5)));
        errs.push_back(worst);
    }
    for (std::size_t k = 0; k + 1 < errs.size(); ++k) {
        double order = std::log2(errs[k] / errs[k + 1]);
        CHECK(order >= 1.0);
    }
}

TEST_CASE("J^h tends to the identity") {
    auto g = TimeGrid::uniform(1.0, 512);
    auto w = GridFn::sample(g, [](double t) { return std::sin(t); });
    double prev = 1e300;
    for (double h : {0.2, 0.1, 0.05, 0.025}) {
        double dist = grid_l2_distance(frac_integral(w, h), w);
        CHECK(dist < prev);
        prev = dist;
    }
    CHECK(prev < 0.05);
}

TEST_CASE("order-Lipschitz of the fractional integral") {
    auto g = TimeGrid::uniform(1.0, 256);
    auto w = GridFn::sample(g, [](double t) { return std::cos(2.0 * t); });
    double alpha = 0.5;
    auto base = frac_integral(w, alpha);
    double worst = 0.0;
    for (int m = 0; m <= 6; ++m) {
        double da = 0.2 * std::pow(2.0, -m);
        double ratio = grid_l2_distance(frac_integral(w, alpha + da), base) / da;
        worst = std::max(worst, ratio);
    }
    CHECK(worst < 5.0); // C(alpha0) ||w|| stays modest on [0,1]
}

TEST_CASE("weighted-space bound, equality case") {
    // v = t^-gamma: J^alpha ||v|| = t^{alpha-gamma} B(alpha, 1-gamma)/Gamma(alpha)
    double gamma = 0.25, alpha = 0.5;
    auto g = TimeGrid::uniform(1.0, 512);
    auto v = GridFn::sample(g, [gamma](double t) { return std::pow(t, -gamma); }, gamma);
    auto J = frac_integral(v, alpha);
    double cst = std::tgamma(alpha) * std::tgamma(1.0 - gamma) / std::tgamma(alpha + 1.0 - gamma) /
                 std::tgamma(alpha);
    for (std::size_t i = 1; i < g.size(); i += 32) {
        double bound = std::pow(g.t(i), alpha - gamma) * cst * cgamma_norm(v, gamma);
        CHECK(J[i] <= bound * (1.0 + 2e-3));
        CHECK(J[i] >= bound * (1.0 - 2e-3));
    }
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(TimeGrid({0.0, 0.5, 0.4, 1.0}), ValidationError);
    CHECK_THROWS_AS(TimeGrid({0.1, 0.5, 1.0}), ValidationError);
    CHECK_THROWS_AS(TimeGrid::uniform(-1.0, 16), ValidationError);
    auto a = GridFn::constant(TimeGrid::uniform(1.0, 8), 1.0);
    auto b = GridFn::constant(TimeGrid::uniform(1.0, 16), 1.0);
    CHECK_THROWS_AS((void)grid_l2_distance(a, b), ValidationError);
}
