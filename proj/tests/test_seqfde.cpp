#include "fraccont/seqfde.hpp"

#include "fraccont/errors.hpp"
#include "fraccont/numerics.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace fraccont;
using namespace fraccont::seqfde;

namespace {

SequentialProblem relaxation_problem(const TimeGrid& g, double mu, double alpha, double b1) {
    SequentialProblem sp;
    sp.orders = SequentialOrders({alpha});
    sp.pcoeffs = {[mu](double) { return mu; }};
    sp.f = GridFn::constant(g, 0.0);
    sp.bvals = {b1};
    sp.eta0 = 0.3;
    return sp;
}

} // namespace

TEST_CASE("reduction formulas for k = 1") {
    auto g = TimeGrid::uniform(1.0, 64);
    double mu = 2.5, alpha = 0.5;
    auto sp = relaxation_problem(g, mu, alpha, 1.0);
    auto ap = reduce_to_abel(sp, 0.75);

    CHECK(ap.alpha == doctest::Approx(alpha));
    CHECK(ap.gamma == doctest::Approx(0.75));
    // forcing g(t) = -mu t^{alpha-1} / Gamma(alpha)
    for (std::size_t i = 1; i < g.size(); i += 9)
        CHECK(ap.g[i] ==
              doctest::Approx(-mu * std::pow(g.t(i), alpha - 1.0) / std::tgamma(alpha)));
    // kernel is -mu psi / Gamma(alpha) in the solver's plus convention
    std::vector<double> out(1);
    ap.kernel.K(0.7, 0.3, alpha, ap.kernel.z, std::vector<double>{2.0}, out);
    CHECK(out[0] == doctest::Approx(-mu * 2.0 / std::tgamma(alpha)));
}

TEST_CASE("reduction with vanishing coefficients collapses to the b-terms") {
    auto g = TimeGrid::uniform(1.0, 64);
    SequentialProblem sp;
    sp.orders = SequentialOrders({0.6, 0.7});
    sp.pcoeffs = {[](double) { return 0.0; }, [](double) { return 0.0; }};
    sp.f = GridFn::sample(g, [](double t) { return std::cos(t); });
    sp.bvals = {1.0, 2.0};
    sp.eta0 = 0.5;
    auto ap = reduce_to_abel(sp, 0.6);
    std::vector<double> out(1);
    ap.kernel.K(0.9, 0.2, ap.alpha, ap.kernel.z, std::vector<double>{3.0}, out);
    CHECK(out[0] == doctest::Approx(0.0));
    for (std::size_t i = 1; i < g.size(); i += 11) CHECK(ap.g[i] == doctest::Approx(sp.f[i]));
}

TEST_CASE("k = 2 kernel matches a hand expansion") {
    auto g = TimeGrid::uniform(1.0, 32);
    SequentialProblem sp;
    sp.orders = SequentialOrders({0.5, 0.5});
    double c1 = 1.7, c2 = -0.4; // p_1, p_2
    sp.pcoeffs = {[c1](double t) { return c1 * (1.0 + t); }, [c2](double t) { return c2 + t * t; }};
    sp.f = GridFn::constant(g, 0.0);
    sp.bvals = {0.3, 0.2};
    sp.eta0 = 0.4;
    auto ap = reduce_to_abel(sp, 0.7);

    // sigma = (0.5, 1.0); the formula has p_2(t)(t-s)^{sigma_2 - eta_2} and
    // p_1(t)(t-s)^{sigma_2 - sigma_1 - eta_2}, all over Gamma(sigma_2), negated
    num::SplitMix64 rng(7);
    std::vector<double> out(1);
    for (int rep = 0; rep < 20; ++rep) {
        double t = 0.05 + 0.95 * rng.uniform();
        double s = rng.uniform() * t;
        double psi = rng.uniform(-2.0, 2.0);
        double hand = -((c2 + t * t) * std::pow(t - s, 0.5) +
                        c1 * (1.0 + t) * std::pow(t - s, 0.0)) *
                      psi / std::tgamma(1.0);
        ap.kernel.K(t, s, ap.alpha, ap.kernel.z, std::vector<double>{psi}, out);
        CHECK(out[0] == doctest::Approx(hand).epsilon(1e-12));
    }
}

TEST_CASE("solve: fractional relaxation hits the closed form") {
    auto g = TimeGrid::graded(1.0, 1024, 2.0);
    auto sp = relaxation_problem(g, 1.0, 0.5, 1.0);
    auto sol = solve_sequential(sp, default_gamma(sp), 1e-10);
    // y(t) = t^{-1/2} E_{1/2,1/2}(-t^{1/2}); at t = 1
    CHECK(sol.y[g.cells()] == doctest::Approx(oracles::ml_half_half(-1.0)).epsilon(2e-3));

    // residual of the reduced equation
    auto ap = reduce_to_abel(sp, default_gamma(sp));
    CHECK(abel::second_kind_residual(ap, sol.psi) <= 5e-10 * (1.0 + grid_sup_norm(sol.psi)));
}

TEST_CASE("solve: zero coefficient decouples into quadrature") {
    auto g = TimeGrid::uniform(1.0, 512);
    SequentialProblem sp;
    double alpha = 0.6;
    sp.orders = SequentialOrders({alpha});
    sp.pcoeffs = {[](double) { return 0.0; }};
    sp.f = GridFn::sample(g, [](double t) { return std::sin(2.0 * t); });
    sp.bvals = {1.0};
    sp.eta0 = 0.4;
    auto sol = solve_sequential(sp, default_gamma(sp), 1e-11);
    // y = b t^{alpha-1}/Gamma(alpha) + J^alpha f; psi carries the C_gamma
    // first-cell model, so agreement is to discretization accuracy
    auto J = frac_integral(sp.f, alpha);
    for (std::size_t i = 1; i < g.size(); i += 37) {
        double want = std::pow(g.t(i), alpha - 1.0) / std::tgamma(alpha) + J[i];
        CHECK(sol.y[i] == doctest::Approx(want).epsilon(2e-4));
    }
}

TEST_CASE("solve equals the direct path through the reduced problem") {
    auto g = TimeGrid::uniform(1.0, 128);
    auto sp = relaxation_problem(g, 1.0, 0.5, 1.0);
    double gamma = default_gamma(sp);
    auto sol = solve_sequential(sp, gamma, 1e-10);
    auto psi = abel::solve_second_kind(reduce_to_abel(sp, gamma), 1e-10, 400);
    for (std::size_t i = 1; i < g.size(); i += 11)
        CHECK(sol.psi[i] == doctest::Approx(psi[i]).epsilon(1e-12));
}

TEST_CASE("order continuity of the relaxation family") {
    auto g = TimeGrid::uniform(1.0, 256);
    double eta = 0.5;
    auto base_sp = relaxation_problem(g, 1.0, eta, 1.0);
    double gamma = default_gamma(base_sp);
    auto base = solve_sequential(base_sp, gamma, 1e-10).psi;
    double worst = 0.0;
    for (int m = 0; m <= 5; ++m) {
        double h = 0.1 * std::pow(2.0, -m);
        auto pert = solve_sequential(relaxation_problem(g, 1.0, eta + h, 1.0), gamma, 1e-10).psi;
        double d = 0.0;
        for (std::size_t i = 1; i < g.size(); ++i)
            d = std::max(d, std::pow(g.t(i), gamma) * std::abs(pert[i] - base[i]));
        worst = std::max(worst, d / h);
    }
    CHECK(worst < 10.0);
}

TEST_CASE("validation") {
    auto g = TimeGrid::uniform(1.0, 32);
    auto sp = relaxation_problem(g, 1.0, 0.5, 1.0);
    CHECK_THROWS_AS((void)reduce_to_abel(sp, 0.5), ValidationError); // gamma <= 1 - eta0
    CHECK_THROWS_AS((void)reduce_to_abel(sp, 1.0), ValidationError);
    sp.bvals = {1e9};
    CHECK_THROWS_AS((void)reduce_to_abel(sp, 0.75), ValidationError);
    sp.bvals = {1.0};
    sp.pcoeffs = {[](double t) { return 1.0 / (t - 0.5); }}; // pole inside [0,T]
    CHECK_THROWS_AS((void)reduce_to_abel(sp, 0.75), ValidationError);
}
