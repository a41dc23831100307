#include "fraccont/contlab.hpp"

#include "fraccont/abel.hpp"
#include "fraccont/errors.hpp"
#include "fraccont/numerics.hpp"
#include "fraccont/seqfde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fraccont::contlab {

namespace {

// solve the configured target at a given order and hold whatever the solution
// carrier is
struct Solution {
    specdiff::ModeTrajectory traj; // spectral targets
    GridFn fn;                     // abel / seqfde targets
};

abel::AbelProblem linear_problem(const SweepConfig& cfg, const TimeGrid& grid, double alpha) {
    abel::AbelProblem p;
    double c = cfg.lambda / std::tgamma(alpha);
    p.kernel = abel::KernelSpec::scalar(
        [c](double, double, double, std::span<const double>, double w) { return c * w; },
        std::abs(c), 0.0, {});
    p.g = GridFn::constant(grid, 1.0);
    p.alpha = alpha;
    p.alpha0 = std::min(0.05, alpha);
    p.alpha1 = std::max(0.999, alpha);
    p.gamma = cfg.gamma;
    return p;
}

Solution solve_target(const SweepConfig& cfg, double alpha) {
    Solution sol;
    switch (cfg.target) {
        case SweepTarget::SpectralHomogeneous: {
            specdiff::SpectralOperator op{cfg.lambdas, "sweep"};
            TimeGrid grid = TimeGrid::uniform(cfg.T, cfg.nodes);
            sol.traj = specdiff::solve_homogeneous(cfg.theta, op, alpha, cfg.beta, grid);
            break;
        }
        case SweepTarget::SpectralForced: {
            specdiff::SpectralOperator op{cfg.lambdas, "sweep"};
            TimeGrid grid = TimeGrid::uniform(cfg.T, cfg.nodes);
            specdiff::ModeTrajectory f;
            f.grid = grid;
            f.frames.assign(grid.size(), cfg.theta); // constant-in-time forcing modes
            sol.traj = specdiff::solve_forced(f, op, alpha, cfg.beta);
            break;
        }
        case SweepTarget::AbelLinear: {
            TimeGrid grid = cfg.graded ? TimeGrid::graded(cfg.T, cfg.nodes, 2.0)
                                       : TimeGrid::uniform(cfg.T, cfg.nodes);
            sol.fn = abel::solve_second_kind(linear_problem(cfg, grid, alpha), cfg.solver_tol, 400);
            break;
        }
        case SweepTarget::SeqFde: {
            TimeGrid grid = cfg.graded ? TimeGrid::graded(cfg.T, cfg.nodes, 2.0)
                                       : TimeGrid::uniform(cfg.T, cfg.nodes);
            double mu = -cfg.lambda; // relaxation coefficient p_1
            double eta0 = cfg.gamma > 0.0 ? std::max(0.05, 1.0 - cfg.gamma + 1e-9) : 0.05;
            seqfde::SequentialProblem sp{SequentialOrders({alpha}),
                                         {[mu](double) { return mu; }},
                                         GridFn::constant(grid, 0.0),
                                         {cfg.b1},
                                         eta0,
                                         -100.0,
                                         100.0};
            double gamma = cfg.gamma > 0.0 ? cfg.gamma : seqfde::default_gamma(sp);
            sol.fn = seqfde::solve_sequential(sp, gamma, cfg.solver_tol).psi;
            break;
        }
    }
    return sol;
}

double discrepancy(const SweepConfig& cfg, const Solution& base, const Solution& pert) {
    switch (cfg.target) {
        case SweepTarget::SpectralHomogeneous:
        case SweepTarget::SpectralForced: {
            specdiff::SpectralOperator op{cfg.lambdas, "sweep"};
            if (cfg.norm == NormKind::GridL2) {
                // grid L^2 in time of the H^rho mode distance
                double acc = 0.0;
                const TimeGrid& g = base.traj.grid;
                for (std::size_t i = 0; i + 1 < g.size(); ++i) {
                    double d0 = specdiff::hs_distance(base.traj.frames[i], pert.traj.frames[i], op,
                                                      cfg.rho);
                    double d1 = specdiff::hs_distance(base.traj.frames[i + 1],
                                                      pert.traj.frames[i + 1], op, cfg.rho);
                    acc += 0.5 * (g.t(i + 1) - g.t(i)) * (d0 * d0 + d1 * d1);
                }
                return std::sqrt(acc);
            }
            double best = 0.0;
            for (std::size_t i = 0; i < base.traj.grid.size(); ++i)
                best = std::max(best, specdiff::hs_distance(base.traj.frames[i],
                                                            pert.traj.frames[i], op, cfg.rho));
            return best;
        }
        case SweepTarget::AbelLinear:
        case SweepTarget::SeqFde: {
            if (cfg.norm == NormKind::GridL2) return grid_l2_distance(base.fn, pert.fn);
            // C_gamma sup norm of the difference
            double best = 0.0;
            std::size_t i0 = std::max(base.fn.first_node(), pert.fn.first_node());
            for (std::size_t i = i0; i < base.fn.grid().size(); ++i) {
                double w = cfg.gamma == 0.0 ? 1.0 : std::pow(base.fn.grid().t(i), cfg.gamma);
                best = std::max(best, w * std::abs(base.fn[i] - pert.fn[i]));
            }
            return best;
        }
    }
    return 0.0;
}

double predicted_for(const SweepConfig& cfg) {
    switch (cfg.target) {
        case SweepTarget::SpectralHomogeneous:
            return specdiff::predicted_exponent(cfg.s, cfg.rho, cfg.beta1);
        case SweepTarget::SpectralForced:
            return specdiff::forced_exponent(cfg.beta, cfg.rho, cfg.beta1, cfg.forced_delta);
        case SweepTarget::AbelLinear:
        case SweepTarget::SeqFde:
            return 1.0; // Lipschitz kernels: nu = 1
    }
    return 1.0;
}

void validate_sweep(const SweepConfig& cfg) {
    if (!(cfg.h0 > 0.0) || cfg.levels < 1)
        fail_validation("GridMismatch", "need h0 > 0 and at least one dyadic level");
    if (cfg.alpha + cfg.h0 >= 0.999)
        fail_validation("AlphaOutOfRange", "alpha + h0 must stay inside the admissible band");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
        fail_validation("AlphaOutOfRange", "base alpha must lie in (0,1)");
}

} // namespace

ContinuityReport sweep_orders(const SweepConfig& cfg) {
    validate_sweep(cfg);

    ContinuityReport rep;
    rep.predicted = predicted_for(cfg);

    Solution base;
    try {
        base = solve_target(cfg, cfg.alpha);
    } catch (const Error& e) {
        fail_solver("SolverFailure", std::string("base solve failed: ") + e.what());
    }

    for (int m = 0; m <= cfg.levels; ++m) {
        double h = cfg.h0 * std::pow(2.0, -m);
        Solution pert;
        try {
            pert = solve_target(cfg, cfg.alpha + h);
        } catch (const Error& e) {
            fail_solver("SolverFailure",
                        std::string(e.what()) + " at h=" + std::to_string(h));
        }
        rep.rows.emplace_back(h, discrepancy(cfg, base, pert));
    }

    bool alive = false;
    for (auto& [h, d] : rep.rows) alive = alive || d > 1e-14;
    if (!alive) fail_solver("DegenerateFit", "all discrepancies below 1e-14");

    std::vector<double> lx, ly;
    for (auto& [h, d] : rep.rows)
        if (d > 0.0) {
            lx.push_back(std::log(h));
            ly.push_back(std::log(d));
        }
    auto fit = num::fit_line(lx, ly);
    rep.slope = fit.slope;
    rep.fitted_constant = std::exp(fit.intercept);

    bool monotone = true;
    for (std::size_t m = 0; m + 1 < rep.rows.size(); ++m)
        monotone = monotone && rep.rows[m + 1].second <= rep.rows[m].second * (1.0 + 1e-9);
    rep.pass = monotone && rep.slope >= rep.predicted - 0.1;
    return rep;
}

ContinuityReport monte_carlo_orders(const RandomOrderConfig& rc, const SweepConfig& cfg) {
    if (rc.trials < 16) fail_validation("GridMismatch", "need at least 16 trials");
    double nu = predicted_for(cfg);
    if (!(rc.lambdaMoment >= nu))
        fail_validation("BadOrdering", "the moment index lambda must satisfy lambda >= nu");
    if (cfg.alpha + rc.halfwidth >= 0.999 || cfg.alpha - rc.halfwidth <= 0.001)
        fail_validation("AlphaOutOfRange", "sampler support leaves the admissible band");

    ContinuityReport calib = sweep_orders(cfg);

    ContinuityReport rep;
    rep.monte_carlo = true;
    rep.predicted = calib.predicted;
    rep.fitted_constant = calib.fitted_constant;

    Solution base = solve_target(cfg, cfg.alpha);

    double sum_d = 0.0, sum_m = 0.0;
    for (int trial = 0; trial < rc.trials; ++trial) {
        num::SplitMix64 rng = num::SplitMix64::stream(rc.seed, (std::uint64_t)trial);
        double a;
        switch (rc.sampler) {
            case RandomOrderConfig::Sampler::UniformInterval:
                a = rng.uniform(cfg.alpha - rc.halfwidth, cfg.alpha + rc.halfwidth);
                break;
            case RandomOrderConfig::Sampler::TwoPoint:
                a = (rng.next() & 1ULL) ? cfg.alpha + rc.halfwidth : cfg.alpha - rc.halfwidth;
                break;
            case RandomOrderConfig::Sampler::PointMass:
            default:
                a = cfg.alpha;
                break;
        }
        double d = (a == cfg.alpha) ? 0.0 : discrepancy(cfg, base, solve_target(cfg, a));
        rep.rows.emplace_back(std::abs(a - cfg.alpha), d);
        sum_d += d;
        sum_m += std::pow(std::abs(a - cfg.alpha), rc.lambdaMoment);
    }
    rep.mean_discrepancy = sum_d / rc.trials;
    rep.moment = std::pow(sum_m / rc.trials, nu / rc.lambdaMoment);

    // log-log fit over the trials with positive perturbation (diagnostic)
    std::vector<double> lx, ly;
    for (auto& [h, d] : rep.rows)
        if (h > 0.0 && d > 0.0) {
            lx.push_back(std::log(h));
            ly.push_back(std::log(d));
        }
    if (lx.size() >= 2 &&
        *std::max_element(lx.begin(), lx.end()) - *std::min_element(lx.begin(), lx.end()) > 1e-12) {
        auto fit = num::fit_line(lx, ly);
        rep.slope = fit.slope;
    }

    rep.pass = rep.mean_discrepancy <= rep.fitted_constant * rep.moment * 1.5 + 1e-14;
    return rep;
}

ConvolutionContinuity convolution_continuity(const GridFn& f, double alpha, double alphaP,
                                             double lambda, double lambdaP) {
    if (!(alpha > 0.0 && alpha < 1.0) || !(alphaP > 0.0 && alphaP < 1.0))
        fail_validation("AlphaOutOfRange", "both orders must lie in (0,1)");
    if (!(lambda < 0.0) || !(lambdaP < 0.0))
        fail_validation("NonNegativeLambda", "the convolution estimate needs lambda, lambda' < 0");

    GridFn G = abel::ml_convolution(f, lambda, alpha);
    GridFn Gp = abel::ml_convolution(f, lambdaP, alphaP);
    ConvolutionContinuity out;
    out.lhs = grid_l2_distance(Gp, G);
    double rhs = (std::abs(alphaP - alpha) * (1.0 + std::abs(lambda)) + std::abs(lambdaP - lambda)) *
                 grid_lp_norm(f, 2.0);
    out.bound_ratio = (rhs > 0.0) ? out.lhs / rhs : 0.0;
    return out;
}

} // namespace fraccont::contlab
