#include "fraccont/specdiff.hpp"

#include "fraccont/abel.hpp"
#include "fraccont/errors.hpp"
#include "fraccont/mlf.hpp"
#include "fraccont/numerics.hpp"

#include <cmath>
#include <numbers>

namespace fraccont::specdiff {

namespace {

void check_lengths(const ModeVector& v, const SpectralOperator& op) {
    if (v.size() != op.lambdas.size())
        fail_validation("LengthMismatch", "mode vector length must match the operator truncation");
}

double lambda_pow(double lambda, double beta) {
    return std::exp(beta * std::log(lambda)); // exact monotone in beta
}

} // namespace

SpectralOperator dirichlet_laplacian_1d(double L, int P) {
    if (!(L > 0.0)) fail_validation("NonPositiveLength", "interval length must be > 0");
    if (P < 1) fail_validation("LengthMismatch", "need at least one mode");
    SpectralOperator op;
    op.lambdas.resize(P);
    for (int p = 1; p <= P; ++p) {
        double w = p * std::numbers::pi / L;
        op.lambdas[p - 1] = w * w;
    }
    op.label = "dirichlet laplacian on (0," + std::to_string(L) + ")";
    return op;
}

double hs_norm(const ModeVector& v, const SpectralOperator& op, double s) {
    check_lengths(v, op);
    if (s < 0.0) fail_validation("NegativeS", "H^s norms need s >= 0");
    double acc = 0.0;
    for (std::size_t p = 0; p < v.size(); ++p) {
        double w = (s == 0.0) ? 1.0 : lambda_pow(op.lambdas[p], 2.0 * s);
        acc += w * v[p] * v[p];
    }
    return std::sqrt(acc);
}

double hs_distance(const ModeVector& a, const ModeVector& b, const SpectralOperator& op, double s) {
    check_lengths(a, op);
    check_lengths(b, op);
    if (s < 0.0) fail_validation("NegativeS", "H^s norms need s >= 0");
    double acc = 0.0;
    for (std::size_t p = 0; p < a.size(); ++p) {
        double w = (s == 0.0) ? 1.0 : lambda_pow(op.lambdas[p], 2.0 * s);
        double d = a[p] - b[p];
        acc += w * d * d;
    }
    return std::sqrt(acc);
}

double hs_tail_norm(const ModeVector& theta, const SpectralOperator& op, double s,
                    std::size_t keep) {
    check_lengths(theta, op);
    if (s < 0.0) fail_validation("NegativeS", "H^s norms need s >= 0");
    double acc = 0.0;
    for (std::size_t p = keep; p < theta.size(); ++p)
        acc += lambda_pow(op.lambdas[p], 2.0 * s) * theta[p] * theta[p];
    return std::sqrt(acc);
}

ModeTrajectory solve_homogeneous(const ModeVector& theta, const SpectralOperator& op, double alpha,
                                 double beta, const TimeGrid& grid) {
    check_lengths(theta, op);
    if (!(alpha > 0.0 && alpha < 1.0))
        fail_validation("AlphaOutOfRange", "homogeneous solver needs alpha in (0,1)");
    if (!(beta > 0.0)) fail_validation("BetaOutOfRange", "beta must be positive");

    const std::size_t P = theta.size();
    ModeTrajectory traj;
    traj.grid = grid;
    traj.frames.assign(grid.size(), ModeVector(P, 0.0));

    num::parallel_for(P, [&](std::size_t p) {
        if (theta[p] == 0.0) return;
        double lb = lambda_pow(op.lambdas[p], beta);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            double t = grid.t(i);
            double e = (i == 0) ? 1.0
                                : mlf::ml_eval(mlf::MLQuery(alpha, 1.0, -lb * std::pow(t, alpha)));
            traj.frames[i][p] = theta[p] * e;
        }
    });
    return traj;
}

ModeTrajectory solve_forced(const ModeTrajectory& fmodes, const SpectralOperator& op, double alpha,
                            double beta) {
    if (fmodes.frames.size() != fmodes.grid.size())
        fail_validation("GridMismatch", "trajectory frame count must match its grid");
    if (fmodes.frames.empty() || fmodes.frames.front().size() != op.lambdas.size())
        fail_validation("LengthMismatch", "forcing modes must match the operator truncation");
    if (!(alpha > 0.0 && alpha < 1.0))
        fail_validation("AlphaOutOfRange", "forced solver needs alpha in (0,1)");
    if (!(beta > 0.0)) fail_validation("BetaOutOfRange", "beta must be positive");

    const std::size_t P = op.lambdas.size();
    const TimeGrid& grid = fmodes.grid;
    ModeTrajectory traj;
    traj.grid = grid;
    traj.frames.assign(grid.size(), ModeVector(P, 0.0));

    num::parallel_for(P, [&](std::size_t p) {
        GridFn mode(grid, 1, 0.0);
        bool zero = true;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            mode[i] = fmodes.frames[i][p];
            zero = zero && mode[i] == 0.0;
        }
        if (zero) return;
        GridFn w = abel::ml_convolution(mode, -lambda_pow(op.lambdas[p], beta), alpha);
        for (std::size_t i = 0; i < grid.size(); ++i) traj.frames[i][p] = w[i];
    });
    return traj;
}

double predicted_exponent(double s, double rho, double beta1) {
    if (!(s > rho && rho >= 0.0))
        fail_validation("BadOrdering", "need s > rho >= 0");
    if (!(beta1 > 0.0)) fail_validation("BadOrdering", "need beta1 > 0");
    return std::min(1.0, (s - rho) / beta1);
}

double forced_exponent(double beta0, double rho, double beta1, double delta) {
    if (!(0.0 <= rho && rho < beta0 && beta0 <= beta1))
        fail_validation("BadOrdering", "need 0 <= rho < beta0 <= beta1");
    if (!(delta > 0.0)) fail_validation("BadOrdering", "need delta > 0");
    return (beta0 - rho) / (beta0 + beta1 + delta);
}

std::vector<double> physical_samples(const ModeVector& coeffs, double L, int nx) {
    if (!(L > 0.0)) fail_validation("NonPositiveLength", "interval length must be > 0");
    std::vector<double> u(nx + 1, 0.0);
    double scale = std::sqrt(2.0 / L);
    for (int ix = 0; ix <= nx; ++ix) {
        double x = L * ix / nx;
        double acc = 0.0;
        for (std::size_t p = 0; p < coeffs.size(); ++p)
            acc += coeffs[p] * scale * std::sin((double)(p + 1) * std::numbers::pi * x / L);
        u[ix] = acc;
    }
    return u;
}

} // namespace fraccont::specdiff
