#include "fraccont/seqfde.hpp"

#include "fraccont/errors.hpp"

#include <cmath>

namespace fraccont::seqfde {

namespace {

void validate_problem(const SequentialProblem& sp) {
    const std::size_t k = sp.orders.etas.size();
    if (sp.pcoeffs.size() != k || sp.bvals.size() != k)
        fail_validation("GridMismatch", "need one coefficient p_j and one b_j per order");
    if (!(sp.eta0 > 0.0 && sp.eta0 < 1.0))
        fail_validation("AlphaOutOfRange", "eta0 must lie in (0,1)");
    for (double eta : sp.orders.etas)
        if (eta < sp.eta0)
            fail_validation("AlphaOutOfRange", "every eta_j must satisfy eta_j >= eta0");
    for (double b : sp.bvals)
        if (!std::isfinite(b) || b < sp.b_lo || b > sp.b_hi)
            fail_validation("GridMismatch", "b_j outside the declared box");
    if (sp.f.dim() != 1) fail_validation("GridMismatch", "scalar forcing expected");
}

// sup of |p_j| sampled on a refined grid (the declared continuity makes this
// an adequate stand-in for the true sup)
double coeff_bound(const SequentialProblem& sp) {
    double mp = 0.0;
    const TimeGrid& g = sp.f.grid();
    for (const auto& p : sp.pcoeffs) {
        for (std::size_t i = 0; i + 1 < g.size(); ++i)
            for (int q = 0; q < 4; ++q) {
                double t = g.t(i) + (g.t(i + 1) - g.t(i)) * q / 4.0;
                double v = p(t);
                if (!std::isfinite(v))
                    fail_validation("CoefficientUnbounded", "p_j not finite on [0,T]");
                mp = std::max(mp, std::abs(v));
            }
        double v = p(g.horizon());
        if (!std::isfinite(v)) fail_validation("CoefficientUnbounded", "p_j not finite at T");
        mp = std::max(mp, std::abs(v));
    }
    return mp;
}

} // namespace

double default_gamma(const SequentialProblem& sp) {
    return 0.5 * ((1.0 - sp.eta0) + 1.0);
}

abel::AbelProblem reduce_to_abel(const SequentialProblem& sp, double gamma) {
    validate_problem(sp);
    const std::size_t k = sp.orders.etas.size();
    const std::vector<double> sig = sp.orders.sigmas();
    const double sigma_k = sig.back();
    const double eta_k = sp.orders.etas.back();
    if (!(gamma > 1.0 - sp.eta0 && gamma < 1.0))
        fail_validation("GammaOutOfRange", "gamma must lie in (1-eta0, 1)");
    if (!(sigma_k < 2.0))
        fail_validation("AlphaOutOfRange", "sigma_k must stay below 2");

    const TimeGrid& grid = sp.f.grid();
    const double T = grid.horizon();
    const double mp = coeff_bound(sp);
    const double Tk = std::max(1.0, std::pow(T, (double)k - 1.0));
    const double inv_gamma_sigma = 1.0 / std::tgamma(sigma_k);

    // kernel exponents: index k-1 pairs with p_k, the rest with p_{k-j}
    struct Term {
        std::size_t coeff; // index into pcoeffs
        double expo;       // power of (t-s)
    };
    std::vector<Term> terms;
    terms.push_back({k - 1, sigma_k - eta_k}); // p_k term
    for (std::size_t j = 1; j + 1 <= k; ++j)   // j = 1..k-1 pairs with p_{k-j}
        terms.push_back({k - j - 1, sigma_k - sig[j - 1] - eta_k});

    abel::KernelSpec spec;
    spec.dim = 1;
    spec.z = sp.orders.etas;
    spec.kappa = (double)k * mp * Tk * inv_gamma_sigma * (1.0 + 1e-9);
    spec.m0 = 0.0; // linear in psi
    spec.K = [terms, p = sp.pcoeffs, inv_gamma_sigma](double t, double s, double,
                                                      std::span<const double>,
                                                      std::span<const double> w,
                                                      std::span<double> out) {
        double sum = 0.0;
        for (const Term& tm : terms) {
            double pw = (tm.expo == 0.0) ? 1.0 : std::pow(t - s, tm.expo);
            sum += p[tm.coeff](t) * pw;
        }
        out[0] = -sum * inv_gamma_sigma * w[0];
    };

    // forcing with the analytic power terms evaluated at the nodes
    GridFn g(grid, 1, gamma);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        double t = grid.t(i);
        double v = sp.f[i];
        double pk = sp.pcoeffs[k - 1](t);
        for (std::size_t j = 0; j < k; ++j)
            v -= pk * sp.bvals[j] * std::pow(t, sig[j] - 1.0) / std::tgamma(sig[j]);
        for (std::size_t j = 1; j + 1 <= k; ++j) {
            double pj = sp.pcoeffs[k - j - 1](t);
            for (std::size_t l = j + 1; l <= k; ++l)
                v -= pj * sp.bvals[l - 1] * std::pow(t, sig[l - 1] - sig[j - 1] - 1.0) /
                     std::tgamma(sig[l - 1] - sig[j - 1]);
        }
        g[i] = v;
    }

    abel::AbelProblem prob;
    prob.kernel = std::move(spec);
    prob.g = std::move(g);
    prob.alpha = sigma_k;
    prob.alpha0 = std::min(sigma_k, (double)k * sp.eta0);
    prob.alpha1 = sigma_k;
    prob.gamma = gamma;
    return prob;
}

SequentialSolution solve_sequential(const SequentialProblem& sp, double gamma, double tol) {
    abel::AbelProblem prob = reduce_to_abel(sp, gamma);
    SequentialSolution sol;
    sol.psi = abel::solve_second_kind(prob, tol, 400);

    const std::vector<double> sig = sp.orders.sigmas();
    const double sigma_k = sig.back();
    const TimeGrid& grid = sp.f.grid();

    GridFn J = frac_integral(sol.psi, sigma_k);
    double sigma_min = sig.front();
    double yweight = sigma_min < 1.0 ? std::min(1.0 - sigma_min, 0.999) : 0.0;
    GridFn y(grid, 1, yweight);
    for (std::size_t i = y.first_node(); i < grid.size(); ++i) {
        double t = grid.t(i);
        double v = (i >= J.first_node()) ? J[i] : 0.0;
        for (std::size_t j = 0; j < sig.size(); ++j)
            v += sp.bvals[j] * std::pow(t, sig[j] - 1.0) / std::tgamma(sig[j]);
        y[i] = v;
    }
    sol.y = std::move(y);
    return sol;
}

} // namespace fraccont::seqfde
