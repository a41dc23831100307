#include "fraccont/illposed.hpp"

#include "fraccont/errors.hpp"

#include <cmath>
#include <numbers>

namespace fraccont::illposed {

InstabilityWitness abel_halfline_instability(int n) {
    if (n < 2) fail_validation("IndexTooSmall", "the construction needs n >= 2");
    const double pi = std::numbers::pi;
    InstabilityWitness w;
    w.n = n;
    const double alpha_n = 1.0 / n;
    const double delta_n = 1.0 / n;
    w.order_perturbation = alpha_n;
    w.data_norm = std::sqrt(delta_n / pi);

    // a_n^{2 alpha_n} = exp(2 ln n) in log space; a_n = n^n itself is never formed
    const double a_pow = std::exp(2.0 * std::log((double)n));
    w.solution_norm_lower = std::sqrt(a_pow * delta_n / pi);

    // exact: (1/pi) Int_{a}^{a+d} tau^{2a_n} dtau
    //      = (1/pi) a^{2a_n} d * expm1((2a_n+1) log1p(d/a)) / ((2a_n+1) d/a)
    const double ln_a = n * std::log((double)n);
    const double d_over_a = delta_n * std::exp(-ln_a);
    const double q = 2.0 * alpha_n + 1.0;
    double shape = (d_over_a > 0.0) ? std::expm1(q * std::log1p(d_over_a)) / (q * d_over_a) : 1.0;
    w.solution_norm_exact = std::sqrt(a_pow * delta_n * shape / pi);

    w.combined_distance = alpha_n + w.data_norm;
    return w;
}

InstabilityWitness exp_multiplier_instability(int n, double a, double alpha) {
    if (n < 2) fail_validation("IndexTooSmall", "the construction needs n >= 2");
    if (!(a > 0.0)) fail_validation("NegativeLambda", "multiplier constant a must be > 0");
    if (!(alpha > 0.0)) fail_validation("NonPositiveAlpha", "alpha must be > 0");
    InstabilityWitness w;
    w.n = n;
    w.order_perturbation = 1.0 / n;
    w.data_norm = 1.0 / n;
    // lower bound e^{2an}/n on the squared norm, evaluated in log space
    w.solution_norm_lower = std::exp(a * n - 0.5 * std::log((double)n));
    w.solution_norm_exact = std::nullopt; // only the lower bound is available
    w.combined_distance = w.order_perturbation + w.data_norm;
    return w;
}

std::vector<InstabilityWitness> abel_halfline_family(int n_lo, int n_hi) {
    if (n_lo > n_hi) fail_validation("IndexTooSmall", "empty index range");
    std::vector<InstabilityWitness> out;
    for (int n = n_lo; n <= n_hi; ++n) out.push_back(abel_halfline_instability(n));
    return out;
}

std::vector<InstabilityWitness> exp_multiplier_family(int n_lo, int n_hi, double a, double alpha) {
    if (n_lo > n_hi) fail_validation("IndexTooSmall", "empty index range");
    std::vector<InstabilityWitness> out;
    for (int n = n_lo; n <= n_hi; ++n) out.push_back(exp_multiplier_instability(n, a, alpha));
    return out;
}

} // namespace fraccont::illposed
