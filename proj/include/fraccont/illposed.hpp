#pragma once

#include <optional>
#include <vector>

namespace fraccont::illposed {

// One point of a data-to-solution instability demonstration: the data norm
// shrinks while the solution norm provably grows.
struct InstabilityWitness {
    int n;
    double order_perturbation;  // alpha_n or eps_n
    double data_norm;
    double solution_norm_lower; // provable lower bound
    std::optional<double> solution_norm_exact;
    double combined_distance;   // |order perturbation| + data norm
};

// Half-line Abel operator family J^alpha with data concentrated on the
// frequency band (a_n, a_n + delta_n), a_n = n^n, alpha_n = delta_n = 1/n:
//   data_norm^2 = 1/(n pi), solution_norm_lower^2 = n/pi,
//   solution_norm_exact^2 = (1/pi) Int_{a_n}^{a_n+delta_n} tau^{2 alpha_n} dtau
// (all closed form; a_n^{2 alpha_n} evaluated in log space).
InstabilityWitness abel_halfline_instability(int n);

// Exponential-multiplier family u^ = e^{a tau^alpha} f^ with data
// f^_n = n 1_{(n^n, n^n + n^-3)} and order noise eps_n = 1/n:
//   data_norm = 1/n, combined distance 2/n,
//   solution_norm_lower^2 = e^{2 a n}/n (log-space evaluation).
InstabilityWitness exp_multiplier_instability(int n, double a, double alpha);

std::vector<InstabilityWitness> abel_halfline_family(int n_lo, int n_hi);
std::vector<InstabilityWitness> exp_multiplier_family(int n_lo, int n_hi, double a, double alpha);

} // namespace fraccont::illposed
