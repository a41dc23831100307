#pragma once

#include "fraccont/grid.hpp"

#include <string>
#include <vector>

namespace fraccont::specdiff {

// Operator with countable positive spectrum A phi_p = lambda_p phi_p,
// truncated at P modes.
struct SpectralOperator {
    std::vector<double> lambdas; // ascending, positive
    std::string label;
};

SpectralOperator dirichlet_laplacian_1d(double L, int P);

using ModeVector = std::vector<double>; // coefficients <v, phi_p>

struct ModeTrajectory {
    TimeGrid grid;
    std::vector<ModeVector> frames; // one per node
};

// || v ||_{H^s} = sqrt( sum_p lambda_p^{2s} v_p^2 )
double hs_norm(const ModeVector& v, const SpectralOperator& op, double s);
double hs_distance(const ModeVector& a, const ModeVector& b, const SpectralOperator& op, double s);

// truncation diagnostic: the H^s norm of the part of theta beyond the first
// `keep` modes
double hs_tail_norm(const ModeVector& theta, const SpectralOperator& op, double s,
                    std::size_t keep);

// d^alpha v + A^beta v = 0, v(0) = theta:
// frame coefficient p at node t is theta_p E_{alpha,1}(-lambda_p^beta t^alpha).
ModeTrajectory solve_homogeneous(const ModeVector& theta, const SpectralOperator& op, double alpha,
                                 double beta, const TimeGrid& grid);

// d^alpha w + A^beta w = f, w(0) = 0:
// per-mode convolution with (t-tau)^{alpha-1} E_{alpha,alpha}(-lambda_p^beta (t-tau)^alpha).
ModeTrajectory solve_forced(const ModeTrajectory& fmodes, const SpectralOperator& op, double alpha,
                            double beta);

// homogeneous order-continuity exponent min{1, (s-rho)/beta1}
double predicted_exponent(double s, double rho, double beta1);

// forced order-continuity exponent (beta0-rho)/(beta0+beta1+delta)
double forced_exponent(double beta0, double rho, double beta1, double delta);

// physical-space samples sum_p c_p sqrt(2/L) sin(p pi x / L) of one frame on a
// uniform x-grid (CSV output only; all estimates live in coefficient space)
std::vector<double> physical_samples(const ModeVector& coeffs, double L, int nx);

} // namespace fraccont::specdiff
