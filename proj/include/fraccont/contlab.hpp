#pragma once

#include "fraccont/grid.hpp"
#include "fraccont/specdiff.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace fraccont::contlab {

enum class SweepTarget { SpectralHomogeneous, SpectralForced, AbelLinear, SeqFde };
enum class NormKind { CgammaSup, GridL2, Hrho };

// Dyadic order-perturbation study: solve at alpha and at alpha + h0 2^-m,
// m = 0..levels, measure the configured norm of the difference, fit the
// log-log slope against the predicted exponent.
struct SweepConfig {
    SweepTarget target = SweepTarget::SpectralHomogeneous;
    NormKind norm = NormKind::Hrho;

    double alpha = 0.5;
    double h0 = 0.1;
    int levels = 6;
    double T = 1.0;
    int nodes = 256;
    double solver_tol = 1e-10;

    // spectral targets
    double beta = 1.0;
    double s = 1.0;
    double rho = 0.0;
    double beta1 = 1.0; // upper edge of the beta band in the predicted exponent
    std::vector<double> lambdas = {1.0};
    std::vector<double> theta = {1.0};   // initial data / constant forcing modes
    double forced_delta = 0.01;          // the delta in the forced exponent

    // abel-linear / seqfde targets
    double lambda = -1.0;
    double gamma = 0.0;  // C_gamma weight (solution space for seqfde)
    double b1 = 1.0;     // initial datum of the k=1 relaxation problem
    bool graded = false; // mesh grading for the Abel-type targets
};

struct ContinuityReport {
    std::vector<std::pair<double, double>> rows; // (h, discrepancy)
    double slope = 0.0;
    double predicted = 0.0;
    double fitted_constant = 0.0; // exp(intercept) of the log-log fit
    bool pass = false;
    // Monte Carlo runs additionally report
    double mean_discrepancy = 0.0;
    double moment = 0.0; // (E|a_n-alpha|^lambda)^{nu/lambda}
    bool monte_carlo = false;
};

ContinuityReport sweep_orders(const SweepConfig& cfg);

struct RandomOrderConfig {
    enum class Sampler { UniformInterval, TwoPoint, PointMass };
    Sampler sampler = Sampler::UniformInterval;
    double halfwidth = 0.05; // support [alpha - h, alpha + h]
    int trials = 64;
    double lambdaMoment = 1.0; // lambda >= nu in the moment bound
    std::uint64_t seed = 1;
};

// Random-order study: sample a_n, compare the sample-mean discrepancy against
// fitted_constant * (E|a_n-alpha|^lambda)^{nu/lambda} * 1.5 with the constant
// calibrated from the deterministic sweep.
ContinuityReport monte_carlo_orders(const RandomOrderConfig& rc, const SweepConfig& cfg);

// Convolution continuity estimate: G_{a,l}(t) = Int (t-s)^{a-1}
// E_{a,a}(l (t-s)^a) f(s) ds; returns the L^2 distance of the two
// convolutions and its ratio to [|a'-a|(1+|l|) + |l'-l|] ||f||_2.
struct ConvolutionContinuity {
    double lhs;
    double bound_ratio;
};
ConvolutionContinuity convolution_continuity(const GridFn& f, double alpha, double alphaP,
                                             double lambda, double lambdaP);

} // namespace fraccont::contlab
