#pragma once

#include <optional>

namespace fraccont::mlf {

// Evaluation request for E_{alpha,beta}(z) on the real line.
struct MLQuery {
    double alpha;
    double beta = 1.0;
    double z = 0.0;
    double tol = 1e-12; // relative tolerance

    MLQuery() = default;
    MLQuery(double a, double b, double z_, double tol_ = 1e-12)
        : alpha(a), beta(b), z(z_), tol(tol_) {}
};

// Integration contour gamma_{rho,phi}: two rays at angles +-phi truncated by
// the connecting arc of radius rho.  phi must lie strictly inside
// (pi*alpha1/2, min(pi, pi*alpha0)) for the declared order band.
struct ContourSpec {
    double rho = 1.0;
    double phi = 0.0;    // 0 = pick the midpoint of the admissible interval
    int nodes = 32;      // Gauss-Legendre order per panel (rays and arc)
    double alpha0 = 0.0; // order band; 0 = the single alpha in use
    double alpha1 = 0.0;
};

// Principal asymptotic term phi0 = (1/alpha) z^{(1-beta)alpha} e^{z^{1/alpha}}
// and its parameter derivatives, all in closed form.
struct Phi0 {
    double value;
    double dAlpha;
    double dBeta;
};

struct MLPartials {
    double dAlpha;
    double dBeta;
};

// E_{alpha,beta}(z).  Series for well-conditioned arguments, contour
// quadrature (plus the phi0 residue for z > 0) otherwise; the result is
// strategy-independent within q.tol.
double ml_eval(const MLQuery& q);

// d/dz E_{alpha,1}(z) = E_{alpha,alpha}(z)/alpha
double ml_deriv_z(double alpha, double z);

// Parameter derivatives dE/dalpha, dE/dbeta by quadrature of the
// differentiated contour integrand.  Requires z strictly left of the contour
// (z < rho, in practice z <= 0 or well below rho).
MLPartials ml_partials(const MLQuery& q, const ContourSpec& c);

Phi0 phi0_eval(double alpha, double beta, double z);

namespace detail {
// Both evaluation routes exposed for the agreement property tests.
// eval_series returns nullopt when the alternating series is too
// ill-conditioned to meet tol at the working precision.
std::optional<double> eval_series(const MLQuery& q);
double eval_contour(const MLQuery& q); // valid for z < 0.5*rho or z > 5
bool series_admissible(double alpha, double z, double tol);
} // namespace detail

} // namespace fraccont::mlf
