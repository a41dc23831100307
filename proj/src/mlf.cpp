#include "fraccont/mlf.hpp"

#include "fraccont/errors.hpp"
#include "fraccont/numerics.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

namespace fraccont::mlf {

namespace {

using cld = std::complex<long double>;
constexpr long double kPi = std::numbers::pi_v<long double>;
constexpr long double kEpsLD = 5.42e-20L; // 2^-64, long double mantissa ulp
constexpr int kSeriesCap = 2000;

void validate_query(const MLQuery& q) {
    if (!(q.alpha > 0.0)) fail_validation("NonPositiveAlpha", "alpha must be > 0");
    if (!(q.tol > 0.0)) fail_validation("NonPositiveTolerance", "tol must be > 0");
}

// ---------------------------------------------------------------------------
// contour machinery
//
// E_{a,b}(z) = (1/(2 a pi i)) Int_{gamma_{rho,phi}} zeta^{(1-b)a} e^{zeta^{1/a}}
//              / (zeta - z) dzeta          for z left of the contour,
// plus the residue phi0(a,b,z) when the pole sits between the rays (z > rho).
// Rays at +-phi are conjugate for real parameters, so only the upper ray and
// half arc are integrated.

struct ContourGeometry {
    double alpha, beta, z;
    double rho, phi;
    int order; // Gauss-Legendre order per panel
    double alpha_lo, alpha_hi;
};

// integrand on the upper ray, W(r e^{i phi}); mult selects the plain value or
// a parameter-derivative multiplier
enum class Multiplier { None, DAlpha, DBeta };

// W(zeta) = zeta^{(1-b)/a} exp(zeta^{1/a}) / (zeta - z), principal branch
cld integrand_at(const ContourGeometry& g, const cld& lnzeta, const cld& zeta, Multiplier m) {
    long double a = g.alpha, b = g.beta;
    cld zeta_inv_a = std::exp(lnzeta / cld(a));
    cld w = std::exp(cld((1.0L - b) / a) * lnzeta + zeta_inv_a);
    w /= (zeta - cld(g.z));
    switch (m) {
        case Multiplier::None: break;
        case Multiplier::DAlpha:
            w *= -(lnzeta / cld(a * a)) * (cld(1.0L - b) + zeta_inv_a);
            break;
        case Multiplier::DBeta: w *= -lnzeta / cld(a); break;
    }
    return w;
}

cld ray_integrand(const ContourGeometry& g, long double r, Multiplier m) {
    cld lnzeta(std::log(r), g.phi);
    cld zeta = r * cld(std::cos((long double)g.phi), std::sin((long double)g.phi));
    return integrand_at(g, lnzeta, zeta, m);
}

cld arc_integrand(const ContourGeometry& g, long double theta, Multiplier m) {
    cld lnzeta(std::log((long double)g.rho), theta);
    cld zeta = (long double)g.rho * cld(std::cos(theta), std::sin(theta));
    return integrand_at(g, lnzeta, zeta, m) * zeta;
}

// truncation radius from the ray majorant r^p exp(r^{1/a} cos(phi/a))
double truncation_radius(const ContourGeometry& g) {
    double a_slow = g.alpha_hi;                  // slowest ray decay in the band
    double cosd = std::cos(g.phi / a_slow);      // < 0 by the phi constraint
    double p = std::max(0.0, (1.0 - g.beta) / g.alpha) + 2.0; // +2: log-term slack
    double at_rho = std::pow(g.rho, 1.0 / a_slow) * cosd + p * std::log(g.rho);
    double target = at_rho + std::log(1e-26);
    double R = std::max(2.0 * g.rho, g.rho + 1.0);
    while (std::pow(R, 1.0 / a_slow) * cosd + p * std::log(R) > target && R < 1e7)
        R *= 1.3;
    return R;
}

// split [a,b] until each panel spans a bounded phase and bounded ratio
void ray_panels(const ContourGeometry& g, double a, double b, std::vector<std::pair<double, double>>& out) {
    double inva = 1.0 / g.alpha_lo; // fastest phase in the band
    double sphi = std::abs(std::sin(g.phi / g.alpha_lo));
    double phase = (std::pow(b, inva) - std::pow(a, inva)) * sphi;
    if ((phase > 14.0 || b / a > 2.0) && b - a > 1e-12 * b) {
        double mid = std::min(2.0 * a, 0.5 * (a + b));
        if (phase > 14.0 && mid >= b) mid = 0.5 * (a + b);
        ray_panels(g, a, mid, out);
        ray_panels(g, mid, b, out);
    } else {
        out.emplace_back(a, b);
    }
}

struct ContourSums {
    cld ray;
    cld arc;
};

ContourSums integrate_contour(const ContourGeometry& g, Multiplier m) {
    const auto& rule = num::gauss_legendre(g.order);
    ContourSums s{{0.0L, 0.0L}, {0.0L, 0.0L}};

    double R = truncation_radius(g);
    std::vector<std::pair<double, double>> panels;
    ray_panels(g, g.rho, R, panels);
    for (auto [a, b] : panels) {
        long double c = 0.5L * (a + b), h = 0.5L * (b - a);
        cld acc(0.0L, 0.0L);
        for (std::size_t k = 0; k < rule.nodes.size(); ++k)
            acc += rule.weights[k] * ray_integrand(g, c + h * rule.nodes[k], m);
        s.ray += h * acc;
    }

    int arc_panels = std::max(2, (int)std::ceil(g.phi / (kPi / 6)));
    for (int p = 0; p < arc_panels; ++p) {
        long double a = g.phi * p / arc_panels, b = g.phi * (p + 1) / arc_panels;
        long double c = 0.5L * (a + b), h = 0.5L * (b - a);
        cld acc(0.0L, 0.0L);
        for (std::size_t k = 0; k < rule.nodes.size(); ++k)
            acc += rule.weights[k] * arc_integrand(g, c + h * rule.nodes[k], m);
        s.arc += h * acc;
    }
    return s;
}

double assemble(const ContourGeometry& g, const ContourSums& s) {
    long double phi = g.phi;
    cld eiphi(std::cos(phi), std::sin(phi));
    long double ray_part = std::imag(eiphi * s.ray);
    long double arc_part = std::real(s.arc); // zeta factor already in the integrand
    return (double)((ray_part + arc_part) / (g.alpha * kPi));
}

ContourGeometry make_geometry(const MLQuery& q, double rho, const ContourSpec* user) {
    ContourGeometry g;
    g.alpha = q.alpha;
    g.beta = q.beta;
    g.z = q.z;
    g.alpha_lo = (user && user->alpha0 > 0.0) ? user->alpha0 : q.alpha;
    g.alpha_hi = (user && user->alpha1 > 0.0) ? user->alpha1 : q.alpha;
    double lo = (double)(kPi * g.alpha_hi / 2.0L);
    double hi = std::min((double)kPi, (double)(kPi * g.alpha_lo));
    if (!(lo < hi))
        fail_validation("ContourConstraintViolated",
                        "no admissible contour angle: need alpha1 < min(2, 2*alpha0)");
    if (user && user->phi != 0.0) {
        if (!(user->phi > lo && user->phi < hi))
            fail_validation("ContourConstraintViolated", "phi outside (pi*alpha1/2, min(pi, pi*alpha0))");
        g.phi = user->phi;
    } else {
        g.phi = 0.5 * (lo + hi);
    }
    g.rho = (user) ? user->rho : rho;
    if (!(g.rho > 0.0)) fail_validation("ContourConstraintViolated", "rho must be > 0");
    g.order = (user && user->nodes > 3) ? user->nodes : 32;
    return g;
}

double phi0_value(double alpha, double beta, double z) {
    return std::exp(-std::log(alpha) + (1.0 - beta) / alpha * std::log(z) +
                    std::pow(z, 1.0 / alpha));
}

} // namespace

namespace detail {

bool series_admissible(double alpha, double z, double tol) {
    if (z >= 0.0) return z <= 5.0;
    // alternating series loses ~exp(2|z|^{1/alpha}) to cancellation
    double budget = 0.45 * std::log(std::max(tol, 1e-15) / (double)kEpsLD);
    return std::pow(-z, 1.0 / alpha) <= std::max(1.0, budget);
}

std::optional<double> eval_series(const MLQuery& q) {
    const long double a = q.alpha, b = q.beta, z = q.z;
    long double sum = 0.0L, asum = 0.0L, zk = 1.0L;
    for (int k = 0; k <= kSeriesCap; ++k) {
        long double t = zk * num::rgamma(a * k + b);
        sum += t;
        asum += std::abs(t);
        if (!std::isfinite((double)asum)) return std::nullopt;
        if (std::abs(t) < q.tol * std::abs(sum) && a * k + b > 2.0) {
            // cancellation check: accumulated |terms| vs the surviving sum
            if (asum * kEpsLD > 0.1L * q.tol * std::abs(sum)) return std::nullopt;
            return (double)sum;
        }
        zk *= z;
    }
    return std::nullopt;
}

double eval_contour(const MLQuery& q) {
    double v;
    if (q.z > 0.35) {
        // pole right of the arc: residue phi0 plus the contour integral
        ContourGeometry g = make_geometry(q, std::min(0.25, q.z / 2.0), nullptr);
        v = phi0_value(q.alpha, q.beta, q.z) + assemble(g, integrate_contour(g, Multiplier::None));
    } else {
        // pole left of the arc (z < rho)
        double rho = std::min(1.0, std::max(0.5, -q.z / 2.0));
        ContourGeometry g = make_geometry(q, rho, nullptr);
        v = assemble(g, integrate_contour(g, Multiplier::None));
    }
    if (!std::isfinite(v)) fail_solver("QuadratureDiverged", "contour quadrature returned non-finite value");
    return v;
}

} // namespace detail

double ml_eval(const MLQuery& q) {
    validate_query(q);
    if (detail::series_admissible(q.alpha, q.z, q.tol)) {
        if (auto s = detail::eval_series(q)) return *s;
    }
    if (q.alpha >= 2.0) {
        // contour representation needs alpha < 2; the series is the only route
        if (auto s = detail::eval_series(q)) return *s;
        fail_solver("ToleranceNotReached", "series did not converge and alpha >= 2 excludes the contour");
    }
    return detail::eval_contour(q);
}

double ml_deriv_z(double alpha, double z) {
    if (!(alpha > 0.0)) fail_validation("NonPositiveAlpha", "alpha must be > 0");
    return ml_eval(MLQuery(alpha, alpha, z)) / alpha;
}

MLPartials ml_partials(const MLQuery& q, const ContourSpec& c) {
    validate_query(q);
    ContourGeometry g = make_geometry(q, c.rho, &c);
    if (!(q.z < g.rho) || (g.rho - q.z) < 0.05 * (1.0 + std::abs(q.z)))
        fail_validation("ContourConstraintViolated", "z must lie strictly left of the contour radius rho");
    if (q.alpha < g.alpha_lo || q.alpha > g.alpha_hi)
        fail_validation("ContourConstraintViolated", "alpha outside the band declared by the contour");

    double e = assemble(g, integrate_contour(g, Multiplier::None));
    double ia = assemble(g, integrate_contour(g, Multiplier::DAlpha));
    double ib = assemble(g, integrate_contour(g, Multiplier::DBeta));
    MLPartials p;
    p.dAlpha = -e / q.alpha + ia;
    p.dBeta = ib;
    if (!std::isfinite(p.dAlpha) || !std::isfinite(p.dBeta))
        fail_solver("QuadratureDiverged", "contour quadrature for the partials returned non-finite value");
    return p;
}

Phi0 phi0_eval(double alpha, double beta, double z) {
    if (!(alpha > 0.0)) fail_validation("NonPositiveAlpha", "alpha must be > 0");
    if (!(z > 0.0)) fail_validation("NonPositiveZ", "phi0 requires z > 0");
    Phi0 r;
    double lnz = std::log(z);
    double zia = std::pow(z, 1.0 / alpha);
    r.value = phi0_value(alpha, beta, z);
    r.dAlpha = r.value * (-1.0 / alpha - ((1.0 - beta) + zia) * lnz / (alpha * alpha));
    r.dBeta = r.value * (-lnz / alpha);
    return r;
}

} // namespace fraccont::mlf
