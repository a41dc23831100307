#pragma once

#include "fraccont/grid.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace fraccont::abel {

// Kernel K(t,s,alpha,z,w) writing a dim-vector into out.
using Kernel = std::function<void(double t, double s, double alpha, std::span<const double> z,
                                  std::span<const double> w, std::span<double> out)>;

// w-Jacobian DK(t,s,alpha,z,w): dim x dim, row major.
using KernelJac = std::function<void(double t, double s, double alpha, std::span<const double> z,
                                     std::span<const double> w, std::span<double> out)>;

struct KernelSpec {
    Kernel K;
    double kappa; // declared Lipschitz constant in w
    double m0;    // declared bound on ||K(t,s,alpha,z,0)||
    std::vector<double> z;
    int dim = 1;

    // convenience wrapper for scalar kernels; templated so the callable is
    // invoked through a single std::function layer
    template <class F>
    static KernelSpec scalar(F&& k, double kappa, double m0, std::vector<double> z = {}) {
        KernelSpec spec;
        spec.dim = 1;
        spec.kappa = kappa;
        spec.m0 = m0;
        spec.z = std::move(z);
        spec.K = [fn = std::forward<F>(k)](double t, double s, double alpha,
                                           std::span<const double> zz, std::span<const double> w,
                                           std::span<double> out) { out[0] = fn(t, s, alpha, zz, w[0]); };
        return spec;
    }
};

// Second-kind problem u(t) = g(t) + Int_0^t (t-s)^{alpha-1} K(t,s,alpha,z,u(s)) ds,
// solved in the weighted space C_gamma.
struct AbelProblem {
    KernelSpec kernel;
    GridFn g;
    double alpha;
    double alpha0 = 0.1;
    double alpha1 = 1.0;
    double gamma = 0.0;
};

GridFn solve_second_kind(const AbelProblem& p, double tol, int max_iter);

// residual sup_i | g + A u - u | of a candidate solution (diagnostic)
double second_kind_residual(const AbelProblem& p, const GridFn& u);

// Int_0^t (t-s)^{alpha-1} E_{alpha,alpha}(c (t-s)^alpha) f(s) ds by product
// integration with the kernel antiderivatives in closed Mittag-Leffler form.
GridFn ml_convolution(const GridFn& f, double c, double alpha);

// u = g + lambda Int_0^t (t-s)^{alpha-1} E_{alpha,alpha}(lambda (t-s)^alpha) g(s) ds,
// the exact resolvent of u = g + lambda J^alpha u, by product integration.
GridFn solve_linear_resolvent(const GridFn& g, double lambda, double alpha);

struct GronwallCertificate {
    double factor; // 1 + lambda T E_{alpha,alpha}(lambda T^alpha)
    double pnorm;  // which L^p norm it certifies (inf allowed)
};
GronwallCertificate gronwall_certificate(double lambda, double alpha, double T, double pnorm);

// First-kind equation (1/Gamma(alpha)) Int_0^t K0(t,s)(t-s)^{alpha-1} u(s) ds = f
// via the factorization A = J^alpha (I - B): u = D^alpha f + B u.
using Kernel0 = std::function<double(double t, double s, double alpha, std::span<const double> z)>;

GridFn solve_first_kind(const Kernel0& K0, const Kernel0& dK0dt, const GridFn& f, double alpha,
                        std::span<const double> z, double tol, int max_iter = 200);

// Sensitivity w = du/dalpha: solves the linear Abel equation
//   w = g1 + Int (t-s)^{alpha-1} DK(t,s,alpha,z,u(s)) w(s) ds
// with g1 assembled from dg/dalpha, dK/dalpha and the ln(t-s) kernel term.
GridFn order_sensitivity(const AbelProblem& p, const GridFn& u, const GridFn& dgdAlpha,
                         const Kernel& dKdAlpha, const KernelJac& DK, double tol = 1e-10,
                         int max_iter = 300);

} // namespace fraccont::abel
