#include "fraccont/abel.hpp"

#include "fraccont/errors.hpp"
#include "fraccont/mlf.hpp"
#include "fraccont/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fraccont::abel {

namespace {

constexpr std::size_t kPowTableCap = 12'000'000; // triangular (t_i-t_j)^alpha cache cap

// lower-triangular cache of (t_i - t_j)^alpha; for uniform grids collapses to
// the difference index
class PowCache {
public:
    PowCache(const TimeGrid& g, double alpha) : g_(&g), alpha_(alpha) {
        if (g.is_uniform()) {
            uniform_.resize(g.size());
            uniform_[0] = 0.0;
            for (std::size_t m = 1; m < g.size(); ++m) uniform_[m] = std::pow(g.t(m), alpha);
            return;
        }
        std::size_t n = g.size();
        if (n * (n + 1) / 2 <= kPowTableCap) {
            tri_.resize(n * (n + 1) / 2);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j <= i; ++j)
                    tri_[i * (i + 1) / 2 + j] = std::pow(g.t(i) - g.t(j), alpha);
        }
    }

    double operator()(std::size_t i, std::size_t j) const {
        if (!uniform_.empty()) return uniform_[i - j];
        if (!tri_.empty()) return tri_[i * (i + 1) / 2 + j];
        return std::pow(g_->t(i) - g_->t(j), alpha_);
    }

private:
    const TimeGrid* g_;
    double alpha_;
    std::vector<double> uniform_;
    std::vector<double> tri_;
};

// One application of u -> g + Int (t-s)^{alpha-1} K(t,s,u(s)) ds on the grid.
// gamma > 0: u has no t0 value and behaves like u(t1)(s/t1)^-gamma on (0,t1).
void apply_sweep(const GridFn& g, const Kernel& K, std::span<const double> z, double alpha,
                 double gamma, const PowCache& pows, const GridFn& u, GridFn& out) {
    const TimeGrid& grid = g.grid();
    const int d = g.dim();
    const std::size_t n = grid.size();
    const std::size_t j0 = (gamma > 0.0) ? 1 : 0;
    const double t1 = grid.t(1);
    const double inv_alpha = 1.0 / alpha, inv_alpha1 = 1.0 / (alpha + 1.0);

    std::vector<double> inv_h(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j) inv_h[j] = 1.0 / (grid.t(j + 1) - grid.t(j));

    std::vector<double> acc(d), kl(d), kr(d), wbuf(d);

    for (std::size_t i = 1; i < n; ++i) {
        const double ti = grid.t(i);
        std::fill(acc.begin(), acc.end(), 0.0);

        if (j0 == 1) {
            // model cell (0, t1]: u(s) = u(t1)(s/t1)^-gamma, both endpoint
            // singularities handled by tanh-sinh
            for (int c = 0; c < d; ++c) {
                double cell = num::tanh_sinh_01([&](double x, double omx) {
                    double s = t1 * x;
                    double up = std::pow(x, -gamma);
                    for (int cc = 0; cc < d; ++cc) wbuf[cc] = u.value(1)[cc] * up;
                    K(ti, s, alpha, z, wbuf, kl);
                    double wfac = (i == 1) ? std::pow(t1 * omx, alpha - 1.0)
                                           : std::pow(ti - s, alpha - 1.0);
                    return wfac * kl[c];
                }, 6) * t1;
                acc[c] += cell;
            }
        }

        K(ti, grid.t(j0), alpha, z, u.value(j0), kl);
        double b = ti - grid.t(j0);
        double b_pow = pows(i, j0);
        for (std::size_t j = j0; j < i; ++j) {
            K(ti, grid.t(j + 1), alpha, z, u.value(j + 1), kr);
            double a = ti - grid.t(j + 1);
            double a_pow = pows(i, j + 1);
            double m0 = (b_pow - a_pow) * inv_alpha;
            double m1 = (b * b_pow - a * a_pow) * inv_alpha1;
            double cl = (m1 - a * m0) * inv_h[j];
            double cr = (b * m0 - m1) * inv_h[j];
            for (int c = 0; c < d; ++c) acc[c] += cl * kl[c] + cr * kr[c];
            std::swap(kl, kr);
            b = a;
            b_pow = a_pow;
        }
        auto o = out.value(i);
        for (int c = 0; c < d; ++c) o[c] = g.value(i)[c] + acc[c];
    }
    if (out.has_origin_value() && g.has_origin_value()) {
        auto o = out.value(0);
        for (int c = 0; c < d; ++c) o[c] = g.value(0)[c];
    }
}

double sup_diff(const GridFn& a, const GridFn& b) {
    double best = 0.0;
    for (std::size_t i = std::max(a.first_node(), b.first_node()); i < a.grid().size(); ++i) {
        double s = 0.0;
        for (int c = 0; c < a.dim(); ++c) {
            double dd = a.value(i)[c] - b.value(i)[c];
            s += dd * dd;
        }
        best = std::max(best, std::sqrt(s));
    }
    return best;
}

void probe_kernel(const KernelSpec& k, double alpha, double T, double probe_scale) {
    num::SplitMix64 rng(0x5eedf00dULL);
    const int d = k.dim;
    std::vector<double> w1(d), w2(d), zero(d, 0.0), k1(d), k2(d);
    double W = std::min(std::max(1.0, probe_scale), 1e6);
    for (int probe = 0; probe < 256; ++probe) {
        double t = rng.uniform() * T;
        double s = rng.uniform() * t;
        for (int c = 0; c < d; ++c) {
            w1[c] = rng.uniform(-W, W);
            w2[c] = rng.uniform(-W, W);
        }
        k.K(t, s, alpha, k.z, w1, k1);
        k.K(t, s, alpha, k.z, w2, k2);
        double dk = 0.0, dw = 0.0;
        for (int c = 0; c < d; ++c) {
            dk += (k1[c] - k2[c]) * (k1[c] - k2[c]);
            dw += (w1[c] - w2[c]) * (w1[c] - w2[c]);
        }
        if (std::sqrt(dk) > k.kappa * std::sqrt(dw) * (1.0 + 1e-9) + 1e-12)
            fail_solver("KernelProbeFailed", "declared Lipschitz constant kappa violated");
        k.K(t, s, alpha, k.z, zero, k1);
        double m = 0.0;
        for (int c = 0; c < d; ++c) m += k1[c] * k1[c];
        if (std::sqrt(m) > k.m0 * (1.0 + 1e-9) + 1e-12)
            fail_solver("KernelProbeFailed", "declared offset bound M0 violated");
    }
}

GridFn picard_iterate(const GridFn& g, const Kernel& K, std::span<const double> z, double alpha,
                      double gamma, double tol, int max_iter, const char* who) {
    PowCache pows(g.grid(), alpha);
    GridFn u(g.grid(), g.dim(), gamma);
    GridFn next = u;
    for (int it = 0; it < max_iter; ++it) {
        apply_sweep(g, K, z, alpha, gamma, pows, u, next);
        double delta = sup_diff(next, u);
        std::swap(u, next);
        for (std::size_t i = 1; i < u.grid().size(); ++i)
            if (!std::isfinite(u.node_norm(i)))
                fail_solver("MaxIterExceeded", std::string(who) + ": iterates diverged");
        if (delta <= tol) return u;
    }
    fail_solver("MaxIterExceeded", std::string(who) + ": Picard increment did not reach tol");
}

} // namespace

GridFn solve_second_kind(const AbelProblem& p, double tol, int max_iter) {
    if (!(p.alpha > 0.0 && p.alpha < 2.0))
        fail_validation("AlphaOutOfRange", "second-kind solver needs alpha in (0,2)");
    if (!(p.alpha0 <= p.alpha && p.alpha <= p.alpha1) || !(p.alpha0 > 0.0))
        fail_validation("AlphaOutOfRange", "alpha outside the declared [alpha0, alpha1]");
    if (p.gamma < 0.0 || p.gamma >= 1.0)
        fail_validation("GammaOutOfRange", "gamma must be in [0,1)");
    if (p.kernel.dim != p.g.dim()) fail_validation("GridMismatch", "kernel and forcing dimensions differ");
    for (std::size_t i = p.g.first_node(); i < p.g.grid().size(); ++i)
        if (!std::isfinite(p.g.node_norm(i)))
            fail_validation("GridMismatch", "forcing g must be finite on interior nodes");

    probe_kernel(p.kernel, p.alpha, p.g.grid().horizon(), 2.0 * grid_sup_norm(p.g));
    return picard_iterate(p.g, p.kernel.K, p.kernel.z, p.alpha, p.gamma, tol, max_iter,
                          "solve_second_kind");
}

double second_kind_residual(const AbelProblem& p, const GridFn& u) {
    PowCache pows(p.g.grid(), p.alpha);
    GridFn out(p.g.grid(), p.g.dim(), p.gamma);
    apply_sweep(p.g, p.kernel.K, p.kernel.z, p.alpha, p.gamma, pows, u, out);
    return sup_diff(out, u);
}

GridFn ml_convolution(const GridFn& f, double cc, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        fail_validation("AlphaOutOfRange", "ML convolution needs alpha in (0,1]");
    const TimeGrid& grid = f.grid();
    const int d = f.dim();
    const std::size_t n = grid.size();

    // antiderivatives of the kernel R(u) = u^{alpha-1} E_{a,a}(c u^alpha):
    //   F0(u) = Int_0^u R           = (E_{a,1}(c u^a) - 1)/c          (u^a/a for c = 0)
    //   S(u)  = Int_0^u F0          = (u E_{a,2}(c u^a) - u)/c
    //   F1(u) = Int_0^u r R(r) dr   = u F0(u) - S(u)
    auto F0 = [&](double u) {
        if (u <= 0.0) return 0.0;
        if (cc == 0.0) return std::pow(u, alpha) / alpha;
        return (mlf::ml_eval(mlf::MLQuery(alpha, 1.0, cc * std::pow(u, alpha))) - 1.0) / cc;
    };
    auto F1 = [&](double u) {
        if (u <= 0.0) return 0.0;
        if (cc == 0.0) return std::pow(u, alpha + 1.0) / (alpha + 1.0);
        double e2 = mlf::ml_eval(mlf::MLQuery(alpha, 2.0, cc * std::pow(u, alpha)));
        double S = (u * e2 - u) / cc;
        return u * F0(u) - S;
    };

    std::vector<double> f0tab, f1tab;
    if (grid.is_uniform()) {
        f0tab.resize(n);
        f1tab.resize(n);
        for (std::size_t m = 0; m < n; ++m) {
            f0tab[m] = F0(grid.t(m));
            f1tab[m] = F1(grid.t(m));
        }
    }

    GridFn r(grid, d, 0.0);
    std::vector<double> acc(d);
    for (std::size_t i = 1; i < n; ++i) {
        double ti = grid.t(i);
        std::fill(acc.begin(), acc.end(), 0.0);
        std::size_t j0 = f.first_node();
        if (j0 == 1) {
            double gamma = f.weight(), t1 = grid.t(1);
            for (int c = 0; c < d; ++c) {
                double scale = f.value(1)[c];
                acc[c] += t1 * num::tanh_sinh_01([&](double x, double omx) {
                    double s = t1 * x;
                    double u = (i == 1) ? t1 * omx : ti - s;
                    double R = std::pow(u, alpha - 1.0) *
                               mlf::ml_eval(mlf::MLQuery(alpha, alpha, cc * std::pow(u, alpha)));
                    return R * scale * std::pow(x, -gamma);
                }, 6);
            }
        }
        for (std::size_t j = j0; j < i; ++j) {
            double a = ti - grid.t(j + 1), b = ti - grid.t(j);
            double m0, m1;
            if (grid.is_uniform()) {
                m0 = f0tab[i - j] - f0tab[i - j - 1];
                m1 = f1tab[i - j] - f1tab[i - j - 1];
            } else {
                m0 = F0(b) - F0(a);
                m1 = F1(b) - F1(a);
            }
            double h = b - a;
            double cl = (m1 - a * m0) / h, cr = (b * m0 - m1) / h;
            for (int c = 0; c < d; ++c)
                acc[c] += cl * f.value(j)[c] + cr * f.value(j + 1)[c];
        }
        auto o = r.value(i);
        for (int c = 0; c < d; ++c) o[c] = acc[c];
    }
    return r;
}

GridFn solve_linear_resolvent(const GridFn& g, double lambda, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        fail_validation("AlphaOutOfRange", "resolvent needs alpha in (0,1]");
    if (lambda == 0.0) return g;
    GridFn conv = ml_convolution(g, lambda, alpha);
    GridFn r = g;
    for (std::size_t i = 1; i < g.grid().size(); ++i) {
        auto o = r.value(i);
        for (int c = 0; c < g.dim(); ++c) o[c] = g.value(i)[c] + lambda * conv.value(i)[c];
    }
    return r;
}

GronwallCertificate gronwall_certificate(double lambda, double alpha, double T, double pnorm) {
    if (lambda < 0.0) fail_validation("NegativeLambda", "Gronwall certificate needs lambda >= 0");
    if (!(alpha > 0.0 && alpha <= 1.0))
        fail_validation("AlphaOutOfRange", "Gronwall certificate needs alpha in (0,1]");
    GronwallCertificate c;
    c.factor = 1.0 + lambda * T * mlf::ml_eval(mlf::MLQuery(alpha, alpha, lambda * std::pow(T, alpha)));
    c.pnorm = pnorm;
    return c;
}

GridFn solve_first_kind(const Kernel0& K0, const Kernel0& dK0dt, const GridFn& f, double alpha,
                        std::span<const double> z, double tol, int max_iter) {
    if (!(alpha > 0.0 && alpha < 1.0))
        fail_validation("AlphaOutOfRange", "first-kind factorization needs alpha in (0,1)");
    const TimeGrid& grid = f.grid();
    const std::size_t n = grid.size();
    const int d = f.dim();

    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(K0(grid.t(i), grid.t(i), alpha, z) - 1.0) > 1e-12)
            fail_validation("DiagonalNotNormalized", "K0(t,t) must equal 1");

    // D^alpha f with the leading t^alpha behaviour of forward-map images
    // split off and differentiated exactly
    GridFn Df = detail::rl_derivative_split(f, alpha, alpha);

    // B u(t) = Int_0^t L(t,s) u(s) ds with the substituted kernel
    //   L(t,s) = -(sin(pi a)/pi) Int_0^1 (1-th)^-a th^{a-1} g(t,s,th) dth,
    //   g = (a-1) H(s+th(t-s),s)/(th(t-s)) + dH/dt(s+th(t-s),s),
    // H(t,s) = K0(t,s) - K0(s,s).  L is bounded by 2 sup|dK0/dt|.
    // The singular theta weights are frozen on a tanh-sinh table shared by
    // every (t,s) pair.
    const double sin_factor = std::sin(std::numbers::pi * alpha) / std::numbers::pi;
    num::TanhSinhTable tab = num::tanh_sinh_table(5);
    std::vector<double> thw(tab.x.size());
    for (std::size_t k = 0; k < tab.x.size(); ++k)
        thw[k] = tab.w[k] * std::pow(tab.one_minus_x[k], -alpha) * std::pow(tab.x[k], alpha - 1.0);
    auto Lker = [&](double t, double s) -> double {
        double delta = t - s;
        if (delta <= 0.0)
            return -alpha * dK0dt(s, s, alpha, z); // theta-integral collapses to alpha H_t(s,s) B(1-a,a)
        double k0ss = K0(s, s, alpha, z);
        double val = 0.0;
        for (std::size_t k = 0; k < tab.x.size(); ++k) {
            double th = tab.x[k];
            double tau = s + th * delta;
            double q;
            if (th * delta < 1e-6 * (1.0 + std::abs(s))) {
                // difference quotient of H degenerates; use the midpoint slope
                q = dK0dt(s + 0.5 * th * delta, s, alpha, z);
            } else {
                q = (K0(tau, s, alpha, z) - k0ss) / (th * delta);
            }
            val += thw[k] * ((alpha - 1.0) * q + dK0dt(tau, s, alpha, z));
        }
        return -sin_factor * val;
    };

    // L matrix, row i over source nodes j <= i
    std::vector<std::vector<double>> L(n);
    for (std::size_t i = 1; i < n; ++i) {
        L[i].resize(i + 1);
        for (std::size_t j = 0; j <= i; ++j) L[i][j] = Lker(grid.t(i), grid.t(j));
    }

    // u = D^alpha f + B u is bounded whenever D^alpha f is; the first cell of
    // B u uses constant extrapolation u(s) ~ u(t1) on (0,t1)
    const double t1 = grid.t(1);
    std::vector<double> fc(n, 0.0);
    for (std::size_t i = 1; i < n; ++i)
        fc[i] = t1 * num::tanh_sinh_01([&](double x, double) { return Lker(grid.t(i), t1 * x); }, 4);

    GridFn u(grid, d, Df.weight());
    GridFn next = u;
    std::vector<double> acc(d);
    for (int it = 0; it < max_iter; ++it) {
        for (std::size_t i = 1; i < n; ++i) {
            std::fill(acc.begin(), acc.end(), 0.0);
            for (int c = 0; c < d; ++c) acc[c] += u.value(1)[c] * fc[i];
            for (std::size_t j = 1; j + 1 <= i; ++j) {
                double h = grid.t(j + 1) - grid.t(j);
                for (int c = 0; c < d; ++c)
                    acc[c] += 0.5 * h * (L[i][j] * u.value(j)[c] + L[i][j + 1] * u.value(j + 1)[c]);
            }
            auto o = next.value(i);
            for (int c = 0; c < d; ++c) o[c] = Df.value(i)[c] + acc[c];
        }
        double delta = sup_diff(next, u);
        std::swap(u, next);
        if (delta <= tol) return u;
    }
    fail_solver("MaxIterExceeded", "solve_first_kind: Picard increment did not reach tol");
}

GridFn order_sensitivity(const AbelProblem& p, const GridFn& u, const GridFn& dgdAlpha,
                         const Kernel& dKdAlpha, const KernelJac& DK, double tol, int max_iter) {
    const TimeGrid& grid = p.g.grid();
    const int d = p.g.dim();
    const std::size_t n = grid.size();
    if (!(u.grid() == grid) || !(dgdAlpha.grid() == grid))
        fail_validation("GridMismatch", "u and dg/dalpha must live on the problem grid");

    double res = second_kind_residual(p, u);
    if (res > 1e-6 * (1.0 + grid_sup_norm(u)))
        fail_solver("NotConverged", "residual of u too large to differentiate");

    // g1 = dg/dalpha + Int (t-s)^{a-1} dK/dalpha(u(s)) + Int (t-s)^{a-1} ln(t-s) K(u(s))
    GridFn g1(grid, d, p.gamma);
    std::vector<double> acc(d), kl(d), kr(d), al(d), ar(d);
    const std::size_t j0 = (p.gamma > 0.0) ? 1 : 0;
    for (std::size_t i = 1; i < n; ++i) {
        double ti = grid.t(i);
        std::fill(acc.begin(), acc.end(), 0.0);
        if (j0 == 1) {
            double t1 = grid.t(1);
            std::vector<double> wbuf(d), kv(d), av(d);
            for (int c = 0; c < d; ++c) {
                acc[c] += t1 * num::tanh_sinh_01([&](double x, double omx) {
                    double s = t1 * x;
                    double up = std::pow(x, -p.gamma);
                    for (int cc = 0; cc < d; ++cc) wbuf[cc] = u.value(1)[cc] * up;
                    double uu = (i == 1) ? t1 * omx : ti - s;
                    p.kernel.K(ti, s, p.alpha, p.kernel.z, wbuf, kv);
                    dKdAlpha(ti, s, p.alpha, p.kernel.z, wbuf, av);
                    return std::pow(uu, p.alpha - 1.0) * (av[c] + std::log(uu) * kv[c]);
                }, 6);
            }
        }
        p.kernel.K(ti, grid.t(j0), p.alpha, p.kernel.z, u.value(j0), kl);
        dKdAlpha(ti, grid.t(j0), p.alpha, p.kernel.z, u.value(j0), al);
        for (std::size_t j = j0; j < i; ++j) {
            p.kernel.K(ti, grid.t(j + 1), p.alpha, p.kernel.z, u.value(j + 1), kr);
            dKdAlpha(ti, grid.t(j + 1), p.alpha, p.kernel.z, u.value(j + 1), ar);
            double a = ti - grid.t(j + 1), b = ti - grid.t(j);
            detail::CellCoef cw = detail::power_cell(a, b, p.alpha);
            detail::CellCoef lw = detail::log_power_cell(a, b, p.alpha);
            for (int c = 0; c < d; ++c) {
                acc[c] += cw.left * al[c] + cw.right * ar[c]; // dK/dalpha term
                acc[c] += lw.left * kl[c] + lw.right * kr[c]; // log-kernel term
            }
            std::swap(kl, kr);
            std::swap(al, ar);
        }
        auto o = g1.value(i);
        for (int c = 0; c < d; ++c) o[c] = dgdAlpha.value(i)[c] + acc[c];
    }
    if (g1.has_origin_value() && dgdAlpha.has_origin_value()) {
        auto o = g1.value(0);
        for (int c = 0; c < d; ++c) o[c] = dgdAlpha.value(0)[c];
    }

    // value of the converged u at arbitrary s (first cell uses the C_gamma model)
    auto u_at = [&grid, &u, &p, d](double s, std::span<double> out) {
        if (p.gamma > 0.0 && s <= grid.t(1)) {
            double up = std::pow(s / grid.t(1), -p.gamma);
            for (int c = 0; c < d; ++c) out[c] = u.value(1)[c] * up;
            return;
        }
        auto it = std::lower_bound(grid.nodes().begin(), grid.nodes().end(), s);
        std::size_t j = (std::size_t)(it - grid.nodes().begin());
        if (j == 0) {
            for (int c = 0; c < d; ++c) out[c] = u.value(u.first_node())[c];
            return;
        }
        if (j >= grid.size()) j = grid.size() - 1;
        double ta = grid.t(j - 1), tb = grid.t(j);
        double th = (s - ta) / (tb - ta);
        std::size_t jl = std::max(j - 1, u.first_node());
        for (int c = 0; c < d; ++c)
            out[c] = (1.0 - th) * u.value(jl)[c] + th * u.value(j)[c];
    };

    // linear kernel of the sensitivity equation: K_w(t,s,w) = DK(t,s,u(s)) w
    Kernel Kw = [&, jac = std::vector<double>(d * d),
                 ubuf = std::vector<double>(d)](double t, double s, double aa,
                                                std::span<const double> zz,
                                                std::span<const double> w,
                                                std::span<double> out) mutable {
        u_at(s, ubuf);
        DK(t, s, aa, zz, ubuf, jac);
        for (int r = 0; r < d; ++r) {
            double sum = 0.0;
            for (int c = 0; c < d; ++c) sum += jac[r * d + c] * w[c];
            out[r] = sum;
        }
    };
    return picard_iterate(g1, Kw, p.kernel.z, p.alpha, p.gamma, tol, max_iter, "order_sensitivity");
}

} // namespace fraccont::abel
