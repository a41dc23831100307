#include "fraccont/grid.hpp"

#include "fraccont/errors.hpp"
#include "fraccont/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fraccont {

namespace {
constexpr double kMaxWeight = 0.999; // weights live in [0,1)

bool detect_uniform(const std::vector<double>& nodes) {
    double h = nodes[1] - nodes[0];
    for (std::size_t i = 1; i + 1 < nodes.size(); ++i)
        if (std::abs(nodes[i + 1] - nodes[i] - h) > 1e-12 * h) return false;
    return true;
}
} // namespace

TimeGrid::TimeGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 3) fail_validation("GridMismatch", "grid needs at least 3 nodes (N >= 2)");
    if (nodes_.front() != 0.0) fail_validation("GridMismatch", "grid must start at t0 = 0");
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
        if (!(nodes_[i] < nodes_[i + 1]))
            fail_validation("GridMismatch", "grid nodes must be strictly increasing");
    uniform_ = detect_uniform(nodes_);
}

TimeGrid TimeGrid::uniform(double T, int n) {
    if (!(T > 0.0) || n < 2) fail_validation("GridMismatch", "need T > 0 and N >= 2");
    std::vector<double> nodes(n + 1);
    for (int i = 0; i <= n; ++i) nodes[i] = T * i / n;
    nodes[n] = T;
    return TimeGrid(std::move(nodes));
}

TimeGrid TimeGrid::graded(double T, int n, double r) {
    if (!(T > 0.0) || n < 2 || !(r >= 1.0)) fail_validation("GridMismatch", "need T > 0, N >= 2, r >= 1");
    std::vector<double> nodes(n + 1);
    for (int i = 0; i <= n; ++i) nodes[i] = T * std::pow((double)i / n, r);
    nodes[n] = T;
    return TimeGrid(std::move(nodes));
}

GridFn::GridFn(TimeGrid grid, int dim, double weight)
    : grid_(std::move(grid)), dim_(dim), weight_(weight) {
    if (dim_ < 1) fail_validation("GridMismatch", "dimension must be >= 1");
    if (weight_ < 0.0 || weight_ >= 1.0) fail_validation("GammaOutOfRange", "weight must be in [0,1)");
    values_.assign(grid_.size() * dim_, 0.0);
}

GridFn GridFn::constant(const TimeGrid& g, double value) {
    GridFn f(g, 1, 0.0);
    std::fill(f.values_.begin(), f.values_.end(), value);
    return f;
}

GridFn GridFn::sample(const TimeGrid& g, const std::function<double(double)>& fn, double weight) {
    GridFn f(g, 1, weight);
    for (std::size_t i = f.first_node(); i < g.size(); ++i) f.values_[i] = fn(g.t(i));
    return f;
}

GridFn GridFn::sample_vec(const TimeGrid& g, int dim,
                          const std::function<void(double, std::span<double>)>& fn, double weight) {
    GridFn f(g, dim, weight);
    for (std::size_t i = f.first_node(); i < g.size(); ++i) fn(g.t(i), f.value(i));
    return f;
}

double GridFn::node_norm(std::size_t i) const {
    double s = 0.0;
    for (int c = 0; c < dim_; ++c) s += values_[i * dim_ + c] * values_[i * dim_ + c];
    return std::sqrt(s);
}

double cgamma_norm(const GridFn& f, double gamma) {
    double best = 0.0;
    for (std::size_t i = std::max<std::size_t>(f.first_node(), gamma > 0.0 ? 1 : 0);
         i < f.grid().size(); ++i) {
        double w = (gamma == 0.0) ? 1.0 : std::pow(f.grid().t(i), gamma);
        best = std::max(best, w * f.node_norm(i));
    }
    return best;
}

double grid_sup_norm(const GridFn& f) {
    double best = 0.0;
    for (std::size_t i = f.first_node(); i < f.grid().size(); ++i)
        best = std::max(best, f.node_norm(i));
    return best;
}

double grid_lp_norm(const GridFn& f, double p) {
    if (std::isinf(p)) return grid_sup_norm(f);
    if (!(p >= 1.0)) fail_validation("GridMismatch", "p must be >= 1 or inf");
    const auto& g = f.grid();
    double acc = 0.0;
    if (f.first_node() == 1) {
        // first cell of weighted data under the t^-weight model
        double gp = f.weight() * p;
        if (gp >= 1.0) return std::numeric_limits<double>::infinity();
        acc += std::pow(f.node_norm(1), p) * g.t(1) / (1.0 - gp);
    }
    for (std::size_t j = f.first_node(); j + 1 < g.size(); ++j) {
        double h = g.t(j + 1) - g.t(j);
        acc += 0.5 * h * (std::pow(f.node_norm(j), p) + std::pow(f.node_norm(j + 1), p));
    }
    return std::pow(acc, 1.0 / p);
}

double grid_l2_distance(const GridFn& a, const GridFn& b) {
    if (!(a.grid() == b.grid()) || a.dim() != b.dim())
        fail_validation("GridMismatch", "operands live on different grids");
    const auto& g = a.grid();
    std::size_t i0 = std::max(a.first_node(), b.first_node());
    double acc = 0.0;
    auto diff2 = [&](std::size_t i) {
        double s = 0.0;
        for (int c = 0; c < a.dim(); ++c) {
            double d = a.value(i)[c] - b.value(i)[c];
            s += d * d;
        }
        return s;
    };
    for (std::size_t j = i0; j + 1 < g.size(); ++j)
        acc += 0.5 * (g.t(j + 1) - g.t(j)) * (diff2(j) + diff2(j + 1));
    return std::sqrt(acc);
}

SequentialOrders::SequentialOrders(std::vector<double> e) : etas(std::move(e)) {
    if (etas.empty()) fail_validation("AlphaOutOfRange", "need at least one order");
    for (double eta : etas)
        if (!(eta > 0.0 && eta <= 1.0))
            fail_validation("AlphaOutOfRange", "every eta_j must lie in (0,1]");
}

std::vector<double> SequentialOrders::sigmas() const {
    std::vector<double> s(etas.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < etas.size(); ++j) s[j] = (acc += etas[j]);
    return s;
}

double SequentialOrders::sigma_total() const {
    double acc = 0.0;
    for (double eta : etas) acc += eta;
    return acc;
}

namespace detail {

CellCoef power_cell(double a, double b, double alpha) {
    return power_cell_cached(a, b, alpha, a > 0.0 ? std::pow(a, alpha) : 0.0,
                             std::pow(b, alpha));
}

CellCoef power_cell_cached(double a, double b, double alpha, double a_pow, double b_pow) {
    double h = b - a;
    double m0 = (b_pow - a_pow) / alpha;                     // Int u^{alpha-1}
    double m1 = (b * b_pow - a * a_pow) / (alpha + 1.0);     // Int u^alpha
    CellCoef c;
    c.left = (m1 - a * m0) / h;
    c.right = (b * m0 - m1) / h;
    return c;
}

CellCoef log_power_cell(double a, double b, double alpha) {
    auto P = [alpha](double u) { // Int u^{alpha-1} ln u
        return u <= 0.0 ? 0.0 : std::pow(u, alpha) * (std::log(u) - 1.0 / alpha) / alpha;
    };
    auto Q = [alpha](double u) { // Int u^alpha ln u
        return u <= 0.0 ? 0.0
                        : std::pow(u, alpha + 1.0) * (std::log(u) - 1.0 / (alpha + 1.0)) /
                              (alpha + 1.0);
    };
    double h = b - a;
    double p = P(b) - P(a), q = Q(b) - Q(a);
    CellCoef c;
    c.left = (q - a * p) / h;
    c.right = (b * p - q) / h;
    return c;
}

} // namespace detail

namespace {

// Core product integration.  use_model: first cell integrated against
// f ~ f(t1)(s/t1)^p instead of linear interpolation.
GridFn frac_integral_core(const GridFn& f, double alpha, bool use_model, double p,
                          double out_weight) {
    if (!(alpha > 0.0)) fail_validation("NonPositiveAlpha", "alpha must be > 0");
    const TimeGrid& g = f.grid();
    const int d = f.dim();

    GridFn r(g, d, out_weight);
    const double inv_gamma = 1.0 / std::tgamma(alpha);
    const std::size_t j0 = use_model ? 1 : 0;

    // power cache: for uniform grids t_i - t_j depends only on i-j
    std::vector<double> upow;
    if (g.is_uniform()) {
        upow.resize(g.size());
        upow[0] = 0.0;
        double h = g.t(1);
        for (std::size_t m = 1; m < g.size(); ++m) upow[m] = std::pow(h * m, alpha);
    }

    double t1 = g.t(1);
    std::vector<double> acc(d);
    for (std::size_t i = 1; i < g.size(); ++i) {
        std::fill(acc.begin(), acc.end(), 0.0);
        double ti = g.t(i);
        if (use_model) {
            // Int_0^t1 (ti-s)^{alpha-1} (s/t1)^p ds
            double cell;
            if (i == 1) {
                cell = std::pow(t1, alpha) * std::tgamma(alpha) * std::tgamma(p + 1.0) /
                       std::tgamma(alpha + p + 1.0);
            } else {
                cell = t1 * num::tanh_sinh_01([&](double x, double) {
                    return std::pow(ti - t1 * x, alpha - 1.0) * std::pow(x, p);
                });
            }
            for (int c = 0; c < d; ++c) acc[c] += f.value(1)[c] * cell;
        }
        for (std::size_t j = j0; j < i; ++j) {
            double a = ti - g.t(j + 1), b = ti - g.t(j);
            detail::CellCoef w =
                g.is_uniform()
                    ? detail::power_cell_cached(a, b, alpha, upow[i - j - 1], upow[i - j])
                    : detail::power_cell(a, b, alpha);
            auto fl = f.value(j), fr = f.value(j + 1);
            for (int c = 0; c < d; ++c) acc[c] += w.left * fl[c] + w.right * fr[c];
        }
        auto out = r.value(i);
        for (int c = 0; c < d; ++c) out[c] = acc[c] * inv_gamma;
    }
    // J^alpha f(0) = 0 whenever the result is origin-valued
    return r;
}

} // namespace

GridFn frac_integral(const GridFn& f, double alpha) {
    const double gamma = f.weight();
    return frac_integral_core(f, alpha, gamma > 0.0, -gamma, std::max(0.0, gamma - alpha));
}

GridFn detail::frac_integral_model(const GridFn& f, double alpha, double start_exponent) {
    if (!(start_exponent > -1.0)) fail_validation("GammaOutOfRange", "model exponent must be > -1");
    return frac_integral_core(f, alpha, true, start_exponent,
                              std::max(0.0, -start_exponent - alpha));
}

namespace {

// derivative of the interpolating quadratic through (x0,y0),(x1,y1),(x2,y2) at x0
double three_point_deriv(double x0, double x1, double x2, double y0, double y1, double y2) {
    return y0 * (2.0 * x0 - x1 - x2) / ((x0 - x1) * (x0 - x2)) +
           y1 * (x0 - x2) / ((x1 - x0) * (x1 - x2)) +
           y2 * (x0 - x1) / ((x2 - x0) * (x2 - x1));
}

} // namespace

namespace {

GridFn rl_derivative_core(const GridFn& f, double alpha, const GridFn& F) {
    const TimeGrid& g = f.grid();
    const int d = f.dim();
    GridFn r(g, d, std::min(f.weight() + alpha, kMaxWeight));

    auto tpow = [&](std::size_t i) { return std::pow(g.t(i), 1.0 - alpha); };

    for (std::size_t i = 2; i < g.size(); ++i) {
        double h = g.t(i) - g.t(i - 1);
        // exact-on-constants scaling: constants must map to c t^-alpha / Gamma(1-alpha)
        double rho = (1.0 - alpha) * std::pow(g.t(i), -alpha) * h / (tpow(i) - tpow(i - 1));
        auto out = r.value(i);
        auto Fi = F.value(i), Fp = F.value(i - 1);
        for (int c = 0; c < d; ++c) out[c] = rho * (Fi[c] - Fp[c]) / h;
    }
    { // one-sided second-order stencil at t1 (avoids the t0 value entirely)
        std::size_t n = g.size();
        auto out = r.value(1);
        if (n >= 4) {
            double x0 = g.t(1), x1 = g.t(2), x2 = g.t(3);
            double den = three_point_deriv(x0, x1, x2, tpow(1), tpow(2), tpow(3));
            double rho = (1.0 - alpha) * std::pow(x0, -alpha) / den;
            for (int c = 0; c < d; ++c)
                out[c] = rho * three_point_deriv(x0, x1, x2, F.value(1)[c], F.value(2)[c],
                                                 F.value(3)[c]);
        } else {
            double h = g.t(1);
            double rho = (1.0 - alpha) * std::pow(g.t(1), -alpha) * h / tpow(1);
            for (int c = 0; c < d; ++c) out[c] = rho * F.value(1)[c] / h;
        }
    }
    return r;
}

} // namespace

GridFn rl_derivative(const GridFn& f, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        fail_validation("AlphaOutOfRange", "Riemann-Liouville derivative needs alpha in (0,1)");
    return rl_derivative_core(f, alpha, frac_integral(f, 1.0 - alpha));
}

GridFn detail::rl_derivative_split(const GridFn& f, double alpha, double origin_exponent) {
    if (!(alpha > 0.0 && alpha < 1.0))
        fail_validation("AlphaOutOfRange", "Riemann-Liouville derivative needs alpha in (0,1)");
    const double p = origin_exponent;
    if (!(p > alpha - 1.0)) fail_validation("GammaOutOfRange", "origin exponent must exceed alpha-1");
    const TimeGrid& g = f.grid();
    const int d = f.dim();
    const double t1 = g.t(1);
    const double t1p = std::pow(t1, p);

    // remainder f - c t^p vanishes (to leading order) at the origin
    GridFn rem = f;
    std::vector<double> cs(d);
    for (int c = 0; c < d; ++c) cs[c] = f.value(1)[c] / t1p;
    for (std::size_t i = f.first_node(); i < g.size(); ++i) {
        double tp = std::pow(g.t(i), p);
        auto v = rem.value(i);
        for (int c = 0; c < d; ++c) v[c] -= cs[c] * tp;
    }
    GridFn D = rl_derivative_core(rem, alpha, frac_integral(rem, 1.0 - alpha));

    const double power_rule = std::tgamma(p + 1.0) / std::tgamma(p + 1.0 - alpha);
    GridFn r(g, d, D.weight());
    for (std::size_t i = 1; i < g.size(); ++i) {
        double tpa = std::pow(g.t(i), p - alpha);
        auto out = r.value(i);
        auto in = D.value(i);
        for (int c = 0; c < d; ++c) out[c] = in[c] + cs[c] * power_rule * tpa;
    }
    return r;
}

GridFn caputo_derivative(const GridFn& f, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        fail_validation("AlphaOutOfRange", "Caputo derivative needs alpha in (0,1)");
    if (!f.has_origin_value())
        fail_validation("MissingInitialValue", "Caputo route needs the value at t0");
    GridFn shifted = f;
    for (std::size_t i = 0; i < f.grid().size(); ++i) {
        auto v = shifted.value(i);
        for (int c = 0; c < f.dim(); ++c) v[c] -= f.value(0)[c];
    }
    GridFn D = rl_derivative(shifted, alpha);
    // Caputo of absolutely continuous data is bounded with limit 0 at t0
    GridFn r(f.grid(), f.dim(), 0.0);
    for (std::size_t i = 1; i < f.grid().size(); ++i) {
        auto out = r.value(i);
        auto in = D.value(i);
        for (int c = 0; c < f.dim(); ++c) out[c] = in[c];
    }
    return r;
}

namespace {

GridFn grid_diff(const GridFn& f) {
    const TimeGrid& g = f.grid();
    const int d = f.dim();
    GridFn r(g, d, f.weight());
    for (std::size_t i = 2; i < g.size(); ++i) {
        double h = g.t(i) - g.t(i - 1);
        auto out = r.value(i);
        for (int c = 0; c < d; ++c) out[c] = (f.value(i)[c] - f.value(i - 1)[c]) / h;
    }
    if (g.size() >= 4) {
        auto out = r.value(1);
        for (int c = 0; c < d; ++c)
            out[c] = three_point_deriv(g.t(1), g.t(2), g.t(3), f.value(1)[c], f.value(2)[c],
                                       f.value(3)[c]);
    } else {
        auto out = r.value(1);
        for (int c = 0; c < d; ++c) out[c] = (f.value(2)[c] - f.value(1)[c]) / (g.t(2) - g.t(1));
    }
    if (f.has_origin_value() && g.size() >= 4) {
        auto out = r.value(0);
        for (int c = 0; c < d; ++c)
            out[c] = three_point_deriv(g.t(0), g.t(1), g.t(2), f.value(0)[c], f.value(1)[c],
                                       f.value(2)[c]);
    }
    return r;
}

} // namespace

GridFn sequential_derivative(const GridFn& f, const SequentialOrders& orders) {
    GridFn cur = f;
    for (double eta : orders.etas) {
        cur = (eta == 1.0) ? grid_diff(cur) : rl_derivative(cur, eta);
        for (std::size_t i = 1; i < cur.grid().size(); ++i)
            if (!std::isfinite(cur.node_norm(i)))
                fail_solver("CompositionBlowup",
                            "sequential composition produced non-finite interior values");
    }
    return cur;
}

} // namespace fraccont
