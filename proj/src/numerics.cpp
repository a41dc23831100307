#include "fraccont/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>

namespace fraccont::num {

long double rgamma(long double x) {
    if (x > 0.5L) {
        if (x > 1755.0L) return 0.0L; // Gamma overflows; reciprocal underflows
        return 1.0L / std::tgamma(x);
    }
    // reflection: 1/Gamma(x) = Gamma(1-x) sin(pi x)/pi, with sin(pi x)
    // reduced through the integer part to keep the zeros exact
    long double n = std::floor(x);
    long double r = x - n; // in [0,1)
    long double s = std::sin(std::numbers::pi_v<long double> * r);
    if (static_cast<long long>(n) % 2 != 0) s = -s;
    if (s == 0.0L) return 0.0L;
    long double lg = std::lgamma(1.0L - x);
    if (lg > 11300.0L) { // Gamma(1-x) overflows even long double
        return std::copysign(std::numeric_limits<long double>::infinity(), s);
    }
    return s * std::exp(lg) / std::numbers::pi_v<long double>;
}

namespace {

GaussLegendre build_gauss_legendre(int order) {
    GaussLegendre rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const long double pi = std::numbers::pi_v<long double>;
    for (int i = 0; i < (order + 1) / 2; ++i) {
        // Newton from the Chebyshev-angle initial guess
        long double x = std::cos(pi * (i + 0.75L) / (order + 0.5L));
        long double pp = 0.0L;
        for (int iter = 0; iter < 100; ++iter) {
            long double p0 = 1.0L, p1 = 0.0L;
            for (int j = 0; j < order; ++j) {
                long double p2 = p1;
                p1 = p0;
                p0 = ((2.0L * j + 1.0L) * x * p1 - j * p2) / (j + 1.0L);
            }
            pp = order * (x * p0 - p1) / (x * x - 1.0L);
            long double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-19L * (1.0L + std::abs(x))) break;
        }
        long double w = 2.0L / ((1.0L - x * x) * pp * pp);
        rule.nodes[i] = -x;
        rule.weights[i] = w;
        rule.nodes[order - 1 - i] = x;
        rule.weights[order - 1 - i] = w;
    }
    return rule;
}

} // namespace

const GaussLegendre& gauss_legendre(int order) {
    static std::mutex mu;
    static std::map<int, GaussLegendre> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, build_gauss_legendre(order)).first;
    return it->second;
}

TanhSinhTable tanh_sinh_table(int levels) {
    const double pi_half = std::numbers::pi / 2.0;
    const double tmax = 3.8; // weights below ~1e-300 beyond this
    const int n = (1 << levels);
    const double h = tmax / n;
    TanhSinhTable tab;
    tab.x.reserve(2 * n + 1);
    tab.one_minus_x.reserve(2 * n + 1);
    tab.w.reserve(2 * n + 1);
    for (int k = -n; k <= n; ++k) {
        double t = k * h;
        double u = pi_half * std::sinh(t);
        double ch = std::cosh(u);
        double w = pi_half * std::cosh(t) / (ch * ch);
        if (w < 1e-320) continue;
        // x = (1+tanh u)/2 and 1-x, both evaluated without cancellation
        double e = std::exp(-2.0 * std::abs(u));
        double near = e / (1.0 + e); // distance to the closer endpoint, in (0,1/2]
        tab.x.push_back(u >= 0.0 ? 1.0 - near : near);
        tab.one_minus_x.push_back(u >= 0.0 ? near : 1.0 - near);
        tab.w.push_back(0.5 * w * h);
    }
    return tab;
}

double tanh_sinh_01(const std::function<double(double, double)>& f, int levels) {
    static std::mutex mu;
    static std::map<int, TanhSinhTable> cache;
    const TanhSinhTable* tab;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(levels);
        if (it == cache.end()) it = cache.emplace(levels, tanh_sinh_table(levels)).first;
        tab = &it->second;
    }
    long double sum = 0.0L;
    for (std::size_t k = 0; k < tab->x.size(); ++k) {
        double v = f(tab->x[k], tab->one_minus_x[k]);
        if (std::isfinite(v)) sum += static_cast<long double>(tab->w[k]) * v;
    }
    return static_cast<double>(sum);
}

int thread_cap() {
    static int cap = [] {
        int hw = (int)std::thread::hardware_concurrency();
        int dflt = std::clamp(hw, 1, 8);
        const char* env = std::getenv("FRACCONT_THREADS");
        if (!env || !*env) return dflt;
        int v = std::atoi(env);
        return (v <= 0) ? dflt : std::min(v, dflt);
    }();
    return cap;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    int threads = std::min<std::size_t>(thread_cap(), n);
    if (threads <= 1 || n < 4) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    for (auto& th : pool) th.join();
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double denom = n * sxx - sx * sx;
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

} // namespace fraccont::num
