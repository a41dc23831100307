#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace fraccont::num {

// 1/Gamma(x) in long double, entire in x (zero at the poles 0, -1, -2, ...).
long double rgamma(long double x);

// Fixed-order Gauss-Legendre rule on [-1,1], computed once per order and cached.
struct GaussLegendre {
    std::vector<long double> nodes;
    std::vector<long double> weights;
};
const GaussLegendre& gauss_legendre(int order);

// Tanh-sinh quadrature of f over (0,1).  The integrand receives both x and
// 1-x so endpoint-singular factors (x^{-g}, (1-x)^{-a}) can be evaluated
// without cancellation.  Handles integrable endpoint singularities.
double tanh_sinh_01(const std::function<double(double x, double one_minus_x)>& f,
                    int levels = 7);

// node/weight table for the same rule, for callers that amortize it over many
// integrands
struct TanhSinhTable {
    std::vector<double> x, one_minus_x, w;
};
TanhSinhTable tanh_sinh_table(int levels);

// SplitMix64: the named, seedable 64-bit generator used for every randomized
// component.  Stream splitting: stream(seed, k) seeds an independent sequence
// for trial index k as splitmix(seed) xor golden*(k+1), then steps normally.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1) with 53 random bits; bit-identical across platforms
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    static SplitMix64 stream(std::uint64_t seed, std::uint64_t index) {
        SplitMix64 root(seed);
        std::uint64_t base = root.next();
        return SplitMix64(base ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    }
};

// Least-squares line fit y = slope*x + intercept.
struct LineFit {
    double slope;
    double intercept;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Internal parallelism cap: FRACCONT_THREADS env var, 0/unset = hardware
// default (clamped).  Used only for independent per-mode work; results do not
// depend on the thread count.
int thread_cap();
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace fraccont::num
