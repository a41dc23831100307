#pragma once

#include <functional>
#include <span>
#include <vector>

namespace fraccont {

// Strictly increasing time mesh 0 = t0 < t1 < ... < tN = T.
class TimeGrid {
public:
    TimeGrid() = default;
    explicit TimeGrid(std::vector<double> nodes);

    static TimeGrid uniform(double T, int n);
    // graded mesh t_i = T (i/n)^r, the standard choice for weakly singular kernels
    static TimeGrid graded(double T, int n, double r);

    const std::vector<double>& nodes() const { return nodes_; }
    double t(std::size_t i) const { return nodes_[i]; }
    std::size_t size() const { return nodes_.size(); } // N+1
    std::size_t cells() const { return nodes_.size() - 1; }
    double horizon() const { return nodes_.back(); }
    bool is_uniform() const { return uniform_; }

    bool operator==(const TimeGrid& o) const { return nodes_ == o.nodes_; }

private:
    std::vector<double> nodes_;
    bool uniform_ = false;
};

// Vector-valued function sampled on a TimeGrid.  weight > 0 marks C_gamma-type
// data: the value at t0 is not stored (the function may blow up like t^-weight)
// and operators extrapolate the first cell with that power behaviour.
class GridFn {
public:
    GridFn() = default;
    GridFn(TimeGrid grid, int dim, double weight = 0.0);

    static GridFn constant(const TimeGrid& g, double value);
    static GridFn sample(const TimeGrid& g, const std::function<double(double)>& f,
                         double weight = 0.0);
    static GridFn sample_vec(const TimeGrid& g, int dim,
                             const std::function<void(double, std::span<double>)>& f,
                             double weight = 0.0);

    const TimeGrid& grid() const { return grid_; }
    int dim() const { return dim_; }
    double weight() const { return weight_; }
    bool has_origin_value() const { return weight_ == 0.0; }
    std::size_t first_node() const { return weight_ > 0.0 ? 1 : 0; }

    std::span<double> value(std::size_t i) { return {values_.data() + i * dim_, (std::size_t)dim_}; }
    std::span<const double> value(std::size_t i) const {
        return {values_.data() + i * dim_, (std::size_t)dim_};
    }
    // scalar accessors for dim-1 functions
    double operator[](std::size_t i) const { return values_[i * dim_]; }
    double& operator[](std::size_t i) { return values_[i * dim_]; }

    std::vector<double>& raw() { return values_; }
    const std::vector<double>& raw() const { return values_; }

    double node_norm(std::size_t i) const; // Euclidean norm of value(i)

private:
    TimeGrid grid_;
    int dim_ = 1;
    double weight_ = 0.0;
    std::vector<double> values_;
};

// norms on grid functions
double cgamma_norm(const GridFn& f, double gamma);          // sup_i t_i^gamma |v_i|
double grid_sup_norm(const GridFn& f);                      // sup over stored nodes
double grid_lp_norm(const GridFn& f, double p);             // piecewise-linear L^p
double grid_l2_distance(const GridFn& a, const GridFn& b);  // ||a-b||_{L^2}

// Miller-Ross sequential orders eta_1..eta_k with partial sums sigma_j.
struct SequentialOrders {
    std::vector<double> etas;

    SequentialOrders() = default;
    explicit SequentialOrders(std::vector<double> e);
    std::vector<double> sigmas() const;
    double sigma_total() const;
};

// Riemann-Liouville integral J^alpha by product trapezoidal quadrature:
// piecewise-linear data against exactly integrated (t-s)^{alpha-1} weights.
GridFn frac_integral(const GridFn& f, double alpha);

// Riemann-Liouville derivative D^alpha = d/dt J^{1-alpha}, alpha in (0,1).
// Grid differencing with an exact-on-constants correction so that constants
// map to c t^-alpha / Gamma(1-alpha).
GridFn rl_derivative(const GridFn& f, double alpha);

// Caputo derivative via D^alpha(f - f(0)).
GridFn caputo_derivative(const GridFn& f, double alpha);

// Composition D^{eta_k} ... D^{eta_1}; eta_j = 1 uses plain grid differencing.
GridFn sequential_derivative(const GridFn& f, const SequentialOrders& orders);

namespace detail {
// Cell coefficients for Int_a^b u^{alpha-1} f(u) du with f linear between the
// endpoint values (left at u=b, right at u=a in the convolution orientation):
// contribution = coef_left*f_left + coef_right*f_right.
struct CellCoef {
    double left, right;
};
CellCoef power_cell(double a, double b, double alpha);
CellCoef power_cell_cached(double a, double b, double alpha, double a_pow, double b_pow);
CellCoef log_power_cell(double a, double b, double alpha); // weight u^{alpha-1} ln u

// J^alpha with the first cell handled by the power model f ~ f(t1)(s/t1)^p,
// p > -1.  Used for data that behaves like t^p at the origin (p = -gamma for
// C_gamma data).
GridFn frac_integral_model(const GridFn& f, double alpha, double start_exponent);

// D^alpha for data behaving like c t^p at the origin (p > alpha - 1): the
// leading power is split off and differentiated by the power rule
// D^alpha t^p = Gamma(p+1) t^{p-alpha} / Gamma(p+1-alpha); only the smoother
// remainder goes through grid differencing.
GridFn rl_derivative_split(const GridFn& f, double alpha, double origin_exponent);
} // namespace detail

} // namespace fraccont
