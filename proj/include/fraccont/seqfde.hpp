#pragma once

#include "fraccont/abel.hpp"
#include "fraccont/grid.hpp"

#include <functional>
#include <vector>

namespace fraccont::seqfde {

// D^{sigma_k} y + sum_j p_j D^{sigma_{k-j}} y + p_k y = f with initial data
// D^{sigma_j - 1} y(0) = b_j.
struct SequentialProblem {
    SequentialOrders orders; // eta_1..eta_k
    std::vector<std::function<double(double)>> pcoeffs;
    GridFn f;
    std::vector<double> bvals;
    double eta0 = 0.3;           // declared lower bound on the eta_j
    double b_lo = -100.0, b_hi = 100.0; // declared box for the b_j
};

// Rewrite as the second-kind Abel equation for psi = D^{sigma_k} y.  The
// returned problem is in the solver's u = g + Int K convention, so the
// assembled kernel is the negated coefficient sum
//   K(t,s,z,psi) = -[ p_k(t) (t-s)^{sigma_k - eta_k}
//                     + sum_{j<k} p_{k-j}(t) (t-s)^{sigma_k - sigma_j - eta_k} ]
//                  psi / Gamma(sigma_k)
// against the weight (t-s)^{sigma_k - 1}, with forcing
//   g(t) = f(t) - p_k(t) sum_j b_j t^{sigma_j-1}/Gamma(sigma_j)
//          - sum_{j<k} p_{k-j}(t) sum_{l>j} b_l t^{sigma_l-sigma_j-1}/Gamma(sigma_l-sigma_j).
abel::AbelProblem reduce_to_abel(const SequentialProblem& sp, double gamma);

struct SequentialSolution {
    GridFn psi; // D^{sigma_k} y
    GridFn y;
};

// psi by Picard on the reduced problem, then
// y = sum_j b_j t^{sigma_j-1}/Gamma(sigma_j) + J^{sigma_k} psi.
SequentialSolution solve_sequential(const SequentialProblem& sp, double gamma, double tol);

// midpoint of the admissible weight interval (1 - eta0, 1)
double default_gamma(const SequentialProblem& sp);

} // namespace fraccont::seqfde
