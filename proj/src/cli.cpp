#include "fraccont/cli.hpp"

#include "fraccont/abel.hpp"
#include "fraccont/contlab.hpp"
#include "fraccont/csv.hpp"
#include "fraccont/errors.hpp"
#include "fraccont/grid.hpp"
#include "fraccont/illposed.hpp"
#include "fraccont/mlf.hpp"
#include "fraccont/seqfde.hpp"
#include "fraccont/specdiff.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <sstream>

namespace fraccont::cli {

namespace {

TimeGrid make_grid(double T, int nodes, double graded) {
    return graded > 1.0 ? TimeGrid::graded(T, nodes, graded) : TimeGrid::uniform(T, nodes);
}

struct MlfOpts {
    double alpha = 0.0, beta = 1.0, z = 0.0, tol = 1e-12;
    bool deriv_z = false;
};

struct AbelOpts {
    double lambda = -1.0, alpha = 0.5, T = 1.0, tol = 1e-10, gconst = 1.0, graded = 0.0;
    int nodes = 256;
    std::string method = "picard";
    std::string out;
};

struct SeqOpts {
    std::vector<double> etas, pcoeffs, bvals;
    double fconst = 0.0, T = 1.0, gamma = 0.0, tol = 1e-10, graded = 0.0, eta0 = 0.0;
    int nodes = 1024;
    std::string out, psi_out;
};

struct DiffOpts {
    double L = 1.0, alpha = 0.5, beta = 1.0, T = 1.0;
    int modes = 64, nodes = 256, nx = 64;
    std::vector<double> theta, forcing;
    int theta_mode = 0;
    std::string out, physical;
};

struct SweepOpts {
    std::string target = "spectral";
    double alpha = 0.5, h0 = 0.1, s = 1.0, rho = 0.0, beta = 1.0, beta1 = 0.0, lambda = -1.0,
           gamma = 0.0, T = 1.0, tol = 1e-10;
    int levels = 6, nodes = 256;
    std::vector<double> lambdas, theta;
    std::string out;
    // monte carlo extras
    int trials = 64;
    double width = 0.05, lambda_moment = 2.0;
    std::string sampler = "uniform";
    std::uint64_t seed = 1;
};

struct IllOpts {
    std::string example = "halfline";
    int nmin = 2, nmax = 20;
    double a = 1.0, alpha = 0.5;
    std::string out;
};

contlab::SweepConfig to_config(const SweepOpts& o) {
    contlab::SweepConfig cfg;
    if (o.target == "spectral") cfg.target = contlab::SweepTarget::SpectralHomogeneous;
    else if (o.target == "forced") cfg.target = contlab::SweepTarget::SpectralForced;
    else if (o.target == "abel") cfg.target = contlab::SweepTarget::AbelLinear;
    else if (o.target == "seqfde") cfg.target = contlab::SweepTarget::SeqFde;
    else fail_validation("GridMismatch", "unknown sweep target: " + o.target);
    cfg.alpha = o.alpha;
    cfg.h0 = o.h0;
    cfg.levels = o.levels;
    cfg.T = o.T;
    cfg.nodes = o.nodes;
    cfg.solver_tol = o.tol;
    cfg.beta = o.beta;
    cfg.beta1 = (o.beta1 > 0.0) ? o.beta1 : o.beta;
    cfg.s = o.s;
    cfg.rho = o.rho;
    if (!o.lambdas.empty()) cfg.lambdas = o.lambdas;
    if (!o.theta.empty()) cfg.theta = o.theta;
    if (cfg.theta.size() != cfg.lambdas.size())
        fail_validation("LengthMismatch", "theta and lambdas must have equal length");
    cfg.lambda = o.lambda;
    cfg.gamma = o.gamma;
    cfg.norm = (cfg.target == contlab::SweepTarget::AbelLinear ||
                cfg.target == contlab::SweepTarget::SeqFde)
                   ? contlab::NormKind::CgammaSup
                   : contlab::NormKind::Hrho;
    return cfg;
}

int dispatch(CLI::App& app, const MlfOpts& mo, const AbelOpts& ao, const SeqOpts& so,
             const DiffOpts& do_, const SweepOpts& swo, const IllOpts& io) {
    if (app.got_subcommand("mlf")) {
        double v = mo.deriv_z ? mlf::ml_deriv_z(mo.alpha, mo.z)
                              : mlf::ml_eval(mlf::MLQuery(mo.alpha, mo.beta, mo.z, mo.tol));
        std::cout << csv::format_double(v) << "\n";
        return 0;
    }
    if (app.got_subcommand("abel")) {
        TimeGrid grid = make_grid(ao.T, ao.nodes, ao.graded);
        GridFn g = GridFn::constant(grid, ao.gconst);
        GridFn u;
        if (ao.method == "resolvent") {
            u = abel::solve_linear_resolvent(g, ao.lambda, ao.alpha);
        } else if (ao.method == "picard") {
            abel::AbelProblem p;
            double c = ao.lambda / std::tgamma(ao.alpha);
            p.kernel = abel::KernelSpec::scalar(
                [c](double, double, double, std::span<const double>, double w) { return c * w; },
                std::abs(c), 0.0, {});
            p.g = g;
            p.alpha = ao.alpha;
            p.alpha0 = std::min(0.05, ao.alpha);
            p.alpha1 = std::max(0.999, ao.alpha);
            u = abel::solve_second_kind(p, ao.tol, 400);
        } else {
            fail_validation("GridMismatch", "method must be picard or resolvent");
        }
        if (!ao.out.empty()) {
            std::ostringstream os;
            csv::write_gridfn(os, u);
            csv::write_file(ao.out, os.str());
        }
        std::cout << "u(T) = " << csv::format_double(u[grid.cells()]) << "\n";
        return 0;
    }
    if (app.got_subcommand("seqfde")) {
        TimeGrid grid = make_grid(so.T, so.nodes, so.graded);
        seqfde::SequentialProblem sp;
        sp.orders = SequentialOrders(so.etas);
        for (double c : so.pcoeffs) sp.pcoeffs.push_back([c](double) { return c; });
        sp.f = GridFn::constant(grid, so.fconst);
        sp.bvals = so.bvals;
        double eta_min = *std::min_element(so.etas.begin(), so.etas.end());
        sp.eta0 = so.eta0 > 0.0 ? so.eta0 : 0.9 * eta_min;
        double gamma = so.gamma > 0.0 ? so.gamma : seqfde::default_gamma(sp);
        auto sol = seqfde::solve_sequential(sp, gamma, so.tol);
        if (!so.out.empty()) {
            std::ostringstream os;
            csv::write_gridfn(os, sol.y);
            csv::write_file(so.out, os.str());
        }
        if (!so.psi_out.empty()) {
            std::ostringstream os;
            csv::write_gridfn(os, sol.psi);
            csv::write_file(so.psi_out, os.str());
        }
        std::cout << "y(T) = " << csv::format_double(sol.y[grid.cells()]) << "\n";
        return 0;
    }
    if (app.got_subcommand("diffusion")) {
        specdiff::SpectralOperator op = specdiff::dirichlet_laplacian_1d(do_.L, do_.modes);
        TimeGrid grid = TimeGrid::uniform(do_.T, do_.nodes);
        specdiff::ModeVector theta(do_.modes, 0.0);
        if (do_.theta_mode > 0) {
            if (do_.theta_mode > do_.modes)
                fail_validation("LengthMismatch", "theta-mode beyond the truncation");
            theta[do_.theta_mode - 1] = 1.0;
        }
        for (std::size_t p = 0; p < do_.theta.size() && p < theta.size(); ++p)
            theta[p] = do_.theta[p];
        specdiff::ModeTrajectory traj;
        if (!do_.forcing.empty()) {
            specdiff::ModeVector fm(do_.modes, 0.0);
            for (std::size_t p = 0; p < do_.forcing.size() && p < fm.size(); ++p)
                fm[p] = do_.forcing[p];
            specdiff::ModeTrajectory f;
            f.grid = grid;
            f.frames.assign(grid.size(), fm);
            traj = specdiff::solve_forced(f, op, do_.alpha, do_.beta);
            bool have_theta = false;
            for (double th : theta) have_theta = have_theta || th != 0.0;
            if (have_theta) {
                auto hom = specdiff::solve_homogeneous(theta, op, do_.alpha, do_.beta, grid);
                for (std::size_t i = 0; i < grid.size(); ++i)
                    for (int p = 0; p < do_.modes; ++p) traj.frames[i][p] += hom.frames[i][p];
            }
        } else {
            traj = specdiff::solve_homogeneous(theta, op, do_.alpha, do_.beta, grid);
        }
        if (!do_.out.empty()) {
            std::ostringstream os;
            csv::write_trajectory(os, traj);
            csv::write_file(do_.out, os.str());
        }
        if (!do_.physical.empty()) {
            std::ostringstream os;
            csv::write_physical(os, traj, do_.L, do_.nx);
            csv::write_file(do_.physical, os.str());
        }
        specdiff::ModeVector last = traj.frames.back();
        std::cout << "||u(T)||_H0 = " << csv::format_double(specdiff::hs_norm(last, op, 0.0))
                  << "\n";
        return 0;
    }
    if (app.got_subcommand("sweep")) {
        contlab::ContinuityReport rep = contlab::sweep_orders(to_config(swo));
        if (!swo.out.empty()) csv::write_file(swo.out, csv::to_string_report(rep));
        std::cout << "slope = " << csv::format_double(rep.slope)
                  << ", predicted = " << csv::format_double(rep.predicted)
                  << ", verdict = " << (rep.pass ? "pass" : "fail") << "\n";
        return rep.pass ? 0 : 1;
    }
    if (app.got_subcommand("montecarlo")) {
        contlab::RandomOrderConfig rc;
        if (swo.sampler == "uniform") rc.sampler = contlab::RandomOrderConfig::Sampler::UniformInterval;
        else if (swo.sampler == "twopoint") rc.sampler = contlab::RandomOrderConfig::Sampler::TwoPoint;
        else if (swo.sampler == "pointmass") rc.sampler = contlab::RandomOrderConfig::Sampler::PointMass;
        else fail_validation("GridMismatch", "unknown sampler: " + swo.sampler);
        rc.halfwidth = swo.width;
        rc.trials = swo.trials;
        rc.lambdaMoment = swo.lambda_moment;
        rc.seed = swo.seed;
        contlab::ContinuityReport rep = contlab::monte_carlo_orders(rc, to_config(swo));
        if (!swo.out.empty()) csv::write_file(swo.out, csv::to_string_report(rep));
        std::cout << "mean = " << csv::format_double(rep.mean_discrepancy)
                  << ", moment = " << csv::format_double(rep.moment)
                  << ", verdict = " << (rep.pass ? "pass" : "fail") << "\n";
        return rep.pass ? 0 : 1;
    }
    if (app.got_subcommand("illposed")) {
        std::vector<illposed::InstabilityWitness> ws;
        if (io.example == "halfline") ws = illposed::abel_halfline_family(io.nmin, io.nmax);
        else if (io.example == "expmult")
            ws = illposed::exp_multiplier_family(io.nmin, io.nmax, io.a, io.alpha);
        else fail_validation("GridMismatch", "example must be halfline or expmult");
        std::ostringstream os;
        csv::write_witnesses(os, ws);
        if (!io.out.empty()) csv::write_file(io.out, os.str());
        else std::cout << os.str();
        return 0;
    }
    std::cerr << app.help() << "\n";
    return 2;
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"fraccont: fractional-order continuity laboratory"};
    app.set_config("--config", "", "plain key = value configuration file");
    app.require_subcommand(0, 1);

    MlfOpts mo;
    auto* mlf_cmd = app.add_subcommand("mlf", "evaluate the two-parameter Mittag-Leffler function");
    mlf_cmd->add_option("--alpha", mo.alpha, "first parameter, > 0")->required();
    mlf_cmd->add_option("--beta", mo.beta, "second parameter");
    mlf_cmd->add_option("--z", mo.z, "real argument");
    mlf_cmd->add_option("--tol", mo.tol, "relative tolerance");
    mlf_cmd->add_flag("--deriv-z", mo.deriv_z, "print d/dz E_{alpha,1}(z) instead");

    AbelOpts ao;
    auto* abel_cmd = app.add_subcommand("abel", "solve the linear second-kind Abel equation");
    abel_cmd->add_option("--lambda", ao.lambda, "kernel coefficient");
    abel_cmd->add_option("--alpha", ao.alpha, "order")->required();
    abel_cmd->add_option("--T", ao.T, "horizon");
    abel_cmd->add_option("--nodes", ao.nodes, "grid cells");
    abel_cmd->add_option("--graded", ao.graded, "mesh grading exponent (<=1: uniform)");
    abel_cmd->add_option("--g", ao.gconst, "constant forcing value");
    abel_cmd->add_option("--method", ao.method, "picard | resolvent");
    abel_cmd->add_option("--tol", ao.tol, "Picard increment tolerance");
    abel_cmd->add_option("--out", ao.out, "output CSV path");

    SeqOpts so;
    auto* seq_cmd = app.add_subcommand("seqfde", "solve a sequential-derivative FDE");
    seq_cmd->add_option("--etas", so.etas, "orders eta_1..eta_k")->required()->delimiter(',');
    seq_cmd->add_option("--pcoeffs", so.pcoeffs, "constant coefficients p_1..p_k")
        ->required()
        ->delimiter(',');
    seq_cmd->add_option("--bvals", so.bvals, "initial data b_1..b_k")->required()->delimiter(',');
    seq_cmd->add_option("--f", so.fconst, "constant forcing");
    seq_cmd->add_option("--T", so.T, "horizon");
    seq_cmd->add_option("--nodes", so.nodes, "grid cells");
    seq_cmd->add_option("--graded", so.graded, "mesh grading exponent (<=1: uniform)");
    seq_cmd->add_option("--gamma", so.gamma, "solution space weight (0: midpoint default)");
    seq_cmd->add_option("--eta0", so.eta0, "declared lower bound on the orders");
    seq_cmd->add_option("--tol", so.tol, "Picard increment tolerance");
    seq_cmd->add_option("--out", so.out, "output CSV for y");
    seq_cmd->add_option("--psi-out", so.psi_out, "output CSV for psi");

    DiffOpts dopt;
    auto* diff_cmd = app.add_subcommand("diffusion", "spectral time-fractional diffusion");
    diff_cmd->add_option("--L", dopt.L, "interval length");
    diff_cmd->add_option("--modes", dopt.modes, "spectrum truncation P");
    diff_cmd->add_option("--alpha", dopt.alpha, "time order")->required();
    diff_cmd->add_option("--beta", dopt.beta, "operator power");
    diff_cmd->add_option("--T", dopt.T, "horizon");
    diff_cmd->add_option("--nodes", dopt.nodes, "time cells");
    diff_cmd->add_option("--theta", dopt.theta, "initial mode coefficients")->delimiter(',');
    diff_cmd->add_option("--theta-mode", dopt.theta_mode, "unit initial datum e_k");
    diff_cmd->add_option("--forcing", dopt.forcing, "constant forcing mode coefficients")
        ->delimiter(',');
    diff_cmd->add_option("--out", dopt.out, "trajectory CSV path");
    diff_cmd->add_option("--physical", dopt.physical, "physical-space CSV path");
    diff_cmd->add_option("--nx", dopt.nx, "x samples for the physical CSV");

    SweepOpts swo;
    auto add_sweep_opts = [&](CLI::App* cmd) {
        cmd->add_option("--target", swo.target, "spectral | forced | abel | seqfde");
        cmd->add_option("--alpha", swo.alpha, "base order");
        cmd->add_option("--h0", swo.h0, "largest perturbation");
        cmd->add_option("--levels", swo.levels, "dyadic levels M");
        cmd->add_option("--s", swo.s, "initial-data smoothness");
        cmd->add_option("--rho", swo.rho, "measurement smoothness");
        cmd->add_option("--beta", swo.beta, "operator power");
        cmd->add_option("--beta1", swo.beta1, "band upper edge (default: beta)");
        cmd->add_option("--lambda", swo.lambda, "Abel kernel coefficient");
        cmd->add_option("--gamma", swo.gamma, "C_gamma weight");
        cmd->add_option("--T", swo.T, "horizon");
        cmd->add_option("--nodes", swo.nodes, "grid cells");
        cmd->add_option("--lambdas", swo.lambdas, "operator eigenvalues")->delimiter(',');
        cmd->add_option("--theta", swo.theta, "initial mode coefficients")->delimiter(',');
        cmd->add_option("--tol", swo.tol, "solver tolerance");
        cmd->add_option("--out", swo.out, "report CSV path");
    };
    auto* sweep_cmd = app.add_subcommand("sweep", "dyadic order-continuity sweep");
    add_sweep_opts(sweep_cmd);

    auto* mc_cmd = app.add_subcommand("montecarlo", "random-order Monte Carlo study");
    add_sweep_opts(mc_cmd);
    mc_cmd->add_option("--trials", swo.trials, "number of trials (>= 16)");
    mc_cmd->add_option("--width", swo.width, "sampler halfwidth");
    mc_cmd->add_option("--sampler", swo.sampler, "uniform | twopoint | pointmass");
    mc_cmd->add_option("--lambda-moment", swo.lambda_moment, "moment index lambda");
    mc_cmd->add_option("--seed", swo.seed, "RNG seed");

    IllOpts io;
    auto* ill_cmd = app.add_subcommand("illposed", "closed-form instability witnesses");
    ill_cmd->add_option("--example", io.example, "halfline | expmult");
    ill_cmd->add_option("--nmin", io.nmin, "first index");
    ill_cmd->add_option("--nmax", io.nmax, "last index");
    ill_cmd->add_option("--a", io.a, "multiplier constant");
    ill_cmd->add_option("--alpha", io.alpha, "base order");
    ill_cmd->add_option("--out", io.out, "witness CSV path");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        return dispatch(app, mo, ao, so, dopt, swo, io);
    } catch (const ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const SolverError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace fraccont::cli
