#include "fraccont/csv.hpp"

#include "fraccont/errors.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace fraccont::csv {

namespace {

double parse_double(const std::string& tok) {
    const char* b = tok.data();
    const char* e = b + tok.size();
    double v = 0.0;
    auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc{}) fail_validation("GridMismatch", "malformed numeric field: " + tok);
    return v;
}

std::vector<std::string> split(const std::string& line, char sep = ',') {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = line.find(sep, pos);
        if (next == std::string::npos) {
            out.push_back(line.substr(pos));
            break;
        }
        out.push_back(line.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_gridfn(std::ostream& os, const GridFn& f) {
    os << "t";
    for (int c = 1; c <= f.dim(); ++c) os << ",v" << c;
    os << "\n";
    // every node is written; weighted functions carry a zero placeholder at t0
    for (std::size_t i = 0; i < f.grid().size(); ++i) {
        os << format_double(f.grid().t(i));
        for (int c = 0; c < f.dim(); ++c) os << "," << format_double(f.value(i)[c]);
        os << "\n";
    }
}

GridFn read_gridfn(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) fail_validation("GridMismatch", "empty CSV");
    std::size_t dim = split(line).size() - 1;
    std::vector<double> nodes;
    std::vector<double> values;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto toks = split(line);
        if (toks.size() != dim + 1) fail_validation("GridMismatch", "ragged CSV row");
        nodes.push_back(parse_double(toks[0]));
        for (std::size_t c = 1; c < toks.size(); ++c) values.push_back(parse_double(toks[c]));
    }
    GridFn f(TimeGrid(nodes), (int)dim, 0.0);
    std::copy(values.begin(), values.end(), f.raw().begin());
    return f;
}

void write_trajectory(std::ostream& os, const specdiff::ModeTrajectory& traj) {
    std::size_t P = traj.frames.empty() ? 0 : traj.frames.front().size();
    os << "t";
    for (std::size_t p = 1; p <= P; ++p) os << ",c" << p;
    os << "\n";
    for (std::size_t i = 0; i < traj.grid.size(); ++i) {
        os << format_double(traj.grid.t(i));
        for (std::size_t p = 0; p < P; ++p) os << "," << format_double(traj.frames[i][p]);
        os << "\n";
    }
}

specdiff::ModeTrajectory read_trajectory(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) fail_validation("GridMismatch", "empty CSV");
    std::size_t P = split(line).size() - 1;
    std::vector<double> nodes;
    specdiff::ModeTrajectory traj;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto toks = split(line);
        if (toks.size() != P + 1) fail_validation("GridMismatch", "ragged CSV row");
        nodes.push_back(parse_double(toks[0]));
        specdiff::ModeVector frame(P);
        for (std::size_t p = 0; p < P; ++p) frame[p] = parse_double(toks[p + 1]);
        traj.frames.push_back(std::move(frame));
    }
    traj.grid = TimeGrid(nodes);
    return traj;
}

void write_physical(std::ostream& os, const specdiff::ModeTrajectory& traj, double L, int nx) {
    os << "t,x,u\n";
    for (std::size_t i = 0; i < traj.grid.size(); ++i) {
        auto u = specdiff::physical_samples(traj.frames[i], L, nx);
        for (int ix = 0; ix <= nx; ++ix)
            os << format_double(traj.grid.t(i)) << "," << format_double(L * ix / nx) << ","
               << format_double(u[ix]) << "\n";
    }
}

void write_report(std::ostream& os, const contlab::ContinuityReport& rep) {
    os << "h,discrepancy\n";
    for (auto& [h, d] : rep.rows) os << format_double(h) << "," << format_double(d) << "\n";
    os << "slope=" << format_double(rep.slope) << ",predicted=" << format_double(rep.predicted)
       << ",constant=" << format_double(rep.fitted_constant)
       << ",verdict=" << (rep.pass ? "pass" : "fail");
    if (rep.monte_carlo)
        os << ",mean=" << format_double(rep.mean_discrepancy)
           << ",moment=" << format_double(rep.moment);
    os << "\n";
}

contlab::ContinuityReport read_report(std::istream& is) {
    contlab::ContinuityReport rep;
    std::string line;
    if (!std::getline(is, line)) fail_validation("GridMismatch", "empty CSV");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line.find('=') != std::string::npos) {
            for (auto& kv : split(line)) {
                auto eq = kv.find('=');
                std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
                if (key == "slope") rep.slope = parse_double(val);
                else if (key == "predicted") rep.predicted = parse_double(val);
                else if (key == "constant") rep.fitted_constant = parse_double(val);
                else if (key == "verdict") rep.pass = (val == "pass");
                else if (key == "mean") { rep.mean_discrepancy = parse_double(val); rep.monte_carlo = true; }
                else if (key == "moment") rep.moment = parse_double(val);
            }
            break;
        }
        auto toks = split(line);
        if (toks.size() != 2) fail_validation("GridMismatch", "ragged report row");
        rep.rows.emplace_back(parse_double(toks[0]), parse_double(toks[1]));
    }
    return rep;
}

void write_witnesses(std::ostream& os, const std::vector<illposed::InstabilityWitness>& ws) {
    os << "n,data_norm,solution_lower,solution_exact,combined_distance\n";
    for (const auto& w : ws) {
        os << w.n << "," << format_double(w.data_norm) << ","
           << format_double(w.solution_norm_lower) << ",";
        if (w.solution_norm_exact) os << format_double(*w.solution_norm_exact);
        os << "," << format_double(w.combined_distance) << "\n";
    }
}

std::vector<illposed::InstabilityWitness> read_witnesses(std::istream& is) {
    std::vector<illposed::InstabilityWitness> out;
    std::string line;
    if (!std::getline(is, line)) fail_validation("GridMismatch", "empty CSV");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto toks = split(line);
        if (toks.size() != 5) fail_validation("GridMismatch", "ragged witness row");
        illposed::InstabilityWitness w;
        w.n = (int)parse_double(toks[0]);
        w.data_norm = parse_double(toks[1]);
        w.solution_norm_lower = parse_double(toks[2]);
        if (!toks[3].empty()) w.solution_norm_exact = parse_double(toks[3]);
        w.combined_distance = parse_double(toks[4]);
        w.order_perturbation = 1.0 / w.n;
        out.push_back(w);
    }
    return out;
}

std::string to_string_report(const contlab::ContinuityReport& rep) {
    std::ostringstream os;
    write_report(os, rep);
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) fail_validation("GridMismatch", "cannot open output file: " + path);
    os << content;
}

} // namespace fraccont::csv
