#pragma once

#include "fraccont/contlab.hpp"
#include "fraccont/grid.hpp"
#include "fraccont/illposed.hpp"
#include "fraccont/specdiff.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace fraccont::csv {

// All numeric fields use the shortest decimal that round-trips the double
// exactly; '.' decimal separator regardless of locale.
std::string format_double(double v);

// grid functions: header t,v1,...,vd; one row per stored node
void write_gridfn(std::ostream& os, const GridFn& f);
GridFn read_gridfn(std::istream& is);

// mode trajectories: header t,c1,...,cP
void write_trajectory(std::ostream& os, const specdiff::ModeTrajectory& traj);
specdiff::ModeTrajectory read_trajectory(std::istream& is);

// physical reconstruction: rows t,x,u
void write_physical(std::ostream& os, const specdiff::ModeTrajectory& traj, double L, int nx);

// continuity reports: h,discrepancy rows plus the footer
// slope=...,predicted=...,constant=...,verdict=... (plus mean=...,moment=...
// for Monte Carlo runs)
void write_report(std::ostream& os, const contlab::ContinuityReport& rep);
contlab::ContinuityReport read_report(std::istream& is);

// instability witnesses: n,data_norm,solution_lower,solution_exact,combined_distance
void write_witnesses(std::ostream& os, const std::vector<illposed::InstabilityWitness>& ws);
std::vector<illposed::InstabilityWitness> read_witnesses(std::istream& is);

// convenience: serialize to a string / write a file atomically enough for tests
std::string to_string_report(const contlab::ContinuityReport& rep);
void write_file(const std::string& path, const std::string& content);

} // namespace fraccont::csv
