#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kcc/batch.hpp"
#include "kcc/dynamics.hpp"
#include "kcc/lorenz.hpp"

#include "json.hpp"

namespace kcc::report {

using lorenz::EquilibriumAnalysis;
using lorenz::LorenzParams;

/// Shortest decimal representation that round-trips to the same double,
/// capped at 17 significant digits. NaN -> "nan", infinities ->
/// "inf"/"-inf". Locale-independent.
std::string format_double(double v);

/// Inverse of format_double; throws std::invalid_argument on garbage.
double parse_double(const std::string& s);

struct StabilityReport {
    LorenzParams params;
    std::optional<double> rho_crit;
    std::vector<EquilibriumAnalysis> equilibria;
};

StabilityReport build_report(const LorenzParams& p);

/// Deterministic key order so renderings are byte-stable.
nlohmann::ordered_json report_json(const StabilityReport& rep);

/// In-memory CSV: a header and string cells. All writers funnel through
/// this so the reader round-trips every emitted file.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

void write_csv(std::ostream& os, const CsvTable& table);
CsvTable read_csv(std::istream& is);

CsvTable report_table(const StabilityReport& rep);
/// Columns t,X,Y,Z,P11,P12,P21,P22.
CsvTable trajectory_table(const dynamics::Trajectory& traj,
                          const std::vector<lorenz::PComponents>& p_series);
/// Columns t,xi1,xi2,xi_norm,delta1,delta2,delta,kappa0.
CsvTable deviation_table(const dynamics::DeviationTrace& trace);
CsvTable sweep_table(const std::vector<batch::SweepRow>& rows,
                     bool with_t0);

}  // namespace kcc::report
