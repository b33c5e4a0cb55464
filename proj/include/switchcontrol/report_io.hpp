#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "switchcontrol/pde.hpp"
#include "switchcontrol/ssn.hpp"

namespace swc {

nlohmann::json to_json(const ContinuationReport& rep);
ContinuationReport report_from_json(const nlohmann::json& j);

void write_report(const std::string& path, const ContinuationReport& rep);
ContinuationReport read_report(const std::string& path);

/// coord, u1, u2, region, arc (one row per control node)
void write_control_csv(const std::string& path, const ControlProblem& prob, const ContinuationReport& rep);
/// two coordinates, y, z (one row per state unknown)
void write_state_csv(const std::string& path, const ControlProblem& prob, const ContinuationReport& rep);

struct SweepRow {
  double beta;
  ContinuationReport report;
};
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

/// Number formatting used in every CSV: 17 significant digits.
std::string fmt17(double x);

}  // namespace swc
