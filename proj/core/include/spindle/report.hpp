#pragma once
#include <ostream>
#include <string>

#include "spindle/config.hpp"
#include "spindle/systole.hpp"

namespace spindle {

/// Human-readable analysis report: profile summary, volume identities, the
/// closed-geodesic table, systolic ratios with bounds and verdicts, and the
/// tolerance ladder in force (so AtBound verdicts are auditable).
void write_report(std::ostream& out, const MetricProfile& p,
                  const AnalysisResult& res, const RunConfig& cfg);

void write_returns_csv(std::ostream& out, const AnalysisResult& res);
void write_genfun_csv(std::ostream& out, const AnalysisResult& res);
void write_critical_csv(std::ostream& out, const AnalysisResult& res);
void write_geodesics_csv(std::ostream& out, const AnalysisResult& res);
void write_tau_csv(std::ostream& out, const AnalysisResult& res);
void write_ratios_csv(std::ostream& out, const AnalysisResult& res);
void write_profile_csv(std::ostream& out, const MetricProfile& p, int n);
void write_trajectory_csv(std::ostream& out, const MetricProfile& p,
                          const Trajectory& traj);

std::string verdict_name(Verdict v);

/// 0 when every applicable verdict is BelowBound/AtBound, 2 on a Violation.
int exit_code_for(const SystoleReport& rep);

}  // namespace spindle
