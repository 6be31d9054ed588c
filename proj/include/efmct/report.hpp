#pragma once

#include "efmct/conflict.hpp"

#include <json.hpp>

#include <string>

namespace efmct::report {

inline constexpr const char* kReportFormat = "efmct-report/1";
inline constexpr const char* kToolVersion = "0.1.0";

struct ReportOptions {
  std::string solver; // description echoed into the report
  bool traces = false;
};

/// Short code used in the text matrix for a conflicting pair.
std::string reason_code(const PairVerdict& v);

/// Lower-triangular text table: ✓ non-conflicting, ✗ conflicting plus a
/// reason code, followed by a legend and aggregate counts.
std::string render_matrix(const RulesetAnalysis& analysis);

nlohmann::json morphism_json(const Morphism& m);
Morphism morphism_from_json(const nlohmann::json& j);

nlohmann::json trace_json(const ContextTrace& t);
/// Rebuilds the context and recorded choices of a trace (enough for
/// replay_trace); solver verdicts are restored as strings only.
ContextTrace trace_from_json(const nlohmann::json& j);

nlohmann::json pair_json(const PairVerdict& v, bool traces);
nlohmann::json analysis_json(const RulesetAnalysis& analysis, const ReportOptions& opts);

} // namespace efmct::report
