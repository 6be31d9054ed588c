#include "efmct/report.hpp"

#include "efmct/io.hpp"

#include <sstream>

namespace efmct::report {

using nlohmann::json;

namespace {

const ContextTrace* first_conflict(const PairVerdict& v) {
  for (const auto& t : v.traces)
    if (t.verdict == ContextVerdict::ConflictHere || t.verdict == ContextVerdict::CpaPotentialConflict)
      return &t;
  return nullptr;
}

template <class Enum>
Enum enum_from(const std::string& text, std::initializer_list<Enum> values) {
  for (Enum e : values)
    if (text == to_string(e))
      return e;
  throw std::invalid_argument("unknown verdict '" + text + "'");
}

// Display width of a UTF-8 string (code points).
std::size_t width(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80)
      ++n;
  return n;
}

std::string pad(const std::string& s, std::size_t w) { return s + std::string(w > width(s) ? w - width(s) : 0, ' '); }

} // namespace

std::string reason_code(const PairVerdict& v) {
  const ContextTrace* t = first_conflict(v);
  if (!t)
    return "";
  if (t->verdict == ContextVerdict::CpaPotentialConflict)
    return "CPA";
  switch (t->reason) {
  case ConflictReason::NoSecondMatch: return "NSM";
  case ConflictReason::NoIsomorphicResult: return "NIR";
  case ConflictReason::FormulasNotEquivalent: return "FNE";
  case ConflictReason::SolverUnknown: return "UNK";
  case ConflictReason::SolverTimeout: return "TO";
  case ConflictReason::None: break;
  }
  return "?";
}

std::string render_matrix(const RulesetAnalysis& analysis) {
  const auto& names = analysis.rules;
  std::size_t col = 6;
  for (const auto& n : names)
    col = std::max(col, width(n) + 2);
  std::ostringstream out;
  std::string header = pad("", col);
  for (const auto& n : names)
    header += pad(n, col);
  while (!header.empty() && header.back() == ' ')
    header.pop_back();
  out << header << "\n";
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::string line = pad(names[i], col);
    for (std::size_t j = 0; j <= i; ++j) {
      const PairVerdict* v = nullptr;
      for (std::size_t k = 0; k < analysis.pairs.size(); ++k)
        if (analysis.pairs[k] == std::pair{i, j})
          v = &analysis.verdicts[k];
      std::string cell = !v ? "·" : v->verdict == PairOutcome::NonConflicting ? "✓" : "✗ " + reason_code(*v);
      line += pad(cell, col);
    }
    while (!line.empty() && line.back() == ' ')
      line.pop_back();
    out << line << "\n";
  }
  out << "\n✓ non-conflicting  ✗ conflicting  · not analyzed\n"
      << "NSM no second match, NIR no isomorphic result, FNE formulas not equivalent,\n"
      << "UNK solver unknown, TO solver timeout, CPA potential conflict (CPA only)\n";
  out << "\n"
      << analysis.count(PairOutcome::NonConflicting) << " non-conflicting, "
      << analysis.count(PairOutcome::Conflicting) << " conflicting of " << analysis.verdicts.size() << " pairs\n";
  return out.str();
}

json morphism_json(const Morphism& m) { return {{"objects", m.objects}, {"links", m.links}}; }

Morphism morphism_from_json(const json& j) {
  Morphism m;
  m.objects = j.at("objects").get<std::map<std::string, std::string>>();
  m.links = j.at("links").get<std::map<std::string, std::string>>();
  return m;
}

json trace_json(const ContextTrace& t) {
  json out;
  out["index"] = t.context.index;
  out["verdict"] = to_string(t.verdict);
  out["reason"] = to_string(t.reason);
  out["ac"] = json::parse(io::serialize_model(t.context.ac));
  out["m1"] = morphism_json(t.context.m1);
  out["m2"] = morphism_json(t.context.m2);
  out["overlap"] = {{"objects", t.context.overlap.objects}, {"links", t.context.overlap.links}};
  out["violations"] = t.violations;
  out["cpa_reasons"] = t.cpa_reasons;
  if (t.first12)
    out["first12"] = to_string(*t.first12);
  if (t.first21)
    out["first21"] = to_string(*t.first21);
  out["second_matches12"] = t.second_matches12;
  out["second_matches21"] = t.second_matches21;
  out["isomorphisms_tried"] = t.isomorphisms_tried;
  if (t.m2_second)
    out["m2_second"] = morphism_json(*t.m2_second);
  if (t.m1_second)
    out["m1_second"] = morphism_json(*t.m1_second);
  if (t.iso)
    out["iso"] = morphism_json(*t.iso);
  if (t.equivalence) {
    const auto& e = *t.equivalence;
    json aux12 = json::array(), aux21 = json::array(), sigma = json::object();
    for (const auto& v : e.aux12)
      aux12.push_back(v.id);
    for (const auto& v : e.aux21)
      aux21.push_back(v.id);
    for (const auto& [id, fromto] : e.sigma.entries())
      sigma[id] = fromto.second.id;
    out["equivalence"] = {{"verdict", to_string(e.verdict)},
                          {"aux12", aux12},
                          {"aux21", aux21},
                          {"sigma", sigma},
                          {"query", to_smtlib(e.query)},
                          {"solver", to_string(e.solver.validity)},
                          {"wall_ms", e.solver.wall.count()}};
  }
  if (!t.diagnostic.empty())
    out["diagnostic"] = t.diagnostic;
  return out;
}

ContextTrace trace_from_json(const json& j) {
  OverlapContext ctx{j.at("index").get<std::size_t>(), io::parse_model(j.at("ac").dump()),
                     morphism_from_json(j.at("m1")), morphism_from_json(j.at("m2")), {}};
  ctx.overlap.objects = j.at("overlap").at("objects").get<std::map<std::string, std::string>>();
  ctx.overlap.links = j.at("overlap").at("links").get<std::map<std::string, std::string>>();
  ContextTrace t(std::move(ctx));
  using CV = ContextVerdict;
  using CR = ConflictReason;
  t.verdict = enum_from(j.at("verdict").get<std::string>(),
                        {CV::NoConflictHere, CV::ConflictHere, CV::FilteredIllFormed, CV::FilteredInvalidApplication,
                         CV::FilteredIndependent, CV::CpaPotentialConflict});
  t.reason = enum_from(j.at("reason").get<std::string>(),
                       {CR::None, CR::NoSecondMatch, CR::NoIsomorphicResult, CR::FormulasNotEquivalent,
                        CR::SolverUnknown, CR::SolverTimeout});
  t.violations = j.value("violations", std::vector<std::string>{});
  t.cpa_reasons = j.value("cpa_reasons", std::vector<std::string>{});
  t.second_matches12 = j.value("second_matches12", std::size_t{0});
  t.second_matches21 = j.value("second_matches21", std::size_t{0});
  t.isomorphisms_tried = j.value("isomorphisms_tried", std::size_t{0});
  if (j.contains("m2_second"))
    t.m2_second = morphism_from_json(j.at("m2_second"));
  if (j.contains("m1_second"))
    t.m1_second = morphism_from_json(j.at("m1_second"));
  if (j.contains("iso"))
    t.iso = morphism_from_json(j.at("iso"));
  t.diagnostic = j.value("diagnostic", std::string());
  return t;
}

json pair_json(const PairVerdict& v, bool traces) {
  json out;
  out["rule1"] = v.rule1;
  out["rule2"] = v.rule2;
  out["verdict"] = to_string(v.verdict);
  out["mode"] = v.cpa_only ? "cpa" : "full";
  if (v.verdict == PairOutcome::Conflicting)
    out["reason"] = reason_code(v);
  out["stats"] = {{"enumerated", v.stats.enumerated},
                  {"ill_formed", v.stats.ill_formed},
                  {"independent", v.stats.independent},
                  {"invalid_application", v.stats.invalid_application},
                  {"proven", v.stats.proven},
                  {"conflicts", v.stats.conflicts},
                  {"unanalyzed", v.stats.unanalyzed}};
  if (traces) {
    out["traces"] = json::array();
    for (const auto& t : v.traces)
      out["traces"].push_back(trace_json(t));
  }
  return out;
}

json analysis_json(const RulesetAnalysis& analysis, const ReportOptions& opts) {
  json out;
  out["format"] = kReportFormat;
  out["tool"] = {{"name", "efmct"}, {"version", kToolVersion}};
  out["solver"] = opts.solver;
  out["rules"] = analysis.rules;
  out["pairs"] = json::array();
  for (std::size_t k = 0; k < analysis.pairs.size(); ++k) {
    json p = pair_json(analysis.verdicts[k], opts.traces);
    p["i"] = analysis.pairs[k].first;
    p["j"] = analysis.pairs[k].second;
    out["pairs"].push_back(std::move(p));
  }
  out["summary"] = {{"pairs", analysis.verdicts.size()},
                    {"non_conflicting", analysis.count(PairOutcome::NonConflicting)},
                    {"conflicting", analysis.count(PairOutcome::Conflicting)}};
  out["matrix"] = render_matrix(analysis);
  return out;
}

} // namespace efmct::report
