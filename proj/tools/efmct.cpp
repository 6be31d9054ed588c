#include "efmct/conflict.hpp"
#include "efmct/efm.hpp"
#include "efmct/io.hpp"
#include "efmct/report.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace efmct;

namespace {

constexpr int kClean = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;

struct SolverFlags {
  std::string command;
  int timeout_ms = 10000;

  void attach(CLI::App* app) {
    app->add_option("--solver-cmd", command, "solver command line (default: $EFMCT_SOLVER or 'z3 -in -smt2')");
    app->add_option("--timeout-ms", timeout_ms, "per-query solver timeout")->check(CLI::PositiveNumber);
  }

  smt::SolverConfig config() const {
    smt::SolverConfig cfg;
    cfg.command = command.empty() ? smt::solver_command_from_env(cfg.command) : smt::split_command(command);
    cfg.timeout = std::chrono::milliseconds(timeout_ms);
    return cfg;
  }

  // Fails early with a usage-class error when the solver cannot be started.
  std::shared_ptr<smt::CachingSolver> make(bool probe = true) const {
    auto inner = std::make_shared<smt::ProcessSolver>(config());
    if (probe) {
      auto v = inner->check_sat(Formula::boolean(true));
      if (v.status == smt::Status::SolverError)
        throw std::runtime_error("solver unavailable: " + v.diagnostic);
    }
    return std::make_shared<smt::CachingSolver>(inner);
  }
};

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty())
    std::cout << text;
  else
    io::write_file_atomic(out_path, text);
}

int check_wf(const std::string& model_path) {
  auto g = io::parse_model(io::read_file(model_path));
  auto violations = efm::check_wellformed(g);
  for (const auto& v : violations) {
    std::cout << v.constraint << ":";
    for (const auto& [p, h] : v.match.objects)
      std::cout << " " << p << "=" << h;
    std::cout << "\n";
  }
  if (violations.empty())
    std::cout << "well-formed\n";
  return violations.empty() ? kClean : kNegative;
}

int apply_rule(const std::string& rule_path, const std::string& model_path, const std::vector<std::string>& selectors,
               const std::string& out_path, const SolverFlags& flags) {
  auto rule = io::parse_rule(io::read_file(rule_path));
  auto host = io::parse_model(io::read_file(model_path));
  std::map<std::string, std::string> wanted;
  for (const auto& s : selectors) {
    auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == s.size())
      throw CLI::ValidationError("--match", "expected lhs-object=host-object, got '" + s + "'");
    wanted[s.substr(0, eq)] = s.substr(eq + 1);
  }
  std::vector<Morphism> candidates;
  for (auto& m : find_rule_matches(rule, host)) {
    bool ok = std::all_of(wanted.begin(), wanted.end(), [&](const auto& kv) {
      auto it = m.objects.find(kv.first);
      return it != m.objects.end() && it->second == kv.second;
    });
    if (ok)
      candidates.push_back(std::move(m));
  }
  if (candidates.empty()) {
    std::cerr << "no match of " << rule.name << " satisfies the selection\n";
    return kNegative;
  }
  if (candidates.size() > 1)
    std::cerr << candidates.size() << " matches satisfy the selection; using the first\n";
  auto solver = flags.make();
  auto result = apply(rule, candidates.front(), host, *solver);
  switch (result.status) {
  case ApplicationStatus::Applied: emit(out_path, io::serialize_model(result.graph)); return kClean;
  case ApplicationStatus::UnknownSat:
    std::cerr << "warning: satisfiability of the result is undecided (" << result.diagnostic
              << "); application aborted\n";
    return kNegative;
  default:
    std::cerr << "invalid application: " << to_string(result.status)
              << (result.diagnostic.empty() ? "" : " (" + result.diagnostic + ")") << "\n";
    return kNegative;
  }
}

int admissible(const std::string& rule_path, const SolverFlags& flags) {
  auto rule = io::parse_rule(io::read_file(rule_path));
  auto solver = flags.make();
  auto report = check_admissibility(rule, *solver);
  std::cout << rule.name << ": " << to_string(report.verdict) << "\n";
  std::cout << "application conditions:";
  for (const auto& c : report.application_conditions)
    std::cout << " " << to_smtlib(c);
  std::cout << "\neffect constraints:";
  for (const auto& c : report.effect_constraints)
    std::cout << " " << to_smtlib(c);
  std::cout << "\nquery: " << to_smtlib(report.query) << "\nsolver: " << to_string(report.solver.validity) << "\n";
  return report.verdict == Admissibility::Admissible ? kClean : kNegative;
}

std::vector<std::pair<std::size_t, std::size_t>> parse_pairs(const std::vector<std::string>& specs, std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& s : specs) {
    auto comma = s.find(',');
    std::size_t i = 0, j = 0;
    try {
      if (comma == std::string::npos)
        throw std::invalid_argument(s);
      std::size_t used = 0;
      i = std::stoul(s.substr(0, comma), &used);
      if (used != comma)
        throw std::invalid_argument(s);
      j = std::stoul(s.substr(comma + 1), &used);
      if (used != s.size() - comma - 1)
        throw std::invalid_argument(s);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--pairs", "expected 'all' or i,j, got '" + s + "'");
    }
    if (i < 1 || j < 1 || i > n || j > n)
      throw CLI::ValidationError("--pairs", "rule positions are 1.." + std::to_string(n) + ", got '" + s + "'");
    out.emplace_back(i - 1, j - 1);
  }
  return out;
}

struct AnalyzeFlags {
  std::vector<std::string> rules;
  std::vector<std::string> pairs;
  bool cpa_only = false;
  bool trace = false;
  bool stop_first = false;
  unsigned jobs = 1;
  std::string out;
};

int analyze(const AnalyzeFlags& a, const SolverFlags& flags) {
  std::vector<SymbolicRule> rules;
  for (const auto& p : a.rules) {
    try {
      rules.push_back(io::parse_rule(io::read_file(p)));
    } catch (const io::DocumentError& e) {
      throw io::DocumentError(p + ": " + e.locus(), std::string(e.what()).substr(e.locus().size() + 2));
    }
  }
  std::optional<std::vector<std::pair<std::size_t, std::size_t>>> selection;
  bool all = a.pairs.empty() || std::find(a.pairs.begin(), a.pairs.end(), "all") != a.pairs.end();
  if (!all)
    selection = parse_pairs(a.pairs, rules.size());

  AnalysisOptions opts;
  opts.cpa_only = a.cpa_only;
  opts.stop_at_first_conflict = a.stop_first;
  opts.jobs = a.jobs;
  auto solver = flags.make(!a.cpa_only);
  auto result = analyze_ruleset(rules, *solver, opts, selection);

  std::cout << report::render_matrix(result);
  if (!a.out.empty()) {
    report::ReportOptions ro{a.cpa_only ? "none (cpa only)" : solver->describe(), a.trace};
    io::write_file_atomic(a.out, report::analysis_json(result, ro).dump(2) + "\n");
  } else if (a.trace) {
    report::ReportOptions ro{a.cpa_only ? "none (cpa only)" : solver->describe(), true};
    std::cout << report::analysis_json(result, ro).dump(2) << "\n";
  }
  return result.count(PairOutcome::Conflicting) == 0 ? kClean : kNegative;
}

int config_check(const std::string& model_path, const std::string& assignment_path, const SolverFlags& flags) {
  auto g = io::parse_model(io::read_file(model_path));
  auto a = io::parse_assignment(io::read_file(assignment_path), g);
  auto solver = flags.make(false);
  bool ok = efm::check_configuration(g, a, solver.get());
  std::cout << (ok ? "valid configuration\n" : "invalid configuration\n");
  return ok ? kClean : kNegative;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conflict detection for concurrent edits of extended feature models"};
  app.set_version_flag("--version", std::string("efmct ") + report::kToolVersion);
  app.require_subcommand(1);
  SolverFlags solver_flags;

  std::string model, rule, assignment, out;
  std::vector<std::string> selectors;

  auto* wf = app.add_subcommand("check-wf", "check the well-formedness constraints of a model");
  wf->add_option("model", model, "model document")->required();

  auto* ap = app.add_subcommand("apply", "apply a rule to a model");
  ap->add_option("rule", rule, "rule document")->required();
  ap->add_option("model", model, "model document")->required();
  ap->add_option("--match", selectors, "pin an lhs object to a host object (lhs=host)");
  ap->add_option("--out", out, "write the result model here instead of stdout");
  solver_flags.attach(ap);

  auto* ad = app.add_subcommand("admissible", "check that a rule only constrains fresh variables");
  ad->add_option("rule", rule, "rule document")->required();
  solver_flags.attach(ad);

  AnalyzeFlags af;
  auto* an = app.add_subcommand("analyze", "pairwise conflict analysis of rules");
  an->add_option("rules", af.rules, "rule documents")->required();
  an->add_option("--pairs", af.pairs, "'all' or 1-based rule positions i,j (repeatable)")
      ->allow_extra_args(false)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  an->add_flag("--cpa-only", af.cpa_only, "report the structural pre-filter verdicts only");
  an->add_flag("--trace", af.trace, "include context traces in the report");
  an->add_flag("--stop-at-first-conflict", af.stop_first, "stop a pair at its first conflicting context");
  an->add_option("--jobs", af.jobs, "parallel workers per pair")->check(CLI::PositiveNumber);
  an->add_option("--out", af.out, "write the JSON report here");
  solver_flags.attach(an);

  auto* cc = app.add_subcommand("config-check", "check a configuration against a model");
  cc->add_option("model", model, "model document")->required();
  cc->add_option("assignment", assignment, "assignment document")->required();
  solver_flags.attach(cc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kClean : kUsage;
  }

  try {
    if (*wf)
      return check_wf(model);
    if (*ap)
      return apply_rule(rule, model, selectors, out, solver_flags);
    if (*ad)
      return admissible(rule, solver_flags);
    if (*an)
      return analyze(af, solver_flags);
    if (*cc)
      return config_check(model, assignment, solver_flags);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "efmct: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "efmct: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
