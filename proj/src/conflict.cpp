#include "efmct/conflict.hpp"

#include <algorithm>
#include <atomic>
#include <future>
#include <thread>

namespace efmct {

// ------------------------------------------------------------------ overlaps

namespace {

void extend_identifications(const SymbolicGraph& lhs1, const SymbolicGraph& lhs2,
                            const std::vector<const Object*>& order, std::size_t next,
                            std::map<std::string, std::string>& current, std::set<std::string>& used,
                            std::vector<std::map<std::string, std::string>>& out) {
  if (next == order.size()) {
    if (!current.empty())
      out.push_back(current);
    return;
  }
  const Object* o = order[next];
  extend_identifications(lhs1, lhs2, order, next + 1, current, used, out);
  for (const auto& [id, candidate] : lhs1.objects()) {
    if (candidate.type != o->type || used.count(id))
      continue;
    current[o->id] = id;
    used.insert(id);
    extend_identifications(lhs1, lhs2, order, next + 1, current, used, out);
    used.erase(id);
    current.erase(o->id);
  }
}

Identification close_links(const SymbolicGraph& lhs1, const SymbolicGraph& lhs2,
                                          const std::map<std::string, std::string>& objects) {
  Identification ident{objects, {}};
  for (const auto& [id2, l2] : lhs2.links()) {
    auto s = objects.find(l2.source);
    auto t = objects.find(l2.target);
    if (s == objects.end() || t == objects.end())
      continue;
    for (const auto& [id1, l1] : lhs1.links()) {
      if (l1.type == l2.type && l1.source == s->second && l1.target == t->second) {
        ident.links[id2] = id1;
        break;
      }
    }
  }
  return ident;
}

} // namespace

std::vector<OverlapContext> enumerate_overlaps(const SymbolicGraph& lhs1, const SymbolicGraph& lhs2) {
  if (!lhs1.same_type_graph(lhs2))
    throw TypeGraphMismatch("rule patterns are typed over different type graphs");

  std::vector<const Object*> order;
  for (const auto& [id, o] : lhs2.objects())
    order.push_back(&o);
  std::vector<std::map<std::string, std::string>> object_maps;
  std::map<std::string, std::string> current;
  std::set<std::string> used;
  extend_identifications(lhs1, lhs2, order, 0, current, used, object_maps);

  std::vector<Identification> idents;
  for (const auto& objects : object_maps)
    idents.push_back(close_links(lhs1, lhs2, objects));
  std::sort(idents.begin(), idents.end(), [](const Identification& a, const Identification& b) {
    if (a.size() != b.size())
      return a.size() > b.size();
    return a < b;
  });

  std::vector<OverlapContext> out;
  for (auto& ident : idents) {
    std::optional<GlueResult> glued;
    try {
      glued = glue(lhs1, lhs2, ident);
    } catch (const GlueError&) {
      continue;
    }
    glued->graph.set_formula(Formula::boolean(true));
    OverlapContext ctx{out.size(), std::move(glued->graph), std::move(glued->from_first),
                       std::move(glued->from_second), std::move(ident)};
    bool duplicate = std::any_of(out.begin(), out.end(),
                                 [&](const OverlapContext& seen) { return contexts_isomorphic(seen, ctx); });
    if (!duplicate)
      out.push_back(std::move(ctx));
  }
  return out;
}

namespace {

// The map a.ac -> b.ac forced by the two embeddings, when they cover a.ac.
std::optional<Morphism> forced_map(const OverlapContext& a, const OverlapContext& b, bool& consistent) {
  Morphism h;
  consistent = true;
  auto bind = [&](std::map<std::string, std::string>& f, const std::map<std::string, std::string>& from,
                  const std::map<std::string, std::string>& to) {
    for (const auto& [k, v] : from) {
      auto it = to.find(k);
      if (it == to.end()) {
        consistent = false;
        return;
      }
      auto [at, fresh] = f.emplace(v, it->second);
      if (!fresh && at->second != it->second)
        consistent = false;
    }
  };
  bind(h.objects, a.m1.objects, b.m1.objects);
  bind(h.objects, a.m2.objects, b.m2.objects);
  bind(h.links, a.m1.links, b.m1.links);
  bind(h.links, a.m2.links, b.m2.links);
  if (!consistent || h.objects.size() != a.ac.objects().size() || h.links.size() != a.ac.links().size())
    return std::nullopt;
  return h;
}

} // namespace

bool contexts_isomorphic(const OverlapContext& a, const OverlapContext& b) {
  if (a.m1.objects.size() != b.m1.objects.size() || a.m2.objects.size() != b.m2.objects.size())
    return false;
  if (a.ac.objects().size() != b.ac.objects().size() || a.ac.links().size() != b.ac.links().size())
    return false;
  bool consistent = true;
  if (auto h = forced_map(a, b, consistent)) {
    // jointly surjective embeddings leave a single candidate
    return check_morphism(*h, a.ac, b.ac).empty();
  }
  if (!consistent)
    return false;
  for (const auto& h : find_isomorphisms(a.ac, b.ac)) {
    if (compose(h, a.m1) == b.m1 && compose(h, a.m2) == b.m2)
      return true;
  }
  return false;
}

WellFormednessPartition filter_wellformed(std::vector<OverlapContext> contexts,
                                          const std::vector<efm::WellFormednessConstraint>& constraints) {
  WellFormednessPartition out;
  for (auto& ctx : contexts) {
    auto violations = efm::check_wellformed(ctx.ac, constraints);
    if (violations.empty())
      out.kept.push_back(std::move(ctx));
    else
      out.dropped.push_back({std::move(ctx), std::move(violations)});
  }
  return out;
}

WellFormednessPartition filter_wellformed(std::vector<OverlapContext> contexts) {
  return filter_wellformed(std::move(contexts), efm::builtin_constraints());
}

// ----------------------------------------------------------------------- CPA

const char* to_string(CpaVerdict v) {
  return v == CpaVerdict::PotentialConflict ? "potential-conflict" : "independent";
}

namespace {

void interactions(const SymbolicRule& actor, const Morphism& m_actor, const Morphism& m_other,
                  const std::string& other_name, std::vector<std::string>& reasons) {
  std::set<std::string> used_objects, used_links;
  for (const auto& [p, h] : m_other.objects)
    used_objects.insert(h);
  for (const auto& [p, h] : m_other.links)
    used_links.insert(h);
  for (const auto& id : actor.deleted_objects()) {
    const auto& h = m_actor.objects.at(id);
    if (used_objects.count(h))
      reasons.push_back("delete-use: " + actor.name + " deletes object '" + h + "' matched by " + other_name);
  }
  for (const auto& id : actor.deleted_links()) {
    const auto& h = m_actor.links.at(id);
    if (used_links.count(h))
      reasons.push_back("delete-use: " + actor.name + " deletes link '" + h + "' matched by " + other_name);
  }
  for (const auto& [obj, attr] : actor.reassigned_slots()) {
    const auto& h = m_actor.objects.at(obj);
    if (used_objects.count(h))
      reasons.push_back("reassign-use: " + actor.name + " reassigns '" + h + "." + attr + "' matched by " +
                        other_name);
  }
}

} // namespace

CpaResult cpa_filter(const SymbolicRule& r1, const SymbolicRule& r2, const OverlapContext& ctx) {
  CpaResult out;
  interactions(r1, ctx.m1, ctx.m2, r2.name, out.reasons);
  interactions(r2, ctx.m2, ctx.m1, r1.name, out.reasons);
  out.verdict = out.reasons.empty() ? CpaVerdict::Independent : CpaVerdict::PotentialConflict;
  return out;
}

// --------------------------------------------------------------- equivalence

const char* to_string(Equivalence e) {
  switch (e) {
  case Equivalence::Equivalent: return "equivalent";
  case Equivalence::NotEquivalent: return "not-equivalent";
  case Equivalence::Unknown: return "unknown";
  }
  return "?";
}

std::set<Variable> auxiliary_vars(const SymbolicGraph& result, const SymbolicGraph& base) {
  const auto held = result.slot_variables();
  std::set<Variable> out;
  for (const auto& [id, v] : result.variables())
    if (!held.count(v) && !base.variable(id))
      out.insert(v);
  return out;
}

EquivalenceCheck check_result_equivalence(const SymbolicGraph& res12, const SymbolicGraph& res21,
                                          const SymbolicGraph& base, const Morphism& iso, smt::Solver& solver) {
  EquivalenceCheck out;
  out.aux12 = auxiliary_vars(res12, base);
  out.aux21 = auxiliary_vars(res21, base);
  const Formula f12 = exists({out.aux12.begin(), out.aux12.end()}, res12.formula());
  const Formula f21 = exists({out.aux21.begin(), out.aux21.end()}, res21.formula());

  out.sigma = induced_substitution(iso, res12, res21);
  for (const auto& v : free_vars(f12)) {
    if (out.sigma.find(v.id))
      continue;
    if (!base.variable(v.id))
      throw UnhousedVariable("variable '" + v.id + "' is neither housed in a slot nor part of the context");
    out.sigma.add(v, v);
  }
  out.query = iff(substitute(f12, out.sigma), f21);
  out.solver = solver.check_validity(out.query);
  switch (out.solver.validity) {
  case smt::Validity::Valid: out.verdict = Equivalence::Equivalent; break;
  case smt::Validity::Invalid: out.verdict = Equivalence::NotEquivalent; break;
  default: out.verdict = Equivalence::Unknown; break;
  }
  return out;
}

// ---------------------------------------------------------- direct confluence

const char* to_string(ContextVerdict v) {
  switch (v) {
  case ContextVerdict::NoConflictHere: return "no-conflict";
  case ContextVerdict::ConflictHere: return "conflict";
  case ContextVerdict::FilteredIllFormed: return "filtered-ill-formed";
  case ContextVerdict::FilteredInvalidApplication: return "filtered-invalid-application";
  case ContextVerdict::FilteredIndependent: return "filtered-independent";
  case ContextVerdict::CpaPotentialConflict: return "cpa-potential-conflict";
  }
  return "?";
}

const char* to_string(ConflictReason r) {
  switch (r) {
  case ConflictReason::None: return "none";
  case ConflictReason::NoSecondMatch: return "no-second-match";
  case ConflictReason::NoIsomorphicResult: return "no-isomorphic-result";
  case ConflictReason::FormulasNotEquivalent: return "formulas-not-equivalent";
  case ConflictReason::SolverUnknown: return "solver-unknown";
  case ConflictReason::SolverTimeout: return "solver-timeout";
  }
  return "?";
}

namespace {

struct SecondStep {
  Morphism match;
  ApplicationResult result;
};

// Valid second applications; `indecisive` is set when the solver blocked one.
std::vector<SecondStep> second_steps(const SymbolicRule& r, const SymbolicGraph& host, smt::Solver& solver,
                                     std::size_t& matches, bool& indecisive, bool& timed_out) {
  std::vector<SecondStep> out;
  auto found = find_rule_matches(r, host);
  matches = found.size();
  for (auto& m : found) {
    auto res = apply(r, m, host, solver);
    if (res.applied()) {
      out.push_back({std::move(m), std::move(res)});
    } else if (res.status == ApplicationStatus::UnknownSat) {
      indecisive = true;
      timed_out = timed_out || res.sat == smt::Status::Timeout;
    }
  }
  return out;
}

} // namespace

ContextTrace check_direct_confluence(const SymbolicRule& r1, const SymbolicRule& r2, const OverlapContext& ctx,
                                     smt::Solver& solver) {
  ContextTrace trace(ctx);
  const SymbolicGraph& base = ctx.ac;

  auto first1 = apply(r1, ctx.m1, base, solver);
  auto first2 = apply(r2, ctx.m2, base, solver);
  trace.first12 = first1.status;
  trace.first21 = first2.status;
  for (const auto* res : {&first1, &first2}) {
    if (res->status == ApplicationStatus::InvalidDangling || res->status == ApplicationStatus::InvalidUnsat) {
      trace.verdict = ContextVerdict::FilteredInvalidApplication;
      trace.diagnostic = std::string(res == &first1 ? r1.name : r2.name) + ": " + to_string(res->status) +
                         (res->diagnostic.empty() ? "" : " (" + res->diagnostic + ")");
      return trace;
    }
  }
  for (const auto* res : {&first1, &first2}) {
    if (res->status == ApplicationStatus::UnknownSat) {
      trace.verdict = ContextVerdict::ConflictHere;
      trace.reason = res->sat == smt::Status::Timeout ? ConflictReason::SolverTimeout : ConflictReason::SolverUnknown;
      trace.diagnostic = res->diagnostic;
      return trace;
    }
  }

  bool indecisive = false, timed_out = false;
  auto after12 = second_steps(r2, first1.graph, solver, trace.second_matches12, indecisive, timed_out);
  auto after21 = second_steps(r1, first2.graph, solver, trace.second_matches21, indecisive, timed_out);

  trace.verdict = ContextVerdict::ConflictHere;
  if (after12.empty() || after21.empty()) {
    trace.reason = indecisive ? (timed_out ? ConflictReason::SolverTimeout : ConflictReason::SolverUnknown)
                              : ConflictReason::NoSecondMatch;
    trace.diagnostic = after12.empty() ? "no valid application of " + r2.name + " after " + r1.name
                                       : "no valid application of " + r1.name + " after " + r2.name;
    return trace;
  }

  bool any_iso = false, not_equivalent = false, unknown = false, timeout = false;
  for (const auto& s12 : after12) {
    for (const auto& s21 : after21) {
      for (auto& iso : find_isomorphisms(s12.result.graph, s21.result.graph)) {
        any_iso = true;
        ++trace.isomorphisms_tried;
        auto eq = check_result_equivalence(s12.result.graph, s21.result.graph, base, iso, solver);
        if (eq.verdict == Equivalence::Equivalent) {
          trace.verdict = ContextVerdict::NoConflictHere;
          trace.reason = ConflictReason::None;
          trace.m2_second = s12.match;
          trace.m1_second = s21.match;
          trace.iso = std::move(iso);
          trace.equivalence = std::move(eq);
          return trace;
        }
        if (eq.verdict == Equivalence::NotEquivalent) {
          not_equivalent = true;
        } else {
          unknown = true;
          timeout = timeout || eq.solver.validity == smt::Validity::Timeout;
        }
        if (!trace.equivalence || eq.verdict == Equivalence::NotEquivalent) {
          trace.m2_second = s12.match;
          trace.m1_second = s21.match;
          trace.iso = iso;
          trace.equivalence = std::move(eq);
        }
      }
    }
  }
  if (!any_iso)
    trace.reason = ConflictReason::NoIsomorphicResult;
  else if (not_equivalent)
    trace.reason = ConflictReason::FormulasNotEquivalent;
  else if (unknown)
    trace.reason = timeout ? ConflictReason::SolverTimeout : ConflictReason::SolverUnknown;
  return trace;
}

Equivalence replay_trace(const SymbolicRule& r1, const SymbolicRule& r2, const ContextTrace& trace,
                         smt::Solver& solver) {
  if (trace.verdict != ContextVerdict::NoConflictHere || !trace.m1_second || !trace.m2_second || !trace.iso)
    throw std::invalid_argument("trace has no recorded proof to replay");
  const auto& ctx = trace.context;
  auto a1 = apply(r1, ctx.m1, ctx.ac, solver);
  auto a2 = apply(r2, ctx.m2, ctx.ac, solver);
  if (!a1.applied() || !a2.applied())
    return Equivalence::Unknown;
  auto a12 = apply(r2, *trace.m2_second, a1.graph, solver);
  auto a21 = apply(r1, *trace.m1_second, a2.graph, solver);
  if (!a12.applied() || !a21.applied())
    return Equivalence::Unknown;
  if (!check_morphism(*trace.iso, a12.graph, a21.graph).empty())
    return Equivalence::Unknown;
  return check_result_equivalence(a12.graph, a21.graph, ctx.ac, *trace.iso, solver).verdict;
}

// ---------------------------------------------------------------- pipeline

const char* to_string(PairOutcome o) {
  return o == PairOutcome::NonConflicting ? "non-conflicting" : "conflicting";
}

namespace {

bool is_efm_typed(const SymbolicGraph& g) {
  return g.same_type_graph(efm::builtin_constraints().front().pattern);
}

ContextTrace analyze_context(const SymbolicRule& r1, const SymbolicRule& r2, const OverlapContext& ctx,
                             const std::vector<efm::WellFormednessConstraint>& constraints, smt::Solver& solver,
                             const AnalysisOptions& opts) {
  auto violations = efm::check_wellformed(ctx.ac, constraints);
  if (!violations.empty()) {
    ContextTrace t(ctx);
    t.verdict = ContextVerdict::FilteredIllFormed;
    for (const auto& v : violations)
      if (std::find(t.violations.begin(), t.violations.end(), v.constraint) == t.violations.end())
        t.violations.push_back(v.constraint);
    return t;
  }
  auto cpa = cpa_filter(r1, r2, ctx);
  if (opts.cpa_only || (opts.skip_independent && cpa.verdict == CpaVerdict::Independent)) {
    ContextTrace t(ctx);
    t.cpa_reasons = std::move(cpa.reasons);
    t.verdict = cpa.verdict == CpaVerdict::Independent ? ContextVerdict::FilteredIndependent
                                                       : ContextVerdict::CpaPotentialConflict;
    return t;
  }
  auto t = check_direct_confluence(r1, r2, ctx, solver);
  t.cpa_reasons = std::move(cpa.reasons);
  return t;
}

bool is_conflict(ContextVerdict v) {
  return v == ContextVerdict::ConflictHere || v == ContextVerdict::CpaPotentialConflict;
}

} // namespace

PairVerdict analyze_pair(const SymbolicRule& r1, const SymbolicRule& r2, smt::Solver& solver,
                         const AnalysisOptions& opts) {
  PairVerdict out;
  out.rule1 = r1.name;
  out.rule2 = r2.name;
  out.cpa_only = opts.cpa_only;

  const auto contexts = enumerate_overlaps(r1.lhs, r2.lhs);
  std::vector<efm::WellFormednessConstraint> constraints;
  if (opts.constraints)
    constraints = *opts.constraints;
  else if (is_efm_typed(r1.lhs))
    constraints = efm::builtin_constraints();

  std::vector<std::optional<ContextTrace>> traces(contexts.size());
  std::atomic<bool> stop{false};
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i; (i = next++) < contexts.size();) {
      if (stop)
        break;
      traces[i] = analyze_context(r1, r2, contexts[i], constraints, solver, opts);
      if (opts.stop_at_first_conflict && is_conflict(traces[i]->verdict))
        stop = true;
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(opts.jobs, static_cast<unsigned>(contexts.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::future<void>> running;
    for (unsigned j = 0; j < jobs; ++j)
      running.push_back(std::async(std::launch::async, worker));
    for (auto& f : running)
      f.get();
  }

  out.stats.enumerated = contexts.size();
  bool conflict = false;
  for (auto& t : traces) {
    if (!t) {
      ++out.stats.unanalyzed;
      continue;
    }
    switch (t->verdict) {
    case ContextVerdict::NoConflictHere: ++out.stats.proven; break;
    case ContextVerdict::FilteredIllFormed: ++out.stats.ill_formed; break;
    case ContextVerdict::FilteredIndependent: ++out.stats.independent; break;
    case ContextVerdict::FilteredInvalidApplication: ++out.stats.invalid_application; break;
    case ContextVerdict::ConflictHere:
    case ContextVerdict::CpaPotentialConflict:
      ++out.stats.conflicts;
      conflict = true;
      break;
    }
    out.traces.push_back(std::move(*t));
  }
  out.verdict = conflict ? PairOutcome::Conflicting : PairOutcome::NonConflicting;
  return out;
}

const PairVerdict* RulesetAnalysis::at(std::size_t i, std::size_t j) const {
  if (j > i)
    std::swap(i, j);
  for (std::size_t k = 0; k < pairs.size(); ++k)
    if (pairs[k] == std::pair{i, j})
      return &verdicts[k];
  return nullptr;
}

std::size_t RulesetAnalysis::count(PairOutcome o) const {
  return static_cast<std::size_t>(
      std::count_if(verdicts.begin(), verdicts.end(), [&](const PairVerdict& v) { return v.verdict == o; }));
}

RulesetAnalysis analyze_ruleset(const std::vector<SymbolicRule>& rules, smt::Solver& solver,
                                const AnalysisOptions& opts,
                                const std::optional<std::vector<std::pair<std::size_t, std::size_t>>>& selection) {
  RulesetAnalysis out;
  for (const auto& r : rules)
    out.rules.push_back(r.name);
  std::set<std::pair<std::size_t, std::size_t>> wanted;
  if (selection) {
    for (auto [i, j] : *selection) {
      if (i >= rules.size() || j >= rules.size())
        throw std::out_of_range("rule pair (" + std::to_string(i) + ", " + std::to_string(j) + ") out of range");
      wanted.insert(j > i ? std::pair{j, i} : std::pair{i, j});
    }
  }
  for (std::size_t i = 0; i < rules.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j)
      if (!selection || wanted.count({i, j})) {
        out.pairs.emplace_back(i, j);
        out.verdicts.push_back(analyze_pair(rules[i], rules[j], solver, opts));
      }
  return out;
}

} // namespace efmct
