#pragma once

#include "efmct/efm.hpp"
#include "efmct/matching.hpp"
#include "efmct/rule.hpp"

#include <optional>
#include <string>
#include <vector>

namespace efmct {

/// Minimal application context: the glued graph AC (formula true) with the
/// two embeddings of the rule patterns.
struct OverlapContext {
  std::size_t index = 0;
  SymbolicGraph ac;
  Morphism m1; // lhs1 -> ac
  Morphism m2; // lhs2 -> ac
  /// lhs2 element -> lhs1 element it was glued to.
  Identification overlap;
};

/// One context per non-empty identification of lhs2 objects with equi-typed
/// lhs1 objects. Links between identified objects are identified whenever
/// lhs1 has a link of the same type there (parallel links are not allowed).
/// Ordered by number of identified elements, largest first, then by the
/// identification itself. Throws TypeGraphMismatch.
std::vector<OverlapContext> enumerate_overlaps(const SymbolicGraph& lhs1, const SymbolicGraph& lhs2);

/// Isomorphism of the triples (ac, m1, m2).
bool contexts_isomorphic(const OverlapContext& a, const OverlapContext& b);

struct DroppedContext {
  OverlapContext context;
  std::vector<efm::Violation> violations;
};

struct WellFormednessPartition {
  std::vector<OverlapContext> kept;
  std::vector<DroppedContext> dropped;
};

WellFormednessPartition filter_wellformed(std::vector<OverlapContext> contexts,
                                          const std::vector<efm::WellFormednessConstraint>& constraints);
/// Uses the built-in EFM constraints.
WellFormednessPartition filter_wellformed(std::vector<OverlapContext> contexts);

enum class CpaVerdict { PotentialConflict, Independent };
const char* to_string(CpaVerdict v);

struct CpaResult {
  CpaVerdict verdict = CpaVerdict::Independent;
  std::vector<std::string> reasons;
};

/// Delete-use and reassign-use interactions of r1@m1 and r2@m2.
CpaResult cpa_filter(const SymbolicRule& r1, const SymbolicRule& r2, const OverlapContext& ctx);

enum class Equivalence { Equivalent, NotEquivalent, Unknown };
const char* to_string(Equivalence e);

/// Variables of `result` held by no slot and absent from `base`.
std::set<Variable> auxiliary_vars(const SymbolicGraph& result, const SymbolicGraph& base);

struct EquivalenceCheck {
  Equivalence verdict = Equivalence::Unknown;
  std::set<Variable> aux12;
  std::set<Variable> aux21;
  /// Variables of the first result -> variables of the second.
  Substitution sigma;
  Formula query;
  smt::ValidityVerdict solver;
};

class UnhousedVariable : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Validity of σ(∃aux12 : Φ12) ⇔ ∃aux21 : Φ21, where σ is induced by `iso`
/// (res12 -> res21) on slots and is the identity on base variables. Throws
/// UnhousedVariable when σ does not cover a free variable.
EquivalenceCheck check_result_equivalence(const SymbolicGraph& res12, const SymbolicGraph& res21,
                                          const SymbolicGraph& base, const Morphism& iso, smt::Solver& solver);

enum class ContextVerdict {
  NoConflictHere,
  ConflictHere,
  FilteredIllFormed,
  FilteredInvalidApplication,
  FilteredIndependent,
  /// Stage-one only: the CPA filter flags the context.
  CpaPotentialConflict,
};
const char* to_string(ContextVerdict v);

enum class ConflictReason {
  None,
  NoSecondMatch,
  NoIsomorphicResult,
  FormulasNotEquivalent,
  SolverUnknown,
  SolverTimeout,
};
const char* to_string(ConflictReason r);

struct ContextTrace {
  explicit ContextTrace(OverlapContext ctx) : context(std::move(ctx)) {}

  OverlapContext context;
  ContextVerdict verdict = ContextVerdict::ConflictHere;
  ConflictReason reason = ConflictReason::None;
  std::vector<std::string> violations; // constraint names, when ill-formed
  std::vector<std::string> cpa_reasons;
  std::optional<ApplicationStatus> first12; // r1@m1 on ac
  std::optional<ApplicationStatus> first21; // r2@m2 on ac
  std::size_t second_matches12 = 0;         // matches of r2 after r1
  std::size_t second_matches21 = 0;         // matches of r1 after r2
  std::size_t isomorphisms_tried = 0;
  std::optional<Morphism> m2_second; // r2 match in AC1
  std::optional<Morphism> m1_second; // r1 match in AC2
  std::optional<Morphism> iso;       // AC12 -> AC21
  std::optional<EquivalenceCheck> equivalence;
  std::string diagnostic;
};

/// Direct-confluence search on a context that passed the filters. Second
/// matches and isomorphisms are tried exhaustively.
ContextTrace check_direct_confluence(const SymbolicRule& r1, const SymbolicRule& r2, const OverlapContext& ctx,
                                     smt::Solver& solver);

/// Re-runs the recorded matches and isomorphism of a NoConflictHere trace.
Equivalence replay_trace(const SymbolicRule& r1, const SymbolicRule& r2, const ContextTrace& trace,
                         smt::Solver& solver);

struct AnalysisOptions {
  /// Forbidden patterns for the well-formedness filter; empty means the
  /// built-in EFM constraints when the rules are EFM-typed, none otherwise.
  std::optional<std::vector<efm::WellFormednessConstraint>> constraints;
  /// Stop after the CPA stage and report its verdicts.
  bool cpa_only = false;
  /// Skip contexts the CPA stage finds independent.
  bool skip_independent = true;
  bool stop_at_first_conflict = false;
  /// Parallel workers over contexts; the solver must be thread-safe.
  unsigned jobs = 1;
};

enum class PairOutcome { NonConflicting, Conflicting };
const char* to_string(PairOutcome o);

struct PairStats {
  std::size_t enumerated = 0;
  std::size_t ill_formed = 0;
  std::size_t independent = 0;
  std::size_t invalid_application = 0;
  std::size_t proven = 0;
  std::size_t conflicts = 0;
  std::size_t unanalyzed = 0;
};

struct PairVerdict {
  std::string rule1;
  std::string rule2;
  PairOutcome verdict = PairOutcome::Conflicting;
  bool cpa_only = false;
  std::vector<ContextTrace> traces;
  PairStats stats;
};

/// Enumerate, filter and search every context. NonConflicting iff no context
/// ends in ConflictHere (CpaPotentialConflict in cpa-only mode).
PairVerdict analyze_pair(const SymbolicRule& r1, const SymbolicRule& r2, smt::Solver& solver,
                         const AnalysisOptions& opts = {});

struct RulesetAnalysis {
  std::vector<std::string> rules;
  /// Entries (i, j) with j <= i, row-major.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<PairVerdict> verdicts;

  const PairVerdict* at(std::size_t i, std::size_t j) const;
  std::size_t count(PairOutcome o) const;
};

/// Lower-triangular analysis including the diagonal. `selection` restricts
/// the analysis to the given (i, j) pairs.
RulesetAnalysis analyze_ruleset(const std::vector<SymbolicRule>& rules, smt::Solver& solver,
                                const AnalysisOptions& opts = {},
                                const std::optional<std::vector<std::pair<std::size_t, std::size_t>>>& selection = {});

} // namespace efmct
