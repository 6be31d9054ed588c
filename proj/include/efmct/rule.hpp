#pragma once

#include "efmct/graph.hpp"
#include "efmct/smt.hpp"

#include <string>
#include <vector>

namespace efmct {

/// LHS element id -> RHS element id for the elements a rule keeps.
struct Preservation {
  std::map<std::string, std::string> objects;
  std::map<std::string, std::string> links;
  friend bool operator==(const Preservation&, const Preservation&) = default;
};

/// Symbolic graph transformation rule (LHS, RHS, phi). A preserved object
/// whose RHS slot holds a variable different from its LHS slot reassigns
/// that attribute.
struct SymbolicRule {
  std::string name;
  SymbolicGraph lhs;
  SymbolicGraph rhs;
  Preservation preserve;
  Formula phi;

  std::set<Variable> variables() const;
  /// LHS objects removed by the rule.
  std::vector<std::string> deleted_objects() const;
  std::vector<std::string> deleted_links() const;
  /// (LHS object, attribute) pairs whose slot gets a new variable.
  std::vector<std::pair<std::string, std::string>> reassigned_slots() const;
  bool deletes_anything() const { return !deleted_objects().empty() || !deleted_links().empty(); }
};

std::vector<std::string> validate_rule(const SymbolicRule& r);

enum class Admissibility { Admissible, Inadmissible, Unknown };
const char* to_string(Admissibility a);

struct AdmissibilityReport {
  Admissibility verdict = Admissibility::Unknown;
  /// Conjuncts over LHS variables only; they act as application conditions.
  std::vector<Formula> application_conditions;
  /// Conjuncts mentioning fresh variables.
  std::vector<Formula> effect_constraints;
  /// ∀ lhs-vars ∃ fresh-vars : effect constraints.
  Formula query;
  smt::ValidityVerdict solver;
};

AdmissibilityReport check_admissibility(const SymbolicRule& r, smt::Solver& solver);

std::vector<Morphism> find_rule_matches(const SymbolicRule& r, const SymbolicGraph& host);

enum class ApplicationStatus { Applied, InvalidDangling, InvalidUnsat, UnknownSat };
const char* to_string(ApplicationStatus s);

struct ApplicationResult {
  explicit ApplicationResult(SymbolicGraph g) : graph(std::move(g)) {}

  ApplicationStatus status = ApplicationStatus::Applied;
  /// Rewritten graph; for InvalidUnsat/UnknownSat the rejected candidate,
  /// for InvalidDangling the host unchanged.
  SymbolicGraph graph;
  /// RHS -> result graph (empty unless the graph was rewritten).
  Morphism comatch;
  /// Rule variables -> graph variables used to instantiate phi.
  Substitution sigma;
  /// Host links that would lose an endpoint.
  std::vector<std::string> dangling;
  smt::Status sat = smt::Status::Sat;
  std::string diagnostic;

  bool applied() const { return status == ApplicationStatus::Applied; }
};

class InvalidMatch : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Applies `r` at `m`: deletes LHS-only images (refusing dangling links),
/// adds RHS-only elements with fresh ids and variables, installs fresh
/// variables on reassigned slots and conjoins σ'(phi) to the host formula.
/// Fresh ids are "<rule>:<rhs id>", suffixed "#n" on collision. Variables are
/// never removed. Throws InvalidMatch when `m` is not a match of r.lhs.
ApplicationResult apply(const SymbolicRule& r, const Morphism& m, const SymbolicGraph& host, smt::Solver& solver);

/// Identity rule on `pattern` (everything preserved, phi = true).
SymbolicRule identity_rule(const std::string& name, const SymbolicGraph& pattern);

} // namespace efmct
