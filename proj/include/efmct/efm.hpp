#pragma once

#include "efmct/graph.hpp"
#include "efmct/smt.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace efmct::efm {

// Metamodel vocabulary.
inline constexpr const char* kFeature = "Feature";
inline constexpr const char* kGroup = "Group";
inline constexpr const char* kRealAttribute = "RealFeatureAttribute";
inline constexpr const char* kNatAttribute = "NatFeatureAttribute";
inline constexpr const char* kExclude = "ExcludeRelation";
inline constexpr const char* kGroups = "groups";
inline constexpr const char* kFeatures = "features";
inline constexpr const char* kAttributes = "attributes";
inline constexpr const char* kRequires = "req";
inline constexpr const char* kExcludes = "ex";
inline constexpr const char* kSel = "sel";
inline constexpr const char* kType = "type";
inline constexpr const char* kVal = "val";

/// The fixed EFM type graph (shared instance).
std::shared_ptr<const TypeGraph> efm_type_graph();

/// Forbidden pattern ¬∃C.
struct WellFormednessConstraint {
  std::string name;
  SymbolicGraph pattern;
};

/// C-1 (feature in two groups), C-2 (nat attribute under two features),
/// C-3 (real attribute under two features).
const std::vector<WellFormednessConstraint>& builtin_constraints();

struct Violation {
  std::string constraint;
  Morphism match;
};

/// One entry per violating match; the two symmetric container roles are
/// reported once. Throws TypeGraphMismatch for non-EFM graphs.
std::vector<Violation> check_wellformed(const SymbolicGraph& g);
std::vector<Violation> check_wellformed(const SymbolicGraph& g, const std::vector<WellFormednessConstraint>& constraints);

class MalformedModel : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Group, parent/child, require and exclude semantics over the sel/type slot
/// variables. Does not include g's own formula.
Formula encode_config_semantics(const SymbolicGraph& g);

class PartialAssignment : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Decides a ⊨ semantics(g) ∧ Φ_g by constant folding. Variables of Φ_g not
/// held by a slot are existentially closed and handed to `solver` when folding
/// cannot decide; without a solver such cases throw std::runtime_error.
/// Throws PartialAssignment when a slot variable is unassigned or ill-sorted.
bool check_configuration(const SymbolicGraph& g, const Assignment& a, smt::Solver* solver = nullptr);

enum class Answer { Yes, No, Unknown };
const char* to_string(Answer a);

/// Satisfiability of semantics(g) ∧ Φ_g. Solver trouble maps to Unknown.
Answer has_valid_configuration(const SymbolicGraph& g, smt::Solver& solver);

} // namespace efmct::efm
