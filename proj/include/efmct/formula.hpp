#pragma once

#include "efmct/sort.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace efmct {

using Rational = boost::multiprecision::cpp_rational;

enum class Op {
  BoolConst,
  NumConst,
  EnumConst,
  Var,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  Add,
  Sub, // one argument means negation
  Mul,
  Div,
  Ite,
  Exists,
  Forall,
};

/// Immutable first-order term. Copies share structure.
class Formula {
public:
  Formula(); // the constant `true`

  static Formula boolean(bool value);
  static Formula real(Rational value);
  /// Throws SortError for negative values.
  static Formula natural(Rational value);
  /// Throws SortError when `literal` is not a value of `sort`.
  static Formula literal(const Sort& sort, const std::string& literal);
  static Formula var(const Variable& v);
  static Formula make(Op op, std::vector<Formula> args);
  static Formula quantifier(Op op, std::vector<Variable> bound, Formula body);

  Op op() const;
  const std::vector<Formula>& args() const;
  const Formula& arg(std::size_t i) const { return args().at(i); }

  bool bool_value() const;           // BoolConst
  const Rational& number() const;    // NumConst
  const std::string& enum_literal() const; // EnumConst
  const Variable& variable() const;  // Var
  const std::vector<Variable>& bound() const; // Exists / Forall
  /// Sort carried by constants and variables.
  const Sort& leaf_sort() const;

  bool is_true() const { return op() == Op::BoolConst && bool_value(); }
  bool is_false() const { return op() == Op::BoolConst && !bool_value(); }

  friend bool operator==(const Formula& a, const Formula& b);

  struct Node;

private:
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Builders. Sorts are checked lazily by sort_of / check_well_sorted.
Formula lnot(Formula a);
Formula land(std::vector<Formula> conjuncts);
Formula lor(std::vector<Formula> disjuncts);
Formula implies(Formula a, Formula b);
Formula iff(Formula a, Formula b);
Formula eq(Formula a, Formula b);
Formula ne(Formula a, Formula b);
Formula lt(Formula a, Formula b);
Formula le(Formula a, Formula b);
Formula gt(Formula a, Formula b);
Formula ge(Formula a, Formula b);
Formula add(std::vector<Formula> terms);
Formula sub(std::vector<Formula> terms);
Formula mul(std::vector<Formula> terms);
Formula div(Formula a, Formula b);
Formula ite(Formula c, Formula t, Formula e);
Formula exists(std::vector<Variable> bound, Formula body);
Formula forall(std::vector<Variable> bound, Formula body);

/// Conjunction that drops literal `true` conjuncts and flattens nested ands.
Formula conjoin(const std::vector<Formula>& parts);
/// Top-level conjuncts of `f` (nested ands flattened, `true` dropped).
std::vector<Formula> conjuncts(const Formula& f);

/// Sort of a well-sorted term; throws SortError otherwise.
Sort sort_of(const Formula& f);
/// Throws SortError unless `f` is a well-sorted Boolean term.
void check_well_sorted(const Formula& f);

std::set<Variable> free_vars(const Formula& f);
bool has_quantifier(const Formula& f);

/// Sort-preserving map from variables to variables.
class Substitution {
public:
  Substitution() = default;

  /// Throws SortError when the sorts differ.
  void add(const Variable& from, const Variable& to);
  const Variable* find(const std::string& id) const;
  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  const std::map<std::string, std::pair<Variable, Variable>>& entries() const { return map_; }

  Variable apply(const Variable& v) const;
  friend bool operator==(const Substitution&, const Substitution&) = default;

private:
  std::map<std::string, std::pair<Variable, Variable>> map_; // id -> (from, to)
};

/// outer ∘ inner: applies `inner` first.
Substitution compose(const Substitution& outer, const Substitution& inner);

/// Capture-avoiding replacement of free variables. Throws SortError when an
/// occurrence's sort disagrees with the mapped variable.
Formula substitute(const Formula& f, const Substitution& s);
/// Capture-avoiding replacement of free variables by arbitrary terms.
Formula instantiate(const Formula& f, const std::map<std::string, Formula>& terms);

using Value = std::variant<bool, Rational, std::string>;
using Assignment = std::map<std::string, Value>;

/// Constant folding under `env`. nullopt when a free variable is unassigned,
/// a quantifier is met, or a division by zero occurs.
std::optional<Value> evaluate(const Formula& f, const Assignment& env);

/// Term to formula for a constant value of `sort`.
Formula value_term(const Sort& sort, const Value& v);

struct PrintOptions {
  /// Encode enumeration sorts as integers 0..n-1.
  bool enum_as_int = false;
  /// Print Natural as Int and guard bound Natural/enum variables.
  bool solver_sorts = false;
};

/// SMT-LIB2 term text. Deterministic.
std::string to_smtlib(const Formula& f, const PrintOptions& opts = {});
std::string smtlib_symbol(const std::string& id);
std::string smtlib_sort(const Sort& s, const PrintOptions& opts = {});

} // namespace efmct
