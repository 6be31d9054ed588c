#include "efmct/formula.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace efmct {

struct Formula::Node {
  Op op = Op::BoolConst;
  bool flag = true;
  Rational number;
  std::string literal;
  Sort sort = Sort::boolean();
  Variable var;
  std::vector<Variable> bound;
  std::vector<Formula> args;
};

namespace {

std::shared_ptr<const Formula::Node> true_node() {
  static const auto node = std::make_shared<const Formula::Node>();
  return node;
}

const char* op_name(Op op) {
  switch (op) {
  case Op::Not: return "not";
  case Op::And: return "and";
  case Op::Or: return "or";
  case Op::Implies: return "=>";
  case Op::Iff: return "=";
  case Op::Eq: return "=";
  case Op::Ne: return "distinct";
  case Op::Lt: return "<";
  case Op::Le: return "<=";
  case Op::Gt: return ">";
  case Op::Ge: return ">=";
  case Op::Add: return "+";
  case Op::Sub: return "-";
  case Op::Mul: return "*";
  case Op::Div: return "/";
  case Op::Ite: return "ite";
  case Op::Exists: return "exists";
  case Op::Forall: return "forall";
  default: return "?";
  }
}

} // namespace

Formula::Formula() : node_(true_node()) {}

Formula Formula::boolean(bool value) {
  if (value)
    return Formula();
  auto n = std::make_shared<Node>();
  n->flag = false;
  return Formula(std::move(n));
}

Formula Formula::real(Rational value) {
  auto n = std::make_shared<Node>();
  n->op = Op::NumConst;
  n->number = std::move(value);
  n->sort = Sort::real();
  return Formula(std::move(n));
}

Formula Formula::natural(Rational value) {
  if (value < 0 || denominator(value) != 1)
    throw SortError("natural constant must be a non-negative integer");
  auto n = std::make_shared<Node>();
  n->op = Op::NumConst;
  n->number = std::move(value);
  n->sort = Sort::natural();
  return Formula(std::move(n));
}

Formula Formula::literal(const Sort& sort, const std::string& literal) {
  if (sort.kind() != Sort::Kind::Enumeration || !sort.has_value(literal))
    throw SortError("'" + literal + "' is not a value of sort " + sort.name());
  auto n = std::make_shared<Node>();
  n->op = Op::EnumConst;
  n->literal = literal;
  n->sort = sort;
  return Formula(std::move(n));
}

Formula Formula::var(const Variable& v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->var = v;
  n->sort = v.sort;
  return Formula(std::move(n));
}

Formula Formula::make(Op op, std::vector<Formula> args) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->args = std::move(args);
  return Formula(std::move(n));
}

Formula Formula::quantifier(Op op, std::vector<Variable> bound, Formula body) {
  if (op != Op::Exists && op != Op::Forall)
    throw std::invalid_argument("quantifier op expected");
  auto n = std::make_shared<Node>();
  n->op = op;
  n->bound = std::move(bound);
  n->args.push_back(std::move(body));
  return Formula(std::move(n));
}

Op Formula::op() const { return node_->op; }
const std::vector<Formula>& Formula::args() const { return node_->args; }
bool Formula::bool_value() const { return node_->flag; }
const Rational& Formula::number() const { return node_->number; }
const std::string& Formula::enum_literal() const { return node_->literal; }
const Variable& Formula::variable() const { return node_->var; }
const std::vector<Variable>& Formula::bound() const { return node_->bound; }
const Sort& Formula::leaf_sort() const { return node_->sort; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_)
    return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.op != y.op)
    return false;
  switch (x.op) {
  case Op::BoolConst: return x.flag == y.flag;
  case Op::NumConst: return x.number == y.number && x.sort == y.sort;
  case Op::EnumConst: return x.literal == y.literal && x.sort == y.sort;
  case Op::Var: return x.var == y.var;
  default: break;
  }
  return x.bound == y.bound && x.args == y.args;
}

// ---------------------------------------------------------------- builders

Formula lnot(Formula a) { return Formula::make(Op::Not, {std::move(a)}); }

Formula land(std::vector<Formula> conjuncts) {
  if (conjuncts.empty())
    return Formula::boolean(true);
  if (conjuncts.size() == 1)
    return std::move(conjuncts.front());
  return Formula::make(Op::And, std::move(conjuncts));
}

Formula lor(std::vector<Formula> disjuncts) {
  if (disjuncts.empty())
    return Formula::boolean(false);
  if (disjuncts.size() == 1)
    return std::move(disjuncts.front());
  return Formula::make(Op::Or, std::move(disjuncts));
}

Formula implies(Formula a, Formula b) { return Formula::make(Op::Implies, {std::move(a), std::move(b)}); }
Formula iff(Formula a, Formula b) { return Formula::make(Op::Iff, {std::move(a), std::move(b)}); }
Formula eq(Formula a, Formula b) { return Formula::make(Op::Eq, {std::move(a), std::move(b)}); }
Formula ne(Formula a, Formula b) { return Formula::make(Op::Ne, {std::move(a), std::move(b)}); }
Formula lt(Formula a, Formula b) { return Formula::make(Op::Lt, {std::move(a), std::move(b)}); }
Formula le(Formula a, Formula b) { return Formula::make(Op::Le, {std::move(a), std::move(b)}); }
Formula gt(Formula a, Formula b) { return Formula::make(Op::Gt, {std::move(a), std::move(b)}); }
Formula ge(Formula a, Formula b) { return Formula::make(Op::Ge, {std::move(a), std::move(b)}); }
Formula add(std::vector<Formula> terms) { return Formula::make(Op::Add, std::move(terms)); }
Formula sub(std::vector<Formula> terms) { return Formula::make(Op::Sub, std::move(terms)); }
Formula mul(std::vector<Formula> terms) { return Formula::make(Op::Mul, std::move(terms)); }
Formula div(Formula a, Formula b) { return Formula::make(Op::Div, {std::move(a), std::move(b)}); }

Formula ite(Formula c, Formula t, Formula e) {
  return Formula::make(Op::Ite, {std::move(c), std::move(t), std::move(e)});
}

Formula exists(std::vector<Variable> bound, Formula body) {
  if (bound.empty())
    return body;
  return Formula::quantifier(Op::Exists, std::move(bound), std::move(body));
}

Formula forall(std::vector<Variable> bound, Formula body) {
  if (bound.empty())
    return body;
  return Formula::quantifier(Op::Forall, std::move(bound), std::move(body));
}

std::vector<Formula> conjuncts(const Formula& f) {
  std::vector<Formula> out;
  if (f.op() == Op::And) {
    for (const auto& a : f.args()) {
      auto inner = conjuncts(a);
      out.insert(out.end(), inner.begin(), inner.end());
    }
  } else if (!f.is_true()) {
    out.push_back(f);
  }
  return out;
}

Formula conjoin(const std::vector<Formula>& parts) {
  std::vector<Formula> flat;
  for (const auto& p : parts) {
    auto cs = conjuncts(p);
    flat.insert(flat.end(), cs.begin(), cs.end());
  }
  return land(std::move(flat));
}

// ------------------------------------------------------------------ sorts

namespace {

Sort sort_rec(const Formula& f, std::map<std::string, Sort>& seen) {
  const auto expect_bool = [&](const Formula& a) {
    if (sort_rec(a, seen).kind() != Sort::Kind::Boolean)
      throw SortError(std::string("operand of '") + op_name(f.op()) + "' is not Boolean: " + to_smtlib(a));
  };
  switch (f.op()) {
  case Op::BoolConst: return Sort::boolean();
  case Op::NumConst:
  case Op::EnumConst: return f.leaf_sort();
  case Op::Var: {
    auto [it, fresh] = seen.emplace(f.variable().id, f.variable().sort);
    if (!fresh && !(it->second == f.variable().sort))
      throw SortError("variable '" + f.variable().id + "' used with sorts " + it->second.name() + " and " +
                      f.variable().sort.name());
    return f.variable().sort;
  }
  case Op::Not:
    if (f.args().size() != 1)
      throw SortError("'not' takes one operand");
    expect_bool(f.arg(0));
    return Sort::boolean();
  case Op::And:
  case Op::Or:
    for (const auto& a : f.args())
      expect_bool(a);
    return Sort::boolean();
  case Op::Implies:
  case Op::Iff:
    if (f.args().size() != 2)
      throw SortError(std::string("'") + op_name(f.op()) + "' takes two operands");
    expect_bool(f.arg(0));
    expect_bool(f.arg(1));
    return Sort::boolean();
  case Op::Eq:
  case Op::Ne: {
    if (f.args().size() != 2)
      throw SortError("equality takes two operands");
    auto a = sort_rec(f.arg(0), seen);
    auto b = sort_rec(f.arg(1), seen);
    if (!(a == b))
      throw SortError("equality between " + a.name() + " and " + b.name() + ": " + to_smtlib(f));
    return Sort::boolean();
  }
  case Op::Lt:
  case Op::Le:
  case Op::Gt:
  case Op::Ge: {
    if (f.args().size() != 2)
      throw SortError("comparison takes two operands");
    auto a = sort_rec(f.arg(0), seen);
    auto b = sort_rec(f.arg(1), seen);
    if (!a.is_numeric() || !(a == b))
      throw SortError("comparison between " + a.name() + " and " + b.name() + ": " + to_smtlib(f));
    return Sort::boolean();
  }
  case Op::Add:
  case Op::Sub:
  case Op::Mul:
  case Op::Div: {
    if (f.args().empty() || (f.op() == Op::Div && f.args().size() != 2))
      throw SortError(std::string("wrong operand count for '") + op_name(f.op()) + "'");
    auto first = sort_rec(f.arg(0), seen);
    if (!first.is_numeric())
      throw SortError(std::string("operand of '") + op_name(f.op()) + "' is not numeric");
    for (std::size_t i = 1; i < f.args().size(); ++i)
      if (!(sort_rec(f.arg(i), seen) == first))
        throw SortError(std::string("mixed numeric sorts under '") + op_name(f.op()) + "': " + to_smtlib(f));
    if (f.op() == Op::Div && first.kind() != Sort::Kind::Real)
      throw SortError("division is defined on Real only");
    return first;
  }
  case Op::Ite: {
    if (f.args().size() != 3)
      throw SortError("'ite' takes three operands");
    expect_bool(f.arg(0));
    auto t = sort_rec(f.arg(1), seen);
    auto e = sort_rec(f.arg(2), seen);
    if (!(t == e))
      throw SortError("'ite' branches have sorts " + t.name() + " and " + e.name());
    return t;
  }
  case Op::Exists:
  case Op::Forall: {
    std::map<std::string, Sort> inner = seen;
    for (const auto& b : f.bound())
      inner.insert_or_assign(b.id, b.sort);
    if (sort_rec(f.arg(0), inner).kind() != Sort::Kind::Boolean)
      throw SortError("quantifier body is not Boolean");
    return Sort::boolean();
  }
  }
  throw SortError("unknown operator");
}

void free_rec(const Formula& f, std::set<std::string>& bound, std::set<Variable>& out) {
  if (f.op() == Op::Var) {
    if (!bound.count(f.variable().id))
      out.insert(f.variable());
    return;
  }
  if (f.op() == Op::Exists || f.op() == Op::Forall) {
    std::set<std::string> inner = bound;
    for (const auto& b : f.bound())
      inner.insert(b.id);
    free_rec(f.arg(0), inner, out);
    return;
  }
  for (const auto& a : f.args())
    free_rec(a, bound, out);
}

} // namespace

Sort sort_of(const Formula& f) {
  std::map<std::string, Sort> seen;
  return sort_rec(f, seen);
}

void check_well_sorted(const Formula& f) {
  if (sort_of(f).kind() != Sort::Kind::Boolean)
    throw SortError("formula is not Boolean: " + to_smtlib(f));
}

std::set<Variable> free_vars(const Formula& f) {
  std::set<std::string> bound;
  std::set<Variable> out;
  free_rec(f, bound, out);
  return out;
}

bool has_quantifier(const Formula& f) {
  if (f.op() == Op::Exists || f.op() == Op::Forall)
    return true;
  return std::any_of(f.args().begin(), f.args().end(), [](const Formula& a) { return has_quantifier(a); });
}

// ----------------------------------------------------------- substitution

void Substitution::add(const Variable& from, const Variable& to) {
  if (!(from.sort == to.sort))
    throw SortError("substitution " + from.id + " -> " + to.id + " changes sort " + from.sort.name() + " to " +
                    to.sort.name());
  map_.insert_or_assign(from.id, std::make_pair(from, to));
}

const Variable* Substitution::find(const std::string& id) const {
  auto it = map_.find(id);
  return it == map_.end() ? nullptr : &it->second.second;
}

Variable Substitution::apply(const Variable& v) const {
  const auto* to = find(v.id);
  return to ? *to : v;
}

Substitution compose(const Substitution& outer, const Substitution& inner) {
  Substitution out;
  for (const auto& [id, pair] : inner.entries())
    out.add(pair.first, outer.apply(pair.second));
  for (const auto& [id, pair] : outer.entries())
    if (!inner.find(id))
      out.add(pair.first, pair.second);
  return out;
}

namespace {

Formula replace_rec(const Formula& f, const std::map<std::string, Formula>& terms) {
  if (terms.empty())
    return f;
  switch (f.op()) {
  case Op::BoolConst:
  case Op::NumConst:
  case Op::EnumConst: return f;
  case Op::Var: {
    auto it = terms.find(f.variable().id);
    if (it == terms.end())
      return f;
    if (!(sort_of(it->second) == f.variable().sort))
      throw SortError("substituting '" + f.variable().id + "' changes its sort");
    return it->second;
  }
  case Op::Exists:
  case Op::Forall: {
    const auto body_free = free_vars(f.arg(0));
    std::map<std::string, Formula> inner;
    std::set<std::string> range_free;
    for (const auto& [id, term] : terms) {
      bool shadowed = std::any_of(f.bound().begin(), f.bound().end(), [&](const Variable& b) { return b.id == id; });
      bool occurs = std::any_of(body_free.begin(), body_free.end(), [&](const Variable& v) { return v.id == id; });
      if (shadowed || !occurs)
        continue;
      inner.emplace(id, term);
      for (const auto& v : free_vars(term))
        range_free.insert(v.id);
    }
    if (inner.empty())
      return f;
    std::set<std::string> taken = range_free;
    for (const auto& v : body_free)
      taken.insert(v.id);
    for (const auto& b : f.bound())
      taken.insert(b.id);
    std::vector<Variable> bound;
    for (const auto& b : f.bound()) {
      if (!range_free.count(b.id)) {
        bound.push_back(b);
        continue;
      }
      Variable renamed{b.id + "'", b.sort};
      while (taken.count(renamed.id))
        renamed.id += "'";
      taken.insert(renamed.id);
      inner.insert_or_assign(b.id, Formula::var(renamed));
      bound.push_back(renamed);
    }
    return Formula::quantifier(f.op(), std::move(bound), replace_rec(f.arg(0), inner));
  }
  default: {
    std::vector<Formula> args;
    args.reserve(f.args().size());
    for (const auto& a : f.args())
      args.push_back(replace_rec(a, terms));
    return Formula::make(f.op(), std::move(args));
  }
  }
}

} // namespace

Formula instantiate(const Formula& f, const std::map<std::string, Formula>& terms) {
  return replace_rec(f, terms);
}

Formula substitute(const Formula& f, const Substitution& s) {
  std::map<std::string, Formula> terms;
  for (const auto& [id, pair] : s.entries())
    terms.emplace(id, Formula::var(pair.second));
  // occurrence sorts are checked against the substitution's declared source sort
  for (const auto& v : free_vars(f)) {
    auto it = s.entries().find(v.id);
    if (it != s.entries().end() && !(it->second.first.sort == v.sort))
      throw SortError("substitution for '" + v.id + "' declared with sort " + it->second.first.sort.name() +
                      " but used as " + v.sort.name());
  }
  return replace_rec(f, terms);
}

// ------------------------------------------------------------- evaluation

namespace {

std::optional<bool> as_bool(const std::optional<Value>& v) {
  if (!v)
    return std::nullopt;
  if (const auto* b = std::get_if<bool>(&*v))
    return *b;
  return std::nullopt;
}

std::optional<Rational> as_num(const std::optional<Value>& v) {
  if (!v)
    return std::nullopt;
  if (const auto* r = std::get_if<Rational>(&*v))
    return *r;
  return std::nullopt;
}

} // namespace

std::optional<Value> evaluate(const Formula& f, const Assignment& env) {
  switch (f.op()) {
  case Op::BoolConst: return Value{f.bool_value()};
  case Op::NumConst: return Value{f.number()};
  case Op::EnumConst: return Value{f.enum_literal()};
  case Op::Var: {
    auto it = env.find(f.variable().id);
    if (it == env.end())
      return std::nullopt;
    return it->second;
  }
  case Op::Not: {
    auto a = as_bool(evaluate(f.arg(0), env));
    if (!a)
      return std::nullopt;
    return Value{!*a};
  }
  case Op::And:
  case Op::Or: {
    const bool short_value = f.op() == Op::Or;
    bool unknown = false;
    for (const auto& a : f.args()) {
      auto v = as_bool(evaluate(a, env));
      if (!v)
        unknown = true;
      else if (*v == short_value)
        return Value{short_value};
    }
    if (unknown)
      return std::nullopt;
    return Value{!short_value};
  }
  case Op::Implies: {
    auto a = as_bool(evaluate(f.arg(0), env));
    if (a && !*a)
      return Value{true};
    auto b = as_bool(evaluate(f.arg(1), env));
    if (b && *b)
      return Value{true};
    if (a && b)
      return Value{false};
    return std::nullopt;
  }
  case Op::Iff:
  case Op::Eq:
  case Op::Ne: {
    auto a = evaluate(f.arg(0), env);
    auto b = evaluate(f.arg(1), env);
    if (!a || !b)
      return std::nullopt;
    bool same = *a == *b;
    return Value{f.op() == Op::Ne ? !same : same};
  }
  case Op::Lt:
  case Op::Le:
  case Op::Gt:
  case Op::Ge: {
    auto a = as_num(evaluate(f.arg(0), env));
    auto b = as_num(evaluate(f.arg(1), env));
    if (!a || !b)
      return std::nullopt;
    switch (f.op()) {
    case Op::Lt: return Value{*a < *b};
    case Op::Le: return Value{*a <= *b};
    case Op::Gt: return Value{*a > *b};
    default: return Value{*a >= *b};
    }
  }
  case Op::Add:
  case Op::Sub:
  case Op::Mul:
  case Op::Div: {
    std::vector<Rational> xs;
    for (const auto& a : f.args()) {
      auto v = as_num(evaluate(a, env));
      if (!v)
        return std::nullopt;
      xs.push_back(*v);
    }
    if (f.op() == Op::Sub && xs.size() == 1)
      return Value{Rational(-xs[0])};
    Rational acc = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) {
      switch (f.op()) {
      case Op::Add: acc += xs[i]; break;
      case Op::Sub: acc -= xs[i]; break;
      case Op::Mul: acc *= xs[i]; break;
      default:
        if (xs[i] == 0)
          return std::nullopt;
        acc /= xs[i];
      }
    }
    return Value{acc};
  }
  case Op::Ite: {
    auto c = as_bool(evaluate(f.arg(0), env));
    if (!c)
      return std::nullopt;
    return evaluate(f.arg(*c ? 1 : 2), env);
  }
  case Op::Exists:
  case Op::Forall: return std::nullopt;
  }
  return std::nullopt;
}

Formula value_term(const Sort& sort, const Value& v) {
  switch (sort.kind()) {
  case Sort::Kind::Boolean:
    if (const auto* b = std::get_if<bool>(&v))
      return Formula::boolean(*b);
    break;
  case Sort::Kind::Real:
    if (const auto* r = std::get_if<Rational>(&v))
      return Formula::real(*r);
    break;
  case Sort::Kind::Natural:
    if (const auto* r = std::get_if<Rational>(&v))
      return Formula::natural(*r);
    break;
  case Sort::Kind::Enumeration:
    if (const auto* s = std::get_if<std::string>(&v))
      return Formula::literal(sort, *s);
    break;
  }
  throw SortError("value does not belong to sort " + sort.name());
}

// --------------------------------------------------------------- printing

namespace {

bool simple_symbol_char(char c, bool first) {
  if (std::isalpha(static_cast<unsigned char>(c)))
    return true;
  if (!first && std::isdigit(static_cast<unsigned char>(c)))
    return true;
  return std::string_view("~!@$%^&*_-+=<>.?/").find(c) != std::string_view::npos;
}

const std::set<std::string>& reserved_words() {
  static const std::set<std::string> words{
      "and", "or",  "not", "=>", "=", "distinct", "<",   "<=", ">",  ">=",      "+",       "-",
      "*",   "/",   "ite", "exists", "forall", "let", "true", "false", "!", "_", "as", "par"};
  return words;
}

std::string integer_text(const Rational& r) {
  std::ostringstream os;
  os << numerator(r);
  return os.str();
}

std::string number_text(const Rational& value, bool real) {
  Rational mag = value < 0 ? Rational(-value) : value;
  std::string body;
  if (denominator(mag) == 1) {
    body = integer_text(mag) + (real ? ".0" : "");
  } else {
    std::ostringstream n, d;
    n << numerator(mag);
    d << denominator(mag);
    body = "(/ " + n.str() + ".0 " + d.str() + ".0)";
  }
  return value < 0 ? "(- " + body + ")" : body;
}

void print_rec(const Formula& f, const PrintOptions& opts, std::string& out) {
  switch (f.op()) {
  case Op::BoolConst: out += f.bool_value() ? "true" : "false"; return;
  case Op::NumConst: out += number_text(f.number(), f.leaf_sort().kind() == Sort::Kind::Real); return;
  case Op::EnumConst:
    if (opts.enum_as_int)
      out += std::to_string(f.leaf_sort().index_of(f.enum_literal()));
    else
      out += smtlib_symbol(f.enum_literal());
    return;
  case Op::Var: out += smtlib_symbol(f.variable().id); return;
  case Op::Exists:
  case Op::Forall: {
    out += "(";
    out += op_name(f.op());
    out += " (";
    std::vector<std::string> guards;
    for (std::size_t i = 0; i < f.bound().size(); ++i) {
      const auto& b = f.bound()[i];
      if (i)
        out += " ";
      out += "(" + smtlib_symbol(b.id) + " " + smtlib_sort(b.sort, opts) + ")";
      if (opts.solver_sorts && b.sort.kind() == Sort::Kind::Natural)
        guards.push_back("(>= " + smtlib_symbol(b.id) + " 0)");
      if (opts.solver_sorts && opts.enum_as_int && b.sort.kind() == Sort::Kind::Enumeration)
        guards.push_back("(and (>= " + smtlib_symbol(b.id) + " 0) (< " + smtlib_symbol(b.id) + " " +
                         std::to_string(b.sort.values().size()) + "))");
    }
    out += ") ";
    std::string body;
    print_rec(f.arg(0), opts, body);
    if (guards.empty()) {
      out += body;
    } else {
      std::string guard = guards.size() == 1 ? guards[0] : "(and";
      if (guards.size() > 1) {
        for (const auto& g : guards)
          guard += " " + g;
        guard += ")";
      }
      out += f.op() == Op::Exists ? "(and " + guard + " " + body + ")" : "(=> " + guard + " " + body + ")";
    }
    out += ")";
    return;
  }
  default: break;
  }
  out += "(";
  out += op_name(f.op());
  for (const auto& a : f.args()) {
    out += " ";
    print_rec(a, opts, out);
  }
  out += ")";
}

} // namespace

std::string smtlib_symbol(const std::string& id) {
  if (id.empty() || id.find('|') != std::string::npos || id.find('\\') != std::string::npos)
    throw std::invalid_argument("identifier cannot be written as an SMT-LIB symbol: '" + id + "'");
  bool simple = !reserved_words().count(id);
  for (std::size_t i = 0; simple && i < id.size(); ++i)
    simple = simple_symbol_char(id[i], i == 0);
  return simple ? id : "|" + id + "|";
}

std::string smtlib_sort(const Sort& s, const PrintOptions& opts) {
  switch (s.kind()) {
  case Sort::Kind::Boolean: return "Bool";
  case Sort::Kind::Real: return "Real";
  case Sort::Kind::Natural: return opts.solver_sorts ? "Int" : "Nat";
  case Sort::Kind::Enumeration: return opts.enum_as_int ? "Int" : smtlib_symbol(s.name());
  }
  return "?";
}

std::string to_smtlib(const Formula& f, const PrintOptions& opts) {
  std::string out;
  print_rec(f, opts, out);
  return out;
}

} // namespace efmct
