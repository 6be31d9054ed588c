#include "efmct/io.hpp"

#include "efmct/efm.hpp"

#include <json.hpp>

#include <cctype>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace efmct::io {

using nlohmann::json;

// ----------------------------------------------------------------- terms

namespace {

struct SExpr {
  std::string atom;
  bool quoted = false;
  bool is_list = false;
  std::vector<SExpr> items;
  std::size_t offset = 0;
};

class TermError : public std::runtime_error {
public:
  TermError(std::size_t offset, const std::string& message) : std::runtime_error(message), offset(offset) {}
  std::size_t offset;
};

class Reader {
public:
  explicit Reader(const std::string& text) : text_(text) {}

  SExpr read_all() {
    skip();
    if (pos_ >= text_.size())
      throw TermError(pos_, "empty term");
    SExpr e = read();
    skip();
    if (pos_ < text_.size())
      throw TermError(pos_, "trailing input after term");
    return e;
  }

private:
  void skip() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      } else if (text_[pos_] == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n')
          ++pos_;
      } else {
        break;
      }
    }
  }

  SExpr read() {
    skip();
    if (pos_ >= text_.size())
      throw TermError(pos_, "unexpected end of term");
    SExpr e;
    e.offset = pos_;
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      e.is_list = true;
      for (;;) {
        skip();
        if (pos_ >= text_.size())
          throw TermError(e.offset, "unbalanced '('");
        if (text_[pos_] == ')') {
          ++pos_;
          return e;
        }
        e.items.push_back(read());
      }
    }
    if (c == ')')
      throw TermError(pos_, "unexpected ')'");
    if (c == '|') {
      auto end = text_.find('|', pos_ + 1);
      if (end == std::string::npos)
        throw TermError(pos_, "unterminated quoted symbol");
      e.atom = text_.substr(pos_ + 1, end - pos_ - 1);
      e.quoted = true;
      pos_ = end + 1;
      return e;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
           text_[pos_] != ')' && text_[pos_] != ';' && text_[pos_] != '|')
      ++pos_;
    e.atom = text_.substr(start, pos_ - start);
    return e;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

bool is_numeral(const SExpr& e) {
  if (e.is_list || e.quoted || e.atom.empty())
    return false;
  return std::all_of(e.atom.begin(), e.atom.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

bool is_decimal(const SExpr& e) {
  if (e.is_list || e.quoted)
    return false;
  auto dot = e.atom.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == e.atom.size())
    return false;
  for (std::size_t i = 0; i < e.atom.size(); ++i)
    if (i != dot && !std::isdigit(static_cast<unsigned char>(e.atom[i])))
      return false;
  return true;
}

Rational decimal_value(const std::string& text) {
  auto dot = text.find('.');
  if (dot == std::string::npos)
    return Rational(boost::multiprecision::cpp_int(text));
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  boost::multiprecision::cpp_int scale = 1;
  for (std::size_t i = dot + 1; i < text.size(); ++i)
    scale *= 10;
  return Rational(boost::multiprecision::cpp_int(digits), scale);
}

const std::set<std::string> kArith{"+", "-", "*", "/"};
const std::set<std::string> kCompare{"=", "distinct", "<", "<=", ">", ">="};

class Elaborator {
public:
  Elaborator(const std::map<std::string, Variable>& vars, const std::vector<Sort>& enums)
      : vars_(vars), enums_(enums) {}

  Formula term(const SExpr& e, const std::optional<Sort>& hint) {
    if (!e.is_list)
      return atom(e, hint);
    if (e.items.empty())
      throw TermError(e.offset, "empty application");
    const SExpr& head = e.items.front();
    if (head.is_list || head.quoted)
      throw TermError(head.offset, "expected an operator");
    const std::string& op = head.atom;
    std::vector<SExpr> args(e.items.begin() + 1, e.items.end());

    if (op == "exists" || op == "forall")
      return quantifier(e, op == "exists" ? Op::Exists : Op::Forall);
    if (op == "not") {
      arity(e, args, 1, 1);
      return lnot(boolean(args[0]));
    }
    if (op == "and" || op == "or") {
      std::vector<Formula> xs;
      for (const auto& a : args)
        xs.push_back(boolean(a));
      if (xs.empty())
        return Formula::boolean(op == "and");
      return Formula::make(op == "and" ? Op::And : Op::Or, std::move(xs));
    }
    if (op == "=>") {
      arity(e, args, 2, SIZE_MAX);
      Formula out = boolean(args.back());
      for (std::size_t i = args.size() - 1; i-- > 0;)
        out = implies(boolean(args[i]), out);
      return out;
    }
    if (op == "ite") {
      arity(e, args, 3, 3);
      Formula c = boolean(args[0]);
      auto xs = group({args[1], args[2]}, hint);
      return ite(c, xs[0], xs[1]);
    }
    if (kCompare.count(op)) {
      arity(e, args, 2, SIZE_MAX);
      std::optional<Sort> sort;
      auto xs = group(args, std::nullopt, &sort);
      const bool boolean_args = sort && sort->kind() == Sort::Kind::Boolean;
      if (op == "distinct") {
        std::vector<Formula> parts;
        for (std::size_t i = 0; i < xs.size(); ++i)
          for (std::size_t j = i + 1; j < xs.size(); ++j)
            parts.push_back(boolean_args ? lnot(iff(xs[i], xs[j])) : ne(xs[i], xs[j]));
        return parts.size() == 1 ? parts[0] : land(std::move(parts));
      }
      std::vector<Formula> chain;
      for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        if (op == "=")
          chain.push_back(boolean_args ? iff(xs[i], xs[i + 1]) : eq(xs[i], xs[i + 1]));
        else if (op == "<")
          chain.push_back(lt(xs[i], xs[i + 1]));
        else if (op == "<=")
          chain.push_back(le(xs[i], xs[i + 1]));
        else if (op == ">")
          chain.push_back(gt(xs[i], xs[i + 1]));
        else
          chain.push_back(ge(xs[i], xs[i + 1]));
      }
      return chain.size() == 1 ? chain[0] : land(std::move(chain));
    }
    if (kArith.count(op)) {
      arity(e, args, 1, SIZE_MAX);
      if (op == "/") {
        arity(e, args, 2, 2);
        Formula a = term(args[0], Sort::real());
        Formula b = term(args[1], Sort::real());
        if (a.op() == Op::NumConst && b.op() == Op::NumConst && b.number() != 0)
          return Formula::real(a.number() / b.number());
        return div(a, b);
      }
      auto xs = group(args, hint);
      if (op == "-" && xs.size() == 1 && xs[0].op() == Op::NumConst && xs[0].leaf_sort().kind() == Sort::Kind::Real)
        return Formula::real(-xs[0].number());
      if (op == "+")
        return add(std::move(xs));
      if (op == "-")
        return sub(std::move(xs));
      arity(e, args, 2, SIZE_MAX);
      return mul(std::move(xs));
    }
    throw TermError(head.offset, "unknown operator '" + op + "'");
  }

private:
  Formula boolean(const SExpr& e) {
    Formula f = term(e, Sort::boolean());
    if (sort_at(e, f).kind() != Sort::Kind::Boolean)
      throw TermError(e.offset, "expected a Boolean term");
    return f;
  }

  Sort sort_at(const SExpr& e, const Formula& f) {
    try {
      return sort_of(f);
    } catch (const SortError& err) {
      throw TermError(e.offset, err.what());
    }
  }

  void arity(const SExpr& e, const std::vector<SExpr>& args, std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi)
      throw TermError(e.offset, "'" + e.items.front().atom + "' applied to " + std::to_string(args.size()) +
                                    " operand(s)");
  }

  // Numerals whose sort follows from the context.
  bool flexible(const SExpr& e) const {
    if (is_numeral(e))
      return true;
    if (!e.is_list || e.items.size() < 2 || e.items.front().is_list)
      return false;
    const auto& op = e.items.front().atom;
    if (op != "+" && op != "-" && op != "*")
      return false;
    return std::all_of(e.items.begin() + 1, e.items.end(), [&](const SExpr& a) { return flexible(a); });
  }

  // Elaborates operands that must share one sort. Numerals and enumeration
  // literals adopt the sort of the other operands.
  std::vector<Formula> group(const std::vector<SExpr>& args, const std::optional<Sort>& hint,
                             std::optional<Sort>* chosen = nullptr) {
    std::vector<std::optional<Formula>> done(args.size());
    std::optional<Sort> found;
    for (std::size_t i = 0; i < args.size(); ++i) {
      const auto& a = args[i];
      if (flexible(a))
        continue;
      if (!a.is_list && !a.quoted && enum_literal(a.atom) && !lookup(a.atom))
        continue;
      done[i] = term(a, std::nullopt);
      Sort s = sort_at(a, *done[i]);
      if (!found || (found->kind() == Sort::Kind::Natural && s.kind() == Sort::Kind::Real))
        found = s;
    }
    if (!found) {
      for (const auto& a : args)
        if (!a.is_list && !a.quoted && !lookup(a.atom))
          if (const Sort* s = enum_literal(a.atom)) {
            found = *s;
            break;
          }
    }
    if (!found)
      found = hint && hint->is_numeric() ? *hint : Sort::natural();
    std::vector<Formula> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (done[i] && sort_at(args[i], *done[i]) == *found)
        out.push_back(*done[i]);
      else
        out.push_back(term(args[i], found));
    }
    if (chosen)
      *chosen = found;
    return out;
  }

  const Variable* lookup(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end())
        return &f->second;
    }
    auto f = vars_.find(name);
    return f == vars_.end() ? nullptr : &f->second;
  }

  const Sort* enum_literal(const std::string& name) const {
    for (const auto& s : enums_)
      if (s.has_value(name))
        return &s;
    return nullptr;
  }

  Formula atom(const SExpr& e, const std::optional<Sort>& hint) {
    if (!e.quoted) {
      if (e.atom == "true" || e.atom == "false")
        return Formula::boolean(e.atom == "true");
      if (is_numeral(e)) {
        Rational v = decimal_value(e.atom);
        return hint && hint->kind() == Sort::Kind::Real ? Formula::real(v) : Formula::natural(v);
      }
      if (is_decimal(e))
        return Formula::real(decimal_value(e.atom));
    }
    if (const Variable* v = lookup(e.atom))
      return Formula::var(*v);
    if (hint && hint->kind() == Sort::Kind::Enumeration && hint->has_value(e.atom))
      return Formula::literal(*hint, e.atom);
    if (const Sort* s = enum_literal(e.atom))
      return Formula::literal(*s, e.atom);
    throw TermError(e.offset, "unknown symbol '" + e.atom + "'");
  }

  Formula quantifier(const SExpr& e, Op op) {
    if (e.items.size() != 3 || !e.items[1].is_list)
      throw TermError(e.offset, "malformed quantifier");
    std::vector<Variable> bound;
    std::map<std::string, Variable> scope;
    for (const auto& b : e.items[1].items) {
      if (!b.is_list || b.items.size() != 2 || b.items[0].is_list || b.items[1].is_list)
        throw TermError(b.offset, "malformed binder");
      Sort s = [&] {
        try {
          return parse_sort(b.items[1].atom, enums_);
        } catch (const std::invalid_argument& err) {
          throw TermError(b.items[1].offset, err.what());
        }
      }();
      Variable v{b.items[0].atom, s};
      bound.push_back(v);
      scope[v.id] = v;
    }
    scopes_.push_back(std::move(scope));
    Formula body = boolean(e.items[2]);
    scopes_.pop_back();
    return Formula::quantifier(op, std::move(bound), std::move(body));
  }

  const std::map<std::string, Variable>& vars_;
  const std::vector<Sort>& enums_;
  std::vector<std::map<std::string, Variable>> scopes_;
};

} // namespace

Sort parse_sort(const std::string& name, const std::vector<Sort>& enums) {
  if (name == "Bool" || name == "Boolean")
    return Sort::boolean();
  if (name == "Real")
    return Sort::real();
  if (name == "Nat" || name == "Natural")
    return Sort::natural();
  for (const auto& s : enums)
    if (s.name() == name)
      return s;
  throw std::invalid_argument("unknown sort '" + name + "'");
}

std::string sort_name(const Sort& s) { return smtlib_sort(s); }

Formula parse_term(const std::string& text, const std::map<std::string, Variable>& vars,
                   const std::vector<Sort>& enums) {
  try {
    SExpr e = Reader(text).read_all();
    Elaborator el(vars, enums);
    Formula f = el.term(e, Sort::boolean());
    check_well_sorted(f);
    return f;
  } catch (const TermError& err) {
    throw DocumentError("offset " + std::to_string(err.offset), err.what());
  } catch (const SortError& err) {
    throw DocumentError("", err.what());
  }
}

// ------------------------------------------------------------- documents

namespace {

std::string line_locus(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& err) {
    throw DocumentError(line_locus(text, err.byte == 0 ? 0 : err.byte - 1), "invalid JSON");
  }
}

// Typed field access with JSON-pointer loci.
class Fields {
public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const json& raw() const { return j_; }
  const std::string& path() const { return path_; }

  void expect_object() const {
    if (!j_.is_object())
      fail("", "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  Fields at(const std::string& key) const {
    if (!j_.is_object() || !j_.contains(key))
      fail(key, "missing field");
    return Fields(j_.at(key), path_ + "/" + key);
  }

  Fields at(std::size_t i) const { return Fields(j_.at(i), path_ + "/" + std::to_string(i)); }

  std::string str(const std::string& key) const {
    auto f = at(key);
    if (!f.j_.is_string())
      f.fail("", "expected a string");
    return f.j_.get<std::string>();
  }

  std::vector<Fields> array(const std::string& key, bool optional = false) const {
    if (optional && !has(key))
      return {};
    auto f = at(key);
    if (!f.j_.is_array())
      f.fail("", "expected an array");
    std::vector<Fields> out;
    for (std::size_t i = 0; i < f.j_.size(); ++i)
      out.push_back(f.at(i));
    return out;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    throw DocumentError(key.empty() ? (path_.empty() ? "/" : path_) : path_ + "/" + key, message);
  }

private:
  const json& j_;
  std::string path_;
};

void check_format(const Fields& doc, const char* expected) {
  doc.expect_object();
  auto format = doc.str("format");
  if (format != expected)
    doc.at("format").fail("", "unsupported format '" + format + "', expected '" + expected + "'");
}

std::shared_ptr<const TypeGraph> parse_type_graph(const Fields& doc) {
  if (!doc.has("type_graph"))
    return efm::efm_type_graph();
  auto tg = doc.at("type_graph");
  if (tg.raw().is_string()) {
    if (tg.raw().get<std::string>() != "efm")
      tg.fail("", "unknown type graph '" + tg.raw().get<std::string>() + "'");
    return efm::efm_type_graph();
  }
  tg.expect_object();
  std::vector<Sort> enums;
  for (const auto& e : tg.array("enums", true)) {
    std::vector<std::string> values;
    for (const auto& v : e.array("values")) {
      if (!v.raw().is_string())
        v.fail("", "expected a string");
      values.push_back(v.raw().get<std::string>());
    }
    try {
      enums.push_back(Sort::enumeration(e.str("name"), values));
    } catch (const SortError& err) {
      e.fail("", err.what());
    }
  }
  auto out = std::make_shared<TypeGraph>();
  for (const auto& n : tg.array("node_types")) {
    NodeType nt{n.str("name"), {}};
    for (const auto& a : n.array("attributes", true)) {
      try {
        nt.attributes.push_back({a.str("name"), parse_sort(a.str("sort"), enums)});
      } catch (const std::invalid_argument& err) {
        a.fail("sort", err.what());
      }
    }
    out->add_node_type(std::move(nt));
  }
  for (const auto& e : tg.array("edge_types"))
    out->add_edge_type({e.str("name"), e.str("source"), e.str("target")});
  if (auto problems = out->validate(); !problems.empty())
    tg.fail("", problems.front());
  if (*out == *efm::efm_type_graph())
    return efm::efm_type_graph();
  return out;
}

json type_graph_json(const std::shared_ptr<const TypeGraph>& tg) {
  if (*tg == *efm::efm_type_graph())
    return "efm";
  json out = json::object();
  out["enums"] = json::array();
  for (const auto& s : tg->enumeration_sorts())
    out["enums"].push_back({{"name", s.name()}, {"values", s.values()}});
  out["node_types"] = json::array();
  for (const auto& [name, nt] : tg->node_types()) {
    json attrs = json::array();
    for (const auto& a : nt.attributes)
      attrs.push_back({{"name", a.name}, {"sort", sort_name(a.sort)}});
    out["node_types"].push_back({{"name", name}, {"attributes", attrs}});
  }
  out["edge_types"] = json::array();
  for (const auto& e : tg->edge_types())
    out["edge_types"].push_back({{"name", e.name}, {"source", e.source}, {"target", e.target}});
  return out;
}

std::vector<Sort> enum_sorts(const TypeGraph& tg) {
  auto out = tg.enumeration_sorts();
  bool has_group = std::any_of(out.begin(), out.end(), [](const Sort& s) { return s == group_type_sort(); });
  if (!has_group)
    out.push_back(group_type_sort());
  return out;
}

std::map<std::string, Variable> parse_variables(const Fields& doc, const std::vector<Sort>& enums) {
  std::map<std::string, Variable> out;
  for (const auto& v : doc.array("variables", true)) {
    auto id = v.str("id");
    Sort s = Sort::boolean();
    try {
      s = parse_sort(v.str("sort"), enums);
    } catch (const std::invalid_argument& err) {
      v.fail("sort", err.what());
    }
    if (!out.emplace(id, Variable{id, s}).second)
      v.fail("id", "duplicate variable '" + id + "'");
  }
  return out;
}

// Objects and links of `doc` added to `g`; slots must name declared variables.
void parse_structure(const Fields& doc, const std::map<std::string, Variable>& vars, SymbolicGraph& g) {
  for (const auto& o : doc.array("objects")) {
    Object obj{o.str("id"), o.str("type"), {}};
    if (!g.type_graph().node_type(obj.type))
      o.fail("type", "unknown node type '" + obj.type + "'");
    if (o.has("slots")) {
      auto slots = o.at("slots");
      slots.expect_object();
      for (const auto& [attr, var] : slots.raw().items()) {
        if (!var.is_string())
          slots.fail(attr, "expected a variable id");
        auto it = vars.find(var.get<std::string>());
        if (it == vars.end())
          slots.fail(attr, "undeclared variable '" + var.get<std::string>() + "'");
        obj.slots.emplace(attr, it->second);
      }
    }
    if (g.object(obj.id))
      o.fail("id", "duplicate object '" + obj.id + "'");
    g.add_object(std::move(obj));
  }
  for (const auto& l : doc.array("links", true)) {
    Link link{l.str("id"), l.str("type"), l.str("source"), l.str("target")};
    if (!g.object(link.source))
      l.fail("source", "unknown object '" + link.source + "'");
    if (!g.object(link.target))
      l.fail("target", "unknown object '" + link.target + "'");
    if (g.link(link.id))
      l.fail("id", "duplicate link '" + link.id + "'");
    g.add_link(std::move(link));
  }
}

Formula parse_formula_field(const Fields& doc, const std::string& key, const std::map<std::string, Variable>& vars,
                            const std::vector<Sort>& enums) {
  if (!doc.has(key))
    return Formula::boolean(true);
  auto text = doc.str(key);
  try {
    return parse_term(text, vars, enums);
  } catch (const DocumentError& err) {
    throw DocumentError(doc.path() + "/" + key + (err.locus().empty() ? "" : ", " + err.locus()),
                        std::string(err.what()).substr(err.locus().empty() ? 0 : err.locus().size() + 2));
  }
}

json variables_json(const std::map<std::string, Variable>& vars) {
  json out = json::array();
  for (const auto& [id, v] : vars)
    out.push_back({{"id", id}, {"sort", sort_name(v.sort)}});
  return out;
}

json structure_json(const SymbolicGraph& g, json& into) {
  into["objects"] = json::array();
  for (const auto& [id, o] : g.objects()) {
    json slots = json::object();
    for (const auto& [attr, v] : o.slots)
      slots[attr] = v.id;
    into["objects"].push_back({{"id", id}, {"type", o.type}, {"slots", slots}});
  }
  into["links"] = json::array();
  for (const auto& [id, l] : g.links())
    into["links"].push_back({{"id", id}, {"type", l.type}, {"source", l.source}, {"target", l.target}});
  return into;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

} // namespace

SymbolicGraph parse_model(const std::string& text) {
  json j = parse_json(text);
  Fields doc(j, "");
  check_format(doc, kModelFormat);
  auto types = parse_type_graph(doc);
  const auto enums = enum_sorts(*types);
  auto vars = parse_variables(doc, enums);

  SymbolicGraph g(types);
  for (const auto& [id, v] : vars)
    g.add_variable(v);
  parse_structure(doc, vars, g);
  g.set_formula(parse_formula_field(doc, "formula", vars, enums));
  if (auto problems = validate_graph(g); !problems.empty())
    throw DocumentError("/", problems.front());
  return g;
}

std::string serialize_model(const SymbolicGraph& g) {
  json out = json::object();
  out["format"] = kModelFormat;
  out["type_graph"] = type_graph_json(g.type_graph_ptr());
  out["variables"] = variables_json(g.variables());
  structure_json(g, out);
  out["formula"] = to_smtlib(g.formula());
  return dump(out);
}

SymbolicRule parse_rule(const std::string& text) {
  json j = parse_json(text);
  Fields doc(j, "");
  check_format(doc, kRuleFormat);
  auto types = parse_type_graph(doc);
  const auto enums = enum_sorts(*types);
  auto vars = parse_variables(doc, enums);

  SymbolicRule r{doc.str("name"), SymbolicGraph(types), SymbolicGraph(types), {}, Formula::boolean(true)};
  parse_structure(doc.at("lhs"), vars, r.lhs);
  parse_structure(doc.at("rhs"), vars, r.rhs);
  for (const auto& p : doc.array("preserve", true)) {
    if (!p.raw().is_array() || p.raw().size() != 2 || !p.raw()[0].is_string() || !p.raw()[1].is_string())
      p.fail("", "expected a pair of ids");
    auto l = p.raw()[0].get<std::string>();
    auto rr = p.raw()[1].get<std::string>();
    const bool object = r.lhs.object(l) != nullptr;
    const bool link = r.lhs.link(l) != nullptr;
    if (object && link)
      p.fail("0", "id '" + l + "' names both an object and a link");
    if (!object && !link)
      p.fail("0", "unknown lhs element '" + l + "'");
    if (object ? !r.rhs.object(rr) : !r.rhs.link(rr))
      p.fail("1", "unknown rhs element '" + rr + "'");
    (object ? r.preserve.objects : r.preserve.links).emplace(l, rr);
  }
  r.phi = parse_formula_field(doc, "phi", vars, enums);
  if (auto problems = validate_rule(r); !problems.empty())
    throw DocumentError("/", problems.front());
  return r;
}

std::string serialize_rule(const SymbolicRule& r) {
  json out = json::object();
  out["format"] = kRuleFormat;
  out["name"] = r.name;
  out["type_graph"] = type_graph_json(r.lhs.type_graph_ptr());
  std::map<std::string, Variable> vars;
  for (const auto& v : r.variables())
    vars.emplace(v.id, v);
  for (const auto& v : free_vars(r.phi))
    vars.emplace(v.id, v);
  out["variables"] = variables_json(vars);
  json lhs = json::object(), rhs = json::object();
  structure_json(r.lhs, lhs);
  structure_json(r.rhs, rhs);
  out["lhs"] = lhs;
  out["rhs"] = rhs;
  std::vector<std::pair<std::string, std::string>> pairs(r.preserve.objects.begin(), r.preserve.objects.end());
  pairs.insert(pairs.end(), r.preserve.links.begin(), r.preserve.links.end());
  std::sort(pairs.begin(), pairs.end());
  out["preserve"] = json::array();
  for (const auto& [l, rr] : pairs)
    out["preserve"].push_back({l, rr});
  out["phi"] = to_smtlib(r.phi);
  return dump(out);
}

Assignment parse_assignment(const std::string& text, const SymbolicGraph& g) {
  json j = parse_json(text);
  Fields doc(j, "");
  check_format(doc, kAssignmentFormat);
  auto values = doc.at("values");
  values.expect_object();
  Assignment out;
  for (const auto& [id, value] : values.raw().items()) {
    const Variable* v = g.variable(id);
    if (!v)
      values.fail(id, "unknown variable '" + id + "'");
    switch (v->sort.kind()) {
    case Sort::Kind::Boolean:
      if (!value.is_boolean())
        values.fail(id, "expected true or false");
      out.emplace(id, value.get<bool>());
      break;
    case Sort::Kind::Real:
    case Sort::Kind::Natural: {
      std::string t = value.is_string() ? value.get<std::string>() : value.is_number() ? value.dump() : "";
      bool negative = !t.empty() && t[0] == '-';
      std::string body = negative ? t.substr(1) : t;
      Rational r;
      try {
        auto slash = body.find('/');
        if (slash != std::string::npos)
          r = Rational(boost::multiprecision::cpp_int(body.substr(0, slash)),
                       boost::multiprecision::cpp_int(body.substr(slash + 1)));
        else
          r = decimal_value(body);
      } catch (const std::exception&) {
        values.fail(id, "expected a number");
      }
      if (body.empty())
        values.fail(id, "expected a number");
      out.emplace(id, negative ? Rational(-r) : r);
      break;
    }
    case Sort::Kind::Enumeration:
      if (!value.is_string() || !v->sort.has_value(value.get<std::string>()))
        values.fail(id, "expected a value of " + v->sort.name());
      out.emplace(id, value.get<std::string>());
      break;
    }
  }
  return out;
}

std::string serialize_assignment(const Assignment& a) {
  json values = json::object();
  for (const auto& [id, v] : a) {
    if (const auto* b = std::get_if<bool>(&v))
      values[id] = *b;
    else if (const auto* r = std::get_if<Rational>(&v))
      values[id] = r->str();
    else
      values[id] = std::get<std::string>(v);
  }
  return dump({{"format", kAssignmentFormat}, {"values", values}});
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read '" + path.string() + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out)
      throw std::runtime_error("cannot write '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot replace '" + path.string() + "': " + ec.message());
  }
}

} // namespace efmct::io
