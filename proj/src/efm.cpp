#include "efmct/efm.hpp"

#include "efmct/matching.hpp"

#include <algorithm>

namespace efmct::efm {

std::shared_ptr<const TypeGraph> efm_type_graph() {
  static const std::shared_ptr<const TypeGraph> types = [] {
    auto tg = std::make_shared<TypeGraph>();
    tg->add_node_type({kFeature, {{kSel, Sort::boolean()}}});
    tg->add_node_type({kGroup, {{kType, group_type_sort()}}});
    tg->add_node_type({kRealAttribute, {{kVal, Sort::real()}}});
    tg->add_node_type({kNatAttribute, {{kVal, Sort::natural()}}});
    tg->add_node_type({kExclude, {}});
    tg->add_edge_type({kGroups, kFeature, kGroup});
    tg->add_edge_type({kFeatures, kGroup, kFeature});
    tg->add_edge_type({kAttributes, kFeature, kRealAttribute});
    tg->add_edge_type({kAttributes, kFeature, kNatAttribute});
    tg->add_edge_type({kRequires, kFeature, kFeature});
    tg->add_edge_type({kExcludes, kExclude, kFeature});
    return std::shared_ptr<const TypeGraph>(std::move(tg));
  }();
  return types;
}

namespace {

// Two containers of one shared element.
SymbolicGraph shared_element_pattern(const char* container, const char* element, const char* edge) {
  GraphBuilder b(efm_type_graph());
  b.object("c1", container).object("c2", container).object("e", element);
  b.link("l1", edge, "c1", "e").link("l2", edge, "c2", "e");
  return b.build();
}

} // namespace

const std::vector<WellFormednessConstraint>& builtin_constraints() {
  static const std::vector<WellFormednessConstraint> constraints{
      {"C-1", shared_element_pattern(kGroup, kFeature, kFeatures)},
      {"C-2", shared_element_pattern(kFeature, kNatAttribute, kAttributes)},
      {"C-3", shared_element_pattern(kFeature, kRealAttribute, kAttributes)},
  };
  return constraints;
}

std::vector<Violation> check_wellformed(const SymbolicGraph& g,
                                        const std::vector<WellFormednessConstraint>& constraints) {
  std::vector<Violation> out;
  for (const auto& c : constraints) {
    std::set<std::set<std::string>> seen;
    for (auto& m : find_matches(c.pattern, g)) {
      std::set<std::string> image;
      for (const auto& [p, h] : m.objects)
        image.insert(h);
      if (seen.insert(image).second)
        out.push_back({c.name, std::move(m)});
    }
  }
  return out;
}

std::vector<Violation> check_wellformed(const SymbolicGraph& g) {
  if (!g.same_type_graph(builtin_constraints().front().pattern))
    throw TypeGraphMismatch("graph is not typed over the EFM type graph");
  return check_wellformed(g, builtin_constraints());
}

// --------------------------------------------------------------- semantics

namespace {

Formula sel(const SymbolicGraph& g, const std::string& feature) {
  const auto* o = g.object(feature);
  return Formula::var(o->slots.at(kSel));
}

Formula exactly_one(const std::vector<Formula>& xs) {
  std::vector<Formula> parts{lor(xs)};
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j)
      parts.push_back(lnot(land({xs[i], xs[j]})));
  return land(std::move(parts));
}

// Group type pinned by a top-level conjunct (t = LIT) of the graph formula.
std::optional<std::string> pinned_type(const SymbolicGraph& g, const Variable& t) {
  for (const auto& c : conjuncts(g.formula())) {
    if (c.op() != Op::Eq)
      continue;
    const auto& a = c.arg(0);
    const auto& b = c.arg(1);
    if (a.op() == Op::Var && a.variable() == t && b.op() == Op::EnumConst)
      return b.enum_literal();
    if (b.op() == Op::Var && b.variable() == t && a.op() == Op::EnumConst)
      return a.enum_literal();
  }
  return std::nullopt;
}

} // namespace

Formula encode_config_semantics(const SymbolicGraph& g) {
  std::map<std::string, std::vector<std::string>> parents, children, req, ex;
  for (const auto& [id, l] : g.links()) {
    if (l.type == kGroups)
      parents[l.target].push_back(l.source);
    else if (l.type == kFeatures)
      children[l.source].push_back(l.target);
    else if (l.type == kRequires)
      req[l.source].push_back(l.target);
    else if (l.type == kExcludes)
      ex[l.source].push_back(l.target);
  }
  for (auto* m : {&parents, &children, &req, &ex})
    for (auto& [k, v] : *m)
      std::sort(v.begin(), v.end());

  const auto& gt = group_type_sort();
  std::vector<Formula> clauses;
  for (const auto& [id, o] : g.objects()) {
    if (o.type != kGroup)
      continue;
    const auto& ps = parents[id];
    if (ps.empty())
      throw MalformedModel("group '" + id + "' has no parent feature");
    if (ps.size() > 1)
      throw MalformedModel("group '" + id + "' has several parent features");
    const auto& cs = children[id];
    const Variable& t = o.slots.at(kType);
    if (auto pinned = pinned_type(g, t); pinned && (*pinned == "OPT" || *pinned == "MAN") && cs.size() != 1)
      throw MalformedModel("group '" + id + "' of type " + *pinned + " has " + std::to_string(cs.size()) +
                           " children");
    const Formula tv = Formula::var(t);
    const Formula sp = sel(g, ps.front());
    std::vector<Formula> sc;
    for (const auto& c : cs)
      sc.push_back(sel(g, c));

    clauses.push_back(implies(eq(tv, Formula::literal(gt, "ALT")), iff(sp, exactly_one(sc))));
    clauses.push_back(implies(eq(tv, Formula::literal(gt, "OR")), iff(sp, lor(sc))));
    std::vector<Formula> opt, man;
    for (const auto& c : sc) {
      opt.push_back(implies(c, sp));
      man.push_back(iff(sp, c));
    }
    clauses.push_back(implies(eq(tv, Formula::literal(gt, "OPT")), land(std::move(opt))));
    clauses.push_back(implies(eq(tv, Formula::literal(gt, "MAN")), land(std::move(man))));
    for (const auto& c : sc)
      clauses.push_back(implies(c, sp));
  }
  for (const auto& [from, targets] : req)
    for (const auto& to : targets)
      clauses.push_back(implies(sel(g, from), sel(g, to)));
  for (const auto& [rel, targets] : ex)
    for (std::size_t i = 0; i < targets.size(); ++i)
      for (std::size_t j = i + 1; j < targets.size(); ++j)
        clauses.push_back(lnot(land({sel(g, targets[i]), sel(g, targets[j])})));
  return land(std::move(clauses));
}

namespace {

bool value_fits(const Sort& s, const Value& v) {
  switch (s.kind()) {
  case Sort::Kind::Boolean: return std::holds_alternative<bool>(v);
  case Sort::Kind::Real: return std::holds_alternative<Rational>(v);
  case Sort::Kind::Natural: {
    const auto* r = std::get_if<Rational>(&v);
    return r && *r >= 0 && denominator(*r) == 1;
  }
  case Sort::Kind::Enumeration: {
    const auto* lit = std::get_if<std::string>(&v);
    return lit && s.has_value(*lit);
  }
  }
  return false;
}

} // namespace

bool check_configuration(const SymbolicGraph& g, const Assignment& a, smt::Solver* solver) {
  std::map<std::string, Formula> fixed;
  for (const auto& v : g.slot_variables()) {
    auto it = a.find(v.id);
    if (it == a.end())
      throw PartialAssignment("assignment misses slot variable '" + v.id + "'");
    if (!value_fits(v.sort, it->second))
      throw PartialAssignment("value of '" + v.id + "' is not of sort " + v.sort.name());
    fixed.emplace(v.id, value_term(v.sort, it->second));
  }
  const Formula full = land({encode_config_semantics(g), g.formula()});
  if (auto value = evaluate(full, a))
    return std::get<bool>(*value);

  // variables outside the slots remain; they are existentially closed
  const Formula residual = instantiate(full, fixed);
  if (!solver)
    throw std::runtime_error("configuration check needs a solver for non-slot variables");
  auto verdict = solver->check_sat(residual);
  if (verdict.status == smt::Status::Sat)
    return true;
  if (verdict.status == smt::Status::Unsat)
    return false;
  throw std::runtime_error(std::string("solver could not decide the configuration: ") + smt::to_string(verdict.status));
}

const char* to_string(Answer a) {
  switch (a) {
  case Answer::Yes: return "yes";
  case Answer::No: return "no";
  case Answer::Unknown: return "unknown";
  }
  return "?";
}

Answer has_valid_configuration(const SymbolicGraph& g, smt::Solver& solver) {
  auto verdict = solver.check_sat(land({encode_config_semantics(g), g.formula()}));
  switch (verdict.status) {
  case smt::Status::Sat: return Answer::Yes;
  case smt::Status::Unsat: return Answer::No;
  default: return Answer::Unknown;
  }
}

} // namespace efmct::efm
