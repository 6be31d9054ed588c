#include "generators.hpp"

#include <doctest.h>

using namespace efmct;
using namespace efmct::test;

namespace {

const std::vector<std::string> kTypes{efm::kFeature, efm::kGroup, efm::kRealAttribute, efm::kNatAttribute};

Formula sample_value(Rng& rng, const Sort& s) {
  switch (s.kind()) {
  case Sort::Kind::Boolean: return Formula::boolean(coin(rng));
  case Sort::Kind::Real: return Formula::real(Rational(int(pick(rng, 41)) - 20, 2));
  case Sort::Kind::Natural: return Formula::natural(Rational(int(pick(rng, 10))));
  default: return Formula::literal(s, s.values()[pick(rng, s.values().size())]);
  }
}

// A constraint tying a fresh variable to the LHS, or to a constant.
Formula effect_on(Rng& rng, const Variable& w, const std::vector<Variable>& lhs_vars) {
  std::vector<Variable> same;
  for (const auto& v : lhs_vars)
    if (v.sort == w.sort)
      same.push_back(v);
  Formula base = same.empty() || coin(rng, 0.3) ? sample_value(rng, w.sort) : Formula::var(same[pick(rng, same.size())]);
  if (w.sort.kind() == Sort::Kind::Real && coin(rng))
    return eq(Formula::var(w), add({base, sample_value(rng, w.sort)}));
  if (w.sort.kind() == Sort::Kind::Natural && coin(rng))
    return ge(Formula::var(w), Formula::natural(0));
  return eq(Formula::var(w), base);
}

void add_random_links(Rng& rng, SymbolicGraph& g, double p, const std::string& prefix,
                      const std::function<bool(const std::string&, const std::string&)>& allowed) {
  std::set<std::tuple<std::string, std::string, std::string>> taken;
  for (const auto& [_, l] : g.links())
    taken.insert({l.type, l.source, l.target});
  std::size_t k = 0;
  std::vector<Object> objs;
  for (const auto& [_, o] : g.objects())
    objs.push_back(o);
  for (const auto& s : objs)
    for (const auto& t : objs)
      for (const auto& e : g.type_graph().edge_types())
        if (e.source == s.type && e.target == t.type && allowed(s.id, t.id) && !taken.count({e.name, s.id, t.id}) &&
            coin(rng, p)) {
          g.add_link({prefix + std::to_string(k++), e.name, s.id, t.id});
          taken.insert({e.name, s.id, t.id});
        }
}

SymbolicRule random_rule(Rng& rng, const std::string& name) {
  const auto tg = efm::efm_type_graph();
  SymbolicRule r{name, random_graph(rng, tg, 1 + pick(rng, 3), 0.5, "l", kTypes), SymbolicGraph(tg), {}, Formula()};
  std::vector<Variable> lhs_vars;
  for (const auto& [_, v] : r.lhs.variables())
    lhs_vars.push_back(v);

  std::vector<Variable> fresh;
  for (const auto& [id, o] : r.lhs.objects()) {
    if (!coin(rng, 0.6))
      continue;
    Object c = o;
    for (auto& [attr, v] : c.slots)
      if (coin(rng, 0.3)) {
        v = Variable{"w_" + id + "_" + attr, v.sort};
        fresh.push_back(v);
      }
    r.rhs.add_object(c);
    r.preserve.objects[id] = id;
  }
  for (const auto& [id, l] : r.lhs.links())
    if (r.preserve.objects.count(l.source) && r.preserve.objects.count(l.target) && coin(rng, 0.7)) {
      r.rhs.add_link(l);
      r.preserve.links[id] = id;
    }
  std::size_t added = pick(rng, 3);
  for (std::size_t i = 0; i < added; ++i) {
    const auto& type = kTypes[pick(rng, kTypes.size())];
    Object o{"n" + std::to_string(i), type, {}};
    for (const auto& a : tg->node_type(type)->attributes) {
      o.slots[a.name] = Variable{"n" + std::to_string(i) + "_" + a.name, a.sort};
      fresh.push_back(o.slots[a.name]);
    }
    r.rhs.add_object(o);
  }
  // new links must touch a new object or join two preserved ones
  add_random_links(rng, r.rhs, 0.3, "nl", [&](const std::string& s, const std::string& t) {
    return s[0] == 'n' || t[0] == 'n' || coin(rng, 0.3);
  });

  std::vector<Formula> parts;
  for (const auto& w : fresh)
    if (coin(rng, 0.7))
      parts.push_back(effect_on(rng, w, lhs_vars));
  if (!lhs_vars.empty() && coin(rng, 0.3)) {
    const auto& v = lhs_vars[pick(rng, lhs_vars.size())];
    parts.push_back(v.sort.kind() == Sort::Kind::Real ? ge(Formula::var(v), Formula::real(-100)) : eq(Formula::var(v), Formula::var(v)));
  }
  if (!parts.empty())
    r.phi = land(parts);
  return r;
}

SymbolicGraph random_host(Rng& rng) {
  auto g = random_graph(rng, efm::efm_type_graph(), 3 + pick(rng, 6), 0.3, "h", kTypes);
  std::vector<Formula> parts;
  for (const auto& [_, v] : g.variables())
    if (v.sort.kind() == Sort::Kind::Real && coin(rng, 0.4))
      parts.push_back(ge(Formula::var(v), Formula::real(0)));
  if (!parts.empty())
    g.set_formula(land(parts));
  return g;
}

} // namespace

TEST_CASE("random applications keep the formula growing and every variable") {
  Rng rng(0x5eed11);
  ScriptedSolver sat(smt::Status::Sat);
  std::size_t applied = 0, dangling = 0, rules = 0;
  while (applied < 600) {
    auto r = random_rule(rng, "q" + std::to_string(rules++));
    REQUIRE(validate_rule(r).empty());
    auto deleted = r.deleted_objects();
    auto deleted_links = r.deleted_links();
    std::size_t new_objects = 0, new_links = 0;
    for (const auto& [id, _] : r.rhs.objects())
      new_objects += id[0] == 'n';
    new_links = r.rhs.links().size() - r.preserve.links.size();

    for (int h = 0; h < 6; ++h) {
      auto host = random_host(rng);
      const auto before = host;
      auto ms = find_rule_matches(r, host);
      if (ms.size() > 6)
        ms.resize(6);
      for (const auto& m : ms) {
        auto res = apply(r, m, host, sat);
        REQUIRE(host == before);

        // independent dangling oracle
        std::set<std::string> gone, gone_links, expect;
        for (const auto& o : deleted)
          gone.insert(m.objects.at(o));
        for (const auto& l : deleted_links)
          gone_links.insert(m.links.at(l));
        for (const auto& [id, l] : host.links())
          if (!gone_links.count(id) && (gone.count(l.source) || gone.count(l.target)))
            expect.insert(id);
        REQUIRE(std::set<std::string>(res.dangling.begin(), res.dangling.end()) == expect);

        if (!expect.empty()) {
          REQUIRE(res.status == ApplicationStatus::InvalidDangling);
          REQUIRE(res.graph == host);
          REQUIRE(r.deletes_anything());
          ++dangling;
          continue;
        }
        REQUIRE(res.status == ApplicationStatus::Applied);
        ++applied;
        const auto& g = res.graph;
        REQUIRE(validate_graph(g).empty());
        REQUIRE(check_morphism(res.comatch, r.rhs, g).empty());
        REQUIRE(g.objects().size() == host.objects().size() - deleted.size() + new_objects);
        REQUIRE(g.links().size() == host.links().size() - deleted_links.size() + new_links);
        for (const auto& o : gone)
          REQUIRE_FALSE(g.object(o));
        for (const auto& [l, rr] : r.preserve.objects)
          REQUIRE(res.comatch.objects.at(rr) == m.objects.at(l));

        // Φ' = Φ ∧ σ(φ), nothing forgotten
        REQUIRE(g.formula().op() == Op::And);
        REQUIRE(g.formula().args().size() == 2);
        REQUIRE(g.formula().arg(0) == host.formula());
        REQUIRE(g.formula().arg(1) == substitute(r.phi, res.sigma));
        for (const auto& [id, v] : host.variables()) {
          REQUIRE(g.variable(id));
          REQUIRE(*g.variable(id) == v);
        }
        for (const auto& v : r.variables())
          REQUIRE(res.sigma.find(v.id));
        const auto induced = induced_substitution(m, r.lhs, host);
        for (const auto& [id, ft] : induced.entries())
          REQUIRE(res.sigma.apply(ft.first) == ft.second);
        for (const auto& v : free_vars(g.formula()))
          REQUIRE(g.variable(v.id));
        for (const auto& [id, v] : r.rhs.variables())
          if (!r.lhs.variable(id))
            REQUIRE_FALSE(host.variable(res.sigma.apply(v).id));

        REQUIRE(apply(r, m, host, sat).graph == g);
      }
    }
  }
  CHECK(applied >= 500);
  CHECK(dangling > 0);
}

TEST_CASE("the solver decides exactly the non-trivial applications") {
  Rng rng(0x5eed12);
  ScriptedSolver unsat(smt::Status::Unsat);
  std::size_t seen = 0;
  for (int i = 0; seen < 200 && i < 5000; ++i) {
    auto r = random_rule(rng, "u" + std::to_string(i));
    auto host = random_host(rng);
    for (const auto& m : find_rule_matches(r, host)) {
      auto res = apply(r, m, host, unsat);
      if (res.status == ApplicationStatus::InvalidDangling)
        continue;
      ++seen;
      const bool trivial = host.formula().is_true() && substitute(r.phi, res.sigma).is_true();
      REQUIRE(res.status == (trivial ? ApplicationStatus::Applied : ApplicationStatus::InvalidUnsat));
    }
  }
  CHECK(seen >= 200);
}

TEST_CASE("identity rules leave random hosts unchanged") {
  Rng rng(0x5eed13);
  ScriptedSolver sat(smt::Status::Sat);
  for (int i = 0; i < 200; ++i) {
    auto host = random_host(rng);
    auto pattern = random_subgraph(rng, host, 3);
    auto id = identity_rule("id", pattern);
    REQUIRE(validate_rule(id).empty());
    REQUIRE_FALSE(id.deletes_anything());
    for (const auto& m : find_rule_matches(id, host)) {
      auto res = apply(id, m, host, sat);
      REQUIRE(res.applied());
      REQUIRE(res.graph.objects() == host.objects());
      REQUIRE(res.graph.links() == host.links());
      REQUIRE(res.graph.variables() == host.variables());
    }
  }
}
