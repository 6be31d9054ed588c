#include "generators.hpp"

#include <doctest.h>

using namespace efmct;
using namespace efmct::test;

namespace {

// One candidate overlap context built directly from an identification,
// without going through glue.
struct Candidate {
  SymbolicGraph g;
  Morphism m1, m2;
};

// (g, m1, m2) ≅ (h, n1, n2): the map forced by joint surjectivity must be a
// well-defined bijection that preserves types and links.
bool triple_isomorphic(const SymbolicGraph& g, const Morphism& m1, const Morphism& m2, const SymbolicGraph& h,
                       const Morphism& n1, const Morphism& n2) {
  if (g.objects().size() != h.objects().size() || g.links().size() != h.links().size())
    return false;
  std::map<std::string, std::string> obj, lnk;
  auto bind = [](std::map<std::string, std::string>& f, const std::map<std::string, std::string>& a,
                 const std::map<std::string, std::string>& b) {
    for (const auto& [k, v] : a) {
      auto [it, fresh] = f.emplace(v, b.at(k));
      if (!fresh && it->second != b.at(k))
        return false;
    }
    return true;
  };
  if (!bind(obj, m1.objects, n1.objects) || !bind(obj, m2.objects, n2.objects) || !bind(lnk, m1.links, n1.links) ||
      !bind(lnk, m2.links, n2.links))
    return false;
  if (obj.size() != g.objects().size() || lnk.size() != g.links().size())
    return false;
  std::set<std::string> img_o, img_l;
  for (const auto& [a, b] : obj) {
    if (g.object(a)->type != h.object(b)->type)
      return false;
    img_o.insert(b);
  }
  for (const auto& [a, b] : lnk) {
    const auto* la = g.link(a);
    const auto* lb = h.link(b);
    if (la->type != lb->type || obj.at(la->source) != lb->source || obj.at(la->target) != lb->target)
      return false;
    img_l.insert(b);
  }
  return img_o.size() == obj.size() && img_l.size() == lnk.size();
}

std::vector<Candidate> oracle_overlaps(const SymbolicGraph& l1, const SymbolicGraph& l2) {
  std::vector<std::string> qs;
  for (const auto& [id, _] : l2.objects())
    qs.push_back(id);
  std::vector<Candidate> out;
  std::map<std::string, std::string> ident;
  std::set<std::string> used;

  auto emit = [&] {
    if (ident.empty())
      return;
    // lhs2 links whose endpoints are both identified, with their lhs1 twin
    std::vector<std::pair<std::string, std::string>> twins;
    for (const auto& [id, l] : l2.links()) {
      if (!ident.count(l.source) || !ident.count(l.target))
        continue;
      for (const auto& [id1, k] : l1.links())
        if (k.type == l.type && k.source == ident.at(l.source) && k.target == ident.at(l.target))
          twins.emplace_back(id, id1);
    }
    for (std::size_t mask = 0; mask < (std::size_t(1) << twins.size()); ++mask) {
      Candidate c{SymbolicGraph(l1.type_graph_ptr()), {}, {}};
      for (const auto& [id, o] : l1.objects()) {
        c.g.add_object({"1/" + id, o.type, {}});
        c.m1.objects[id] = "1/" + id;
      }
      for (const auto& [id, o] : l2.objects()) {
        if (ident.count(id)) {
          c.m2.objects[id] = "1/" + ident.at(id);
        } else {
          c.g.add_object({"2/" + id, o.type, {}});
          c.m2.objects[id] = "2/" + id;
        }
      }
      for (const auto& [id, l] : l1.links()) {
        c.g.add_link({"1/" + id, l.type, "1/" + l.source, "1/" + l.target});
        c.m1.links[id] = "1/" + id;
      }
      std::map<std::string, std::string> glued;
      for (std::size_t i = 0; i < twins.size(); ++i)
        if (mask >> i & 1)
          glued[twins[i].first] = twins[i].second;
      for (const auto& [id, l] : l2.links()) {
        if (glued.count(id)) {
          c.m2.links[id] = "1/" + glued.at(id);
          continue;
        }
        c.g.add_link({"2/" + id, l.type, c.m2.objects.at(l.source), c.m2.objects.at(l.target)});
        c.m2.links[id] = "2/" + id;
      }
      std::set<std::tuple<std::string, std::string, std::string>> seen;
      bool parallel = false;
      for (const auto& [id, l] : c.g.links())
        parallel |= !seen.insert({l.type, l.source, l.target}).second;
      if (!parallel)
        out.push_back(std::move(c));
    }
  };

  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == qs.size()) {
      emit();
      return;
    }
    rec(i + 1); // qs[i] stays apart
    for (const auto& [p, o] : l1.objects()) {
      if (used.count(p) || o.type != l2.object(qs[i])->type)
        continue;
      used.insert(p);
      ident[qs[i]] = p;
      rec(i + 1);
      ident.erase(qs[i]);
      used.erase(p);
    }
  };
  rec(0);

  // quotient by triple isomorphism
  std::vector<Candidate> classes;
  for (auto& c : out) {
    bool dup = false;
    for (const auto& d : classes)
      dup |= triple_isomorphic(c.g, c.m1, c.m2, d.g, d.m1, d.m2);
    if (!dup)
      classes.push_back(std::move(c));
  }
  return classes;
}

SymbolicGraph random_pattern(Rng& rng, bool efm_typed, std::size_t max_objects, const std::string& prefix) {
  if (efm_typed)
    return random_graph(rng, efm::efm_type_graph(), 1 + pick(rng, max_objects), 0.35, prefix,
                        {"Feature", "Group", "RealFeatureAttribute"});
  return random_graph(rng, toy_type_graph(), 1 + pick(rng, max_objects), 0.3, prefix, {"A", "B"});
}

} // namespace

TEST_CASE("matching agrees with brute-force enumeration") {
  Rng rng(0x5eed01);
  std::size_t cases = 0, nonempty = 0;
  for (; cases < 600; ++cases) {
    auto host = random_graph(rng, toy_type_graph(), 1 + pick(rng, 8), 0.25);
    auto pattern = coin(rng) ? random_subgraph(rng, host, 4) : random_graph(rng, toy_type_graph(), 1 + pick(rng, 3), 0.3, "p");
    auto got = find_matches(pattern, host);
    auto want = oracle_matches(pattern, host);
    REQUIRE(got == want);
    nonempty += !got.empty();
    for (const auto& m : got)
      REQUIRE(check_morphism(m, pattern, host).empty());
  }
  CHECK(cases >= 500);
  CHECK(nonempty >= 200);
}

TEST_CASE("isomorphism counts are symmetric and equal the automorphism count") {
  Rng rng(0x5eed02);
  for (int i = 0; i < 300; ++i) {
    auto g = random_graph(rng, toy_type_graph(), 1 + pick(rng, 6), 0.3);
    auto h = relabel(rng, g);
    auto gh = find_isomorphisms(g, h);
    auto hg = find_isomorphisms(h, g);
    REQUIRE(gh.size() == hg.size());
    REQUIRE(gh.size() == oracle_matches(g, g).size());
    for (const auto& m : gh)
      REQUIRE(check_morphism(m, g, h).empty());
    // an extra link breaks every isomorphism
    auto k = h;
    for (const auto& e : toy_type_graph()->edge_types()) {
      std::string s, t;
      for (const auto& [id, o] : k.objects()) {
        if (o.type == e.source && s.empty())
          s = id;
        if (o.type == e.target)
          t = id;
      }
      bool taken = false;
      for (const auto& [_, l] : k.links())
        taken |= l.type == e.name && l.source == s && l.target == t;
      if (!s.empty() && !t.empty() && !taken) {
        k.add_link({"extra", e.name, s, t});
        break;
      }
    }
    if (k.links().size() != h.links().size())
      REQUIRE(find_isomorphisms(g, k).empty());
  }
}

TEST_CASE("overlap enumeration agrees with brute-force quotienting") {
  Rng rng(0x5eed03);
  std::size_t cases = 0, total = 0;
  for (; cases < 250; ++cases) {
    const bool efm_typed = coin(rng, 0.25);
    auto l1 = random_pattern(rng, efm_typed, 5, "x");
    auto l2 = coin(rng, 0.2) ? relabel(rng, l1) : random_pattern(rng, efm_typed, 5, "y");
    auto got = enumerate_overlaps(l1, l2);
    auto want = oracle_overlaps(l1, l2);
    INFO("case " << cases);
    REQUIRE(got.size() == want.size());
    total += got.size();
    for (std::size_t i = 0; i < got.size(); ++i) {
      const auto& c = got[i];
      REQUIRE(c.index == i);
      REQUIRE(validate_graph(c.ac).empty());
      REQUIRE(check_morphism(c.m1, l1, c.ac).empty());
      REQUIRE(check_morphism(c.m2, l2, c.ac).empty());
      REQUIRE_FALSE(c.overlap.empty());
      if (i > 0)
        REQUIRE(got[i - 1].overlap.size() >= c.overlap.size());
      std::size_t hits = 0;
      for (const auto& w : want)
        hits += triple_isomorphic(c.ac, c.m1, c.m2, w.g, w.m1, w.m2);
      REQUIRE(hits == 1);
      for (std::size_t j = 0; j < i; ++j)
        REQUIRE_FALSE(contexts_isomorphic(got[j], c));
    }
  }
  CHECK(cases >= 200);
  CHECK(total > cases);
}

TEST_CASE("gluing") {
  Rng rng(0x5eed04);
  for (int i = 0; i < 200; ++i) {
    auto a = random_graph(rng, toy_type_graph(), 1 + pick(rng, 5), 0.3, "a");
    auto b = random_graph(rng, toy_type_graph(), 1 + pick(rng, 5), 0.3, "b");
    auto disjoint = glue(a, b, {});
    REQUIRE(disjoint.graph.objects().size() == a.objects().size() + b.objects().size());
    REQUIRE(disjoint.graph.links().size() == a.links().size() + b.links().size());
    REQUIRE(disjoint.graph.variables().size() == a.variables().size() + b.variables().size());
    REQUIRE(check_morphism(disjoint.from_first, a, disjoint.graph).empty());
    REQUIRE(check_morphism(disjoint.from_second, b, disjoint.graph).empty());

    for (const auto& c : enumerate_overlaps(a, b)) {
      auto g = glue(a, b, c.overlap);
      REQUIRE(validate_graph(g.graph).empty());
      REQUIRE(check_morphism(g.from_first, a, g.graph).empty());
      REQUIRE(check_morphism(g.from_second, b, g.graph).empty());
      REQUIRE(g.graph.objects().size() == a.objects().size() + b.objects().size() - c.overlap.objects.size());
      // identified elements commute
      for (const auto& [y, x] : c.overlap.objects)
        REQUIRE(g.from_first.objects.at(x) == g.from_second.objects.at(y));
      // identified slots share one variable
      for (const auto& [y, x] : c.overlap.objects)
        REQUIRE(g.graph.object(g.from_first.objects.at(x))->slots.size() == a.object(x)->slots.size());
      REQUIRE(g.graph.variables().size() == g.graph.slot_variables().size());
    }
  }
}

namespace {

Formula random_term(Rng& rng, const std::vector<Variable>& reals, int depth) {
  if (depth == 0 || coin(rng, 0.3))
    return coin(rng, 0.7) ? Formula::var(reals[pick(rng, reals.size())]) : Formula::real(Rational(int(pick(rng, 7)) - 3));
  switch (pick(rng, 3)) {
  case 0: return add({random_term(rng, reals, depth - 1), random_term(rng, reals, depth - 1)});
  case 1: return sub({random_term(rng, reals, depth - 1), random_term(rng, reals, depth - 1)});
  default: return mul({Formula::real(Rational(int(pick(rng, 5)) - 2)), random_term(rng, reals, depth - 1)});
  }
}

Formula random_formula(Rng& rng, const std::vector<Variable>& reals, const std::vector<Variable>& bools, int depth) {
  if (depth == 0 || coin(rng, 0.25)) {
    if (coin(rng, 0.3))
      return Formula::var(bools[pick(rng, bools.size())]);
    auto a = random_term(rng, reals, 2), b = random_term(rng, reals, 2);
    switch (pick(rng, 4)) {
    case 0: return eq(a, b);
    case 1: return lt(a, b);
    case 2: return ge(a, b);
    default: return ne(a, b);
    }
  }
  switch (pick(rng, 5)) {
  case 0: return lnot(random_formula(rng, reals, bools, depth - 1));
  case 1: return land({random_formula(rng, reals, bools, depth - 1), random_formula(rng, reals, bools, depth - 1)});
  case 2: return lor({random_formula(rng, reals, bools, depth - 1), random_formula(rng, reals, bools, depth - 1)});
  case 3: return implies(random_formula(rng, reals, bools, depth - 1), random_formula(rng, reals, bools, depth - 1));
  default:
    return ite(random_formula(rng, reals, bools, depth - 1), random_formula(rng, reals, bools, depth - 1),
               random_formula(rng, reals, bools, depth - 1));
  }
}

} // namespace

TEST_CASE("substitution composes and commutes with evaluation") {
  Rng rng(0x5eed05);
  std::vector<Variable> reals, bools;
  for (int i = 0; i < 6; ++i) {
    reals.push_back({"x" + std::to_string(i), Sort::real()});
    bools.push_back({"b" + std::to_string(i), Sort::boolean()});
  }
  auto random_subst = [&] {
    Substitution s;
    for (const auto& v : reals)
      if (coin(rng))
        s.add(v, reals[pick(rng, reals.size())]);
    for (const auto& v : bools)
      if (coin(rng))
        s.add(v, bools[pick(rng, bools.size())]);
    return s;
  };
  for (int i = 0; i < 500; ++i) {
    auto f = random_formula(rng, reals, bools, 3);
    REQUIRE_NOTHROW(check_well_sorted(f));
    auto s1 = random_subst(), s2 = random_subst();
    REQUIRE(substitute(substitute(f, s1), s2) == substitute(f, compose(s2, s1)));
    REQUIRE(substitute(f, Substitution()) == f);

    Assignment env;
    for (const auto& v : reals)
      env[v.id] = Rational(int(pick(rng, 9)) - 4);
    for (const auto& v : bools)
      env[v.id] = coin(rng);
    Assignment pulled;
    for (const auto& [id, val] : env)
      pulled[id] = env.at(s1.apply(Variable{id, id[0] == 'x' ? Sort::real() : Sort::boolean()}).id);
    REQUIRE(evaluate(substitute(f, s1), env) == evaluate(f, pulled));

    for (const auto& v : free_vars(substitute(f, s1)))
      REQUIRE(v.id.size() == 2);
  }
}
