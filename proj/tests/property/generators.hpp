#pragma once

#include "support.hpp"

namespace efmct::test {

/// A small generic type graph with a self-edge type and attributes of
/// three sorts.
inline std::shared_ptr<const TypeGraph> toy_type_graph() {
  static const auto tg = [] {
    auto t = std::make_shared<TypeGraph>();
    t->add_node_type({"A", {{"x", Sort::real()}}});
    t->add_node_type({"B", {{"b", Sort::boolean()}}});
    t->add_node_type({"C", {}});
    t->add_edge_type({"e", "A", "B"});
    t->add_edge_type({"f", "A", "A"});
    t->add_edge_type({"g", "B", "A"});
    t->add_edge_type({"h", "C", "B"});
    return std::shared_ptr<const TypeGraph>(t);
  }();
  return tg;
}

/// Random graph over `tg` with `n` objects named `<prefix><i>` and each
/// admissible (type, source, target) triple present with probability `p`.
inline SymbolicGraph random_graph(Rng& rng, const std::shared_ptr<const TypeGraph>& tg, std::size_t n, double p,
                                  const std::string& prefix = "o",
                                  const std::vector<std::string>& node_types = {}) {
  std::vector<std::string> types = node_types;
  if (types.empty())
    for (const auto& [name, _] : tg->node_types())
      types.push_back(name);
  GraphBuilder b(tg);
  std::vector<std::pair<std::string, std::string>> objs;
  for (std::size_t i = 0; i < n; ++i) {
    auto id = prefix + std::to_string(i);
    auto type = types[pick(rng, types.size())];
    b.object(id, type);
    objs.emplace_back(id, type);
  }
  std::size_t k = 0;
  for (const auto& [s, st] : objs)
    for (const auto& [t, tt] : objs)
      for (const auto& e : tg->edge_types())
        if (e.source == st && e.target == tt && coin(rng, p))
          b.link(prefix + "l" + std::to_string(k++), e.name, s, t);
  return b.build();
}

/// Copy of `g` with object and link ids renamed by a random permutation of
/// fresh names.
inline SymbolicGraph relabel(Rng& rng, const SymbolicGraph& g) {
  std::vector<std::string> ids;
  for (const auto& [id, _] : g.objects())
    ids.push_back(id);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < ids.size(); ++i)
    names.push_back("r" + std::to_string(i));
  std::shuffle(names.begin(), names.end(), rng);
  std::map<std::string, std::string> ren;
  for (std::size_t i = 0; i < ids.size(); ++i)
    ren[ids[i]] = names[i];
  SymbolicGraph out(g.type_graph_ptr());
  for (const auto& [id, o] : g.objects()) {
    Object c = o;
    c.id = ren[id];
    for (auto& [attr, v] : c.slots)
      v.id = c.id + "." + attr;
    out.add_object(c);
  }
  std::size_t k = 0;
  for (const auto& [id, l] : g.links())
    out.add_link({"rl" + std::to_string(k++), l.type, ren[l.source], ren[l.target]});
  return out;
}

/// Random sub-pattern of `host`: a subset of its objects and of the links
/// among them, renamed.
inline SymbolicGraph random_subgraph(Rng& rng, const SymbolicGraph& host, std::size_t max_objects) {
  std::vector<std::string> ids;
  for (const auto& [id, _] : host.objects())
    ids.push_back(id);
  std::shuffle(ids.begin(), ids.end(), rng);
  ids.resize(std::min(ids.size(), 1 + pick(rng, max_objects)));
  std::set<std::string> keep(ids.begin(), ids.end());
  SymbolicGraph out(host.type_graph_ptr());
  for (const auto& id : keep) {
    Object o = *host.object(id);
    o.id = "p" + id;
    for (auto& [attr, v] : o.slots)
      v.id = o.id + "." + attr;
    out.add_object(o);
  }
  for (const auto& [id, l] : host.links())
    if (keep.count(l.source) && keep.count(l.target) && coin(rng, 0.7))
      out.add_link({"p" + id, l.type, "p" + l.source, "p" + l.target});
  return out;
}

/// Brute-force morphism enumeration: every injective object assignment in
/// lexicographic order, kept when types and all links carry over.
inline std::vector<Morphism> oracle_matches(const SymbolicGraph& pattern, const SymbolicGraph& host) {
  std::vector<std::string> pids, hids;
  for (const auto& [id, _] : pattern.objects())
    pids.push_back(id);
  for (const auto& [id, _] : host.objects())
    hids.push_back(id);
  std::vector<Morphism> out;
  std::vector<std::string> chosen;
  std::set<std::string> used;
  std::function<void()> rec = [&] {
    if (chosen.size() == pids.size()) {
      Morphism m;
      for (std::size_t i = 0; i < pids.size(); ++i)
        m.objects[pids[i]] = chosen[i];
      for (const auto& [lid, l] : pattern.links()) {
        std::string hit;
        for (const auto& [hid, hl] : host.links())
          if (hl.type == l.type && hl.source == m.objects[l.source] && hl.target == m.objects[l.target])
            hit = hid;
        if (hit.empty())
          return;
        m.links[lid] = hit;
      }
      out.push_back(std::move(m));
      return;
    }
    const auto& p = *pattern.object(pids[chosen.size()]);
    for (const auto& h : hids) {
      if (used.count(h) || host.object(h)->type != p.type)
        continue;
      used.insert(h);
      chosen.push_back(h);
      rec();
      chosen.pop_back();
      used.erase(h);
    }
  };
  rec();
  return out;
}

} // namespace efmct::test
