#include "efmct/matching.hpp"

#include <algorithm>
#include <tuple>

namespace efmct {

namespace {

using EdgeKey = std::tuple<std::string, std::string, std::string>; // type, source, target

class Matcher {
public:
  Matcher(const SymbolicGraph& pattern, const SymbolicGraph& host) : pattern_(pattern), host_(host) {
    for (const auto& [id, o] : pattern.objects())
      order_.push_back(&o);
    for (const auto& [id, l] : host.links())
      host_edges_[EdgeKey{l.type, l.source, l.target}].push_back(id);
    // links checkable once both endpoints are placed, keyed by the later endpoint
    std::map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < order_.size(); ++i)
      position[order_[i]->id] = i;
    checks_.resize(order_.size());
    for (const auto& [id, l] : pattern.links()) {
      auto s = position.find(l.source);
      auto t = position.find(l.target);
      if (s == position.end() || t == position.end()) {
        broken_ = true;
        continue;
      }
      checks_[std::max(s->second, t->second)].push_back(&l);
      links_.push_back(&l);
    }
  }

  std::vector<Morphism> run() {
    if (!broken_)
      place(0);
    return std::move(results_);
  }

private:
  void place(std::size_t i) {
    if (i == order_.size()) {
      assign_links(0);
      return;
    }
    const Object& p = *order_[i];
    for (const auto& [hid, h] : host_.objects()) {
      if (h.type != p.type || used_objects_.count(hid))
        continue;
      current_.objects[p.id] = hid;
      if (links_fit(i)) {
        used_objects_.insert(hid);
        place(i + 1);
        used_objects_.erase(hid);
      }
      current_.objects.erase(p.id);
    }
  }

  bool links_fit(std::size_t i) const {
    for (const Link* l : checks_[i]) {
      auto it = host_edges_.find(EdgeKey{l->type, current_.objects.at(l->source), current_.objects.at(l->target)});
      if (it == host_edges_.end())
        return false;
    }
    return true;
  }

  void assign_links(std::size_t k) {
    if (k == links_.size()) {
      results_.push_back(current_);
      return;
    }
    const Link& l = *links_[k];
    const auto& candidates =
        host_edges_.at(EdgeKey{l.type, current_.objects.at(l.source), current_.objects.at(l.target)});
    for (const auto& hid : candidates) {
      if (used_links_.count(hid))
        continue;
      used_links_.insert(hid);
      current_.links[l.id] = hid;
      assign_links(k + 1);
      current_.links.erase(l.id);
      used_links_.erase(hid);
    }
  }

  const SymbolicGraph& pattern_;
  const SymbolicGraph& host_;
  std::vector<const Object*> order_;
  std::vector<const Link*> links_;
  std::vector<std::vector<const Link*>> checks_;
  std::map<EdgeKey, std::vector<std::string>> host_edges_;
  std::set<std::string> used_objects_;
  std::set<std::string> used_links_;
  Morphism current_;
  std::vector<Morphism> results_;
  bool broken_ = false;
};

std::string uniquify(std::string name, std::set<std::string>& taken) {
  while (taken.count(name))
    name += "'";
  taken.insert(name);
  return name;
}

std::string merged_name(const std::string& a, const std::string& b) { return a == b ? a : a + "_" + b; }

} // namespace

std::vector<Morphism> find_matches(const SymbolicGraph& pattern, const SymbolicGraph& host) {
  if (!pattern.same_type_graph(host))
    throw TypeGraphMismatch("pattern and host are typed over different type graphs");
  return Matcher(pattern, host).run();
}

std::vector<Morphism> find_isomorphisms(const SymbolicGraph& g1, const SymbolicGraph& g2) {
  if (!g1.same_type_graph(g2))
    return {};
  if (g1.objects().size() != g2.objects().size() || g1.links().size() != g2.links().size())
    return {};
  for (const auto& [name, type] : g1.type_graph().node_types())
    if (g1.count_objects_of_type(name) != g2.count_objects_of_type(name))
      return {};
  return find_matches(g1, g2);
}

GlueResult glue(const SymbolicGraph& first, const SymbolicGraph& second, const Identification& overlap) {
  if (!first.same_type_graph(second))
    throw TypeGraphMismatch("glued graphs are typed over different type graphs");

  std::map<std::string, std::string> merged_objects; // first id -> second id
  for (const auto& [sid, fid] : overlap.objects) {
    const auto* so = second.object(sid);
    const auto* fo = first.object(fid);
    if (!so || !fo)
      throw GlueError("identification refers to missing object '" + sid + "' or '" + fid + "'");
    if (so->type != fo->type)
      throw GlueError("type clash identifying '" + sid + "' with '" + fid + "'");
    if (!merged_objects.emplace(fid, sid).second)
      throw GlueError("object '" + fid + "' identified twice");
  }
  std::map<std::string, std::string> merged_links;
  for (const auto& [sid, fid] : overlap.links) {
    const auto* sl = second.link(sid);
    const auto* fl = first.link(fid);
    if (!sl || !fl)
      throw GlueError("identification refers to missing link '" + sid + "' or '" + fid + "'");
    if (sl->type != fl->type)
      throw GlueError("type clash identifying link '" + sid + "' with '" + fid + "'");
    auto s = overlap.objects.find(sl->source);
    auto t = overlap.objects.find(sl->target);
    if (s == overlap.objects.end() || t == overlap.objects.end() || s->second != fl->source ||
        t->second != fl->target)
      throw GlueError("incidence clash identifying link '" + sid + "' with '" + fid + "'");
    if (!merged_links.emplace(fid, sid).second)
      throw GlueError("link '" + fid + "' identified twice");
  }

  // variable names: first's untouched variables keep their ids
  std::map<std::string, std::string> merged_vars; // first var id -> second var id
  for (const auto& [fid, sid] : merged_objects) {
    const auto& fo = *first.object(fid);
    const auto& so = *second.object(sid);
    for (const auto& [attr, fv] : fo.slots) {
      auto it = so.slots.find(attr);
      if (it == so.slots.end())
        continue;
      if (!(fv.sort == it->second.sort))
        throw GlueError("slot '" + attr + "' has different sorts in '" + fid + "' and '" + sid + "'");
      merged_vars.emplace(fv.id, it->second.id);
    }
  }
  std::set<std::string> second_merged_vars;
  for (const auto& [fv, sv] : merged_vars)
    second_merged_vars.insert(sv);

  std::set<std::string> var_names;
  for (const auto& [id, v] : first.variables())
    if (!merged_vars.count(id))
      var_names.insert(id);
  Substitution rename_first;
  Substitution rename_second;
  std::map<std::string, Variable> merged_by_second;
  for (const auto& [fid, sid] : merged_vars) {
    const Variable& fv = *first.variable(fid);
    Variable target{uniquify(merged_name(fid, sid), var_names), fv.sort};
    rename_first.add(fv, target);
    if (!merged_by_second.emplace(sid, target).second)
      throw GlueError("variable '" + sid + "' merged with two different variables");
    rename_second.add(*second.variable(sid), target);
  }
  for (const auto& [id, v] : second.variables()) {
    if (second_merged_vars.count(id))
      continue;
    rename_second.add(v, Variable{uniquify(id, var_names), v.sort});
  }

  SymbolicGraph out(first.type_graph_ptr());
  GlueResult result{out, {}, {}};

  std::set<std::string> object_names;
  for (const auto& [id, o] : first.objects())
    if (!merged_objects.count(id))
      object_names.insert(id);
  for (const auto& [id, v] : first.variables())
    out.add_variable(rename_first.apply(v));
  for (const auto& [id, v] : second.variables())
    out.add_variable(rename_second.apply(v));

  for (const auto& [id, o] : first.objects()) {
    Object copy = o;
    auto m = merged_objects.find(id);
    if (m != merged_objects.end()) {
      copy.id = uniquify(merged_name(id, m->second), object_names);
      result.from_second.objects[m->second] = copy.id;
    }
    for (auto& [attr, v] : copy.slots)
      v = rename_first.apply(v);
    result.from_first.objects[id] = copy.id;
    out.add_object(std::move(copy));
  }
  for (const auto& [id, o] : second.objects()) {
    if (overlap.objects.count(id))
      continue;
    Object copy = o;
    copy.id = uniquify(id, object_names);
    for (auto& [attr, v] : copy.slots)
      v = rename_second.apply(v);
    result.from_second.objects[id] = copy.id;
    out.add_object(std::move(copy));
  }

  std::set<std::string> link_names;
  for (const auto& [id, l] : first.links())
    if (!merged_links.count(id))
      link_names.insert(id);
  std::set<EdgeKey> edges;
  for (const auto& [id, l] : first.links()) {
    Link copy = l;
    copy.source = result.from_first.objects.at(l.source);
    copy.target = result.from_first.objects.at(l.target);
    auto m = merged_links.find(id);
    if (m != merged_links.end()) {
      copy.id = uniquify(merged_name(id, m->second), link_names);
      result.from_second.links[m->second] = copy.id;
    }
    result.from_first.links[id] = copy.id;
    edges.emplace(copy.type, copy.source, copy.target);
    out.add_link(std::move(copy));
  }
  for (const auto& [id, l] : second.links()) {
    if (overlap.links.count(id))
      continue;
    Link copy = l;
    copy.id = uniquify(id, link_names);
    copy.source = result.from_second.objects.at(l.source);
    copy.target = result.from_second.objects.at(l.target);
    if (!edges.emplace(copy.type, copy.source, copy.target).second)
      throw GlueError("gluing creates a parallel '" + l.type + "' link between '" + copy.source + "' and '" +
                      copy.target + "'");
    result.from_second.links[id] = copy.id;
    out.add_link(std::move(copy));
  }

  out.set_formula(conjoin({substitute(first.formula(), rename_first), substitute(second.formula(), rename_second)}));
  result.graph = std::move(out);
  return result;
}

} // namespace efmct
