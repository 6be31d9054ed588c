#include "efmct/graph.hpp"

#include <algorithm>

namespace efmct {

const AttributeDecl* NodeType::attribute(const std::string& attr) const {
  for (const auto& a : attributes)
    if (a.name == attr)
      return &a;
  return nullptr;
}

void TypeGraph::add_node_type(NodeType type) {
  auto name = type.name;
  if (!nodes_.emplace(name, std::move(type)).second)
    throw std::invalid_argument("duplicate node type '" + name + "'");
}

void TypeGraph::add_edge_type(EdgeType type) { edges_.insert(std::move(type)); }

const NodeType* TypeGraph::node_type(const std::string& name) const {
  auto it = nodes_.find(name);
  return it == nodes_.end() ? nullptr : &it->second;
}

bool TypeGraph::allows_edge(const std::string& name, const std::string& source, const std::string& target) const {
  return edges_.count(EdgeType{name, source, target}) > 0;
}

bool TypeGraph::has_edge_name(const std::string& name) const {
  return std::any_of(edges_.begin(), edges_.end(), [&](const EdgeType& e) { return e.name == name; });
}

std::vector<Sort> TypeGraph::enumeration_sorts() const {
  std::map<std::string, Sort> found;
  for (const auto& [name, type] : nodes_)
    for (const auto& a : type.attributes)
      if (a.sort.kind() == Sort::Kind::Enumeration)
        found.emplace(a.sort.name(), a.sort);
  std::vector<Sort> out;
  for (auto& [name, sort] : found)
    out.push_back(sort);
  return out;
}

std::vector<std::string> TypeGraph::validate() const {
  std::vector<std::string> out;
  for (const auto& [name, type] : nodes_) {
    std::set<std::string> seen;
    for (const auto& a : type.attributes)
      if (!seen.insert(a.name).second)
        out.push_back("node type '" + name + "' declares attribute '" + a.name + "' twice");
  }
  for (const auto& e : edges_) {
    if (!nodes_.count(e.source))
      out.push_back("edge type '" + e.name + "' has undeclared source type '" + e.source + "'");
    if (!nodes_.count(e.target))
      out.push_back("edge type '" + e.name + "' has undeclared target type '" + e.target + "'");
  }
  return out;
}

// ------------------------------------------------------------ SymbolicGraph

SymbolicGraph::SymbolicGraph(std::shared_ptr<const TypeGraph> types) : types_(std::move(types)) {
  if (!types_)
    throw std::invalid_argument("symbolic graph needs a type graph");
}

bool SymbolicGraph::same_type_graph(const SymbolicGraph& other) const {
  return types_ == other.types_ || *types_ == *other.types_;
}

const Object* SymbolicGraph::object(const std::string& id) const {
  auto it = objects_.find(id);
  return it == objects_.end() ? nullptr : &it->second;
}

const Link* SymbolicGraph::link(const std::string& id) const {
  auto it = links_.find(id);
  return it == links_.end() ? nullptr : &it->second;
}

const Variable* SymbolicGraph::variable(const std::string& id) const {
  auto it = variables_.find(id);
  return it == variables_.end() ? nullptr : &it->second;
}

void SymbolicGraph::add_variable(const Variable& v) {
  auto [it, fresh] = variables_.emplace(v.id, v);
  if (!fresh && !(it->second.sort == v.sort))
    throw std::invalid_argument("variable '" + v.id + "' redeclared with sort " + v.sort.name());
}

void SymbolicGraph::add_object(Object o) {
  if (objects_.count(o.id))
    throw std::invalid_argument("duplicate object id '" + o.id + "'");
  for (const auto& [attr, v] : o.slots)
    add_variable(v);
  auto id = o.id;
  objects_.emplace(std::move(id), std::move(o));
}

void SymbolicGraph::add_link(Link l) {
  if (links_.count(l.id))
    throw std::invalid_argument("duplicate link id '" + l.id + "'");
  auto id = l.id;
  links_.emplace(std::move(id), std::move(l));
}

void SymbolicGraph::remove_object(const std::string& id) { objects_.erase(id); }
void SymbolicGraph::remove_link(const std::string& id) { links_.erase(id); }

void SymbolicGraph::set_slot(const std::string& object_id, const std::string& attribute, const Variable& v) {
  auto it = objects_.find(object_id);
  if (it == objects_.end())
    throw std::invalid_argument("no object '" + object_id + "'");
  add_variable(v);
  it->second.slots.insert_or_assign(attribute, v);
}

std::set<Variable> SymbolicGraph::slot_variables() const {
  std::set<Variable> out;
  for (const auto& [id, o] : objects_)
    for (const auto& [attr, v] : o.slots)
      out.insert(v);
  return out;
}

std::size_t SymbolicGraph::count_objects_of_type(const std::string& type) const {
  return static_cast<std::size_t>(
      std::count_if(objects_.begin(), objects_.end(), [&](const auto& kv) { return kv.second.type == type; }));
}

bool operator==(const SymbolicGraph& a, const SymbolicGraph& b) {
  return a.same_type_graph(b) && a.objects_ == b.objects_ && a.links_ == b.links_ && a.variables_ == b.variables_ &&
         a.formula_ == b.formula_;
}

// ----------------------------------------------------------------- checks

std::vector<std::string> validate_graph(const SymbolicGraph& g, const TypeGraph& types) {
  std::vector<std::string> out;
  for (const auto& [id, o] : g.objects()) {
    const auto* type = types.node_type(o.type);
    if (!type) {
      out.push_back("object '" + id + "' has unknown type '" + o.type + "'");
      continue;
    }
    for (const auto& decl : type->attributes) {
      auto it = o.slots.find(decl.name);
      if (it == o.slots.end()) {
        out.push_back("object '" + id + "' lacks slot '" + decl.name + "'");
        continue;
      }
      if (!(it->second.sort == decl.sort))
        out.push_back("slot '" + id + "." + decl.name + "' holds variable '" + it->second.id + "' of sort " +
                      it->second.sort.name() + ", expected " + decl.sort.name());
      const auto* declared = g.variable(it->second.id);
      if (!declared || !(*declared == it->second))
        out.push_back("slot variable '" + it->second.id + "' of '" + id + "' is not in the variable set");
    }
    for (const auto& [attr, v] : o.slots)
      if (!type->attribute(attr))
        out.push_back("object '" + id + "' has undeclared slot '" + attr + "'");
  }
  std::set<std::tuple<std::string, std::string, std::string>> seen_edges;
  for (const auto& [id, l] : g.links()) {
    const auto* s = g.object(l.source);
    const auto* t = g.object(l.target);
    if (!s)
      out.push_back("dangling endpoint: link '" + id + "' source '" + l.source + "' does not exist");
    if (!t)
      out.push_back("dangling endpoint: link '" + id + "' target '" + l.target + "' does not exist");
    if (s && t && !types.allows_edge(l.type, s->type, t->type))
      out.push_back("link '" + id + "' of type '" + l.type + "' cannot connect " + s->type + " to " + t->type);
    if (!seen_edges.emplace(l.type, l.source, l.target).second)
      out.push_back("parallel link '" + id + "' of type '" + l.type + "' from '" + l.source + "' to '" + l.target +
                    "'");
  }
  try {
    check_well_sorted(g.formula());
    for (const auto& v : free_vars(g.formula())) {
      const auto* declared = g.variable(v.id);
      if (!declared)
        out.push_back("formula variable '" + v.id + "' is not in the variable set");
      else if (!(declared->sort == v.sort))
        out.push_back("formula uses '" + v.id + "' with sort " + v.sort.name());
    }
  } catch (const SortError& e) {
    out.push_back(std::string("formula is ill-sorted: ") + e.what());
  }
  return out;
}

std::vector<std::string> check_morphism(const Morphism& m, const SymbolicGraph& source, const SymbolicGraph& target) {
  std::vector<std::string> out;
  std::set<std::string> images;
  for (const auto& [id, o] : source.objects()) {
    auto it = m.objects.find(id);
    if (it == m.objects.end()) {
      out.push_back("object '" + id + "' is unmapped");
      continue;
    }
    const auto* img = target.object(it->second);
    if (!img)
      out.push_back("object '" + id + "' maps to missing '" + it->second + "'");
    else if (img->type != o.type)
      out.push_back("object '" + id + "' maps to '" + it->second + "' of another type");
    if (!images.insert(it->second).second)
      out.push_back("object image '" + it->second + "' is not injective");
  }
  images.clear();
  for (const auto& [id, l] : source.links()) {
    auto it = m.links.find(id);
    if (it == m.links.end()) {
      out.push_back("link '" + id + "' is unmapped");
      continue;
    }
    const auto* img = target.link(it->second);
    if (!img) {
      out.push_back("link '" + id + "' maps to missing '" + it->second + "'");
      continue;
    }
    if (img->type != l.type)
      out.push_back("link '" + id + "' maps to a link of another type");
    auto src = m.objects.find(l.source);
    auto tgt = m.objects.find(l.target);
    if (src == m.objects.end() || tgt == m.objects.end() || src->second != img->source || tgt->second != img->target)
      out.push_back("link '" + id + "' does not commute with its endpoints");
    if (!images.insert(it->second).second)
      out.push_back("link image '" + it->second + "' is not injective");
  }
  if (m.objects.size() != source.objects().size() || m.links.size() != source.links().size())
    out.push_back("morphism maps elements outside its source");
  return out;
}

Substitution induced_substitution(const Morphism& m, const SymbolicGraph& source, const SymbolicGraph& target) {
  Substitution s;
  for (const auto& [id, o] : source.objects()) {
    const auto* img = target.object(m.objects.at(id));
    if (!img)
      throw std::invalid_argument("morphism image of '" + id + "' missing");
    for (const auto& [attr, v] : o.slots) {
      auto it = img->slots.find(attr);
      if (it != img->slots.end())
        s.add(v, it->second);
    }
  }
  return s;
}

Morphism compose(const Morphism& second, const Morphism& first) {
  Morphism out;
  for (const auto& [a, b] : first.objects)
    out.objects.emplace(a, second.objects.at(b));
  for (const auto& [a, b] : first.links)
    out.links.emplace(a, second.links.at(b));
  return out;
}

// ------------------------------------------------------------ GraphBuilder

GraphBuilder& GraphBuilder::object(const std::string& id, const std::string& type,
                                   std::map<std::string, std::string> slot_vars) {
  const auto* nt = graph_.type_graph().node_type(type);
  if (!nt)
    throw std::invalid_argument("unknown node type '" + type + "'");
  Object o{id, type, {}};
  for (const auto& decl : nt->attributes) {
    auto it = slot_vars.find(decl.name);
    o.slots.emplace(decl.name, Variable{it == slot_vars.end() ? id + "." + decl.name : it->second, decl.sort});
  }
  graph_.add_object(std::move(o));
  return *this;
}

GraphBuilder& GraphBuilder::link(const std::string& id, const std::string& type, const std::string& source,
                                 const std::string& target) {
  graph_.add_link(Link{id, type, source, target});
  return *this;
}

GraphBuilder& GraphBuilder::variable(const std::string& id, const Sort& sort) {
  graph_.add_variable(Variable{id, sort});
  return *this;
}

GraphBuilder& GraphBuilder::formula(Formula f) {
  graph_.set_formula(std::move(f));
  return *this;
}

Formula GraphBuilder::slot(const std::string& object_id, const std::string& attribute) const {
  const auto* o = graph_.object(object_id);
  if (!o)
    throw std::invalid_argument("no object '" + object_id + "'");
  return Formula::var(o->slots.at(attribute));
}

} // namespace efmct
