#pragma once

#include "efmct/formula.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace efmct {

/// Raised when graphs typed over different type graphs are combined.
class TypeGraphMismatch : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct AttributeDecl {
  std::string name;
  Sort sort;
  friend bool operator==(const AttributeDecl&, const AttributeDecl&) = default;
};

struct NodeType {
  std::string name;
  std::vector<AttributeDecl> attributes;
  const AttributeDecl* attribute(const std::string& attr) const;
  friend bool operator==(const NodeType&, const NodeType&) = default;
};

/// An edge type is identified by (name, source, target); one name may be
/// declared for several endpoint pairs.
struct EdgeType {
  std::string name;
  std::string source;
  std::string target;
  friend auto operator<=>(const EdgeType&, const EdgeType&) = default;
};

class TypeGraph {
public:
  void add_node_type(NodeType type);
  void add_edge_type(EdgeType type);

  const NodeType* node_type(const std::string& name) const;
  bool allows_edge(const std::string& name, const std::string& source, const std::string& target) const;
  bool has_edge_name(const std::string& name) const;

  const std::map<std::string, NodeType>& node_types() const { return nodes_; }
  const std::set<EdgeType>& edge_types() const { return edges_; }
  /// Enumeration sorts used by some attribute, ordered by name.
  std::vector<Sort> enumeration_sorts() const;

  /// Violations of the TypeGraph invariants; empty when consistent.
  std::vector<std::string> validate() const;

  friend bool operator==(const TypeGraph&, const TypeGraph&) = default;

private:
  std::map<std::string, NodeType> nodes_;
  std::set<EdgeType> edges_;
};

struct Object {
  std::string id;
  std::string type;
  std::map<std::string, Variable> slots; // attribute name -> variable
  friend bool operator==(const Object&, const Object&) = default;
};

struct Link {
  std::string id;
  std::string type;
  std::string source;
  std::string target;
  friend bool operator==(const Link&, const Link&) = default;
};

/// Typed graph whose attribute slots hold variables, paired with a formula
/// constraining them. The variable set may contain variables no longer held
/// by any slot.
class SymbolicGraph {
public:
  explicit SymbolicGraph(std::shared_ptr<const TypeGraph> types);

  const TypeGraph& type_graph() const { return *types_; }
  const std::shared_ptr<const TypeGraph>& type_graph_ptr() const { return types_; }
  bool same_type_graph(const SymbolicGraph& other) const;

  const std::map<std::string, Object>& objects() const { return objects_; }
  const std::map<std::string, Link>& links() const { return links_; }
  const std::map<std::string, Variable>& variables() const { return variables_; }
  const Formula& formula() const { return formula_; }

  const Object* object(const std::string& id) const;
  const Link* link(const std::string& id) const;
  const Variable* variable(const std::string& id) const;

  /// Throws std::invalid_argument when the id exists with another sort.
  void add_variable(const Variable& v);
  /// Adds the object and registers its slot variables. Throws on duplicate id.
  void add_object(Object o);
  /// Throws on duplicate id. Endpoints are not checked here; see validate_graph.
  void add_link(Link l);
  void remove_object(const std::string& id);
  void remove_link(const std::string& id);
  void set_slot(const std::string& object_id, const std::string& attribute, const Variable& v);
  void set_formula(Formula f) { formula_ = std::move(f); }

  /// Variables currently held by some slot.
  std::set<Variable> slot_variables() const;
  std::size_t count_objects_of_type(const std::string& type) const;

  friend bool operator==(const SymbolicGraph& a, const SymbolicGraph& b);

private:
  std::shared_ptr<const TypeGraph> types_;
  std::map<std::string, Object> objects_;
  std::map<std::string, Link> links_;
  std::map<std::string, Variable> variables_;
  Formula formula_;
};

/// Structure-preserving injective map between two graphs.
struct Morphism {
  std::map<std::string, std::string> objects;
  std::map<std::string, std::string> links;
  friend auto operator<=>(const Morphism&, const Morphism&) = default;
};

/// Descriptions of every invariant violation of `g` against `types`.
std::vector<std::string> validate_graph(const SymbolicGraph& g, const TypeGraph& types);
inline std::vector<std::string> validate_graph(const SymbolicGraph& g) { return validate_graph(g, g.type_graph()); }

/// Violations of the morphism invariants (totality, injectivity, typing, incidence).
std::vector<std::string> check_morphism(const Morphism& m, const SymbolicGraph& source, const SymbolicGraph& target);

/// Slot-wise variable map induced by `m`: source slot variable -> target slot variable.
Substitution induced_substitution(const Morphism& m, const SymbolicGraph& source, const SymbolicGraph& target);

/// second ∘ first.
Morphism compose(const Morphism& second, const Morphism& first);

/// Small builder for hand-written graphs. Objects get one fresh variable per
/// declared attribute unless a variable id is given.
class GraphBuilder {
public:
  explicit GraphBuilder(std::shared_ptr<const TypeGraph> types) : graph_(std::move(types)) {}

  GraphBuilder& object(const std::string& id, const std::string& type,
                       std::map<std::string, std::string> slot_vars = {});
  GraphBuilder& link(const std::string& id, const std::string& type, const std::string& source,
                     const std::string& target);
  GraphBuilder& variable(const std::string& id, const Sort& sort);
  GraphBuilder& formula(Formula f);

  /// Variable held in `object_id.attribute`.
  Formula slot(const std::string& object_id, const std::string& attribute) const;
  const SymbolicGraph& graph() const { return graph_; }
  SymbolicGraph build() const { return graph_; }

private:
  SymbolicGraph graph_;
};

} // namespace efmct
