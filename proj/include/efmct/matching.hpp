#pragma once

#include "efmct/graph.hpp"

namespace efmct {

/// All injective, type- and incidence-preserving morphisms pattern -> host,
/// ordered lexicographically by the object assignment (pattern objects in id
/// order). Formulas are ignored. Throws TypeGraphMismatch.
std::vector<Morphism> find_matches(const SymbolicGraph& pattern, const SymbolicGraph& host);

/// All bijective morphisms g1 -> g2 on objects and links.
std::vector<Morphism> find_isomorphisms(const SymbolicGraph& g1, const SymbolicGraph& g2);

/// Partial identification of elements of the second graph with elements of
/// the first (second id -> first id).
struct Identification {
  std::map<std::string, std::string> objects;
  std::map<std::string, std::string> links;
  bool empty() const { return objects.empty() && links.empty(); }
  std::size_t size() const { return objects.size() + links.size(); }
  friend auto operator<=>(const Identification&, const Identification&) = default;
};

class GlueError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct GlueResult {
  SymbolicGraph graph;
  Morphism from_first;
  Morphism from_second;
};

/// Pushout-style union of `first` and `second` along `overlap`. Identified
/// elements appear once and identified slots share one variable; the formula
/// is the conjunction of both (renamed) formulas. Throws GlueError on type or
/// incidence clashes, non-injective identification, or parallel links.
GlueResult glue(const SymbolicGraph& first, const SymbolicGraph& second, const Identification& overlap);

} // namespace efmct
