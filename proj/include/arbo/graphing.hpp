#ifndef ARBO_GRAPHING_HPP
#define ARBO_GRAPHING_HPP

#include <utility>
#include <vector>

#include "arbo/relation.hpp"
#include "arbo/space.hpp"

namespace arbo {

/// Symmetric irreflexive edge set on a FiniteSpace.
class Graphing {
 public:
  Graphing() = default;
  explicit Graphing(FiniteSpace space) : space_(space) {}
  /// Pairs are symmetrized; (x,x) is rejected.
  Graphing(FiniteSpace space, const std::vector<std::pair<int, int>>& pairs);

  const FiniteSpace& space() const { return space_; }
  /// Ordered pairs, both orientations present, lexicographic.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  /// Unordered edges (x < y).
  std::vector<std::pair<int, int>> unordered_edges() const;
  bool has_edge(int x, int y) const;
  bool empty() const { return edges_.empty(); }

  Graphing unite(const Graphing& other) const;

  bool operator==(const Graphing&) const = default;

 private:
  FiniteSpace space_;
  std::vector<std::pair<int, int>> edges_;
};

/// Equivalence relation generated by the edges, on the whole space
/// (isolated points are singleton classes).
EquivRelation generated_relation(const Graphing& g);

/// True iff every class of the generated relation carries a tree
/// (equivalently: the graphing is acyclic).
bool is_treeing(const Graphing& g);

/// A treeing restricted to one class has exactly |class|-1 unordered edges,
/// is connected and acyclic; checked against a given relation.
bool is_treeing_of(const Graphing& g, const EquivRelation& r);

}  // namespace arbo

#endif
