#include "arbo/graphing.hpp"

#include <algorithm>

namespace arbo {

Graphing::Graphing(FiniteSpace space,
                   const std::vector<std::pair<int, int>>& pairs)
    : space_(space) {
  for (auto [x, y] : pairs) {
    if (x < 0 || x >= space.size || y < 0 || y >= space.size)
      fail(ErrorKind::ValidationError, "graphing pair out of range", {x, y});
    if (x == y)
      fail(ErrorKind::ValidationError, "graphing pair on the diagonal", {x});
    edges_.emplace_back(x, y);
    edges_.emplace_back(y, x);
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

std::vector<std::pair<int, int>> Graphing::unordered_edges() const {
  std::vector<std::pair<int, int>> out;
  for (auto [x, y] : edges_)
    if (x < y) out.emplace_back(x, y);
  return out;
}

bool Graphing::has_edge(int x, int y) const {
  return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(x, y));
}

Graphing Graphing::unite(const Graphing& other) const {
  if (space_ != other.space_) fail(ErrorKind::SpaceMismatch, "graphing union");
  auto pairs = unordered_edges();
  auto more = other.unordered_edges();
  pairs.insert(pairs.end(), more.begin(), more.end());
  return Graphing(space_, pairs);
}

EquivRelation generated_relation(const Graphing& g) {
  std::vector<int> class_of(g.space().size);
  for (int p = 0; p < g.space().size; ++p) class_of[p] = p;
  EquivRelation gen = EquivRelation::generated_by_pairs(g.space(), g.edges());
  // Domain is the whole space: isolated points become singletons.
  std::vector<int> full(g.space().size);
  for (int p = 0; p < g.space().size; ++p)
    full[p] = gen.in_domain(p) ? gen.class_of(p) : p;
  return EquivRelation::from_class_map(g.space(), std::move(full));
}

bool is_treeing(const Graphing& g) {
  // Acyclic iff every union step joins two distinct components.
  std::vector<int> parent(g.space().size);
  for (int i = 0; i < g.space().size; ++i) parent[i] = i;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [x, y] : g.unordered_edges()) {
    int rx = find(x), ry = find(y);
    if (rx == ry) return false;
    parent[std::max(rx, ry)] = std::min(rx, ry);
  }
  return true;
}

bool is_treeing_of(const Graphing& g, const EquivRelation& r) {
  if (!is_treeing(g)) return false;
  EquivRelation gen = generated_relation(g);
  EquivRelation target = extend_trivially(r);
  return gen == target;
}

}  // namespace arbo
