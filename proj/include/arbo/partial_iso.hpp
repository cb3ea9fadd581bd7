#ifndef ARBO_PARTIAL_ISO_HPP
#define ARBO_PARTIAL_ISO_HPP

#include <utility>
#include <vector>

#include "arbo/relation.hpp"
#include "arbo/space.hpp"

namespace arbo {

/// Partial bijection between subsets of one FiniteSpace.
class PartialIso {
 public:
  PartialIso() = default;
  explicit PartialIso(FiniteSpace space)
      : space_(space), map_(space.size, -1), inv_(space.size, -1) {}
  PartialIso(FiniteSpace space, const std::vector<std::pair<int, int>>& pairs);

  static PartialIso identity(const PointSet& a);

  const FiniteSpace& space() const { return space_; }
  bool defined(int x) const { return map_[x] >= 0; }
  int apply(int x) const { return map_[x]; }
  int apply_inverse(int y) const { return inv_[y]; }
  PointSet source() const;
  PointSet target() const;
  /// Pairs (x, phi(x)) sorted by x.
  std::vector<std::pair<int, int>> pairs() const;
  bool touches_diagonal() const;

  bool operator==(const PartialIso&) const = default;

 private:
  FiniteSpace space_;
  std::vector<int> map_;
  std::vector<int> inv_;
};

/// (phi o psi)(x) = phi(psi(x)) on the maximal domain; empty result is legal.
PartialIso compose(const PartialIso& phi, const PartialIso& psi);
PartialIso invert(const PartialIso& phi);

/// True iff x ~_R phi(x) for every x in the source.
bool pseudogroup_member(const PartialIso& phi, const EquivRelation& r);

/// Partial map (not necessarily injective); used for interior morphisms/reductions.
class PartialMap {
 public:
  PartialMap() = default;
  explicit PartialMap(FiniteSpace space) : space_(space), map_(space.size, -1) {}

  const FiniteSpace& space() const { return space_; }
  bool defined(int x) const { return map_[x] >= 0; }
  int apply(int x) const { return map_[x]; }
  void set(int x, int y) { map_[x] = y; }
  PointSet source() const;
  PointSet image() const;

  bool operator==(const PartialMap&) const = default;

 private:
  FiniteSpace space_;
  std::vector<int> map_;
};

}  // namespace arbo

#endif
