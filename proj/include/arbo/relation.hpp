#ifndef ARBO_RELATION_HPP
#define ARBO_RELATION_HPP

#include <vector>

#include "arbo/space.hpp"

namespace arbo {

class PartialIso;

/// Equivalence relation on a sub-domain of a FiniteSpace.
/// class_of(p) is the least member of p's class, or -1 outside the domain.
class EquivRelation {
 public:
  EquivRelation() = default;

  /// Relation with every domain point a singleton class.
  static EquivRelation trivial(FiniteSpace space, const PointSet& domain);
  static EquivRelation trivial_full(FiniteSpace space) {
    return trivial(space, PointSet::full(space));
  }
  /// Build from a list of classes (disjoint point lists); domain is their union.
  static EquivRelation from_classes(FiniteSpace space,
                                    const std::vector<std::vector<int>>& classes);
  /// Build from the map point -> class id (-1 outside domain); ids are recanonicalized.
  static EquivRelation from_class_map(FiniteSpace space, std::vector<int> class_of);
  /// Smallest equivalence relation containing the given pairs; domain = points touched.
  static EquivRelation generated_by_pairs(FiniteSpace space,
                                          const std::vector<std::pair<int, int>>& pairs);

  const FiniteSpace& space() const { return space_; }
  PointSet domain() const;
  int class_of(int p) const { return class_of_[p]; }
  bool in_domain(int p) const { return class_of_[p] >= 0; }
  bool related(int x, int y) const {
    return class_of_[x] >= 0 && class_of_[x] == class_of_[y];
  }

  /// Class representatives (least members), ascending.
  std::vector<int> class_reps() const;
  std::vector<int> class_members(int rep) const;
  int class_count() const;
  /// All ordered related pairs (x, y) including the diagonal, lexicographic.
  std::vector<std::pair<int, int>> ordered_pairs() const;
  bool is_trivial() const;

  bool operator==(const EquivRelation&) const = default;

 private:
  FiniteSpace space_;
  std::vector<int> class_of_;
};

/// Union of all R-classes meeting A.
PointSet saturate(const EquivRelation& r, const PointSet& a);

enum class DomainClass { fundamental, complete, both, neither };
const char* domain_class_name(DomainClass c);

/// fundamental = meets every class exactly once; complete = saturation is the
/// whole domain. A fundamental domain is always complete, reported as `both`.
DomainClass classify_domain(const EquivRelation& r, const PointSet& a);

/// Least-index point of each class.
PointSet fundamental_domain(const EquivRelation& r);

/// Smallest equivalence relation on the union of domains containing every member.
EquivRelation join(const std::vector<EquivRelation>& rels);
EquivRelation join(const EquivRelation& a, const EquivRelation& b);

/// Domain-intersection relation: x~y iff x~y in both.
EquivRelation intersect(const EquivRelation& s1, const EquivRelation& s2);

/// Classes cut down to A.
EquivRelation restrict(const EquivRelation& r, const PointSet& a);

/// Pull S back through phi: x ~ y iff phi(x) ~_S phi(y). Requires phi.target = S.domain.
EquivRelation conjugate(const EquivRelation& s, const PartialIso& phi);

bool is_subrelation(const EquivRelation& s, const EquivRelation& r);

/// Extend classes by singletons on the rest of the space.
EquivRelation extend_trivially(const EquivRelation& r);

}  // namespace arbo

#endif
