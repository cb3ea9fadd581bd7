#ifndef ARBO_TESTS_FIXTURES_HPP
#define ARBO_TESTS_FIXTURES_HPP

#include "arbo/relation.hpp"

namespace arbo::fixtures {

inline FiniteSpace x4() { return FiniteSpace(4); }

inline EquivRelation rel(FiniteSpace space,
                         const std::vector<std::vector<int>>& classes) {
  return EquivRelation::from_classes(space, classes);
}

// E-FREE: R1 = {01|2|3}, R2 = {0|12|3}, R = join = {012|3}.
inline EquivRelation efree_r1() { return rel(x4(), {{0, 1}, {2}, {3}}); }
inline EquivRelation efree_r2() { return rel(x4(), {{0}, {1, 2}, {3}}); }
inline EquivRelation efree_r() { return rel(x4(), {{0, 1, 2}, {3}}); }

// E-CYCLE: R1 = {01|23}, R2 = {12|30}, R = {0123}.
inline EquivRelation ecycle_r1() { return rel(x4(), {{0, 1}, {2, 3}}); }
inline EquivRelation ecycle_r2() { return rel(x4(), {{1, 2}, {3, 0}}); }
inline EquivRelation ecycle_r() { return rel(x4(), {{0, 1, 2, 3}}); }

// E-SUB: S = {02|1|3}, a sub-relation of E-FREE's R.
inline EquivRelation esub_s() { return rel(x4(), {{0, 2}, {1}, {3}}); }

}  // namespace arbo::fixtures

#endif
