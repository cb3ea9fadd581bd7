#ifndef ARBO_REDUCED_TUPLE_HPP
#define ARBO_REDUCED_TUPLE_HPP

#include <optional>
#include <vector>

#include "arbo/relation.hpp"

namespace arbo {

/// Alternating word of factor moves: points x1..xn with factor tags i1..i(n-1),
/// (x_k, x_{k+1}) in factor i_k, consecutive tags distinct.
struct ReducedTuple {
  std::vector<int> points;
  std::vector<int> factor_tags;  // 1-based factor indices

  bool closes() const {
    return points.size() >= 3 && points.front() == points.back();
  }
  bool operator==(const ReducedTuple&) const = default;
};

/// Checks the reduced-tuple invariants against the given factors (and the
/// amalgam core when present). Throws TagMismatch when a tagged pair is not
/// in its factor.
bool is_reduced(const ReducedTuple& t, const std::vector<EquivRelation>& factors,
                const EquivRelation* core = nullptr);

}  // namespace arbo

#endif
