#ifndef ARBO_TUPLE_ORACLE_HPP
#define ARBO_TUPLE_ORACLE_HPP

#include <optional>
#include <vector>

#include "arbo/reduced_tuple.hpp"

namespace arbo {

/// Bounded enumeration of closing reduced tuples by depth-first search over
/// (point, factor-class) incidences, none repeated; independent of the
/// incidence-graph decision route. max_len <= 0 uses the 2*|X| default.
std::optional<ReducedTuple> oracle_find_closing_tuple(
    const std::vector<EquivRelation>& factors, const EquivRelation* core,
    int max_len = 0);

/// Accept iff the factors generate R and no closing reduced tuple exists.
bool oracle_is_free_product(const EquivRelation& r,
                            const std::vector<EquivRelation>& factors,
                            int max_len = 0);
bool oracle_is_amalgam(const EquivRelation& r, const EquivRelation& r1,
                       const EquivRelation& r2, const EquivRelation& core,
                       int max_len = 0);

/// Confirms a claimed closing tuple: reduced against the factors (and core)
/// and actually closing.
bool oracle_confirm_tuple(const ReducedTuple& t,
                          const std::vector<EquivRelation>& factors,
                          const EquivRelation* core);

}  // namespace arbo

#endif
