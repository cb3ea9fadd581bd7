#ifndef ARBO_VERIFY_HPP
#define ARBO_VERIFY_HPP

#include <optional>
#include <string>
#include <vector>

#include "arbo/graphing.hpp"
#include "arbo/reduced_tuple.hpp"
#include "arbo/relation.hpp"
#include "arbo/tree_field.hpp"

namespace arbo {

/// Accept/Reject verdict for a free or amalgamated product claim.
struct ProductCheck {
  bool accepted = false;
  std::optional<ReducedTuple> rejection;  // a closing reduced tuple on Reject
};

/// Decision by per-class incidence graphs: vertices are the class's points
/// plus the factor classes of size >= 2 inside it, Accept iff every incidence
/// graph is acyclic and the join of the factors equals R.
/// Throws NotGenerated (with a witness pair) when the join differs from R.
ProductCheck verify_free_product(const EquivRelation& r,
                                 const std::vector<EquivRelation>& factors);

/// Decision for R = R1 *_{R3} R2 through the canonical bi-colored field:
/// Accept iff the field is a tree field; a fiber cycle converts into a
/// closing reduced tuple.
ProductCheck verify_amalgam(const EquivRelation& r, const EquivRelation& r1,
                            const EquivRelation& r2, const EquivRelation& r3);

/// Union of two treeings; requires a verified free-product decomposition of
/// the joined relation (NotFreeProduct otherwise).
Graphing union_treeing(const Graphing& gr1, const Graphing& gr2);

/// Stabilizers of the endpoint sections of a distinguished edge section whose
/// image is a fundamental domain of the oriented-edge orbit relation, with a
/// verified free-product certificate for the restriction.
struct StabilizerSplit {
  EquivRelation r1;
  EquivRelation r2;
  EquivRelation restricted;  // acting relation restricted to the section domain
  ProductCheck certificate;
};
StabilizerSplit stabilizer_decomposition(const GraphField& g,
                                         const PartialSection& d);

}  // namespace arbo

#endif
