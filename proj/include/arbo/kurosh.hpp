#ifndef ARBO_KUROSH_HPP
#define ARBO_KUROSH_HPP

#include <vector>

#include "arbo/graph_of_relations.hpp"
#include "arbo/verify.hpp"

namespace arbo {

/// One factor of a decomposition: the conjugator phi with source A, and the
/// relation carried on A. For sub-relation decompositions the relation is
/// (phi^-1 (R_i|_phi(A)) phi) meet S; restrictions carry the full conjugate.
struct DecompFactor {
  int factor_index = 0;    // 1-based index into the input factor list
  PartialIso conjugator;   // source = the factor domain
  EquivRelation relation;  // on the conjugator's source
  bool identity_factor = false;
};

struct KuroshDecomposition {
  std::vector<DecompFactor> factors;
  Graphing treeing;               // treeing of the complement part
  EquivRelation treeing_relation; // relation generated by the treeing
  ProductCheck freeness;          // certificate over factors + treeing relation
};

/// Decomposition of a sub-relation S (on all of X) of a free product.
KuroshDecomposition kurosh(const EquivRelation& r,
                           const std::vector<EquivRelation>& factors,
                           const EquivRelation& s);

struct RestrictionDecomposition {
  KuroshDecomposition decomposition;
  /// Per input factor, the conjugator targets grouped by decomposition factor;
  /// their factor-saturations partition the factor's domain (meet R-saturation of Y).
  std::vector<std::vector<PointSet>> targets;
  bool saturation_partition = false;
};

/// Decomposition of R|_Y for a free product of factors on sub-domains A_i
/// with union X.
RestrictionDecomposition restrict_decomposition(
    const EquivRelation& r, const std::vector<EquivRelation>& factors,
    const PointSet& y);

/// Independent re-verification of a decomposition using only the relation
/// algebra and the bounded tuple oracle: factor formula, generation,
/// freeness, identity factors.
struct DecompositionCheck {
  bool factor_formula = false;
  bool generation = false;
  bool freeness = false;
  bool identity_factors = false;
  bool treeing_valid = false;
  bool ok() const {
    return factor_formula && generation && freeness && identity_factors &&
           treeing_valid;
  }
};
DecompositionCheck check_kurosh(const EquivRelation& r,
                                const std::vector<EquivRelation>& factors,
                                const EquivRelation& s,
                                const KuroshDecomposition& d);
/// Restriction variant: full-conjugate factor formula plus the
/// saturation-partition property.
struct RestrictionCheck {
  DecompositionCheck base;
  bool saturation_partition = false;
  bool ok() const { return base.ok() && saturation_partition; }
};
RestrictionCheck check_restriction(const EquivRelation& r,
                                   const std::vector<EquivRelation>& factors,
                                   const PointSet& y,
                                   const RestrictionDecomposition& d);

}  // namespace arbo

#endif
