#ifndef ARBO_FIBERED_HPP
#define ARBO_FIBERED_HPP

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "arbo/partial_iso.hpp"
#include "arbo/relation.hpp"
#include "arbo/space.hpp"

namespace arbo {

/// Semantic label for a carrier point: `tag` separates disjoint-union parts,
/// (a, b) are construction coordinates (e.g. a pair of base points).
struct PointLabel {
  int tag = 0;
  int a = 0;
  int b = 0;
  bool operator==(const PointLabel&) const = default;
  auto operator<=>(const PointLabel&) const = default;
};

/// Finite fibered space: carrier points 0..size-1 with a projection onto a
/// base domain (a subset of the base space; every base-domain fiber nonempty).
class FiberedSpace {
 public:
  FiberedSpace() = default;
  FiberedSpace(FiniteSpace base, PointSet base_domain, std::vector<int> proj,
               std::vector<PointLabel> labels);

  const FiniteSpace& base() const { return base_; }
  const PointSet& base_domain() const { return base_domain_; }
  int size() const { return static_cast<int>(proj_.size()); }
  int proj(int t) const { return proj_[t]; }
  const PointLabel& label(int t) const { return labels_[t]; }
  const std::vector<PointLabel>& labels() const { return labels_; }
  /// Carrier indices in the fiber of x, ascending.
  const std::vector<int>& fiber(int x) const { return fibers_[x]; }
  /// Carrier index with the given label, or -1.
  int find_label(const PointLabel& l) const;
  /// 1-based rank of t within its fiber (canonical fiber numbering).
  int fiber_number(int t) const;

  bool operator==(const FiberedSpace&) const = default;

 private:
  FiniteSpace base_;
  PointSet base_domain_;
  std::vector<int> proj_;
  std::vector<PointLabel> labels_;
  std::vector<std::vector<int>> fibers_;
};

/// Transport table of a relation action: ((x,y) in R, t over y) -> point over x.
class Action {
 public:
  Action() = default;
  Action(EquivRelation relation, int carrier_size);

  const EquivRelation& relation() const { return rel_; }
  int carrier_size() const { return carrier_; }
  bool pair_defined(int x, int y) const { return pair_index(x, y) >= 0; }
  int apply(int x, int y, int t) const;
  void set(int x, int y, int t, int image);
  int raw(int x, int y, int t) const;  // -1 when unset

 private:
  int pair_index(int x, int y) const;
  EquivRelation rel_;
  int carrier_ = 0;
  std::vector<int> pair_of_;   // (x * n + y) -> pair slot or -1
  std::vector<int> table_;     // pair slot * carrier + t -> image or -1
};

/// Fiberwise choice over a base subset.
struct PartialSection {
  PointSet domain;
  std::vector<int> assign;  // base point -> carrier index, -1 outside domain

  PartialSection() = default;
  explicit PartialSection(const PointSet& dom)
      : domain(dom), assign(dom.space().size, -1) {}
  int at(int x) const { return assign[x]; }
  std::vector<int> image() const;
  bool operator==(const PartialSection&) const = default;
};

/// Morphism of fibered spaces over the same base.
struct FiberedMorphism {
  FiberedSpace source;
  FiberedSpace target;
  std::vector<int> map;  // source carrier -> target carrier

  bool is_bijective() const;
};

struct ActionViolation {
  enum Kind { missing_entry, wrong_fiber, identity_law, cocycle_law } kind;
  int x = -1, y = -1, z = -1, t = -1;
};

/// First violation in deterministic scan order, if any.
std::optional<ActionViolation> find_action_violation(const FiberedSpace& f,
                                                     const Action& act);
/// Throws InvalidAction on the first violating triple.
void validate_action(const FiberedSpace& f, const Action& act);

/// Canonical left fibered space of R: carrier = ordered pairs (x,y) with x~y,
/// projection on the first coordinate, horizontal action, diagonal section.
struct CanonicalLeft {
  FiberedSpace space;
  Action action;
  PartialSection diagonal;
};
CanonicalLeft canonical_left(const EquivRelation& r);
/// Variant over a base domain A: carrier = pairs with first coordinate in A.
CanonicalLeft canonical_left_over(const EquivRelation& r, const PointSet& a);

/// Orbit relation R_F on the carrier: t ~ t' iff (proj t, proj t') . t' = t.
EquivRelation orbit_relation(const FiberedSpace& f, const Action& act);

/// Stabilizer of a section: x ~ y iff (y,x) . s(x) = s(y); a sub-relation of R|_A.
EquivRelation stabilizer(const FiberedSpace& f, const Action& act,
                         const PartialSection& s);

/// Quotient fibered space R/S for S on a complete domain A of R:
/// carrier = pairs (x, least-index S-class representative), with the induced
/// action and the distinguished section d_S whose stabilizer is S.
struct QuotientSpace {
  FiberedSpace space;
  Action action;
  PartialSection d_s;
};
QuotientSpace quotient(const EquivRelation& r, const EquivRelation& s);
/// Quotient of the restriction of R to a base domain Y (S-domain inside Y).
QuotientSpace quotient_over(const EquivRelation& r, const EquivRelation& s,
                            const PointSet& y);

/// The swap-induced isomorphism between R/S (over the first coordinate) and
/// S\R (over the second coordinate), with both induced actions.
struct QuotientSymmetry {
  QuotientSpace left;
  FiberedSpace right_space;
  Action right_action;
  FiberedMorphism morphism;
};
QuotientSymmetry right_quotient_symmetry(const EquivRelation& r,
                                         const EquivRelation& s);

/// Partition the carrier into orbit-saturations of partial-section images,
/// by repeated least-fiber-number selection split per orbit.
std::vector<PartialSection> exhaust_sections(const FiberedSpace& f,
                                             const Action& act);

/// Fundamental domain of the orbit relation: union over exhaust_sections of
/// each section restricted to a fundamental domain of its stabilizer.
std::vector<int> rf_fundamental_domain(const FiberedSpace& f, const Action& act);

/// True iff some complete domain of the orbit relation projects injectively.
bool is_homogeneous(const FiberedSpace& f, const Action& act);

/// Saturation of a section image is the whole carrier.
bool is_saturating(const FiberedSpace& f, const Action& act,
                   const PartialSection& s);

/// Morphism F1 -> F2 sending s1(A) to s2(A); requires s1 saturating and
/// Stab(s1) inside Stab(s2). Surjective when s2 is saturating.
FiberedMorphism induced_morphism(const FiberedSpace& f1, const Action& a1,
                                 const PartialSection& s1, const FiberedSpace& f2,
                                 const Action& a2, const PartialSection& s2);

/// Bijective equivariant morphism F -> canonical_left(R) sending a section
/// whose image is a fundamental domain of R_F onto the diagonal.
FiberedMorphism canonical_iso(const FiberedSpace& f, const Action& act,
                              const PartialSection& s);

struct StableConjugacy {
  PartialMap reduction;                 // r : A -> A'
  EquivRelation stab_s;                 // Stab(s)
  EquivRelation stab_s_prime;           // Stab(s')
  bool formula_holds = false;           // s'(r(x)) = (r(x), x) . s(x) pointwise
  bool image_complete_domain = false;   // r(A) complete for Stab(s')
};
/// Reduction witnessing stable conjugacy of the stabilizers of two saturating
/// sections of the same homogeneous fibered space.
StableConjugacy stable_conjugacy_witness(const FiberedSpace& f, const Action& act,
                                         const PartialSection& s,
                                         const PartialSection& s_prime);

/// Extension of (F, s) with s(A) a fundamental domain of R_F to a fibered
/// space with a full section whose image is a fundamental domain.
struct CanonicalExtension {
  FiberedSpace space;
  Action action;
  PartialSection section;        // defined on all of the base domain
  std::vector<int> old_to_new;   // carrier inclusion over proj^{-1}(A), -1 elsewhere
};
CanonicalExtension extend_to_canonical(const FiberedSpace& f, const Action& act,
                                       const PartialSection& s);

/// Equivariance / fiber-preservation check for a morphism (when actions given).
bool validate_morphism(const FiberedMorphism& m, const Action* src_act,
                       const Action* dst_act);

namespace detail {
// Fast paths for actions that are valid by construction.
EquivRelation orbit_relation_unchecked(const FiberedSpace& f, const Action& act);
EquivRelation stabilizer_unchecked(const FiberedSpace& f, const Action& act,
                                   const PartialSection& s);
}  // namespace detail

}  // namespace arbo

#endif
