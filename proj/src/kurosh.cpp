#include "arbo/kurosh.hpp"

#include <algorithm>

#include "arbo/tuple_oracle.hpp"

namespace arbo {

namespace {

struct LevelResult {
  std::vector<DecompFactor> factors;
  std::vector<std::pair<int, int>> treeing_pairs;
};

// Pull a factor of the sub-decomposition back through the color-2 conjugator.
std::optional<DecompFactor> pull_factor(const DecompFactor& f,
                                        const PartialIso& phi_v, bool v_identity,
                                        bool keep_trivial) {
  std::vector<std::pair<int, int>> part;
  for (auto [a, b] : phi_v.pairs())
    if (f.conjugator.defined(b)) part.emplace_back(a, b);
  if (part.empty()) return std::nullopt;
  PartialIso phi_part(phi_v.space(), part);
  PartialIso conj = compose(f.conjugator, phi_part);
  EquivRelation rel = conjugate(
      restrict(f.relation, phi_part.target()), phi_part);
  DecompFactor out;
  out.factor_index = f.factor_index;
  out.conjugator = std::move(conj);
  out.relation = std::move(rel);
  out.identity_factor = f.identity_factor && v_identity;
  if (!keep_trivial && !out.identity_factor && out.relation.is_trivial())
    return std::nullopt;
  return out;
}

// Decompose one level: isolate ext_factors[first] against the join of the
// rest, recurse into the second color. In restriction mode the acting
// relation is r_cur restricted to y_cur; otherwise it is s_cur.
LevelResult decompose_level(const EquivRelation& r_cur,
                            const std::vector<EquivRelation>& ext_factors,
                            const std::vector<PointSet>& orig_domains,
                            size_t first, const EquivRelation& s_cur,
                            const PointSet& y_cur, bool restrict_mode) {
  FiniteSpace space = r_cur.space();
  const EquivRelation& f1 = ext_factors[first];
  std::vector<EquivRelation> rest(ext_factors.begin() + first + 1,
                                  ext_factors.end());
  EquivRelation r2p = rest.empty() ? EquivRelation::trivial_full(space)
                                   : join(rest);
  GraphField field = bass_serre_free(r_cur, f1, r2p);
  GraphField acted = restrict_mode ? restrict_field(field, y_cur)
                                   : act_by_subrelation(field, s_cur);
  TreeCheck tc = is_treefield(acted);
  if (!tc.ok)
    fail(ErrorKind::NotFreeProduct, "canonical field is not a tree field",
         {tc.witness->base_point});

  DesingOptions opts;
  opts.diagonal_first = true;
  opts.factor_mode = true;
  opts.factor1 = &f1;
  opts.factor2 = &r2p;
  opts.ambient = &r_cur;
  Desingularization desing = desingularize(acted, opts);

  LevelResult out;
  for (const auto& ex : desing.extra_edges)
    for (auto pr : ex.phi.pairs()) out.treeing_pairs.push_back(pr);

  for (const auto& v : desing.vertices) {
    if (v.factor_index == 1) {
      DecompFactor f;
      f.factor_index = static_cast<int>(first) + 1;
      f.conjugator = v.conjugator;
      f.relation = v.relation;
      f.identity_factor = v.identity_factor;
      if (restrict_mode) {
        // Trim away targets in the singleton padding outside the factor's
        // original domain; trivial factors stay, they carry the
        // target-saturation partition.
        const PointSet& orig = orig_domains[first];
        std::vector<std::pair<int, int>> kept;
        for (auto [a, b] : f.conjugator.pairs())
          if (orig.contains(b)) kept.emplace_back(a, b);
        if (kept.empty()) continue;
        PartialIso trimmed(space, kept);
        f.relation = restrict(f.relation, trimmed.source());
        f.conjugator = std::move(trimmed);
      } else if (!f.identity_factor && f.relation.is_trivial()) {
        continue;
      }
      out.factors.push_back(std::move(f));
      continue;
    }
    // Color 2: recurse when factors remain.
    if (rest.empty()) {
      if (!v.relation.is_trivial())
        fail(ErrorKind::ValidationError, "nontrivial trailing vertex relation");
      continue;
    }
    PointSet bv = v.conjugator.target();
    EquivRelation pushed = conjugate(v.relation, invert(v.conjugator));
    LevelResult sub;
    if (restrict_mode) {
      if (!(pushed == restrict(r2p, bv)))
        fail(ErrorKind::ValidationError, "color-2 vertex is not a full conjugate");
      sub = decompose_level(r2p, ext_factors, orig_domains, first + 1, s_cur,
                            bv, true);
    } else {
      EquivRelation s_next = extend_trivially(pushed);
      sub = decompose_level(r2p, ext_factors, orig_domains, first + 1, s_next,
                            y_cur, false);
    }
    for (const auto& f : sub.factors)
      if (auto pulled = pull_factor(f, v.conjugator, v.identity_factor,
                                    restrict_mode))
        out.factors.push_back(std::move(*pulled));
    for (auto [a, b] : sub.treeing_pairs)
      out.treeing_pairs.emplace_back(v.conjugator.apply_inverse(a),
                                     v.conjugator.apply_inverse(b));
  }
  return out;
}

KuroshDecomposition assemble(FiniteSpace space, LevelResult&& res,
                             const EquivRelation& whole) {
  KuroshDecomposition out;
  out.factors = std::move(res.factors);
  std::stable_sort(out.factors.begin(), out.factors.end(),
                   [](const DecompFactor& a, const DecompFactor& b) {
                     return a.factor_index < b.factor_index;
                   });
  out.treeing = Graphing(space, res.treeing_pairs);
  out.treeing_relation = generated_relation(out.treeing);
  std::vector<EquivRelation> parts;
  for (const auto& f : out.factors) parts.push_back(f.relation);
  parts.push_back(restrict(out.treeing_relation, whole.domain()));
  out.freeness = verify_free_product(whole, parts);
  return out;
}

}  // namespace

KuroshDecomposition kurosh(const EquivRelation& r,
                           const std::vector<EquivRelation>& factors,
                           const EquivRelation& s) {
  if (!r.domain().is_full())
    fail(ErrorKind::DomainMismatch, "kurosh expects R on the whole space");
  for (const auto& f : factors)
    if (!f.domain().is_full())
      fail(ErrorKind::DomainMismatch, "kurosh expects factors on the whole space");
  if (!is_subrelation(s, r)) fail(ErrorKind::NotSubrelation, "kurosh");
  if (!s.domain().is_full())
    fail(ErrorKind::DomainMismatch, "kurosh expects S on the whole space");
  ProductCheck pre = verify_free_product(r, factors);
  if (!pre.accepted)
    fail(ErrorKind::NotFreeProduct, "input factors are not in free product",
         pre.rejection->points);

  std::vector<PointSet> orig;
  for (const auto& f : factors) orig.push_back(f.domain());
  LevelResult res = decompose_level(r, factors, orig, 0, s,
                                    PointSet::full(r.space()), false);
  KuroshDecomposition out = assemble(r.space(), std::move(res), s);
  DecompositionCheck chk = check_kurosh(r, factors, s, out);
  if (!chk.ok())
    fail(ErrorKind::ValidationError, "kurosh output failed re-verification");
  return out;
}

RestrictionDecomposition restrict_decomposition(
    const EquivRelation& r, const std::vector<EquivRelation>& factors,
    const PointSet& y) {
  if (!r.domain().is_full())
    fail(ErrorKind::DomainMismatch, "restriction expects R on the whole space");
  PointSet cover(r.space());
  for (const auto& f : factors) cover = cover.unite(f.domain());
  if (!cover.is_full())
    fail(ErrorKind::CoverageViolation, "factor domains do not cover the space");
  ProductCheck pre = verify_free_product(r, factors);
  if (!pre.accepted)
    fail(ErrorKind::NotFreeProduct, "input factors are not in free product",
         pre.rejection->points);

  std::vector<EquivRelation> ext;
  std::vector<PointSet> orig;
  for (const auto& f : factors) {
    ext.push_back(extend_trivially(f));
    orig.push_back(f.domain());
  }
  EquivRelation acting = restrict(r, y);
  LevelResult res = decompose_level(r, ext, orig, 0, acting, y, true);
  RestrictionDecomposition out;
  out.decomposition = assemble(r.space(), std::move(res), acting);
  out.targets.assign(factors.size(), {});
  for (const auto& f : out.decomposition.factors)
    out.targets[f.factor_index - 1].push_back(f.conjugator.target());
  RestrictionCheck chk = check_restriction(r, factors, y, out);
  out.saturation_partition = chk.saturation_partition;
  if (!chk.ok())
    fail(ErrorKind::ValidationError, "restriction output failed re-verification");
  return out;
}

DecompositionCheck check_kurosh(const EquivRelation& r,
                                const std::vector<EquivRelation>& factors,
                                const EquivRelation& s,
                                const KuroshDecomposition& d) {
  DecompositionCheck out;
  // Factor formula, pointwise through the relation algebra.
  out.factor_formula = true;
  for (const auto& f : d.factors) {
    if (f.factor_index < 1 || f.factor_index > static_cast<int>(factors.size())) {
      out.factor_formula = false;
      break;
    }
    EquivRelation ext = extend_trivially(factors[f.factor_index - 1]);
    EquivRelation expected =
        intersect(conjugate(restrict(ext, f.conjugator.target()), f.conjugator),
                  restrict(s, f.conjugator.source()));
    if (!(expected == f.relation) ||
        !(f.relation.domain() == f.conjugator.source())) {
      out.factor_formula = false;
      break;
    }
    if (!pseudogroup_member(f.conjugator, r)) {
      out.factor_formula = false;
      break;
    }
  }
  // Generation.
  std::vector<EquivRelation> parts;
  for (const auto& f : d.factors) parts.push_back(f.relation);
  parts.push_back(d.treeing_relation);
  parts.push_back(EquivRelation::trivial(s.space(), s.domain()));
  out.generation = join(parts) == s;
  // Freeness through the bounded tuple oracle.
  std::vector<EquivRelation> oracle_parts;
  for (const auto& f : d.factors) oracle_parts.push_back(f.relation);
  oracle_parts.push_back(d.treeing_relation);
  out.freeness = oracle_is_free_product(s, oracle_parts);
  // Identity factors.
  out.identity_factors = true;
  for (size_t i = 0; i < factors.size(); ++i) {
    bool found = false;
    EquivRelation want = intersect(extend_trivially(factors[i]), s);
    for (const auto& f : d.factors) {
      if (f.factor_index != static_cast<int>(i) + 1 || !f.identity_factor)
        continue;
      if (f.conjugator == PartialIso::identity(PointSet::full(s.space())) &&
          f.relation == want)
        found = true;
    }
    if (!found) out.identity_factors = false;
  }
  out.treeing_valid = is_treeing(d.treeing) &&
                      d.treeing_relation == generated_relation(d.treeing) &&
                      is_subrelation(d.treeing_relation, extend_trivially(s));
  return out;
}

RestrictionCheck check_restriction(const EquivRelation& r,
                                   const std::vector<EquivRelation>& factors,
                                   const PointSet& y,
                                   const RestrictionDecomposition& rd) {
  RestrictionCheck out;
  const KuroshDecomposition& d = rd.decomposition;
  EquivRelation acting = restrict(r, y);
  // Full-conjugate factor formula.
  out.base.factor_formula = true;
  for (const auto& f : d.factors) {
    if (f.factor_index < 1 || f.factor_index > static_cast<int>(factors.size())) {
      out.base.factor_formula = false;
      break;
    }
    EquivRelation ext = extend_trivially(factors[f.factor_index - 1]);
    EquivRelation expected =
        conjugate(restrict(ext, f.conjugator.target()), f.conjugator);
    if (!(expected == f.relation) || !pseudogroup_member(f.conjugator, r) ||
        !f.conjugator.source().subset_of(y)) {
      out.base.factor_formula = false;
      break;
    }
  }
  // Generation and freeness of the restriction.
  std::vector<EquivRelation> parts;
  for (const auto& f : d.factors) parts.push_back(f.relation);
  parts.push_back(restrict(d.treeing_relation, y));
  parts.push_back(EquivRelation::trivial(r.space(), y));
  out.base.generation = join(parts) == acting;
  std::vector<EquivRelation> oracle_parts;
  for (const auto& f : d.factors) oracle_parts.push_back(f.relation);
  oracle_parts.push_back(restrict(d.treeing_relation, y));
  out.base.freeness = oracle_is_free_product(acting, oracle_parts);
  // Identity factors: restrict(R_i, A_i meet Y) whenever that meet is nonempty.
  out.base.identity_factors = true;
  for (size_t i = 0; i < factors.size(); ++i) {
    PointSet meet = factors[i].domain().intersect(y);
    if (meet.empty()) continue;
    bool found = false;
    EquivRelation want = restrict(factors[i], meet);
    for (const auto& f : d.factors) {
      if (f.factor_index != static_cast<int>(i) + 1 || !f.identity_factor)
        continue;
      if (f.conjugator == PartialIso::identity(meet) && f.relation == want)
        found = true;
    }
    if (!found) out.base.identity_factors = false;
  }
  out.base.treeing_valid =
      is_treeing(d.treeing) &&
      d.treeing_relation == generated_relation(d.treeing) &&
      is_subrelation(restrict(d.treeing_relation, y), acting);
  // Saturation partition of each factor domain within reach of Y.
  out.saturation_partition = true;
  PointSet reach = saturate(r, y);
  for (size_t i = 0; i < factors.size(); ++i) {
    PointSet scope = factors[i].domain().intersect(reach);
    std::vector<int> owner(r.space().size, -1);
    int id = 0;
    for (const auto& f : d.factors) {
      if (f.factor_index != static_cast<int>(i) + 1) continue;
      PointSet sat = saturate(factors[i],
                              f.conjugator.target().intersect(factors[i].domain()));
      for (int p : sat.members()) {
        if (owner[p] != -1) out.saturation_partition = false;
        owner[p] = id;
      }
      ++id;
    }
    for (int p : scope.members())
      if (owner[p] < 0) out.saturation_partition = false;
    for (int p = 0; p < r.space().size; ++p)
      if (owner[p] >= 0 && !scope.contains(p)) out.saturation_partition = false;
  }
  return out;
}

}  // namespace arbo
