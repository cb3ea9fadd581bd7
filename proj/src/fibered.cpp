#include "arbo/fibered.hpp"

#include <algorithm>
#include <functional>

namespace arbo {

namespace {
constexpr int kPart2 = 101;  // adjoined canonical pairs in extend_to_canonical
constexpr int kPart3 = 102;  // equivariant clones over the complement
}  // namespace

FiberedSpace::FiberedSpace(FiniteSpace base, PointSet base_domain,
                           std::vector<int> proj, std::vector<PointLabel> labels)
    : base_(base),
      base_domain_(std::move(base_domain)),
      proj_(std::move(proj)),
      labels_(std::move(labels)) {
  if (labels_.size() != proj_.size())
    fail(ErrorKind::InvalidArgument, "fibered space label/proj size mismatch");
  fibers_.assign(base_.size, {});
  for (int t = 0; t < size(); ++t) {
    int x = proj_[t];
    if (x < 0 || x >= base_.size || !base_domain_.contains(x))
      fail(ErrorKind::ValidationError, "projection leaves base domain", {t, x});
    fibers_[x].push_back(t);
  }
  for (int x : base_domain_.members())
    if (fibers_[x].empty())
      fail(ErrorKind::ValidationError, "empty fiber", {x});
}

int FiberedSpace::find_label(const PointLabel& l) const {
  for (int t = 0; t < size(); ++t)
    if (labels_[t] == l) return t;
  return -1;
}

int FiberedSpace::fiber_number(int t) const {
  const auto& f = fibers_[proj_[t]];
  for (int i = 0; i < static_cast<int>(f.size()); ++i)
    if (f[i] == t) return i + 1;
  return -1;
}

Action::Action(EquivRelation relation, int carrier_size)
    : rel_(std::move(relation)), carrier_(carrier_size) {
  int n = rel_.space().size;
  pair_of_.assign(n * n, -1);
  int slots = 0;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (rel_.related(x, y)) pair_of_[x * n + y] = slots++;
  table_.assign(static_cast<size_t>(slots) * carrier_, -1);
}

int Action::pair_index(int x, int y) const {
  int n = rel_.space().size;
  if (x < 0 || x >= n || y < 0 || y >= n) return -1;
  return pair_of_[x * n + y];
}

int Action::apply(int x, int y, int t) const {
  int p = pair_index(x, y);
  if (p < 0) fail(ErrorKind::InvalidAction, "pair not in relation", {x, y});
  int img = table_[static_cast<size_t>(p) * carrier_ + t];
  if (img < 0) fail(ErrorKind::InvalidAction, "transport undefined", {x, y, t});
  return img;
}

void Action::set(int x, int y, int t, int image) {
  int p = pair_index(x, y);
  if (p < 0) fail(ErrorKind::InvalidAction, "pair not in relation", {x, y});
  table_[static_cast<size_t>(p) * carrier_ + t] = image;
}

int Action::raw(int x, int y, int t) const {
  int p = pair_index(x, y);
  if (p < 0) return -1;
  return table_[static_cast<size_t>(p) * carrier_ + t];
}

std::vector<int> PartialSection::image() const {
  std::vector<int> out;
  for (int x : domain.members()) out.push_back(assign[x]);
  std::sort(out.begin(), out.end());
  return out;
}

bool FiberedMorphism::is_bijective() const {
  if (source.size() != target.size()) return false;
  std::vector<bool> hit(target.size(), false);
  for (int t = 0; t < source.size(); ++t) {
    int u = map[t];
    if (u < 0 || u >= target.size() || hit[u]) return false;
    hit[u] = true;
  }
  return true;
}

std::optional<ActionViolation> find_action_violation(const FiberedSpace& f,
                                                     const Action& act) {
  const EquivRelation& r = act.relation();
  if (act.carrier_size() != f.size())
    return ActionViolation{ActionViolation::missing_entry, -1, -1, -1, -1};
  int n = r.space().size;
  // Totality and fiber compatibility.
  for (int x = 0; x < n; ++x) {
    if (!r.in_domain(x)) continue;
    for (int y = 0; y < n; ++y) {
      if (!r.related(x, y)) continue;
      for (int t : f.fiber(y)) {
        int img = act.raw(x, y, t);
        if (img < 0)
          return ActionViolation{ActionViolation::missing_entry, x, y, -1, t};
        if (img >= f.size() || f.proj(img) != x)
          return ActionViolation{ActionViolation::wrong_fiber, x, y, -1, t};
      }
    }
  }
  // Identity law.
  for (int z = 0; z < n; ++z) {
    if (!r.in_domain(z)) continue;
    for (int t : f.fiber(z))
      if (act.raw(z, z, t) != t)
        return ActionViolation{ActionViolation::identity_law, z, z, z, t};
  }
  // Cocycle law.
  for (int x = 0; x < n; ++x) {
    if (!r.in_domain(x)) continue;
    for (int y = 0; y < n; ++y) {
      if (!r.related(x, y)) continue;
      for (int z = 0; z < n; ++z) {
        if (!r.related(y, z)) continue;
        for (int t : f.fiber(z))
          if (act.raw(x, y, act.raw(y, z, t)) != act.raw(x, z, t))
            return ActionViolation{ActionViolation::cocycle_law, x, y, z, t};
      }
    }
  }
  return std::nullopt;
}

void validate_action(const FiberedSpace& f, const Action& act) {
  if (auto v = find_action_violation(f, act)) {
    fail(ErrorKind::InvalidAction, "action law violated", {v->x, v->y, v->z, v->t});
  }
}

CanonicalLeft canonical_left_over(const EquivRelation& r, const PointSet& a) {
  FiniteSpace space = r.space();
  std::vector<int> proj;
  std::vector<PointLabel> labels;
  for (int x : a.members()) {
    if (!r.in_domain(x)) fail(ErrorKind::DomainMismatch, "canonical_left domain");
    for (int y = 0; y < space.size; ++y)
      if (r.related(x, y)) {
        proj.push_back(x);
        labels.push_back({0, x, y});
      }
  }
  FiberedSpace f(space, a, std::move(proj), std::move(labels));
  EquivRelation over = restrict(r, a);
  Action act(over, f.size());
  for (int t = 0; t < f.size(); ++t) {
    int y = f.label(t).a, z = f.label(t).b;
    for (int x : a.members())
      if (over.related(x, y)) act.set(x, y, t, f.find_label({0, x, z}));
  }
  PartialSection d(a);
  for (int x : a.members()) d.assign[x] = f.find_label({0, x, x});
  return {std::move(f), std::move(act), std::move(d)};
}

CanonicalLeft canonical_left(const EquivRelation& r) {
  if (!r.domain().is_full())
    fail(ErrorKind::DomainMismatch, "canonical_left needs a full-domain relation");
  return canonical_left_over(r, PointSet::full(r.space()));
}

EquivRelation orbit_relation(const FiberedSpace& f, const Action& act) {
  validate_action(f, act);
  const EquivRelation& r = act.relation();
  std::vector<std::pair<int, int>> pairs;
  for (int t = 0; t < f.size(); ++t) {
    int y = f.proj(t);
    for (int x = 0; x < r.space().size; ++x)
      if (r.related(x, y)) pairs.emplace_back(t, act.raw(x, y, t));
  }
  EquivRelation gen =
      EquivRelation::generated_by_pairs(FiniteSpace(std::max(f.size(), 1)), pairs);
  // Every carrier point is in the domain (identity pairs guarantee it).
  return gen;
}

namespace detail {

// Orbit relation without re-validating the action (valid by construction).
EquivRelation orbit_relation_unchecked(const FiberedSpace& f, const Action& act) {
  const EquivRelation& r = act.relation();
  std::vector<std::pair<int, int>> pairs;
  for (int t = 0; t < f.size(); ++t) {
    int y = f.proj(t);
    for (int x = 0; x < r.space().size; ++x)
      if (r.related(x, y)) pairs.emplace_back(t, act.raw(x, y, t));
  }
  return EquivRelation::generated_by_pairs(FiniteSpace(std::max(f.size(), 1)),
                                           pairs);
}

EquivRelation stabilizer_unchecked(const FiberedSpace& f, const Action& act,
                                   const PartialSection& s) {
  (void)f;
  const EquivRelation& r = act.relation();
  std::vector<int> class_of(r.space().size, -1);
  std::vector<int> pts = s.domain.members();
  for (size_t i = 0; i < pts.size(); ++i) {
    int x = pts[i];
    if (class_of[x] >= 0) continue;
    class_of[x] = x;
    for (size_t j = i + 1; j < pts.size(); ++j) {
      int y = pts[j];
      if (class_of[y] >= 0 || !r.related(x, y)) continue;
      if (act.raw(y, x, s.at(x)) == s.at(y)) class_of[y] = x;
    }
  }
  return EquivRelation::from_class_map(r.space(), std::move(class_of));
}

}  // namespace detail

EquivRelation stabilizer(const FiberedSpace& f, const Action& act,
                         const PartialSection& s) {
  validate_action(f, act);
  if (!s.domain.subset_of(f.base_domain()))
    fail(ErrorKind::DomainMismatch, "section domain outside base");
  for (int x : s.domain.members())
    if (s.at(x) < 0 || s.at(x) >= f.size() || f.proj(s.at(x)) != x)
      fail(ErrorKind::ValidationError, "section not fiberwise", {x});
  return detail::stabilizer_unchecked(f, act, s);
}

namespace {

QuotientSpace quotient_core(const EquivRelation& over, const PointSet& base,
                            const EquivRelation& s) {
  FiniteSpace space = over.space();
  std::vector<int> proj;
  std::vector<PointLabel> labels;
  for (int x : base.members())
    for (int rep : s.class_reps())
      if (over.related(x, rep)) {
        proj.push_back(x);
        labels.push_back({0, x, rep});
      }
  FiberedSpace f(space, base, std::move(proj), std::move(labels));
  Action act(over, f.size());
  for (int t = 0; t < f.size(); ++t) {
    int y = f.label(t).a, rep = f.label(t).b;
    for (int x : base.members())
      if (over.related(x, y)) act.set(x, y, t, f.find_label({0, x, rep}));
  }
  PartialSection d(s.domain());
  for (int a : s.domain().members()) d.assign[a] = f.find_label({0, a, s.class_of(a)});
  return {std::move(f), std::move(act), std::move(d)};
}

}  // namespace

QuotientSpace quotient(const EquivRelation& r, const EquivRelation& s) {
  if (!r.domain().is_full())
    fail(ErrorKind::DomainMismatch, "quotient expects R on the whole space");
  if (!is_subrelation(s, r)) fail(ErrorKind::NotSubrelation, "quotient");
  if (classify_domain(r, s.domain()) == DomainClass::neither)
    fail(ErrorKind::NotCompleteDomain, "quotient: S domain not complete in R");
  return quotient_core(r, PointSet::full(r.space()), s);
}

QuotientSpace quotient_over(const EquivRelation& r, const EquivRelation& s,
                            const PointSet& y) {
  EquivRelation over = restrict(r, y);
  if (!is_subrelation(s, over)) fail(ErrorKind::NotSubrelation, "quotient_over");
  if (classify_domain(over, s.domain()) == DomainClass::neither)
    fail(ErrorKind::NotCompleteDomain, "quotient_over: S domain not complete");
  return quotient_core(over, y, s);
}

QuotientSymmetry right_quotient_symmetry(const EquivRelation& r,
                                         const EquivRelation& s) {
  QuotientSpace left = quotient(r, s);
  // Right quotient S\R over the second coordinate: points (rep, x).
  std::vector<int> proj;
  std::vector<PointLabel> labels;
  for (int t = 0; t < left.space.size(); ++t) {
    proj.push_back(left.space.label(t).a);
    labels.push_back({1, left.space.label(t).b, left.space.label(t).a});
  }
  FiberedSpace right(r.space(), PointSet::full(r.space()), std::move(proj),
                     std::move(labels));
  Action ract(r, right.size());
  for (int t = 0; t < right.size(); ++t) {
    int rep = right.label(t).a, x = right.label(t).b;
    for (int xp = 0; xp < r.space().size; ++xp)
      if (r.related(xp, x)) ract.set(xp, x, t, right.find_label({1, rep, xp}));
  }
  std::vector<int> map(left.space.size());
  for (int t = 0; t < left.space.size(); ++t) map[t] = t;
  FiberedMorphism morphism{left.space, right, std::move(map)};
  return {std::move(left), std::move(right), std::move(ract), std::move(morphism)};
}

std::vector<PartialSection> exhaust_sections(const FiberedSpace& f,
                                             const Action& act) {
  validate_action(f, act);
  EquivRelation rf = detail::orbit_relation_unchecked(f, act);
  std::vector<bool> removed(f.size(), false);
  std::vector<PartialSection> out;
  int left = f.size();
  while (left > 0) {
    // Least remaining fiber number per base point.
    std::vector<std::pair<int, int>> picks;  // (base point, carrier point)
    for (int x : f.base_domain().members())
      for (int t : f.fiber(x))
        if (!removed[t]) {
          picks.emplace_back(x, t);
          break;
        }
    // One section per orbit of the picked points.
    std::vector<int> orbit_order;
    for (auto [x, t] : picks) {
      int rep = rf.class_of(t);
      if (std::find(orbit_order.begin(), orbit_order.end(), rep) ==
          orbit_order.end())
        orbit_order.push_back(rep);
    }
    for (int rep : orbit_order) {
      std::vector<int> dom;
      for (auto [x, t] : picks)
        if (rf.class_of(t) == rep) dom.push_back(x);
      PartialSection s(PointSet(f.base(), dom));
      for (auto [x, t] : picks)
        if (rf.class_of(t) == rep) s.assign[x] = t;
      out.push_back(std::move(s));
      for (int t = 0; t < f.size(); ++t)
        if (!removed[t] && rf.class_of(t) == rep) {
          removed[t] = true;
          --left;
        }
    }
  }
  return out;
}

std::vector<int> rf_fundamental_domain(const FiberedSpace& f, const Action& act) {
  std::vector<int> out;
  for (const auto& s : exhaust_sections(f, act)) {
    EquivRelation stab = detail::stabilizer_unchecked(f, act, s);
    for (int x : fundamental_domain(stab).members()) out.push_back(s.at(x));
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_homogeneous(const FiberedSpace& f, const Action& act) {
  EquivRelation rf = detail::orbit_relation_unchecked(f, act);
  std::vector<int> orbits = rf.class_reps();
  int m = static_cast<int>(orbits.size());
  // Match every orbit to a distinct base point whose fiber it meets.
  std::vector<std::vector<int>> adj(m);
  for (int i = 0; i < m; ++i) {
    std::vector<bool> seen(f.base().size, false);
    for (int t : rf.class_members(orbits[i])) {
      int x = f.proj(t);
      if (!seen[x]) {
        seen[x] = true;
        adj[i].push_back(x);
      }
    }
  }
  std::vector<int> owner(f.base().size, -1);
  std::vector<bool> visited;
  std::function<bool(int)> try_match = [&](int i) -> bool {
    for (int x : adj[i]) {
      if (visited[x]) continue;
      visited[x] = true;
      if (owner[x] < 0 || try_match(owner[x])) {
        owner[x] = i;
        return true;
      }
    }
    return false;
  };
  for (int i = 0; i < m; ++i) {
    visited.assign(f.base().size, false);
    if (!try_match(i)) return false;
  }
  return true;
}

bool is_saturating(const FiberedSpace& f, const Action& act,
                   const PartialSection& s) {
  EquivRelation rf = detail::orbit_relation_unchecked(f, act);
  std::vector<bool> cls(f.size() ? f.size() : 1, false);
  for (int x : s.domain.members()) cls[rf.class_of(s.at(x))] = true;
  for (int t = 0; t < f.size(); ++t)
    if (!cls[rf.class_of(t)]) return false;
  return true;
}

FiberedMorphism induced_morphism(const FiberedSpace& f1, const Action& a1,
                                 const PartialSection& s1, const FiberedSpace& f2,
                                 const Action& a2, const PartialSection& s2) {
  if (!(a1.relation() == a2.relation()))
    fail(ErrorKind::SpaceMismatch, "induced_morphism: different acting relations");
  if (!(s1.domain == s2.domain))
    fail(ErrorKind::DomainMismatch, "induced_morphism: sections on different domains");
  if (!is_saturating(f1, a1, s1))
    fail(ErrorKind::NotSaturating, "induced_morphism: s1 not saturating");
  EquivRelation st1 = detail::stabilizer_unchecked(f1, a1, s1);
  EquivRelation st2 = detail::stabilizer_unchecked(f2, a2, s2);
  for (int x : s1.domain.members())
    for (int y : s1.domain.members())
      if (st1.related(x, y) && !st2.related(x, y))
        fail(ErrorKind::StabilizerNotIncluded, "induced_morphism", {x, y});
  const EquivRelation& r = a1.relation();
  std::vector<int> map(f1.size(), -1);
  for (int t = 0; t < f1.size(); ++t) {
    int x = f1.proj(t);
    for (int y : s1.domain.members()) {
      if (!r.related(x, y)) continue;
      if (a1.raw(x, y, s1.at(y)) == t) {
        map[t] = a2.raw(x, y, s2.at(y));
        break;
      }
    }
    if (map[t] < 0)
      fail(ErrorKind::NotSaturating, "induced_morphism: point outside saturation",
           {t});
  }
  return {f1, f2, std::move(map)};
}

FiberedMorphism canonical_iso(const FiberedSpace& f, const Action& act,
                              const PartialSection& s) {
  validate_action(f, act);
  if (!(s.domain == f.base_domain()))
    fail(ErrorKind::DomainMismatch, "canonical_iso: section not on whole base");
  EquivRelation rf = detail::orbit_relation_unchecked(f, act);
  PointSet image(FiniteSpace(std::max(f.size(), 1)), s.image());
  if (classify_domain(rf, image) != DomainClass::both)
    fail(ErrorKind::NotFundamentalDomain, "canonical_iso");
  CanonicalLeft target = canonical_left_over(act.relation(), f.base_domain());
  const EquivRelation& r = act.relation();
  std::vector<int> map(f.size(), -1);
  for (int t = 0; t < f.size(); ++t) {
    int x = f.proj(t);
    for (int y : s.domain.members()) {
      if (!r.related(x, y)) continue;
      if (act.raw(x, y, s.at(y)) == t) {
        map[t] = target.space.find_label({0, x, y});
        break;
      }
    }
  }
  return {f, target.space, std::move(map)};
}

StableConjugacy stable_conjugacy_witness(const FiberedSpace& f, const Action& act,
                                         const PartialSection& s,
                                         const PartialSection& s_prime) {
  validate_action(f, act);
  if (!is_saturating(f, act, s))
    fail(ErrorKind::NotSaturating, "stable_conjugacy_witness: s");
  if (!is_saturating(f, act, s_prime))
    fail(ErrorKind::NotSaturating, "stable_conjugacy_witness: s'");
  EquivRelation rf = detail::orbit_relation_unchecked(f, act);
  StableConjugacy out;
  out.reduction = PartialMap(f.base());
  for (int x : s.domain.members()) {
    // Prefer the identity where it already matches, then least index.
    if (s_prime.domain.contains(x) && rf.related(s.at(x), s_prime.at(x))) {
      out.reduction.set(x, x);
      continue;
    }
    for (int xp : s_prime.domain.members()) {
      if (rf.related(s.at(x), s_prime.at(xp))) {
        out.reduction.set(x, xp);
        break;
      }
    }
  }
  out.stab_s = detail::stabilizer_unchecked(f, act, s);
  out.stab_s_prime = detail::stabilizer_unchecked(f, act, s_prime);
  out.formula_holds = true;
  for (int x : s.domain.members()) {
    int rx = out.reduction.apply(x);
    if (rx < 0 || act.raw(rx, x, s.at(x)) != s_prime.at(rx)) {
      out.formula_holds = false;
      break;
    }
  }
  DomainClass dc = classify_domain(out.stab_s_prime, out.reduction.image());
  out.image_complete_domain =
      dc == DomainClass::complete || dc == DomainClass::both;
  return out;
}

CanonicalExtension extend_to_canonical(const FiberedSpace& f, const Action& act,
                                       const PartialSection& s) {
  validate_action(f, act);
  EquivRelation rf = detail::orbit_relation_unchecked(f, act);
  PointSet image(FiniteSpace(std::max(f.size(), 1)), s.image());
  if (classify_domain(rf, image) != DomainClass::both)
    fail(ErrorKind::NotFundamentalDomain, "extend_to_canonical");
  const PointSet& a = s.domain;
  if (a == f.base_domain()) {
    std::vector<int> idmap(f.size());
    for (int t = 0; t < f.size(); ++t) idmap[t] = t;
    return {f, act, s, std::move(idmap)};
  }
  const EquivRelation& r = act.relation();
  FiniteSpace base = f.base();
  // Least representative of each class inside A (A is complete).
  std::vector<int> rho(base.size, -1);
  for (int x : f.base_domain().members()) {
    for (int ap : a.members())
      if (r.related(x, ap)) {
        rho[x] = ap;
        break;
      }
    if (rho[x] < 0)
      fail(ErrorKind::NotCompleteDomain, "extend_to_canonical: domain not complete");
  }

  std::vector<int> proj;
  std::vector<PointLabel> labels;
  std::vector<int> old_to_new(f.size(), -1);
  // Part 1: original points over A.
  for (int t = 0; t < f.size(); ++t)
    if (a.contains(f.proj(t))) {
      old_to_new[t] = static_cast<int>(proj.size());
      proj.push_back(f.proj(t));
      labels.push_back(f.label(t));
    }
  // Part 2: canonical pairs (a, z) with z outside A.
  for (int ap : a.members())
    for (int z = 0; z < base.size; ++z)
      if (!a.contains(z) && r.related(ap, z)) {
        proj.push_back(ap);
        labels.push_back({kPart2, ap, z});
      }
  int prime_size = static_cast<int>(proj.size());
  // Part 3: clones over the complement; the clone of u over rho(x) sits over x.
  for (int x : f.base_domain().members()) {
    if (a.contains(x)) continue;
    for (int u = 0; u < prime_size; ++u)
      if (proj[u] == rho[x]) {
        proj.push_back(x);
        labels.push_back({kPart3, x, u});
      }
  }
  FiberedSpace nf(base, f.base_domain(), std::move(proj), std::move(labels));

  // Transport inside the part-1/part-2 layer between points of A.
  auto prime_apply = [&](int x, int y, int u) -> int {
    const PointLabel& l = nf.label(u);
    if (l.tag == kPart2) return nf.find_label({kPart2, x, l.b});
    // Original point: use the original action.
    int old_t = -1;
    for (int t : f.fiber(y))
      if (old_to_new[t] == u) old_t = t;
    return old_to_new[act.raw(x, y, old_t)];
  };
  auto layer_of = [&](int t) {
    // (anchor in A, part-1/2 carrier point)
    const PointLabel& l = nf.label(t);
    if (l.tag == kPart3) return std::pair<int, int>{rho[l.a], l.b};
    return std::pair<int, int>{nf.proj(t), t};
  };

  Action nact(r, nf.size());
  for (int t = 0; t < nf.size(); ++t) {
    int y = nf.proj(t);
    auto [ay, u] = layer_of(t);
    for (int x = 0; x < base.size; ++x) {
      if (!r.related(x, y)) continue;
      int img;
      if (a.contains(x)) {
        img = prime_apply(x, ay, u);
      } else {
        int up = prime_apply(rho[x], ay, u);
        img = nf.find_label({kPart3, x, up});
      }
      nact.set(x, y, t, img);
    }
  }

  PartialSection ns(f.base_domain());
  for (int x : f.base_domain().members()) {
    if (a.contains(x))
      ns.assign[x] = old_to_new[s.at(x)];
    else
      ns.assign[x] = nf.find_label({kPart3, x, nf.find_label({kPart2, rho[x], x})});
  }
  return {std::move(nf), std::move(nact), std::move(ns), std::move(old_to_new)};
}

bool validate_morphism(const FiberedMorphism& m, const Action* src_act,
                       const Action* dst_act) {
  if (static_cast<int>(m.map.size()) != m.source.size()) return false;
  for (int t = 0; t < m.source.size(); ++t) {
    int u = m.map[t];
    if (u < 0 || u >= m.target.size()) return false;
    if (m.target.proj(u) != m.source.proj(t)) return false;
  }
  if (src_act && dst_act) {
    const EquivRelation& r = src_act->relation();
    for (int t = 0; t < m.source.size(); ++t) {
      int y = m.source.proj(t);
      for (int x = 0; x < r.space().size; ++x) {
        if (!r.related(x, y)) continue;
        if (m.map[src_act->raw(x, y, t)] != dst_act->raw(x, y, m.map[t]))
          return false;
      }
    }
  }
  return true;
}

}  // namespace arbo
