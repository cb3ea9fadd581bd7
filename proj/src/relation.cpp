#include "arbo/relation.hpp"

#include <numeric>

#include "arbo/partial_iso.hpp"

namespace arbo {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::DomainMismatch: return "DomainMismatch";
    case ErrorKind::SpaceMismatch: return "SpaceMismatch";
    case ErrorKind::InvalidAction: return "InvalidAction";
    case ErrorKind::NotSubrelation: return "NotSubrelation";
    case ErrorKind::NotCompleteDomain: return "NotCompleteDomain";
    case ErrorKind::NotSaturating: return "NotSaturating";
    case ErrorKind::StabilizerNotIncluded: return "StabilizerNotIncluded";
    case ErrorKind::NotFundamentalDomain: return "NotFundamentalDomain";
    case ErrorKind::NotFreeProduct: return "NotFreeProduct";
    case ErrorKind::NotGenerated: return "NotGenerated";
    case ErrorKind::TagMismatch: return "TagMismatch";
    case ErrorKind::HypothesisViolation: return "HypothesisViolation";
    case ErrorKind::EmptyGeodesic: return "EmptyGeodesic";
    case ErrorKind::EmptyIntersection: return "EmptyIntersection";
    case ErrorKind::CoverageViolation: return "CoverageViolation";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

const char* domain_class_name(DomainClass c) {
  switch (c) {
    case DomainClass::fundamental: return "fundamental";
    case DomainClass::complete: return "complete";
    case DomainClass::both: return "both";
    case DomainClass::neither: return "neither";
  }
  return "?";
}

namespace {

// Union-find with least-index representatives on finalization.
struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int x, int y) {
    x = find(x);
    y = find(y);
    if (x == y) return;
    if (x < y) std::swap(x, y);  // keep the smaller index as root
    parent[x] = y;
  }
};

std::vector<int> canonicalize(FiniteSpace space, std::vector<int> class_of) {
  // Re-anchor every class id to the least member index.
  std::vector<int> least(space.size, -1);
  for (int p = 0; p < space.size; ++p) {
    int c = class_of[p];
    if (c < 0) continue;
    if (least[c] < 0) least[c] = p;
  }
  for (int p = 0; p < space.size; ++p)
    if (class_of[p] >= 0) class_of[p] = least[class_of[p]];
  return class_of;
}

}  // namespace

EquivRelation EquivRelation::trivial(FiniteSpace space, const PointSet& domain) {
  std::vector<int> class_of(space.size, -1);
  for (int p : domain.members()) class_of[p] = p;
  return from_class_map(space, std::move(class_of));
}

EquivRelation EquivRelation::from_classes(
    FiniteSpace space, const std::vector<std::vector<int>>& classes) {
  std::vector<int> class_of(space.size, -1);
  for (const auto& cls : classes) {
    if (cls.empty()) fail(ErrorKind::ValidationError, "empty class");
    int rep = *std::min_element(cls.begin(), cls.end());
    for (int p : cls) {
      if (p < 0 || p >= space.size)
        fail(ErrorKind::ValidationError, "point out of range", {p});
      if (class_of[p] != -1)
        fail(ErrorKind::ValidationError, "point repeated across classes", {p});
      class_of[p] = rep;
    }
  }
  return from_class_map(space, std::move(class_of));
}

EquivRelation EquivRelation::from_class_map(FiniteSpace space,
                                            std::vector<int> class_of) {
  if (static_cast<int>(class_of.size()) != space.size)
    fail(ErrorKind::InvalidArgument, "class map size mismatch");
  EquivRelation r;
  r.space_ = space;
  r.class_of_ = canonicalize(space, std::move(class_of));
  return r;
}

EquivRelation EquivRelation::generated_by_pairs(
    FiniteSpace space, const std::vector<std::pair<int, int>>& pairs) {
  UnionFind uf(space.size);
  std::vector<bool> touched(space.size, false);
  for (auto [x, y] : pairs) {
    uf.unite(x, y);
    touched[x] = touched[y] = true;
  }
  std::vector<int> class_of(space.size, -1);
  for (int p = 0; p < space.size; ++p)
    if (touched[p]) class_of[p] = uf.find(p);
  return from_class_map(space, std::move(class_of));
}

PointSet EquivRelation::domain() const {
  std::vector<int> pts;
  for (int p = 0; p < space_.size; ++p)
    if (class_of_[p] >= 0) pts.push_back(p);
  return PointSet(space_, std::move(pts));
}

std::vector<int> EquivRelation::class_reps() const {
  std::vector<int> reps;
  for (int p = 0; p < space_.size; ++p)
    if (class_of_[p] == p) reps.push_back(p);
  return reps;
}

std::vector<int> EquivRelation::class_members(int rep) const {
  std::vector<int> out;
  for (int p = 0; p < space_.size; ++p)
    if (class_of_[p] == rep) out.push_back(p);
  return out;
}

int EquivRelation::class_count() const {
  return static_cast<int>(class_reps().size());
}

std::vector<std::pair<int, int>> EquivRelation::ordered_pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int x = 0; x < space_.size; ++x) {
    if (class_of_[x] < 0) continue;
    for (int y = 0; y < space_.size; ++y)
      if (class_of_[y] == class_of_[x]) out.emplace_back(x, y);
  }
  return out;
}

bool EquivRelation::is_trivial() const {
  for (int p = 0; p < space_.size; ++p)
    if (class_of_[p] >= 0 && class_of_[p] != p) return false;
  return true;
}

PointSet saturate(const EquivRelation& r, const PointSet& a) {
  if (a.space() != r.space()) fail(ErrorKind::SpaceMismatch, "saturate");
  if (!a.subset_of(r.domain()))
    fail(ErrorKind::DomainMismatch, "saturate: set not inside relation domain");
  std::vector<bool> keep_class(r.space().size, false);
  for (int p : a.members()) keep_class[r.class_of(p)] = true;
  std::vector<int> out;
  for (int p = 0; p < r.space().size; ++p)
    if (r.in_domain(p) && keep_class[r.class_of(p)]) out.push_back(p);
  return PointSet(r.space(), std::move(out));
}

DomainClass classify_domain(const EquivRelation& r, const PointSet& a) {
  if (a.space() != r.space()) fail(ErrorKind::SpaceMismatch, "classify_domain");
  if (!a.subset_of(r.domain()))
    fail(ErrorKind::DomainMismatch, "classify_domain: set not inside domain");
  std::vector<int> count(r.space().size, 0);
  for (int p : a.members()) count[r.class_of(p)]++;
  bool meets_all = true, meets_once = true;
  for (int rep : r.class_reps()) {
    if (count[rep] == 0) meets_all = false;
    if (count[rep] > 1) meets_once = false;
  }
  bool fund = meets_all && meets_once;
  bool comp = meets_all;
  if (fund && comp) return DomainClass::both;
  if (fund) return DomainClass::fundamental;  // unreachable: fundamental => complete
  if (comp) return DomainClass::complete;
  return DomainClass::neither;
}

PointSet fundamental_domain(const EquivRelation& r) {
  return PointSet(r.space(), r.class_reps());
}

EquivRelation join(const std::vector<EquivRelation>& rels) {
  if (rels.empty()) fail(ErrorKind::InvalidArgument, "join of empty list");
  FiniteSpace space = rels.front().space();
  std::vector<std::pair<int, int>> pairs;
  for (const auto& r : rels) {
    if (r.space() != space) fail(ErrorKind::SpaceMismatch, "join");
    for (int p = 0; p < space.size; ++p)
      if (r.in_domain(p)) pairs.emplace_back(r.class_of(p), p);
  }
  return EquivRelation::generated_by_pairs(space, pairs);
}

EquivRelation join(const EquivRelation& a, const EquivRelation& b) {
  return join(std::vector<EquivRelation>{a, b});
}

EquivRelation intersect(const EquivRelation& s1, const EquivRelation& s2) {
  if (s1.space() != s2.space()) fail(ErrorKind::SpaceMismatch, "intersect");
  int n = s1.space().size;
  // Class id = pair of class ids, encoded; recanonicalized by from_class_map.
  std::vector<int> class_of(n, -1);
  std::vector<std::pair<int, int>> seen;
  for (int p = 0; p < n; ++p) {
    if (!s1.in_domain(p) || !s2.in_domain(p)) continue;
    std::pair<int, int> key{s1.class_of(p), s2.class_of(p)};
    int idx = -1;
    for (int i = 0; i < static_cast<int>(seen.size()); ++i)
      if (seen[i] == key) idx = i;
    if (idx < 0) {
      idx = static_cast<int>(seen.size());
      seen.push_back(key);
    }
    class_of[p] = idx;
  }
  // Map synthetic ids onto valid point ids before canonicalization.
  std::vector<int> first(seen.size(), -1);
  for (int p = 0; p < n; ++p)
    if (class_of[p] >= 0 && first[class_of[p]] < 0) first[class_of[p]] = p;
  for (int p = 0; p < n; ++p)
    if (class_of[p] >= 0) class_of[p] = first[class_of[p]];
  return EquivRelation::from_class_map(s1.space(), std::move(class_of));
}

EquivRelation restrict(const EquivRelation& r, const PointSet& a) {
  if (a.space() != r.space()) fail(ErrorKind::SpaceMismatch, "restrict");
  if (!a.subset_of(r.domain()))
    fail(ErrorKind::DomainMismatch, "restrict: set not inside domain");
  std::vector<int> class_of(r.space().size, -1);
  for (int p : a.members()) class_of[p] = r.class_of(p);
  return EquivRelation::from_class_map(r.space(), std::move(class_of));
}

EquivRelation conjugate(const EquivRelation& s, const PartialIso& phi) {
  if (s.space() != phi.space()) fail(ErrorKind::SpaceMismatch, "conjugate");
  if (!(phi.target() == s.domain()))
    fail(ErrorKind::DomainMismatch, "conjugate: phi target must equal S domain");
  std::vector<int> class_of(s.space().size, -1);
  for (int x : phi.source().members()) class_of[x] = s.class_of(phi.apply(x));
  // Synthetic ids are class ids of target points; re-anchor to source points.
  std::vector<int> anchor(s.space().size, -1);
  for (int x = 0; x < s.space().size; ++x) {
    if (class_of[x] < 0) continue;
    if (anchor[class_of[x]] < 0) anchor[class_of[x]] = x;
  }
  for (int x = 0; x < s.space().size; ++x)
    if (class_of[x] >= 0) class_of[x] = anchor[class_of[x]];
  return EquivRelation::from_class_map(s.space(), std::move(class_of));
}

bool is_subrelation(const EquivRelation& s, const EquivRelation& r) {
  if (s.space() != r.space()) fail(ErrorKind::SpaceMismatch, "is_subrelation");
  for (int p = 0; p < s.space().size; ++p) {
    if (!s.in_domain(p)) continue;
    if (!r.in_domain(p)) return false;
    if (!r.related(p, s.class_of(p))) return false;
  }
  return true;
}

EquivRelation extend_trivially(const EquivRelation& r) {
  std::vector<int> class_of(r.space().size);
  for (int p = 0; p < r.space().size; ++p)
    class_of[p] = r.in_domain(p) ? r.class_of(p) : p;
  return EquivRelation::from_class_map(r.space(), std::move(class_of));
}

}  // namespace arbo
