#include "arbo/tuple_oracle.hpp"

namespace arbo {

namespace {

struct Search {
  const std::vector<EquivRelation>& factors;
  const EquivRelation* core;
  int max_len;
  int space;
  std::vector<bool> used;  // (point, factor) incidences on the current path
  std::vector<int> points;
  std::vector<int> tags;
  std::optional<ReducedTuple> found;

  bool incidence_used(int p, int f) const { return used[p * factors.size() + f]; }
  void set_incidence(int p, int f, bool v) { used[p * factors.size() + f] = v; }

  void dfs() {
    if (found) return;
    int cur = points.back();
    if (static_cast<int>(points.size()) > max_len) return;
    for (int f = 0; f < static_cast<int>(factors.size()); ++f) {
      if (!tags.empty() && tags.back() == f) continue;
      const EquivRelation& rf = factors[f];
      if (!rf.in_domain(cur)) continue;
      if (incidence_used(cur, f)) continue;
      for (int y = 0; y < space; ++y) {
        if (y == cur || !rf.related(cur, y)) continue;
        if (core && core->related(cur, y)) continue;
        if (incidence_used(y, f)) continue;
        points.push_back(y);
        tags.push_back(f);
        if (y == points.front() && points.size() >= 3) {
          ReducedTuple t;
          t.points = points;
          for (int tg : tags) t.factor_tags.push_back(tg + 1);
          found = t;
        } else {
          set_incidence(cur, f, true);
          set_incidence(y, f, true);
          dfs();
          set_incidence(cur, f, false);
          set_incidence(y, f, false);
        }
        points.pop_back();
        tags.pop_back();
        if (found) return;
      }
    }
  }
};

}  // namespace

std::optional<ReducedTuple> oracle_find_closing_tuple(
    const std::vector<EquivRelation>& factors, const EquivRelation* core,
    int max_len) {
  if (factors.empty()) return std::nullopt;
  int space = factors.front().space().size;
  if (max_len <= 0) max_len = 2 * space + 1;
  Search s{factors, core, max_len, space,
           std::vector<bool>(space * factors.size(), false), {}, {},
           std::nullopt};
  for (int start = 0; start < space && !s.found; ++start) {
    s.points = {start};
    s.tags.clear();
    s.dfs();
  }
  return s.found;
}

bool oracle_is_free_product(const EquivRelation& r,
                            const std::vector<EquivRelation>& factors,
                            int max_len) {
  std::vector<EquivRelation> parts = factors;
  parts.push_back(EquivRelation::trivial(r.space(), r.domain()));
  if (!(join(parts) == r)) return false;
  return !oracle_find_closing_tuple(factors, nullptr, max_len).has_value();
}

bool oracle_is_amalgam(const EquivRelation& r, const EquivRelation& r1,
                       const EquivRelation& r2, const EquivRelation& core,
                       int max_len) {
  std::vector<EquivRelation> parts{r1, r2,
                                   EquivRelation::trivial(r.space(), r.domain())};
  if (!(join(parts) == r)) return false;
  return !oracle_find_closing_tuple({r1, r2}, &core, max_len).has_value();
}

bool oracle_confirm_tuple(const ReducedTuple& t,
                          const std::vector<EquivRelation>& factors,
                          const EquivRelation* core) {
  if (!t.closes()) return false;
  try {
    return is_reduced(t, factors, core);
  } catch (const Error&) {
    return false;
  }
}

}  // namespace arbo
