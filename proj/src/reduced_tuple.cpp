#include "arbo/reduced_tuple.hpp"

namespace arbo {

bool is_reduced(const ReducedTuple& t, const std::vector<EquivRelation>& factors,
                const EquivRelation* core) {
  size_t n = t.points.size();
  if (n < 2 || t.factor_tags.size() != n - 1)
    fail(ErrorKind::InvalidArgument, "malformed tuple");
  for (size_t k = 0; k + 1 < n; ++k) {
    int tag = t.factor_tags[k];
    if (tag < 1 || tag > static_cast<int>(factors.size()))
      fail(ErrorKind::TagMismatch, "factor tag out of range",
           {t.points[k], t.points[k + 1], tag});
    if (!factors[tag - 1].related(t.points[k], t.points[k + 1]))
      fail(ErrorKind::TagMismatch, "pair not in its tagged factor",
           {t.points[k], t.points[k + 1], tag});
  }
  for (size_t k = 0; k + 1 < n - 1; ++k)
    if (t.factor_tags[k] == t.factor_tags[k + 1]) return false;
  if (n == 2 && t.points[0] == t.points[1]) return false;
  if (core && n > 2) {
    for (size_t k = 0; k + 1 < n; ++k)
      if (core->related(t.points[k], t.points[k + 1])) return false;
  }
  return true;
}

}  // namespace arbo
