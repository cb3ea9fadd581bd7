#include "arbo/partial_iso.hpp"

namespace arbo {

PartialIso::PartialIso(FiniteSpace space,
                       const std::vector<std::pair<int, int>>& pairs)
    : space_(space), map_(space.size, -1), inv_(space.size, -1) {
  for (auto [x, y] : pairs) {
    if (x < 0 || x >= space.size || y < 0 || y >= space.size)
      fail(ErrorKind::ValidationError, "iso pair out of range", {x, y});
    if (map_[x] != -1)
      fail(ErrorKind::ValidationError, "iso source point repeated", {x});
    if (inv_[y] != -1)
      fail(ErrorKind::ValidationError, "iso not injective", {y});
    map_[x] = y;
    inv_[y] = x;
  }
}

PartialIso PartialIso::identity(const PointSet& a) {
  PartialIso phi(a.space());
  for (int p : a.members()) {
    phi.map_[p] = p;
    phi.inv_[p] = p;
  }
  return phi;
}

PointSet PartialIso::source() const {
  std::vector<int> pts;
  for (int x = 0; x < space_.size; ++x)
    if (map_[x] >= 0) pts.push_back(x);
  return PointSet(space_, std::move(pts));
}

PointSet PartialIso::target() const {
  std::vector<int> pts;
  for (int y = 0; y < space_.size; ++y)
    if (inv_[y] >= 0) pts.push_back(y);
  return PointSet(space_, std::move(pts));
}

std::vector<std::pair<int, int>> PartialIso::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int x = 0; x < space_.size; ++x)
    if (map_[x] >= 0) out.emplace_back(x, map_[x]);
  return out;
}

bool PartialIso::touches_diagonal() const {
  for (int x = 0; x < space_.size; ++x)
    if (map_[x] == x) return true;
  return false;
}

PartialIso compose(const PartialIso& phi, const PartialIso& psi) {
  if (phi.space() != psi.space()) fail(ErrorKind::SpaceMismatch, "compose");
  std::vector<std::pair<int, int>> pairs;
  for (auto [x, mid] : psi.pairs())
    if (phi.defined(mid)) pairs.emplace_back(x, phi.apply(mid));
  return PartialIso(phi.space(), pairs);
}

PartialIso invert(const PartialIso& phi) {
  std::vector<std::pair<int, int>> pairs;
  for (auto [x, y] : phi.pairs()) pairs.emplace_back(y, x);
  return PartialIso(phi.space(), pairs);
}

bool pseudogroup_member(const PartialIso& phi, const EquivRelation& r) {
  if (phi.space() != r.space()) fail(ErrorKind::SpaceMismatch, "pseudogroup_member");
  if (!phi.source().subset_of(r.domain()) || !phi.target().subset_of(r.domain()))
    fail(ErrorKind::DomainMismatch, "pseudogroup_member: iso leaves relation domain");
  for (auto [x, y] : phi.pairs())
    if (!r.related(x, y)) return false;
  return true;
}

PointSet PartialMap::source() const {
  std::vector<int> pts;
  for (int x = 0; x < space_.size; ++x)
    if (map_[x] >= 0) pts.push_back(x);
  return PointSet(space_, std::move(pts));
}

PointSet PartialMap::image() const {
  std::vector<int> pts;
  for (int x = 0; x < space_.size; ++x)
    if (map_[x] >= 0) pts.push_back(map_[x]);
  return PointSet(space_, std::move(pts));
}

}  // namespace arbo
