#ifndef ARBO_SPACE_HPP
#define ARBO_SPACE_HPP

#include <algorithm>
#include <vector>

#include "arbo/common.hpp"

namespace arbo {

/// The ambient finite point space; points are indices 0..size-1.
struct FiniteSpace {
  int size = 1;

  FiniteSpace() = default;
  explicit FiniteSpace(int n) : size(n) {
    if (n < 1) fail(ErrorKind::InvalidArgument, "space size must be >= 1");
  }

  bool operator==(const FiniteSpace&) const = default;
};

/// A subset of a FiniteSpace, kept as a sorted unique index list.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(FiniteSpace space) : space_(space) {}
  PointSet(FiniteSpace space, std::vector<int> members)
      : space_(space), members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    for (int p : members_)
      if (p < 0 || p >= space_.size)
        fail(ErrorKind::ValidationError, "point out of range", {p});
  }

  static PointSet full(FiniteSpace space) {
    std::vector<int> all(space.size);
    for (int i = 0; i < space.size; ++i) all[i] = i;
    return PointSet(space, std::move(all));
  }

  const FiniteSpace& space() const { return space_; }
  const std::vector<int>& members() const& { return members_; }
  std::vector<int> members() && { return std::move(members_); }
  int size() const { return static_cast<int>(members_.size()); }
  bool empty() const { return members_.empty(); }
  bool contains(int p) const {
    return std::binary_search(members_.begin(), members_.end(), p);
  }
  bool is_full() const { return size() == space_.size; }

  bool subset_of(const PointSet& other) const {
    for (int p : members_)
      if (!other.contains(p)) return false;
    return true;
  }

  PointSet intersect(const PointSet& other) const {
    std::vector<int> out;
    std::set_intersection(members_.begin(), members_.end(),
                          other.members_.begin(), other.members_.end(),
                          std::back_inserter(out));
    return PointSet(space_, std::move(out));
  }

  PointSet unite(const PointSet& other) const {
    std::vector<int> out;
    std::set_union(members_.begin(), members_.end(), other.members_.begin(),
                   other.members_.end(), std::back_inserter(out));
    return PointSet(space_, std::move(out));
  }

  PointSet complement() const {
    std::vector<int> out;
    for (int i = 0; i < space_.size; ++i)
      if (!contains(i)) out.push_back(i);
    return PointSet(space_, std::move(out));
  }

  bool operator==(const PointSet&) const = default;

 private:
  FiniteSpace space_;
  std::vector<int> members_;
};

}  // namespace arbo

#endif
