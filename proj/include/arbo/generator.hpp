#ifndef ARBO_GENERATOR_HPP
#define ARBO_GENERATOR_HPP

#include <cstdint>

#include "arbo/instance.hpp"

namespace arbo {

/// splitmix64-based generator; bounded draws use rejection-free modulo on the
/// full 64-bit state, stable across platforms.
class DetRng {
 public:
  explicit DetRng(uint64_t seed) : state_(seed) {}
  uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  /// Uniform-ish draw in [0, n).
  int below(int n) { return n <= 1 ? 0 : static_cast<int>(next() % n); }
  bool chance(double p) { return next() < static_cast<uint64_t>(p * 18446744073709551615.0); }

 private:
  uint64_t state_;
};

struct GeneratorConfig {
  uint64_t seed = 0;
  int space_size = 4;
  int factor_count = 2;
  int class_max = 4;       // class-size upper bound
  double density = 0.5;    // sub-relation density
};

/// Random partition with class sizes in [1, class_max]; classes are drawn
/// from a shuffled point order.
EquivRelation gen_partition(DetRng& rng, FiniteSpace space, int class_max);

/// Random spanning trees of the classes of R.
Graphing gen_treeing(uint64_t seed, const EquivRelation& r);

/// Random sub-relation by density-many merges inside each class;
/// density 0 is trivial, density 1 is R itself.
EquivRelation gen_subrelation(uint64_t seed, const EquivRelation& r,
                              double density);

/// Random complete domain: one forced point per class plus extras.
PointSet gen_complete_domain(uint64_t seed, const EquivRelation& r);

/// Instance whose declared free-product structure verifies by construction:
/// factor classes are the per-factor components of colored spanning trees.
InstanceFile gen_free_product(const GeneratorConfig& cfg);
/// Free-product instance perturbed into a Reject by merging two same-factor
/// classes inside one class of R.
InstanceFile gen_nonfree(const GeneratorConfig& cfg);
/// Amalgam instance built from per-class bipartite trees whose edges are the
/// core classes.
InstanceFile gen_amalgam(const GeneratorConfig& cfg);
/// Amalgam perturbed into a Reject by merging two same-color vertices.
InstanceFile gen_nonamalgam(const GeneratorConfig& cfg);

/// Attach a generated sub-relation (named S) to an instance.
void attach_subrelation(InstanceFile& inst, const std::string& of,
                        uint64_t seed, double density);
/// Attach a generated complete-domain restriction set.
void attach_restriction(InstanceFile& inst, const std::string& of,
                        uint64_t seed);
/// Instance carrying a random treeing (graphing G) and its generated
/// relation R.
InstanceFile gen_treeing_instance(const GeneratorConfig& cfg);

}  // namespace arbo

#endif
