#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "arbo/generator.hpp"
#include "arbo/graphing.hpp"
#include "arbo/partial_iso.hpp"
#include "arbo/relation.hpp"
#include "fixtures.hpp"

using namespace arbo;
using namespace arbo::fixtures;

namespace {

PointSet pts(FiniteSpace space, std::vector<int> m) {
  return PointSet(space, std::move(m));
}

}  // namespace

TEST_CASE("saturate") {
  EquivRelation r = efree_r();
  CHECK(saturate(r, pts(x4(), {1})) == pts(x4(), {0, 1, 2}));
  CHECK(saturate(r, pts(x4(), {})) == pts(x4(), {}));
  CHECK(saturate(r, r.domain()) == r.domain());
  // Monotone, idempotent, extensive.
  DetRng rng(7);
  for (int i = 0; i < 50; ++i) {
    FiniteSpace space(2 + rng.below(8));
    EquivRelation rr = gen_partition(rng, space, 4);
    std::vector<int> a, b;
    for (int p = 0; p < space.size; ++p) {
      if (rng.chance(0.4)) a.push_back(p);
      if (rng.chance(0.7)) b.push_back(p);
    }
    PointSet pa(space, a), pb(space, b);
    PointSet pab = pa.intersect(pb);
    CHECK(pa.subset_of(saturate(rr, pa)));
    CHECK(saturate(rr, saturate(rr, pa)) == saturate(rr, pa));
    CHECK(saturate(rr, pab).subset_of(saturate(rr, pa)));
  }
  CHECK_THROWS_AS(saturate(restrict(r, pts(x4(), {0, 1})), pts(x4(), {3})),
                  Error);
}

TEST_CASE("classify_domain") {
  EquivRelation r = efree_r();
  CHECK(classify_domain(r, pts(x4(), {0, 3})) == DomainClass::both);
  CHECK(classify_domain(r, pts(x4(), {0, 1})) == DomainClass::neither);
  EquivRelation triv = EquivRelation::trivial_full(x4());
  CHECK(classify_domain(triv, PointSet::full(x4())) == DomainClass::both);
  CHECK(classify_domain(r, pts(x4(), {0, 1, 3})) == DomainClass::complete);
  CHECK_THROWS_AS(classify_domain(restrict(r, pts(x4(), {0})), pts(x4(), {1})),
                  Error);
}

TEST_CASE("fundamental_domain") {
  CHECK(fundamental_domain(efree_r()) == pts(x4(), {0, 3}));
  EquivRelation triv = EquivRelation::trivial_full(x4());
  CHECK(fundamental_domain(triv) == PointSet::full(x4()));
  CHECK(fundamental_domain(ecycle_r()) == pts(x4(), {0}));
  // Meets every class exactly once.
  DetRng rng(11);
  for (int i = 0; i < 30; ++i) {
    EquivRelation rr = gen_partition(rng, FiniteSpace(1 + rng.below(9)), 5);
    CHECK(classify_domain(rr, fundamental_domain(rr)) == DomainClass::both);
  }
}

TEST_CASE("join") {
  CHECK(join(efree_r1(), efree_r2()) == efree_r());
  EquivRelation r = efree_r();
  CHECK(join(std::vector<EquivRelation>{r}) == r);
  EquivRelation triv = EquivRelation::trivial_full(x4());
  CHECK(join(triv, triv) == triv);
  // Associative / commutative / idempotent on random triples.
  DetRng rng(3);
  for (int i = 0; i < 30; ++i) {
    FiniteSpace space(2 + rng.below(7));
    EquivRelation a = gen_partition(rng, space, 3);
    EquivRelation b = gen_partition(rng, space, 3);
    EquivRelation c = gen_partition(rng, space, 3);
    CHECK(join(a, b) == join(b, a));
    CHECK(join(join(a, b), c) == join(a, join(b, c)));
    CHECK(join(a, a) == a);
  }
  // Domains may differ: union domain with singleton treatment.
  EquivRelation partial1 = restrict(efree_r1(), pts(x4(), {0, 1}));
  EquivRelation partial2 = restrict(efree_r2(), pts(x4(), {1, 2}));
  EquivRelation j = join(partial1, partial2);
  CHECK(j.domain() == pts(x4(), {0, 1, 2}));
  CHECK(j.related(0, 2));
}

TEST_CASE("intersect") {
  CHECK(intersect(efree_r1(), efree_r2()) == EquivRelation::trivial_full(x4()));
  EquivRelation r = efree_r();
  CHECK(intersect(r, r) == r);
  CHECK(intersect(esub_s(), efree_r1()) == EquivRelation::trivial_full(x4()));
  // is_subrelation(intersect(a,b), a) always.
  DetRng rng(5);
  for (int i = 0; i < 30; ++i) {
    FiniteSpace space(2 + rng.below(7));
    EquivRelation a = gen_partition(rng, space, 4);
    EquivRelation b = gen_partition(rng, space, 4);
    CHECK(is_subrelation(intersect(a, b), a));
    CHECK(is_subrelation(intersect(a, b), b));
  }
}

TEST_CASE("restrict") {
  EquivRelation r = efree_r();
  CHECK(restrict(r, pts(x4(), {0, 2, 3})) ==
        rel(x4(), {{0, 2}, {3}}));
  CHECK(restrict(r, r.domain()) == r);
  CHECK(restrict(r, pts(x4(), {})).domain().empty());
}

TEST_CASE("conjugate") {
  EquivRelation s = restrict(efree_r2(), pts(x4(), {1, 2}));
  PartialIso id = PartialIso::identity(s.domain());
  CHECK(conjugate(s, id) == s);
  PartialIso phi(x4(), {{0, 1}, {1, 2}});
  EquivRelation pulled = conjugate(s, phi);
  CHECK(pulled == rel(x4(), {{0, 1}}));
  EquivRelation triv = EquivRelation::trivial(x4(), pts(x4(), {1, 2}));
  CHECK(conjugate(triv, phi) == EquivRelation::trivial(x4(), pts(x4(), {0, 1})));
  // Round-trip through the inverse.
  CHECK(conjugate(conjugate(s, phi), invert(phi)) == s);
}

TEST_CASE("pseudogroup_member") {
  EquivRelation r = efree_r();
  CHECK(pseudogroup_member(PartialIso(x4(), {{0, 2}}), r));
  CHECK_FALSE(pseudogroup_member(PartialIso(x4(), {{0, 3}}), r));
  CHECK(pseudogroup_member(PartialIso::identity(pts(x4(), {0, 3})), r));
}

TEST_CASE("compose and invert") {
  PartialIso phi(x4(), {{0, 1}});
  CHECK(compose(phi, invert(phi)) == PartialIso::identity(pts(x4(), {1})));
  PartialIso psi(x4(), {{2, 0}});
  CHECK(compose(phi, psi) == PartialIso(x4(), {{2, 1}}));
  PartialIso far(x4(), {{3, 2}});
  CHECK(compose(phi, far).source().empty());
  // Pseudogroup closure.
  DetRng rng(13);
  EquivRelation r = efree_r();
  std::vector<PartialIso> members{PartialIso(x4(), {{0, 2}, {1, 0}}),
                                  PartialIso(x4(), {{2, 1}}),
                                  PartialIso::identity(pts(x4(), {0, 1, 2}))};
  for (const auto& a : members)
    for (const auto& b : members) {
      CHECK(pseudogroup_member(compose(a, b), r));
      CHECK(pseudogroup_member(invert(a), r));
    }
}

TEST_CASE("is_subrelation") {
  CHECK(is_subrelation(esub_s(), efree_r()));
  CHECK(is_subrelation(efree_r(), efree_r()));
  CHECK_FALSE(is_subrelation(efree_r(), efree_r1()));
}

TEST_CASE("graphing basics") {
  Graphing g(x4(), {{0, 1}, {1, 2}});
  CHECK(g.edges().size() == 4);
  CHECK(is_treeing(g));
  CHECK(generated_relation(g) == efree_r());
  Graphing tri(x4(), {{0, 1}, {1, 2}, {2, 0}});
  CHECK_FALSE(is_treeing(tri));
  CHECK(is_treeing_of(g, efree_r()));
  CHECK_THROWS_AS(Graphing(x4(), {{1, 1}}), Error);
}

TEST_CASE("restrict and intersect commute on common domains") {
  DetRng rng(17);
  for (int i = 0; i < 30; ++i) {
    FiniteSpace space(2 + rng.below(7));
    EquivRelation a = gen_partition(rng, space, 4);
    EquivRelation b = gen_partition(rng, space, 4);
    std::vector<int> ys;
    for (int p = 0; p < space.size; ++p)
      if (rng.chance(0.6)) ys.push_back(p);
    PointSet y(space, ys);
    CHECK(restrict(intersect(a, b), y) ==
          intersect(restrict(a, y), restrict(b, y)));
  }
}

TEST_CASE("one-point space instance generates and verifies") {
  GeneratorConfig cfg;
  cfg.seed = 0;
  cfg.space_size = 1;
  InstanceFile inst = gen_free_product(cfg);
  CHECK(inst.relation("R").is_trivial());
}

TEST_CASE("canonical class identifiers give structural equality") {
  EquivRelation a = rel(x4(), {{2, 1, 0}, {3}});
  CHECK(a == efree_r());
  CHECK(a.class_of(2) == 0);
  CHECK(a.class_reps() == std::vector<int>{0, 3});
}
