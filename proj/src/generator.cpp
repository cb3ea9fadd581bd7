#include "arbo/generator.hpp"

#include <algorithm>
#include <numeric>

namespace arbo {

namespace {

std::vector<int> shuffled_points(DetRng& rng, int n) {
  std::vector<int> pts(n);
  std::iota(pts.begin(), pts.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(pts[i], pts[rng.below(i + 1)]);
  return pts;
}

// Random tree on the given points: each point attaches to a random earlier
// one. Returns unordered edges.
std::vector<std::pair<int, int>> random_tree(DetRng& rng,
                                             const std::vector<int>& pts) {
  std::vector<std::pair<int, int>> edges;
  for (size_t k = 1; k < pts.size(); ++k)
    edges.emplace_back(pts[rng.below(static_cast<int>(k))], pts[k]);
  return edges;
}

}  // namespace

EquivRelation gen_partition(DetRng& rng, FiniteSpace space, int class_max) {
  std::vector<int> pts = shuffled_points(rng, space.size);
  std::vector<std::vector<int>> classes;
  size_t i = 0;
  while (i < pts.size()) {
    int remaining = static_cast<int>(pts.size() - i);
    int size = 1 + rng.below(std::min(class_max, remaining));
    classes.emplace_back(pts.begin() + i, pts.begin() + i + size);
    i += size;
  }
  return EquivRelation::from_classes(space, classes);
}

Graphing gen_treeing(uint64_t seed, const EquivRelation& r) {
  DetRng rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int rep : r.class_reps()) {
    auto tree = random_tree(rng, r.class_members(rep));
    edges.insert(edges.end(), tree.begin(), tree.end());
  }
  return Graphing(r.space(), edges);
}

EquivRelation gen_subrelation(uint64_t seed, const EquivRelation& r,
                              double density) {
  DetRng rng(seed);
  std::vector<int> class_of(r.space().size, -1);
  for (int p = 0; p < r.space().size; ++p)
    if (r.in_domain(p)) class_of[p] = p;
  auto find = [&](int p) {
    while (class_of[p] != p) p = class_of[p] = class_of[class_of[p]];
    return p;
  };
  for (int rep : r.class_reps()) {
    std::vector<int> members = r.class_members(rep);
    int k = static_cast<int>(members.size());
    int merges = static_cast<int>(density * (k - 1) + 0.5);
    for (int m = 0; m < merges; ++m) {
      std::vector<int> reps;
      for (int p : members)
        if (find(p) == p) reps.push_back(p);
      if (reps.size() < 2) break;
      int a = reps[rng.below(static_cast<int>(reps.size()))];
      int b = a;
      while (b == a) b = reps[rng.below(static_cast<int>(reps.size()))];
      class_of[std::max(a, b)] = std::min(a, b);
    }
  }
  for (int p = 0; p < r.space().size; ++p)
    if (class_of[p] >= 0) class_of[p] = find(p);
  return EquivRelation::from_class_map(r.space(), std::move(class_of));
}

PointSet gen_complete_domain(uint64_t seed, const EquivRelation& r) {
  DetRng rng(seed);
  std::vector<int> pts;
  for (int rep : r.class_reps()) {
    std::vector<int> members = r.class_members(rep);
    pts.push_back(members[rng.below(static_cast<int>(members.size()))]);
    for (int p : members)
      if (rng.chance(0.25)) pts.push_back(p);
  }
  return PointSet(r.space(), pts);
}

namespace {

struct ColoredForest {
  EquivRelation r;
  std::vector<EquivRelation> factors;
  // Per factor, the colored tree edges (used by the non-free perturbation).
  std::vector<std::vector<std::pair<int, int>>> factor_edges;
};

ColoredForest build_free_instance(DetRng& rng, FiniteSpace space,
                                  int factor_count, int class_max) {
  EquivRelation r = gen_partition(rng, space, class_max);
  std::vector<std::vector<std::pair<int, int>>> factor_edges(factor_count);
  for (int rep : r.class_reps()) {
    for (auto [a, b] : random_tree(rng, r.class_members(rep)))
      factor_edges[rng.below(factor_count)].emplace_back(a, b);
  }
  ColoredForest out;
  out.r = std::move(r);
  for (int i = 0; i < factor_count; ++i) {
    EquivRelation gen =
        EquivRelation::generated_by_pairs(space, factor_edges[i]);
    out.factors.push_back(extend_trivially(gen));
  }
  out.factor_edges = std::move(factor_edges);
  return out;
}

InstanceFile instance_of(FiniteSpace space, const EquivRelation& r,
                         const std::vector<EquivRelation>& factors) {
  InstanceFile inst;
  inst.space_size = space.size;
  inst.relations.emplace_back("R", r);
  for (size_t i = 0; i < factors.size(); ++i)
    inst.relations.emplace_back("R" + std::to_string(i + 1), factors[i]);
  inst.free_relation = "R";
  for (size_t i = 0; i < factors.size(); ++i)
    inst.free_factors.push_back("R" + std::to_string(i + 1));
  return inst;
}

}  // namespace

InstanceFile gen_free_product(const GeneratorConfig& cfg) {
  DetRng rng(cfg.seed);
  FiniteSpace space(cfg.space_size);
  ColoredForest cf =
      build_free_instance(rng, space, cfg.factor_count, cfg.class_max);
  return instance_of(space, cf.r, cf.factors);
}

InstanceFile gen_nonfree(const GeneratorConfig& cfg) {
  if (cfg.factor_count < 2)
    fail(ErrorKind::InvalidArgument, "non-free perturbation needs >= 2 factors");
  DetRng rng(cfg.seed);
  FiniteSpace space(cfg.space_size);
  ColoredForest cf =
      build_free_instance(rng, space, cfg.factor_count, cfg.class_max);
  // Force a class of size >= 2, then merge two distinct same-factor classes
  // inside it: the tree path between them leaves the factor, so the incidence
  // graph acquires a cycle while the join is unchanged.
  int big = -1;
  for (int rep : cf.r.class_reps())
    if (cf.r.class_members(rep).size() >= 2) big = rep;
  if (big < 0) {
    if (space.size < 2)
      fail(ErrorKind::InvalidArgument, "cannot perturb a one-point space");
    // Re-partition with one forced pair.
    std::vector<std::vector<int>> classes{{0, 1}};
    for (int p = 2; p < space.size; ++p) classes.push_back({p});
    cf.r = EquivRelation::from_classes(space, classes);
    cf.factor_edges.assign(cfg.factor_count, {});
    cf.factor_edges[0].emplace_back(0, 1);
    cf.factors.clear();
    for (int i = 0; i < cfg.factor_count; ++i)
      cf.factors.push_back(extend_trivially(
          EquivRelation::generated_by_pairs(space, cf.factor_edges[i])));
    big = cf.r.class_of(0);
  }
  std::vector<int> members = cf.r.class_members(big);
  int p = members[0], q = members[1];
  int which = -1;
  for (int i = 0; i < cfg.factor_count && which < 0; ++i)
    if (!cf.factors[i].related(p, q)) which = i;
  if (which < 0)
    // Already non-free (p and q meet in two factors); keep as generated.
    return instance_of(space, cf.r, cf.factors);
  auto pairs = cf.factors[which].ordered_pairs();
  pairs.emplace_back(p, q);
  cf.factors[which] =
      extend_trivially(EquivRelation::generated_by_pairs(space, pairs));
  return instance_of(space, cf.r, cf.factors);
}

namespace {

struct AmalgamParts {
  EquivRelation r, r1, r2, r3;
  // Per class-of-R: tree nodes with colors and per-edge core classes.
  struct ClassTree {
    std::vector<int> node_color;              // 1 or 2
    std::vector<std::pair<int, int>> edges;   // (parent node, child node)
    std::vector<std::vector<int>> edge_pts;   // core class per edge
  };
  std::vector<ClassTree> trees;
};

AmalgamParts build_amalgam(DetRng& rng, FiniteSpace space, int class_max,
                           bool force_mergeable) {
  EquivRelation r = gen_partition(rng, space, class_max);
  if (force_mergeable) {
    // Guarantee some class with >= 3 core classes so two same-color nodes
    // exist somewhere.
    bool ok = false;
    for (int rep : r.class_reps())
      if (r.class_members(rep).size() >= 3) ok = true;
    if (!ok && space.size >= 3) {
      std::vector<std::vector<int>> classes{{0, 1, 2}};
      for (int p = 3; p < space.size; ++p) classes.push_back({p});
      r = EquivRelation::from_classes(space, classes);
    }
  }
  AmalgamParts out;
  bool did_tiny = false;
  std::vector<int> c1(space.size, -1), c2(space.size, -1), c3(space.size, -1);
  for (int rep : r.class_reps()) {
    std::vector<int> members = r.class_members(rep);
    // Core partition of the class.
    int k = static_cast<int>(members.size());
    std::vector<std::vector<int>> cores;
    int i = 0;
    bool tiny = force_mergeable && !did_tiny && k >= 3;
    if (tiny) did_tiny = true;
    while (i < k) {
      int size = tiny ? 1 : 1 + rng.below(std::min(2, k - i));
      cores.emplace_back(members.begin() + i, members.begin() + i + size);
      i += size;
    }
    int m = static_cast<int>(cores.size());
    // Bipartite tree on m+1 nodes, one edge per core class.
    AmalgamParts::ClassTree tree;
    tree.node_color.assign(m + 1, 0);
    tree.node_color[0] = 1;
    for (int node = 1; node <= m; ++node) {
      int parent = rng.below(node);
      tree.node_color[node] = tree.node_color[parent] == 1 ? 2 : 1;
      tree.edges.emplace_back(parent, node);
      tree.edge_pts.push_back(cores[node - 1]);
    }
    // Vertex classes: union of incident edge cores.
    for (int e = 0; e < m; ++e) {
      auto [u, v] = tree.edges[e];
      for (int node : {u, v}) {
        auto& cvec = tree.node_color[node] == 1 ? c1 : c2;
        int anchor = -1;
        for (int e2 = 0; e2 < m; ++e2)
          if (tree.edges[e2].first == node || tree.edges[e2].second == node) {
            if (anchor < 0) anchor = tree.edge_pts[e2].front();
          }
        for (int p : tree.edge_pts[e]) cvec[p] = anchor;
      }
    }
    for (int e = 0; e < m; ++e) {
      int anchor = tree.edge_pts[e].front();
      for (int p : tree.edge_pts[e]) c3[p] = anchor;
    }
    out.trees.push_back(std::move(tree));
  }
  out.r = std::move(r);
  out.r1 = EquivRelation::from_class_map(space, std::move(c1));
  out.r2 = EquivRelation::from_class_map(space, std::move(c2));
  out.r3 = EquivRelation::from_class_map(space, std::move(c3));
  return out;
}

InstanceFile amalgam_instance(FiniteSpace space, const AmalgamParts& parts) {
  InstanceFile inst;
  inst.space_size = space.size;
  inst.relations.emplace_back("R", parts.r);
  inst.relations.emplace_back("R1", parts.r1);
  inst.relations.emplace_back("R2", parts.r2);
  inst.relations.emplace_back("R3", parts.r3);
  inst.amalgam_relation = "R";
  inst.amalgam_r1 = "R1";
  inst.amalgam_r2 = "R2";
  inst.amalgam_core = "R3";
  return inst;
}

}  // namespace

InstanceFile gen_amalgam(const GeneratorConfig& cfg) {
  DetRng rng(cfg.seed);
  FiniteSpace space(cfg.space_size);
  return amalgam_instance(space, build_amalgam(rng, space, cfg.class_max, false));
}

InstanceFile gen_nonamalgam(const GeneratorConfig& cfg) {
  DetRng rng(cfg.seed);
  FiniteSpace space(cfg.space_size);
  AmalgamParts parts = build_amalgam(rng, space, cfg.class_max, true);
  // Merge two same-color vertices of one class tree: creates a fiber cycle
  // while keeping the core inside both sides and the join unchanged.
  for (const auto& tree : parts.trees) {
    for (int color : {2, 1}) {
      std::vector<int> nodes;
      for (int n = 0; n < static_cast<int>(tree.node_color.size()); ++n)
        if (tree.node_color[n] == color) nodes.push_back(n);
      if (nodes.size() < 2) continue;
      int a = nodes[0], b = nodes[1];
      // Merge vertex classes of a and b in the matching factor.
      EquivRelation& factor = color == 1 ? parts.r1 : parts.r2;
      int pa = -1, pb = -1;
      for (size_t e = 0; e < tree.edges.size(); ++e) {
        if (tree.edges[e].first == a || tree.edges[e].second == a)
          pa = tree.edge_pts[e].front();
        if (tree.edges[e].first == b || tree.edges[e].second == b)
          pb = tree.edge_pts[e].front();
      }
      auto pairs = factor.ordered_pairs();
      pairs.emplace_back(pa, pb);
      factor = extend_trivially(
          EquivRelation::generated_by_pairs(factor.space(), pairs));
      return amalgam_instance(space, parts);
    }
  }
  fail(ErrorKind::InvalidArgument, "no mergeable vertex pair in any class");
}

void attach_subrelation(InstanceFile& inst, const std::string& of,
                        uint64_t seed, double density) {
  const EquivRelation& r = inst.relation(of);
  inst.relations.emplace_back("S", gen_subrelation(seed, r, density));
  inst.sub_name = "S";
  inst.sub_of = of;
}

void attach_restriction(InstanceFile& inst, const std::string& of,
                        uint64_t seed) {
  const EquivRelation& r = inst.relation(of);
  inst.restrict_set = gen_complete_domain(seed, r).members();
}

InstanceFile gen_treeing_instance(const GeneratorConfig& cfg) {
  DetRng rng(cfg.seed);
  FiniteSpace space(cfg.space_size);
  EquivRelation r = gen_partition(rng, space, cfg.class_max);
  Graphing g = gen_treeing(cfg.seed ^ 0x5bd1e995, r);
  InstanceFile inst;
  inst.space_size = space.size;
  inst.relations.emplace_back("R", extend_trivially(r));
  inst.graphings.emplace_back("G", g);
  return inst;
}

}  // namespace arbo
