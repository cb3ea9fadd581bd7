#include "arbo/graph_of_relations.hpp"

#include <algorithm>
#include <map>

namespace arbo {

namespace {

std::vector<std::vector<std::pair<int, int>>> fiber_adjacency(const GraphField& g,
                                                              int x) {
  std::vector<std::vector<std::pair<int, int>>> adj(g.vertices.size());
  for (int e : g.edges.fiber(x))
    if (e < g.opposite[e]) {
      adj[g.origin[e]].emplace_back(g.terminus[e], e);
      adj[g.terminus[e]].emplace_back(g.origin[e], e);
    }
  return adj;
}

PartialSection restrict_section(const PartialSection& s, const PointSet& d) {
  PartialSection out(d);
  for (int x : d.members()) out.assign[x] = s.at(x);
  return out;
}

// Builder state shared by the staged construction.
struct Stager {
  const GraphField& g;
  const DesingOptions& opts;
  const Action& vact;
  const Action& eact;
  EquivRelation acting;  // vertex action relation
  EquivRelation rfv;     // vertex orbit relation
  Desingularization out;
  std::vector<bool> saturated;
  std::vector<bool> in_u;
  std::map<int, std::vector<std::vector<std::pair<int, int>>>> adj_cache;

  explicit Stager(const GraphField& field, const DesingOptions& options)
      : g(field),
        opts(options),
        vact(*field.vertex_action),
        eact(*field.edge_action),
        acting(field.vertex_action->relation()),
        rfv(detail::orbit_relation_unchecked(field.vertices, *field.vertex_action)),
        saturated(field.vertices.size(), false),
        in_u(field.vertices.size(), false) {
    out.field = field;
  }

  const std::vector<std::vector<std::pair<int, int>>>& adjacency(int x) {
    auto it = adj_cache.find(x);
    if (it == adj_cache.end()) it = adj_cache.emplace(x, fiber_adjacency(g, x)).first;
    return it->second;
  }

  void mark(const PartialSection& s) {
    for (int x : s.domain.members()) {
      int rep = rfv.class_of(s.at(x));
      in_u[s.at(x)] = true;
      for (int t = 0; t < g.vertices.size(); ++t)
        if (rfv.class_of(t) == rep) saturated[t] = true;
    }
  }

  int color_of(const PartialSection& s) const {
    if (g.vertex_color.empty() || s.domain.empty()) return -1;
    return g.vertex_color[s.at(s.domain.members().front())];
  }

  // Verifies the factor-mode conjugator property for a registered section:
  // pulling the factor restriction back through the conjugator and meeting
  // the acting relation reproduces the stabilizer.
  void check_conjugator(const RepVertex& v) const {
    const EquivRelation& factor =
        v.factor_index == 1 ? *opts.factor1 : *opts.factor2;
    EquivRelation target = restrict(factor, v.conjugator.target());
    EquivRelation pulled = conjugate(target, v.conjugator);
    EquivRelation expected = intersect(pulled, restrict(acting, v.domain));
    if (!(expected == v.relation))
      fail(ErrorKind::ValidationError, "conjugator does not match the stabilizer");
  }

  void register_root(PartialSection s, PartialIso conj, int factor_index,
                     bool identity) {
    RepVertex v;
    v.parent = -1;
    v.parent_edge = -1;
    v.domain = s.domain;
    v.relation = detail::stabilizer_unchecked(g.vertices, vact, s);
    v.section = std::move(s);
    v.color = color_of(v.section);
    v.conjugator = std::move(conj);
    v.factor_index = factor_index;
    v.identity_factor = identity;
    if (opts.factor_mode && factor_index > 0) check_conjugator(v);
    mark(v.section);
    out.vertices.push_back(std::move(v));
  }

  void register_child(int parent, PartialSection sv, PartialSection se,
                      PartialIso conj, int factor_index, bool identity) {
    RepTreeEdge e;
    e.parent = parent;
    e.child = static_cast<int>(out.vertices.size());
    e.relation = detail::stabilizer_unchecked(g.edges, eact, se);
    e.section = std::move(se);
    RepVertex v;
    v.parent = parent;
    v.parent_edge = static_cast<int>(out.tree_edges.size());
    v.domain = sv.domain;
    v.relation = detail::stabilizer_unchecked(g.vertices, vact, sv);
    v.section = std::move(sv);
    v.color = color_of(v.section);
    v.conjugator = std::move(conj);
    v.factor_index = factor_index;
    v.identity_factor = identity;
    if (opts.factor_mode && factor_index > 0) check_conjugator(v);
    mark(v.section);
    out.tree_edges.push_back(std::move(e));
    out.vertices.push_back(std::move(v));
  }

  int factor_of_color(int color) const {
    if (!opts.factor_mode) return 0;
    return color == 2 ? 2 : 1;
  }

  // Factor-mode restriction: keep an injective least-to-least matching of
  // each ambient-stabilizer class onto the factor class of its representative.
  std::pair<PointSet, PartialIso> conjugator_match(const PartialSection& sv,
                                                   int color) const {
    const EquivRelation& factor = color == 2 ? *opts.factor2 : *opts.factor1;
    const EquivRelation& amb = *opts.ambient;
    std::vector<int> dom = sv.domain.members();
    // Group by (ambient class, section label representative).
    std::vector<std::pair<int, int>> pairs;
    std::vector<int> kept;
    std::vector<bool> done(dom.size(), false);
    for (size_t i = 0; i < dom.size(); ++i) {
      if (done[i]) continue;
      std::vector<int> group;
      int rep = g.vertices.label(sv.at(dom[i])).b;
      for (size_t j = i; j < dom.size(); ++j) {
        if (done[j]) continue;
        if (amb.related(dom[i], dom[j]) &&
            g.vertices.label(sv.at(dom[j])).b == rep) {
          group.push_back(dom[j]);
          done[j] = true;
        }
      }
      std::vector<int> targets = factor.class_members(factor.class_of(rep));
      size_t keep = std::min(group.size(), targets.size());
      for (size_t k = 0; k < keep; ++k) {
        kept.push_back(group[k]);
        pairs.emplace_back(group[k], targets[k]);
      }
    }
    return {PointSet(g.vertices.base(), kept),
            PartialIso(g.vertices.base(), pairs)};
  }

  void seed() {
    const PointSet& base = g.vertices.base_domain();
    if (opts.diagonal_first) {
      if (!g.edge_section)
        fail(ErrorKind::InvalidArgument, "field has no distinguished edge section");
      const PartialSection d = *g.edge_section;
      PartialSection od(d.domain), td(d.domain);
      for (int x : d.domain.members()) {
        od.assign[x] = g.origin[d.at(x)];
        td.assign[x] = g.terminus[d.at(x)];
      }
      bool full = d.domain == base;
      register_root(od, PartialIso::identity(d.domain),
                    opts.factor_mode ? 1 : 0, opts.factor_mode && full);
      EquivRelation stabd = detail::stabilizer_unchecked(g.edges, eact, d);
      PointSet dom = d.domain;
      if (opts.factor_mode && !stabd.is_trivial()) dom = fundamental_domain(stabd);
      register_child(0, restrict_section(td, dom), restrict_section(d, dom),
                     PartialIso::identity(dom), opts.factor_mode ? 2 : 0,
                     opts.factor_mode && dom == base);
      return;
    }
    PartialSection s1(base);
    for (int x : base.members()) s1.assign[x] = g.vertices.fiber(x).front();
    if (opts.trivialize) {
      EquivRelation st = detail::stabilizer_unchecked(g.vertices, vact, s1);
      s1 = restrict_section(s1, fundamental_domain(st));
    }
    int fi = opts.factor_mode ? factor_of_color(color_of(s1)) : 0;
    register_root(s1, PartialIso::identity(s1.domain), fi, false);
  }

  void grow() {
    const PointSet pick_base = out.vertices.front().domain;
    while (true) {
      bool left = false;
      for (int t = 0; t < g.vertices.size(); ++t)
        if (!saturated[t]) left = true;
      if (!left) break;
      // Least unsaturated vertex at distance one from the union, per fiber.
      std::vector<std::pair<int, int>> picks;  // (x, vertex)
      for (int x : pick_base.members()) {
        for (int v : g.vertices.fiber(x)) {
          if (saturated[v]) continue;
          bool touches = false;
          for (const auto& nb : adjacency(x)[v])
            if (in_u[nb.first]) touches = true;
          if (touches) {
            picks.emplace_back(x, v);
            break;
          }
        }
      }
      if (picks.empty())
        fail(ErrorKind::InvalidArgument, "representatives construction stalled");
      // Attachment stage per picked point.
      std::map<int, std::vector<std::pair<int, int>>> pieces;
      for (auto [x, v] : picks) {
        int attach = -1;
        for (int j = 0; j < static_cast<int>(out.vertices.size()) && attach < 0;
             ++j) {
          const PartialSection& sj = out.vertices[j].section;
          if (!sj.domain.contains(x)) continue;
          for (const auto& nb : adjacency(x)[v])
            if (nb.first == sj.at(x)) attach = j;
        }
        if (attach < 0)
          fail(ErrorKind::InvalidArgument, "picked vertex not attached");
        pieces[attach].emplace_back(x, v);
      }
      for (auto& [j, pts] : pieces) {
        // Points whose pick was saturated by an earlier piece drop out.
        std::vector<int> dom;
        for (auto [x, v] : pts)
          if (!saturated[v]) dom.push_back(x);
        if (dom.empty()) continue;
        PartialSection sv(PointSet(g.vertices.base(), dom));
        for (auto [x, v] : pts)
          if (!saturated[v]) sv.assign[x] = v;
        // Oriented connecting edge: parent section point -> new vertex.
        PartialSection se(sv.domain);
        for (int x : sv.domain.members()) {
          int pv = out.vertices[j].section.at(x);
          int cv = sv.at(x);
          int found = -1;
          for (int e : g.edges.fiber(x))
            if (g.origin[e] == pv && g.terminus[e] == cv) {
              found = e;
              break;
            }
          if (found < 0)
            fail(ErrorKind::InvalidArgument, "connecting edge missing");
          se.assign[x] = found;
        }
        PointSet dom2 = sv.domain;
        PartialIso conj;
        int fi = 0;
        if (opts.trivialize) {
          EquivRelation st = detail::stabilizer_unchecked(g.vertices, vact, sv);
          dom2 = fundamental_domain(st);
        } else if (opts.factor_mode) {
          EquivRelation ste = detail::stabilizer_unchecked(g.edges, eact, se);
          PointSet d1 = fundamental_domain(ste);
          auto matched = conjugator_match(restrict_section(sv, d1),
                                          color_of(restrict_section(sv, d1)));
          dom2 = matched.first;
          conj = matched.second;
          fi = factor_of_color(color_of(sv));
        }
        if (dom2.empty()) continue;
        if (!opts.factor_mode) conj = PartialIso::identity(dom2);
        register_child(j, restrict_section(sv, dom2), restrict_section(se, dom2),
                       std::move(conj), fi, false);
      }
    }
  }
};

}  // namespace

DesingOptions default_desing_options(const GraphField& g) {
  DesingOptions opts;
  if (g.edge_section)
    opts.diagonal_first = true;
  else
    opts.trivialize = true;
  return opts;
}

Desingularization representatives_forest(const GraphField& g,
                                         const DesingOptions& opts) {
  if (!g.has_actions()) fail(ErrorKind::InvalidAction, "field carries no actions");
  validate_action(g.vertices, *g.vertex_action);
  validate_action(g.edges, *g.edge_action);
  if (opts.factor_mode && (!opts.factor1 || !opts.factor2 || !opts.ambient))
    fail(ErrorKind::InvalidArgument, "factor mode needs both factors and ambient");
  Stager st(g, opts);
  st.seed();
  st.grow();
  return std::move(st.out);
}

Desingularization representatives_forest(const GraphField& g) {
  return representatives_forest(g, default_desing_options(g));
}

Desingularization desingularize(const GraphField& g, const DesingOptions& opts) {
  Desingularization d = representatives_forest(g, opts);
  const Action& vact = *d.field.vertex_action;
  const Action& eact = *d.field.edge_action;
  const EquivRelation& acting = vact.relation();
  EquivRelation rfe = detail::orbit_relation_unchecked(d.field.edges, eact);

  std::vector<bool> covered(d.field.edges.size(), false);
  auto mark_edge_orbit = [&](int e) {
    int rep = rfe.class_of(e);
    for (int t = 0; t < d.field.edges.size(); ++t)
      if (rfe.class_of(t) == rep) covered[t] = true;
  };
  for (const auto& te : d.tree_edges)
    for (int x : te.section.domain.members()) {
      mark_edge_orbit(te.section.at(x));
      mark_edge_orbit(d.field.opposite[te.section.at(x)]);
    }

  while (true) {
    // Least uncovered edge whose origin lies pointwise in a representation,
    // ordered by base point then fiber number.
    int e0 = -1, pvert = -1;
    for (int x : d.field.vertices.base_domain().members()) {
      for (int e : d.field.edges.fiber(x)) {
        if (covered[e]) continue;
        for (int j = 0; j < static_cast<int>(d.vertices.size()); ++j) {
          const RepVertex& v = d.vertices[j];
          if (v.domain.contains(x) && v.section.at(x) == d.field.origin[e]) {
            e0 = e;
            pvert = j;
            break;
          }
        }
        if (e0 >= 0) break;
      }
      if (e0 >= 0) break;
    }
    if (e0 < 0) {
      bool left = false;
      for (int e = 0; e < d.field.edges.size(); ++e)
        if (!covered[e]) left = true;
      if (left)
        fail(ErrorKind::InvalidArgument, "leftover edges without attached origin");
      break;
    }
    if (rfe.related(e0, d.field.opposite[e0]))
      fail(ErrorKind::ValidationError, "edge inversion in the field", {e0});
    int x0 = d.field.edges.proj(e0);
    int term = d.field.terminus[e0];
    // Unique representation whose saturation holds the terminal vertex.
    int qvert = -1, y0 = -1;
    for (int j = 0; j < static_cast<int>(d.vertices.size()) && qvert < 0; ++j) {
      const RepVertex& v = d.vertices[j];
      for (int y : v.domain.members()) {
        if (!acting.related(y, x0)) continue;
        if (vact.raw(y, x0, term) == v.section.at(y)) {
          qvert = j;
          y0 = y;
          break;
        }
      }
    }
    if (qvert < 0)
      fail(ErrorKind::InvalidArgument, "terminal vertex outside all saturations");
    if (y0 == x0)
      fail(ErrorKind::ValidationError, "extra-edge iso touches the diagonal", {x0});
    ExtraEdge ex;
    ex.origin_vertex = pvert;
    ex.terminus_vertex = qvert;
    ex.phi = PartialIso(acting.space(), {{x0, y0}});
    ex.section = PartialSection(PointSet(acting.space(), {x0}));
    ex.section.assign[x0] = e0;
    ex.relation = EquivRelation::trivial(acting.space(),
                                         PointSet(acting.space(), {x0}));
    mark_edge_orbit(e0);
    mark_edge_orbit(d.field.opposite[e0]);
    d.extra_edges.push_back(std::move(ex));
  }
  return d;
}

Desingularization desingularize(const GraphField& g) {
  return desingularize(g, default_desing_options(g));
}

DesingCheck validate_desingularization(const Desingularization& d) {
  const GraphField& g = d.field;
  if (!g.has_actions()) return {false, "field carries no actions", {}};
  const Action& vact = *g.vertex_action;
  const Action& eact = *g.edge_action;
  const EquivRelation& acting = vact.relation();
  EquivRelation rfv = detail::orbit_relation_unchecked(g.vertices, vact);
  EquivRelation rfe = detail::orbit_relation_unchecked(g.edges, eact);

  // Bullet 1: rooted representatives tree with disjoint covering saturations.
  if (d.vertices.empty() || d.vertices.front().parent != -1)
    return {false, "representatives-tree", {}};
  for (int j = 1; j < static_cast<int>(d.vertices.size()); ++j) {
    const RepVertex& v = d.vertices[j];
    if (v.parent < 0 || v.parent >= j) return {false, "representatives-tree", {j}};
    if (v.parent_edge < 0 || v.parent_edge >= static_cast<int>(d.tree_edges.size()))
      return {false, "representatives-tree", {j}};
    const RepTreeEdge& e = d.tree_edges[v.parent_edge];
    if (e.parent != v.parent || e.child != j)
      return {false, "representatives-tree", {j}};
    if (!v.domain.subset_of(d.vertices[v.parent].domain))
      return {false, "representatives-tree", {j}};
  }
  std::vector<int> owner(g.vertices.size(), -1);
  for (int j = 0; j < static_cast<int>(d.vertices.size()); ++j) {
    const RepVertex& v = d.vertices[j];
    if (!(v.domain == v.section.domain)) return {false, "representatives-tree", {j}};
    for (int x : v.domain.members())
      if (g.vertices.proj(v.section.at(x)) != x)
        return {false, "representatives-tree", {j, x}};
    if (!(detail::stabilizer_unchecked(g.vertices, vact, v.section) == v.relation))
      return {false, "vertex-stabilizer", {j}};
    for (int x : v.domain.members()) {
      int rep = rfv.class_of(v.section.at(x));
      for (int t = 0; t < g.vertices.size(); ++t)
        if (rfv.class_of(t) == rep) {
          if (owner[t] != -1 && owner[t] != j)
            return {false, "vertex-partition", {owner[t], j, t}};
          owner[t] = j;
        }
    }
  }
  for (int t = 0; t < g.vertices.size(); ++t)
    if (owner[t] < 0) return {false, "vertex-partition", {t}};

  // Tree-edge representations.
  for (int k = 0; k < static_cast<int>(d.tree_edges.size()); ++k) {
    const RepTreeEdge& e = d.tree_edges[k];
    const RepVertex& child = d.vertices[e.child];
    const RepVertex& parent = d.vertices[e.parent];
    if (!(e.section.domain == child.domain)) return {false, "tree-edge", {k}};
    for (int x : child.domain.members()) {
      int ep = e.section.at(x);
      if (g.origin[ep] != parent.section.at(x) ||
          g.terminus[ep] != child.section.at(x))
        return {false, "tree-edge", {k, x}};
    }
    if (!(detail::stabilizer_unchecked(g.edges, eact, e.section) == e.relation))
      return {false, "edge-stabilizer", {k}};
    if (!is_subrelation(e.relation, child.relation) ||
        !is_subrelation(e.relation, parent.relation))
      return {false, "edge-stabilizer", {k}};
  }

  // Bullets 2 and 3 plus diagonal avoidance for the extra edges.
  for (int k = 0; k < static_cast<int>(d.extra_edges.size()); ++k) {
    const ExtraEdge& ex = d.extra_edges[k];
    if (ex.origin_vertex < 0 ||
        ex.origin_vertex >= static_cast<int>(d.vertices.size()) ||
        ex.terminus_vertex < 0 ||
        ex.terminus_vertex >= static_cast<int>(d.vertices.size()))
      return {false, "extra-edge-sections", {k}};
    if (!(ex.section.domain == ex.phi.source()))
      return {false, "extra-edge-sections", {k}};
    if (!pseudogroup_member(ex.phi, acting))
      return {false, "extra-edge-sections", {k}};
    if (ex.phi.touches_diagonal()) return {false, "diagonal-avoidance", {k}};
    const RepVertex& p = d.vertices[ex.origin_vertex];
    const RepVertex& q = d.vertices[ex.terminus_vertex];
    for (int x : ex.section.domain.members()) {
      int e = ex.section.at(x);
      if (g.edges.proj(e) != x) return {false, "extra-edge-sections", {k, x}};
      if (!p.domain.contains(x) || g.origin[e] != p.section.at(x))
        return {false, "extra-edge-sections", {k, x}};
      int y = ex.phi.apply(x);
      if (!q.domain.contains(y) ||
          vact.raw(y, x, g.terminus[e]) != q.section.at(y))
        return {false, "extra-edge-sections", {k, x}};
    }
    if (!(detail::stabilizer_unchecked(g.edges, eact, ex.section) == ex.relation))
      return {false, "stabilizer-compat", {k}};
    EquivRelation conj_rel = conjugate(ex.relation, invert(ex.phi));
    if (!is_subrelation(conj_rel, q.relation))
      return {false, "stabilizer-compat", {k}};
    if (!is_subrelation(ex.relation, restrict(p.relation, ex.section.domain)))
      return {false, "stabilizer-compat", {k}};
  }

  // Bullet 4: edge saturations partition the edge space.
  std::vector<int> eowner(g.edges.size(), -1);
  int tag = 0;
  auto claim = [&](int e, int who) -> std::optional<DesingCheck> {
    int rep = rfe.class_of(e);
    for (int t = 0; t < g.edges.size(); ++t)
      if (rfe.class_of(t) == rep) {
        if (eowner[t] != -1 && eowner[t] != who)
          return DesingCheck{false, "edge-partition", {eowner[t], who, t}};
        eowner[t] = who;
      }
    return std::nullopt;
  };
  for (const auto& te : d.tree_edges) {
    for (int x : te.section.domain.members()) {
      if (auto bad = claim(te.section.at(x), tag)) return *bad;
      if (auto bad = claim(g.opposite[te.section.at(x)], tag + 1)) return *bad;
    }
    tag += 2;
  }
  for (const auto& ex : d.extra_edges) {
    for (int x : ex.section.domain.members()) {
      if (auto bad = claim(ex.section.at(x), tag)) return *bad;
      if (auto bad = claim(g.opposite[ex.section.at(x)], tag + 1)) return *bad;
    }
    tag += 2;
  }
  for (int e = 0; e < g.edges.size(); ++e)
    if (eowner[e] < 0) return {false, "edge-partition", {e}};

  return {};
}

RootedTreeOfRelations to_rooted_tree(const Desingularization& d) {
  RootedTreeOfRelations t;
  t.root = 0;
  for (const auto& v : d.vertices) {
    t.graph.vertex_domains.push_back(v.domain);
    t.graph.vertex_rels.push_back(v.relation);
  }
  for (const auto& e : d.tree_edges) {
    const RepVertex& child = d.vertices[e.child];
    GraphOfRelations::Edge down;  // parent -> child
    down.origin = e.parent;
    down.terminus = e.child;
    down.rel = e.relation;
    down.morphism = PartialIso::identity(child.domain);
    GraphOfRelations::Edge up;  // child -> parent
    up.origin = e.child;
    up.terminus = e.parent;
    up.rel = e.relation;
    up.morphism = PartialIso::identity(child.domain);
    down.opposite = static_cast<int>(t.graph.edges.size()) + 1;
    up.opposite = static_cast<int>(t.graph.edges.size());
    t.graph.edges.push_back(std::move(down));
    t.graph.edges.push_back(std::move(up));
  }
  return t;
}

bool is_rooted(const RootedTreeOfRelations& t) {
  int n = static_cast<int>(t.graph.vertex_domains.size());
  if (n == 0) return false;
  int space = t.graph.vertex_domains.front().space().size;
  // Disjoint union of carriers, glued along the edge morphisms.
  std::vector<int> parent(n * space);
  for (int i = 0; i < n * space; ++i) parent[i] = i;
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  for (size_t k = 0; k < t.graph.edges.size(); k += 2) {
    const auto& down = t.graph.edges[k];
    const auto& up = t.graph.edges[k + 1];
    for (auto [x, y] : down.morphism.pairs()) {
      // x lives in the edge carrier; glue its two endpoint images.
      int xo = up.morphism.apply(x);
      unite(down.terminus * space + y, up.terminus * space + xo);
    }
  }
  // Every glued class must meet the root carrier exactly once.
  std::vector<int> count(n * space, 0);
  for (int x : t.graph.vertex_domains[t.root].members())
    count[find(t.root * space + x)]++;
  for (int v = 0; v < n; ++v)
    for (int x : t.graph.vertex_domains[v].members())
      if (count[find(v * space + x)] != 1) return false;
  return true;
}

GeodesicAmalgam geodesic_amalgam(const Desingularization& d, int p, int q) {
  int n = static_cast<int>(d.vertices.size());
  if (p < 0 || p >= n || q < 0 || q >= n)
    fail(ErrorKind::InvalidArgument, "vertex index out of range", {p, q});
  if (p == q) fail(ErrorKind::EmptyGeodesic, "geodesic needs distinct vertices");
  PointSet common = d.vertices[p].domain.intersect(d.vertices[q].domain);
  if (common.empty())
    fail(ErrorKind::EmptyIntersection, "vertex carriers do not meet", {p, q});
  // Geodesic edges via the two root chains.
  std::vector<int> pchain, qchain;
  for (int w = p; w != -1; w = d.vertices[w].parent) pchain.push_back(w);
  for (int w = q; w != -1; w = d.vertices[w].parent) qchain.push_back(w);
  std::vector<bool> on_p(n, false);
  for (int w : pchain) on_p[w] = true;
  int lca = -1;
  for (int w : qchain)
    if (on_p[w]) {
      lca = w;
      break;
    }
  std::vector<int> geo_edges;
  for (int w : pchain) {
    if (w == lca) break;
    geo_edges.push_back(d.vertices[w].parent_edge);
  }
  for (int w : qchain) {
    if (w == lca) break;
    geo_edges.push_back(d.vertices[w].parent_edge);
  }
  EquivRelation core;
  bool first = true;
  for (int k : geo_edges) {
    core = first ? d.tree_edges[k].relation : intersect(core, d.tree_edges[k].relation);
    first = false;
  }
  core = restrict(core, common.intersect(core.domain()));
  EquivRelation rp = restrict(d.vertices[p].relation, common);
  EquivRelation rq = restrict(d.vertices[q].relation, common);
  if (!is_subrelation(core, intersect(rp, rq)))
    fail(ErrorKind::NotSubrelation, "geodesic core not common", {p, q});
  GeodesicAmalgam out;
  out.common = common;
  out.core = core;
  out.joined = join(rp, rq);
  out.certificate =
      verify_amalgam(extend_trivially(out.joined), extend_trivially(rp),
                     extend_trivially(rq), extend_trivially(core));
  return out;
}

GenerationSplit generation_split(const Desingularization& d) {
  const GraphField& g = d.field;
  const Action& vact = *g.vertex_action;
  const EquivRelation& acting = vact.relation();
  PointSet base = g.vertices.base_domain();
  FiniteSpace space = acting.space();

  GenerationSplit out;
  std::vector<EquivRelation> vrels;
  for (const auto& v : d.vertices) vrels.push_back(v.relation);
  vrels.push_back(EquivRelation::trivial(space, base));
  out.r_prime = join(vrels);

  std::vector<std::pair<int, int>> phi_pairs;
  for (const auto& ex : d.extra_edges)
    for (auto pr : ex.phi.pairs()) phi_pairs.push_back(pr);
  out.treeing = Graphing(space, phi_pairs);
  out.r_double_prime =
      restrict(generated_relation(out.treeing), base);

  out.trivial_intersections = true;
  for (const auto& v : d.vertices)
    if (!intersect(v.relation, out.r_double_prime).is_trivial())
      out.trivial_intersections = false;
  out.treeing_ok = is_treeing_of(out.treeing, out.r_double_prime);
  out.generates = join(out.r_prime, out.r_double_prime) == acting;

  // Translate coherence: R'-saturations of the represented subforest fibers
  // are equal or disjoint under every acting pair.
  std::vector<bool> in_rep(g.vertices.size(), false);
  for (const auto& v : d.vertices)
    for (int x : v.domain.members()) in_rep[v.section.at(x)] = true;
  std::vector<bool> in_l(g.vertices.size(), false);
  for (int t = 0; t < g.vertices.size(); ++t) {
    if (!in_rep[t]) continue;
    int y = g.vertices.proj(t);
    for (int x = 0; x < space.size; ++x)
      if (out.r_prime.related(x, y)) in_l[vact.raw(x, y, t)] = true;
  }
  out.translate_coherence = true;
  for (int x = 0; x < space.size && out.translate_coherence; ++x) {
    for (int y = 0; y < space.size && out.translate_coherence; ++y) {
      if (x == y || !acting.related(x, y)) continue;
      std::vector<int> trans, at_x;
      for (int t : g.vertices.fiber(y))
        if (in_l[t]) trans.push_back(vact.raw(x, y, t));
      for (int t : g.vertices.fiber(x))
        if (in_l[t]) at_x.push_back(t);
      std::sort(trans.begin(), trans.end());
      bool equal = trans == at_x;
      bool disjoint = true;
      for (int t : trans)
        if (std::binary_search(at_x.begin(), at_x.end(), t)) disjoint = false;
      if (!equal && !disjoint) out.translate_coherence = false;
    }
  }
  return out;
}

}  // namespace arbo
