#include "arbo/tree_field.hpp"

#include <algorithm>
#include <map>

namespace arbo {

namespace {

// Undirected edges of one fiber: (u, v, edge point) with e < opposite(e).
std::vector<std::array<int, 3>> fiber_undirected_edges(const GraphField& g, int x) {
  std::vector<std::array<int, 3>> out;
  for (int e : g.edges.fiber(x))
    if (e < g.opposite[e]) out.push_back({g.origin[e], g.terminus[e], e});
  return out;
}

std::vector<std::vector<std::pair<int, int>>> fiber_adjacency(const GraphField& g,
                                                              int x) {
  // vertex carrier -> (neighbor, undirected edge id); indexed by position in fiber.
  std::vector<std::vector<std::pair<int, int>>> adj(g.vertices.size());
  for (auto [u, v, e] : fiber_undirected_edges(g, x)) {
    adj[u].emplace_back(v, e);
    adj[v].emplace_back(u, e);
  }
  return adj;
}

}  // namespace

void validate_graph_field(const GraphField& g) {
  int ne = g.edges.size();
  if (static_cast<int>(g.origin.size()) != ne ||
      static_cast<int>(g.terminus.size()) != ne ||
      static_cast<int>(g.opposite.size()) != ne)
    fail(ErrorKind::ValidationError, "graph field map sizes");
  for (int e = 0; e < ne; ++e) {
    int o = g.opposite[e];
    if (o < 0 || o >= ne || o == e || g.opposite[o] != e)
      fail(ErrorKind::ValidationError, "opposite not a fixed-point-free involution",
           {e});
    if (g.origin[g.opposite[e]] != g.terminus[e])
      fail(ErrorKind::ValidationError, "origin of opposite is not terminus", {e});
    if (g.vertices.proj(g.origin[e]) != g.edges.proj(e) ||
        g.vertices.proj(g.terminus[e]) != g.edges.proj(e))
      fail(ErrorKind::ValidationError, "incidence leaves the fiber", {e});
  }
  if (!g.vertex_color.empty()) {
    for (int e = 0; e < ne; ++e)
      if (g.vertex_color[g.origin[e]] == g.vertex_color[g.terminus[e]])
        fail(ErrorKind::ValidationError, "edge joins same-color vertices", {e});
  }
  if (g.has_actions()) {
    validate_action(g.vertices, *g.vertex_action);
    validate_action(g.edges, *g.edge_action);
    const EquivRelation& r = g.edge_action->relation();
    for (int e = 0; e < ne; ++e) {
      int y = g.edges.proj(e);
      for (int x = 0; x < r.space().size; ++x) {
        if (!r.related(x, y)) continue;
        int ei = g.edge_action->raw(x, y, e);
        if (g.origin[ei] != g.vertex_action->raw(x, y, g.origin[e]) ||
            g.terminus[ei] != g.vertex_action->raw(x, y, g.terminus[e]) ||
            g.opposite[ei] != g.edge_action->raw(x, y, g.opposite[e]))
          fail(ErrorKind::ValidationError, "structure maps not equivariant",
               {x, y, e});
      }
    }
    if (!g.vertex_color.empty()) {
      const EquivRelation& rv = g.vertex_action->relation();
      for (int v = 0; v < g.vertices.size(); ++v) {
        int y = g.vertices.proj(v);
        for (int x = 0; x < rv.space().size; ++x)
          if (rv.related(x, y) &&
              g.vertex_color[g.vertex_action->raw(x, y, v)] != g.vertex_color[v])
            fail(ErrorKind::ValidationError, "coloring not invariant", {x, y, v});
      }
    }
  }
}

TreeCheck is_treefield(const GraphField& g) {
  for (int x : g.vertices.base_domain().members()) {
    const auto& verts = g.vertices.fiber(x);
    auto adj = fiber_adjacency(g, x);
    std::vector<int> parent_vertex(g.vertices.size(), -1);
    std::vector<int> parent_edge(g.vertices.size(), -1);
    std::vector<int> state(g.vertices.size(), 0);  // 0 unseen, 1 seen
    int root = verts.front();
    state[root] = 1;
    std::vector<int> stack{root};
    std::optional<std::pair<int, int>> back_edge;  // (u, v) closing a cycle
    while (!stack.empty() && !back_edge) {
      int u = stack.back();
      stack.pop_back();
      for (auto [v, e] : adj[u]) {
        if (e == parent_edge[u]) continue;
        if (v == u || state[v]) {
          back_edge = {u, v};
          break;
        }
        state[v] = 1;
        parent_vertex[v] = u;
        parent_edge[v] = e;
        stack.push_back(v);
      }
    }
    if (back_edge) {
      auto [u, v] = *back_edge;
      // Cycle = path(u..root) meet path(v..root), joined by the extra edge.
      std::vector<int> up;
      for (int w = u; w != -1; w = parent_vertex[w]) up.push_back(w);
      std::vector<int> vp;
      for (int w = v; w != -1; w = parent_vertex[w]) vp.push_back(w);
      std::vector<bool> on_up(g.vertices.size(), false);
      for (int w : up) on_up[w] = true;
      int meet = -1;
      for (int w : vp)
        if (on_up[w]) {
          meet = w;
          break;
        }
      std::vector<int> cycle;
      for (int w : up) {
        cycle.push_back(w);
        if (w == meet) break;
      }
      std::vector<int> tail;
      for (int w : vp) {
        if (w == meet) break;
        tail.push_back(w);
      }
      std::reverse(tail.begin(), tail.end());
      cycle.insert(cycle.end(), tail.begin(), tail.end());
      return {false, FiberWitness{x, FiberWitness::cycle, std::move(cycle)}};
    }
    for (int v : verts)
      if (!state[v])
        return {false, FiberWitness{x, FiberWitness::disconnected, {root, v}}};
  }
  return {true, std::nullopt};
}

GraphingField from_graphing(const Graphing& phi) {
  EquivRelation r = generated_relation(phi);
  CanonicalLeft verts = canonical_left(r);
  const auto& pairs = phi.edges();
  FiniteSpace space = phi.space();

  std::vector<int> proj;
  std::vector<PointLabel> labels;
  for (int x = 0; x < space.size; ++x)
    for (int k = 0; k < static_cast<int>(pairs.size()); ++k)
      if (r.related(x, pairs[k].first)) {
        proj.push_back(x);
        labels.push_back({1, x, k});
      }
  std::vector<int> support;
  for (int p : proj) support.push_back(p);
  FiberedSpace edges(space, PointSet(space, support), std::move(proj),
                     std::move(labels));

  GraphField g;
  g.vertices = verts.space;
  g.vertex_action = verts.action;
  g.origin.assign(edges.size(), -1);
  g.terminus.assign(edges.size(), -1);
  g.opposite.assign(edges.size(), -1);
  Action eact(r, edges.size());
  for (int e = 0; e < edges.size(); ++e) {
    int x = edges.label(e).a;
    auto [y, z] = pairs[edges.label(e).b];
    g.origin[e] = g.vertices.find_label({0, x, y});
    g.terminus[e] = g.vertices.find_label({0, x, z});
    int rev = -1;
    for (int k = 0; k < static_cast<int>(pairs.size()); ++k)
      if (pairs[k].first == z && pairs[k].second == y) rev = k;
    g.opposite[e] = edges.find_label({1, x, rev});
    for (int xp = 0; xp < space.size; ++xp)
      if (r.related(xp, x)) eact.set(xp, x, e, edges.find_label({1, xp, edges.label(e).b}));
  }
  g.edges = std::move(edges);
  g.edge_action = std::move(eact);
  g.edge_sign.assign(g.edges.size(), 0);
  return {std::move(r), std::move(g)};
}

std::vector<int> quasi_free_check(const GraphField& g) {
  if (!g.has_actions()) fail(ErrorKind::InvalidAction, "field carries no actions");
  validate_action(g.vertices, *g.vertex_action);
  validate_action(g.edges, *g.edge_action);
  return rf_fundamental_domain(g.vertices, *g.vertex_action);
}

Subforest fundamental_subforest(const GraphField& g) {
  if (!g.has_actions()) fail(ErrorKind::InvalidAction, "field carries no actions");
  validate_action(g.vertices, *g.vertex_action);
  validate_action(g.edges, *g.edge_action);
  const Action& vact = *g.vertex_action;
  EquivRelation rf = detail::orbit_relation_unchecked(g.vertices, vact);

  Subforest out;
  std::vector<bool> saturated(g.vertices.size(), false);
  std::vector<bool> in_u(g.vertices.size(), false);
  auto mark_orbit = [&](int v) {
    int rep = rf.class_of(v);
    for (int t = 0; t < g.vertices.size(); ++t)
      if (rf.class_of(t) == rep) saturated[t] = true;
  };

  // Stage 1: least vertex per fiber, restricted to a fundamental domain of
  // its stabilizer.
  PartialSection s1(g.vertices.base_domain());
  for (int x : g.vertices.base_domain().members())
    s1.assign[x] = g.vertices.fiber(x).front();
  EquivRelation st1 = detail::stabilizer_unchecked(g.vertices, vact, s1);
  PointSet x1 = fundamental_domain(st1);
  PartialSection s1r(x1);
  for (int x : x1.members()) s1r.assign[x] = s1.at(x);
  for (int x : x1.members()) {
    in_u[s1r.at(x)] = true;
    mark_orbit(s1r.at(x));
  }
  out.base = x1;
  out.stages.push_back(s1r);
  out.parent_stage.push_back(-1);

  std::map<int, std::vector<std::vector<std::pair<int, int>>>> adj_cache;
  auto adjacency = [&](int x) -> const std::vector<std::vector<std::pair<int, int>>>& {
    auto it = adj_cache.find(x);
    if (it == adj_cache.end())
      it = adj_cache.emplace(x, fiber_adjacency(g, x)).first;
    return it->second;
  };

  while (true) {
    bool any_left = false;
    for (int t = 0; t < g.vertices.size(); ++t)
      if (!saturated[t]) any_left = true;
    if (!any_left) break;
    // Least unsaturated vertex at distance one from U, per fiber over X1.
    std::vector<int> dom;
    PartialSection pick(x1);
    for (int x : x1.members()) {
      const auto& adj = adjacency(x);
      for (int v : g.vertices.fiber(x)) {
        if (saturated[v]) continue;
        bool touches = false;
        for (const auto& nb : adj[v])
          if (in_u[nb.first]) touches = true;
        if (touches) {
          pick.assign[x] = v;
          dom.push_back(x);
          break;
        }
      }
    }
    if (dom.empty())
      fail(ErrorKind::InvalidArgument, "subforest construction stalled");
    PartialSection sn(PointSet(g.vertices.base(), dom));
    for (int x : dom) sn.assign[x] = pick.at(x);
    EquivRelation stn = detail::stabilizer_unchecked(g.vertices, vact, sn);
    PointSet xn = fundamental_domain(stn);
    // Split by the stage whose image the new vertex attaches to.
    std::map<int, std::vector<int>> pieces;
    for (int x : xn.members()) {
      int v = sn.at(x);
      int attach = -1;
      for (int j = 0; j < static_cast<int>(out.stages.size()) && attach < 0; ++j) {
        const PartialSection& sj = out.stages[j];
        if (!sj.domain.contains(x)) continue;
        for (const auto& nb : adjacency(x)[v])
          if (nb.first == sj.at(x)) attach = j;
      }
      if (attach < 0)
        fail(ErrorKind::InvalidArgument, "new vertex not attached to a stage");
      pieces[attach].push_back(x);
    }
    for (auto& [j, xs] : pieces) {
      PartialSection piece(PointSet(g.vertices.base(), xs));
      for (int x : xs) piece.assign[x] = sn.at(x);
      for (int x : xs) {
        in_u[piece.at(x)] = true;
        mark_orbit(piece.at(x));
      }
      out.stages.push_back(std::move(piece));
      out.parent_stage.push_back(j);
    }
  }

  for (int v = 0; v < g.vertices.size(); ++v)
    if (in_u[v]) out.vertex_points.push_back(v);
  for (int e = 0; e < g.edges.size(); ++e)
    if (in_u[g.origin[e]] && in_u[g.terminus[e]]) out.edge_points.push_back(e);
  return out;
}

Contraction contract(const GraphField& g, const Subforest& sub) {
  const Action& vact = *g.vertex_action;
  const EquivRelation& s_rel = vact.relation();
  FiniteSpace base = g.vertices.base();
  std::vector<bool> in_sub(g.vertices.size(), false);
  for (int v : sub.vertex_points) in_sub[v] = true;

  // New vertices: one per (base point y, subforest base point x ~ y).
  std::vector<int> proj;
  std::vector<PointLabel> labels;
  for (int y : g.vertices.base_domain().members())
    for (int x : sub.base.members())
      if (s_rel.related(y, x)) {
        proj.push_back(y);
        labels.push_back({0, y, x});
      }
  FiberedSpace nverts(base, g.vertices.base_domain(), std::move(proj),
                      std::move(labels));

  // Map old vertices onto the collapse point of their translate.
  std::vector<int> vmap(g.vertices.size(), -1);
  for (int w = 0; w < g.vertices.size(); ++w) {
    int y = g.vertices.proj(w);
    for (int x : sub.base.members()) {
      if (!s_rel.related(x, y)) continue;
      if (in_sub[vact.raw(x, y, w)]) {
        vmap[w] = nverts.find_label({0, y, x});
        break;
      }
    }
    if (vmap[w] < 0)
      fail(ErrorKind::InvalidArgument, "vertex outside every translate");
  }

  // Keep edges whose endpoints fall in different translates.
  std::vector<int> keep;
  std::vector<int> emap(g.edges.size(), -1);
  std::vector<int> eproj;
  std::vector<PointLabel> elabels;
  for (int e = 0; e < g.edges.size(); ++e)
    if (vmap[g.origin[e]] != vmap[g.terminus[e]]) {
      emap[e] = static_cast<int>(keep.size());
      keep.push_back(e);
      eproj.push_back(g.edges.proj(e));
      elabels.push_back({1, e, 0});
    }
  std::vector<int> esupport = eproj;
  FiberedSpace nedges(base, PointSet(base, esupport), std::move(eproj),
                      std::move(elabels));

  GraphField nf;
  nf.origin.resize(nedges.size());
  nf.terminus.resize(nedges.size());
  nf.opposite.resize(nedges.size());
  for (int i = 0; i < nedges.size(); ++i) {
    int e = keep[i];
    nf.origin[i] = vmap[g.origin[e]];
    nf.terminus[i] = vmap[g.terminus[e]];
    nf.opposite[i] = emap[g.opposite[e]];
  }

  Action nvact(s_rel, nverts.size());
  for (int t = 0; t < nverts.size(); ++t) {
    int y = nverts.label(t).a, x = nverts.label(t).b;
    for (int yp = 0; yp < base.size; ++yp)
      if (s_rel.related(yp, y)) nvact.set(yp, y, t, nverts.find_label({0, yp, x}));
  }
  Action neact(s_rel, nedges.size());
  for (int i = 0; i < nedges.size(); ++i) {
    int e = keep[i];
    int y = g.edges.proj(e);
    for (int yp = 0; yp < base.size; ++yp)
      if (s_rel.related(yp, y)) neact.set(yp, y, i, emap[g.edge_action->raw(yp, y, e)]);
  }

  nf.vertices = std::move(nverts);
  nf.edges = std::move(nedges);
  nf.vertex_action = std::move(nvact);
  nf.edge_action = std::move(neact);
  nf.edge_sign.assign(nf.edges.size(), 0);

  PartialSection sec(sub.base);
  for (int x : sub.base.members()) sec.assign[x] = nf.vertices.find_label({0, x, x});
  return {std::move(nf), std::move(sec)};
}

Graphing treeing_from_fd_section(const GraphField& g, const PartialSection& s) {
  const EquivRelation& rel = g.vertex_action->relation();
  const PointSet& a = s.domain;
  if (classify_domain(rel, a) == DomainClass::neither)
    fail(ErrorKind::NotCompleteDomain, "treeing_from_fd_section");

  bool whole = a == g.vertices.base_domain();
  GraphField over = whole ? g : restrict_field(g, a);
  PartialSection s_over = s;
  if (!whole)
    for (int x : a.members())
      s_over.assign[x] = over.vertices.find_label(g.vertices.label(s.at(x)));
  // Identify the vertex space over A with the canonical left space.
  FiberedMorphism iso = canonical_iso(over.vertices, *over.vertex_action, s_over);
  std::vector<std::pair<int, int>> pairs;
  for (int x : a.members()) {
    for (auto [u, v, e] : fiber_undirected_edges(over, x)) {
      int bu = iso.target.label(iso.map[u]).b;
      int bv = iso.target.label(iso.map[v]).b;
      if (bu == x && bv != x) pairs.emplace_back(x, bv);
      if (bv == x && bu != x) pairs.emplace_back(x, bu);
    }
  }
  // Retraction stars onto A for the rest of the space.
  for (int y : g.vertices.base_domain().members()) {
    if (a.contains(y)) continue;
    for (int x : a.members())
      if (rel.related(x, y)) {
        pairs.emplace_back(y, x);
        break;
      }
  }
  return Graphing(g.vertices.base(), pairs);
}

Graphing extract_treeing(const GraphField& g) {
  TreeCheck tc = is_treefield(g);
  if (!tc.ok)
    fail(ErrorKind::ValidationError, "extract_treeing on a non-tree field",
         {tc.witness->base_point});
  Subforest sub = fundamental_subforest(g);
  Contraction con = contract(g, sub);
  return treeing_from_fd_section(con.field, con.section);
}

namespace {

GraphField bass_serre_core(const EquivRelation& r, const EquivRelation& r1,
                           const EquivRelation& r2, const QuotientSpace& qedges) {
  QuotientSpace q1 = quotient(r, r1);
  QuotientSpace q2 = quotient(r, r2);
  FiniteSpace space = r.space();
  PointSet full = PointSet::full(space);

  std::vector<int> vproj;
  std::vector<PointLabel> vlabels;
  std::vector<int> vcolor;
  for (int t = 0; t < q1.space.size(); ++t) {
    vproj.push_back(q1.space.proj(t));
    vlabels.push_back({1, q1.space.label(t).a, q1.space.label(t).b});
    vcolor.push_back(1);
  }
  for (int t = 0; t < q2.space.size(); ++t) {
    vproj.push_back(q2.space.proj(t));
    vlabels.push_back({2, q2.space.label(t).a, q2.space.label(t).b});
    vcolor.push_back(2);
  }
  FiberedSpace verts(space, full, std::move(vproj), std::move(vlabels));

  // Oriented edges and their opposites.
  std::vector<int> eproj;
  std::vector<PointLabel> elabels;
  std::vector<int> esign;
  for (int t = 0; t < qedges.space.size(); ++t) {
    eproj.push_back(qedges.space.proj(t));
    elabels.push_back({3, qedges.space.label(t).a, qedges.space.label(t).b});
    esign.push_back(1);
  }
  for (int t = 0; t < qedges.space.size(); ++t) {
    eproj.push_back(qedges.space.proj(t));
    elabels.push_back({4, qedges.space.label(t).a, qedges.space.label(t).b});
    esign.push_back(-1);
  }
  FiberedSpace edges(space, full, std::move(eproj), std::move(elabels));

  GraphField g;
  int m = qedges.space.size();
  g.origin.resize(2 * m);
  g.terminus.resize(2 * m);
  g.opposite.resize(2 * m);
  for (int t = 0; t < m; ++t) {
    int x = qedges.space.label(t).a, z = qedges.space.label(t).b;
    int v1 = verts.find_label({1, x, r1.class_of(z)});
    int v2 = verts.find_label({2, x, r2.class_of(z)});
    g.origin[t] = v1;
    g.terminus[t] = v2;
    g.origin[m + t] = v2;
    g.terminus[m + t] = v1;
    g.opposite[t] = m + t;
    g.opposite[m + t] = t;
  }

  Action vact(r, verts.size());
  for (int t = 0; t < verts.size(); ++t) {
    const PointLabel& l = verts.label(t);
    for (int x = 0; x < space.size; ++x)
      if (r.related(x, l.a)) vact.set(x, l.a, t, verts.find_label({l.tag, x, l.b}));
  }
  Action eact(r, edges.size());
  for (int t = 0; t < edges.size(); ++t) {
    const PointLabel& l = edges.label(t);
    for (int x = 0; x < space.size; ++x)
      if (r.related(x, l.a)) eact.set(x, l.a, t, edges.find_label({l.tag, x, l.b}));
  }

  g.vertices = std::move(verts);
  g.edges = std::move(edges);
  g.vertex_action = std::move(vact);
  g.edge_action = std::move(eact);
  g.vertex_color = std::move(vcolor);
  g.edge_sign = std::move(esign);
  PartialSection d(full);
  for (int x = 0; x < space.size; ++x)
    d.assign[x] = g.edges.find_label(
        {3, x, qedges.space.label(qedges.d_s.at(x)).b});
  g.edge_section = std::move(d);
  return g;
}

void require_full_domains(const std::vector<const EquivRelation*>& rels) {
  for (const auto* r : rels)
    if (!r->domain().is_full())
      fail(ErrorKind::DomainMismatch, "relation must be defined on the whole space");
}

}  // namespace

GraphField bass_serre_free(const EquivRelation& r, const EquivRelation& r1,
                           const EquivRelation& r2) {
  if (!(r.space() == r1.space()) || !(r.space() == r2.space()))
    fail(ErrorKind::SpaceMismatch, "bass_serre_free");
  require_full_domains({&r, &r1, &r2});
  if (!(join(r1, r2) == r))
    fail(ErrorKind::NotGenerated, "bass_serre_free: R is not the join of R1, R2");
  QuotientSpace can = quotient(r, EquivRelation::trivial_full(r.space()));
  return bass_serre_core(r, r1, r2, can);
}

GraphField bass_serre_amalgam(const EquivRelation& r, const EquivRelation& r1,
                              const EquivRelation& r2, const EquivRelation& r3) {
  if (!(r.space() == r1.space()) || !(r.space() == r2.space()) ||
      !(r.space() == r3.space()))
    fail(ErrorKind::SpaceMismatch, "bass_serre_amalgam");
  require_full_domains({&r, &r1, &r2, &r3});
  if (!is_subrelation(r3, intersect(r1, r2)))
    fail(ErrorKind::NotSubrelation, "bass_serre_amalgam: R3 not inside R1 and R2");
  if (!(join(r1, r2) == r))
    fail(ErrorKind::NotGenerated, "bass_serre_amalgam: R is not the join of R1, R2");
  QuotientSpace q3 = quotient(r, r3);
  return bass_serre_core(r, r1, r2, q3);
}

GraphField restrict_field(const GraphField& g, const PointSet& y) {
  PointSet nbase = g.vertices.base_domain().intersect(y);
  EquivRelation over = restrict(g.vertex_action->relation(), nbase);

  std::vector<int> vkeep, vmap(g.vertices.size(), -1);
  std::vector<int> vproj;
  std::vector<PointLabel> vlabels;
  for (int v = 0; v < g.vertices.size(); ++v)
    if (nbase.contains(g.vertices.proj(v))) {
      vmap[v] = static_cast<int>(vkeep.size());
      vkeep.push_back(v);
      vproj.push_back(g.vertices.proj(v));
      vlabels.push_back(g.vertices.label(v));
    }
  std::vector<int> ekeep, emap(g.edges.size(), -1);
  std::vector<int> eproj;
  std::vector<PointLabel> elabels;
  for (int e = 0; e < g.edges.size(); ++e)
    if (nbase.contains(g.edges.proj(e))) {
      emap[e] = static_cast<int>(ekeep.size());
      ekeep.push_back(e);
      eproj.push_back(g.edges.proj(e));
      elabels.push_back(g.edges.label(e));
    }
  std::vector<int> esupport = eproj;

  GraphField out;
  out.vertices =
      FiberedSpace(g.vertices.base(), nbase, std::move(vproj), std::move(vlabels));
  out.edges = FiberedSpace(g.edges.base(), PointSet(g.edges.base(), esupport),
                           std::move(eproj), std::move(elabels));
  for (int e : ekeep) {
    out.origin.push_back(vmap[g.origin[e]]);
    out.terminus.push_back(vmap[g.terminus[e]]);
    out.opposite.push_back(emap[g.opposite[e]]);
  }
  if (g.has_actions()) {
    Action vact(over, out.vertices.size());
    for (int i = 0; i < out.vertices.size(); ++i) {
      int v = vkeep[i];
      int yy = g.vertices.proj(v);
      for (int x : nbase.members())
        if (over.related(x, yy)) vact.set(x, yy, i, vmap[g.vertex_action->raw(x, yy, v)]);
    }
    Action eact(over, out.edges.size());
    for (int i = 0; i < out.edges.size(); ++i) {
      int e = ekeep[i];
      int yy = g.edges.proj(e);
      for (int x : nbase.members())
        if (over.related(x, yy)) eact.set(x, yy, i, emap[g.edge_action->raw(x, yy, e)]);
    }
    out.vertex_action = std::move(vact);
    out.edge_action = std::move(eact);
  }
  if (!g.vertex_color.empty())
    for (int v : vkeep) out.vertex_color.push_back(g.vertex_color[v]);
  for (int e : ekeep) out.edge_sign.push_back(g.edge_sign.empty() ? 0 : g.edge_sign[e]);
  if (g.edge_section) {
    PartialSection d(g.edge_section->domain.intersect(nbase));
    for (int x : d.domain.members()) d.assign[x] = emap[g.edge_section->at(x)];
    out.edge_section = std::move(d);
  }
  return out;
}

GraphField act_by_subrelation(const GraphField& g, const EquivRelation& s) {
  if (!is_subrelation(s, g.vertex_action->relation()))
    fail(ErrorKind::NotSubrelation, "act_by_subrelation");
  GraphField out = g;
  Action vact(s, g.vertices.size());
  for (int v = 0; v < g.vertices.size(); ++v) {
    int y = g.vertices.proj(v);
    for (int x = 0; x < s.space().size; ++x)
      if (s.related(x, y)) vact.set(x, y, v, g.vertex_action->raw(x, y, v));
  }
  Action eact(s, g.edges.size());
  for (int e = 0; e < g.edges.size(); ++e) {
    int y = g.edges.proj(e);
    for (int x = 0; x < s.space().size; ++x)
      if (s.related(x, y)) eact.set(x, y, e, g.edge_action->raw(x, y, e));
  }
  out.vertex_action = std::move(vact);
  out.edge_action = std::move(eact);
  return out;
}

}  // namespace arbo
