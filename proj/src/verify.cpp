#include "arbo/verify.hpp"

#include <algorithm>

namespace arbo {

namespace {

// R with the factors joined over R's domain (untouched points are singletons).
EquivRelation join_over_domain(const EquivRelation& r,
                               const std::vector<EquivRelation>& factors) {
  std::vector<EquivRelation> parts = factors;
  parts.push_back(EquivRelation::trivial(r.space(), r.domain()));
  return join(parts);
}

void require_generates(const EquivRelation& r,
                       const std::vector<EquivRelation>& factors) {
  EquivRelation jx = join_over_domain(r, factors);
  if (jx == r) return;
  for (int x = 0; x < r.space().size; ++x)
    for (int y = x + 1; y < r.space().size; ++y)
      if (r.related(x, y) != jx.related(x, y))
        fail(ErrorKind::NotGenerated, "join of factors differs from R", {x, y});
  fail(ErrorKind::NotGenerated, "join of factors differs from R");
}

}  // namespace

ProductCheck verify_free_product(const EquivRelation& r,
                                 const std::vector<EquivRelation>& factors) {
  if (factors.empty()) fail(ErrorKind::InvalidArgument, "no factors");
  for (const auto& f : factors) {
    if (!(f.space() == r.space())) fail(ErrorKind::SpaceMismatch, "verify_free_product");
    if (!is_subrelation(f, r))
      fail(ErrorKind::NotGenerated, "factor not a sub-relation of R");
  }
  require_generates(r, factors);

  int nf = static_cast<int>(factors.size());
  for (int krep : r.class_reps()) {
    std::vector<int> pts = r.class_members(krep);
    // Incidence nodes: class points first, then factor classes of size >= 2.
    int np = static_cast<int>(pts.size());
    std::vector<std::pair<int, int>> cls;  // (factor index, class rep)
    for (int i = 0; i < nf; ++i)
      for (int rep : factors[i].class_reps())
        if (r.related(rep, krep) && factors[i].class_members(rep).size() >= 2)
          cls.emplace_back(i, rep);
    int nodes = np + static_cast<int>(cls.size());
    std::vector<std::vector<int>> adj(nodes);
    auto point_pos = [&](int p) {
      return static_cast<int>(std::lower_bound(pts.begin(), pts.end(), p) -
                              pts.begin());
    };
    for (int c = 0; c < static_cast<int>(cls.size()); ++c) {
      auto [i, rep] = cls[c];
      for (int p : factors[i].class_members(rep)) {
        adj[point_pos(p)].push_back(np + c);
        adj[np + c].push_back(point_pos(p));
      }
    }
    // Cycle search from least nodes.
    std::vector<int> parent(nodes, -2);
    for (int start = 0; start < nodes; ++start) {
      if (parent[start] != -2) continue;
      parent[start] = -1;
      std::vector<int> stack{start};
      while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v : adj[u]) {
          if (v == parent[u]) continue;
          if (parent[v] != -2) {
            // Close the cycle through u and v.
            std::vector<int> up;
            for (int w = u; w != -1; w = parent[w]) up.push_back(w);
            std::vector<int> vp;
            for (int w = v; w != -1; w = parent[w]) vp.push_back(w);
            std::vector<bool> on_up(nodes, false);
            for (int w : up) on_up[w] = true;
            int meet = -1;
            for (int w : vp)
              if (on_up[w]) {
                meet = w;
                break;
              }
            std::vector<int> cyc;
            for (int w : up) {
              cyc.push_back(w);
              if (w == meet) break;
            }
            std::vector<int> tail;
            for (int w : vp) {
              if (w == meet) break;
              tail.push_back(w);
            }
            std::reverse(tail.begin(), tail.end());
            cyc.insert(cyc.end(), tail.begin(), tail.end());
            // Canonical form: start at the least point node, direction with
            // the lexicographically smaller point sequence.
            auto is_point = [&](int w) { return w < np; };
            int m = static_cast<int>(cyc.size());
            int best = -1;
            for (int j = 0; j < m; ++j)
              if (is_point(cyc[j]) &&
                  (best < 0 || pts[cyc[j]] < pts[cyc[best]]))
                best = j;
            std::rotate(cyc.begin(), cyc.begin() + best, cyc.end());
            std::vector<int> reversed{cyc[0]};
            for (int j = m - 1; j >= 1; --j) reversed.push_back(cyc[j]);
            auto points_of = [&](const std::vector<int>& c) {
              std::vector<int> out;
              for (int j = 0; j < m; j += 2) out.push_back(pts[c[j]]);
              return out;
            };
            if (points_of(reversed) < points_of(cyc)) cyc = reversed;
            ReducedTuple t;
            t.points = points_of(cyc);
            t.points.push_back(pts[cyc[0]]);
            for (int j = 1; j < m; j += 2)
              t.factor_tags.push_back(cls[cyc[j] - np].first + 1);
            return {false, std::move(t)};
          }
          parent[v] = u;
          stack.push_back(v);
        }
      }
    }
  }
  return {true, std::nullopt};
}

ProductCheck verify_amalgam(const EquivRelation& r, const EquivRelation& r1,
                            const EquivRelation& r2, const EquivRelation& r3) {
  if (!is_subrelation(r3, intersect(r1, r2)))
    fail(ErrorKind::NotSubrelation, "verify_amalgam: core not common");
  require_generates(r, {r1, r2});
  GraphField field = bass_serre_amalgam(r, r1, r2, r3);
  TreeCheck tc = is_treefield(field);
  if (tc.ok) return {true, std::nullopt};
  if (tc.witness->kind != FiberWitness::cycle)
    fail(ErrorKind::NotGenerated, "disconnected fiber despite generation",
         {tc.witness->base_point});
  // Convert the fiber cycle into a closing reduced tuple: each cycle edge is
  // a core-class representative, consecutive edges share a colored vertex.
  int x = tc.witness->base_point;
  std::vector<int> cyc = tc.witness->vertices;
  int m = static_cast<int>(cyc.size());
  // One distinct oriented edge per cycle step (a 2-cycle uses two parallel
  // edges).
  std::vector<bool> used(field.edges.size(), false);
  auto edge_between = [&](int u, int v) -> int {
    for (int e : field.edges.fiber(x))
      if (field.edge_sign[e] > 0 && !used[e] &&
          ((field.origin[e] == u && field.terminus[e] == v) ||
           (field.origin[e] == v && field.terminus[e] == u))) {
        used[e] = true;
        return e;
      }
    fail(ErrorKind::InvalidArgument, "cycle edge not found");
  };
  std::vector<int> reps;
  for (int j = 0; j < m; ++j) {
    int e = edge_between(cyc[j], cyc[(j + 1) % m]);
    reps.push_back(field.edges.label(e).b);
  }
  std::vector<int> tags;
  for (int j = 0; j < m; ++j)
    tags.push_back(field.vertex_color[cyc[(j + 1) % m]]);
  // Canonical form: rotate to the least rep, direction with the smaller
  // rep sequence. Reversing flips the shared-vertex attribution by one.
  int best = 0;
  for (int j = 1; j < m; ++j)
    if (reps[j] < reps[best]) best = j;
  std::rotate(reps.begin(), reps.begin() + best, reps.end());
  std::rotate(tags.begin(), tags.begin() + best, tags.end());
  std::vector<int> rrep{reps[0]}, rtag;
  for (int j = m - 1; j >= 1; --j) rrep.push_back(reps[j]);
  rtag.push_back(tags[m - 1]);
  for (int j = m - 2; j >= 0; --j) rtag.push_back(tags[j]);
  // rtag as built pairs rrep[j], rrep[j+1] via the vertex between them.
  if (rrep < reps) {
    reps = rrep;
    tags = rtag;
  }
  ReducedTuple t;
  t.points = reps;
  t.points.push_back(reps[0]);
  t.factor_tags = tags;
  return {false, std::move(t)};
}

Graphing union_treeing(const Graphing& gr1, const Graphing& gr2) {
  if (!(gr1.space() == gr2.space()))
    fail(ErrorKind::SpaceMismatch, "union_treeing");
  EquivRelation r1 = generated_relation(gr1);
  EquivRelation r2 = generated_relation(gr2);
  EquivRelation r = join(r1, r2);
  ProductCheck cert = verify_free_product(r, {r1, r2});
  if (!cert.accepted) {
    std::vector<int> w = cert.rejection->points;
    fail(ErrorKind::NotFreeProduct, "factors are not in free product", w);
  }
  return gr1.unite(gr2);
}

StabilizerSplit stabilizer_decomposition(const GraphField& g,
                                         const PartialSection& d) {
  if (!g.has_actions()) fail(ErrorKind::InvalidAction, "field carries no actions");
  const EquivRelation& r = g.vertex_action->relation();

  // Oriented edge subspace (positive part when signs are present).
  std::vector<int> keep;
  for (int e = 0; e < g.edges.size(); ++e)
    if (g.edge_sign.empty() || g.edge_sign[e] >= 0) keep.push_back(e);
  std::vector<int> emap(g.edges.size(), -1);
  std::vector<int> proj;
  std::vector<PointLabel> labels;
  for (int i = 0; i < static_cast<int>(keep.size()); ++i) {
    emap[keep[i]] = i;
    proj.push_back(g.edges.proj(keep[i]));
    labels.push_back(g.edges.label(keep[i]));
  }
  std::vector<int> support = proj;
  FiberedSpace eplus(g.edges.base(), PointSet(g.edges.base(), support),
                     std::move(proj), std::move(labels));
  Action eact(g.edge_action->relation(), eplus.size());
  for (int i = 0; i < eplus.size(); ++i) {
    int e = keep[i];
    int y = g.edges.proj(e);
    for (int x = 0; x < r.space().size; ++x)
      if (g.edge_action->relation().related(x, y))
        eact.set(x, y, i, emap[g.edge_action->raw(x, y, e)]);
  }
  PartialSection dplus(d.domain);
  for (int x : d.domain.members()) {
    int e = d.at(x);
    if (emap[e] < 0)
      fail(ErrorKind::HypothesisViolation, "section leaves the oriented part", {x});
    dplus.assign[x] = emap[e];
  }

  EquivRelation rf = detail::orbit_relation_unchecked(eplus, eact);
  PointSet image(FiniteSpace(std::max(eplus.size(), 1)), dplus.image());
  if (classify_domain(rf, image) != DomainClass::both)
    fail(ErrorKind::HypothesisViolation,
         "edge section image is not a fundamental domain of the edge orbits");

  PartialSection od(d.domain), td(d.domain);
  for (int x : d.domain.members()) {
    od.assign[x] = g.origin[d.at(x)];
    td.assign[x] = g.terminus[d.at(x)];
  }
  EquivRelation vrf = detail::orbit_relation_unchecked(g.vertices, *g.vertex_action);
  FiniteSpace vspace(std::max(g.vertices.size(), 1));
  PointSet sat_o = saturate(vrf, PointSet(vspace, od.image()));
  PointSet sat_t = saturate(vrf, PointSet(vspace, td.image()));
  if (!sat_o.intersect(sat_t).empty() ||
      sat_o.size() + sat_t.size() != g.vertices.size())
    fail(ErrorKind::HypothesisViolation,
         "endpoint saturations do not bipartition the vertex space");

  StabilizerSplit out;
  out.r1 = detail::stabilizer_unchecked(g.vertices, *g.vertex_action, od);
  out.r2 = detail::stabilizer_unchecked(g.vertices, *g.vertex_action, td);
  out.restricted = restrict(r, d.domain);
  out.certificate = verify_free_product(out.restricted, {out.r1, out.r2});
  return out;
}

}  // namespace arbo
