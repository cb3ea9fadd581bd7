#ifndef ARBO_GRAPH_OF_RELATIONS_HPP
#define ARBO_GRAPH_OF_RELATIONS_HPP

#include <optional>
#include <string>
#include <vector>

#include "arbo/tree_field.hpp"
#include "arbo/verify.hpp"

namespace arbo {

/// Countable graph carrying a relation per vertex and per directed edge,
/// with an injective relation-morphism from each edge into its terminus.
struct GraphOfRelations {
  struct Edge {
    int origin = -1;
    int terminus = -1;
    int opposite = -1;
    EquivRelation rel;
    PartialIso morphism;  // edge carrier -> terminus carrier
  };
  std::vector<PointSet> vertex_domains;
  std::vector<EquivRelation> vertex_rels;
  std::vector<Edge> edges;
};

struct RootedTreeOfRelations {
  GraphOfRelations graph;
  int root = 0;
};

/// Root carrier is a fundamental domain of the smooth relation generated by
/// the edge partial isos on the disjoint union of vertex carriers.
bool is_rooted(const RootedTreeOfRelations& t);

/// One tree vertex of a represented forest: a vertex section of the field,
/// its stabilizer under the acting relation, and (in factor mode) the
/// conjugator onto a factor restriction.
struct RepVertex {
  int parent = -1;       // tree vertex index, -1 at the root
  int parent_edge = -1;  // index into tree_edges, -1 at the root
  int color = -1;        // field color of the section (1/2), -1 unknown
  PointSet domain;
  EquivRelation relation;   // stabilizer of the section
  PartialSection section;   // representation into the vertex space
  PartialIso conjugator;    // factor mode; empty otherwise
  int factor_index = 0;     // factor mode: 1-based level factor, 0 otherwise
  bool identity_factor = false;
};

struct RepTreeEdge {
  int parent = -1;
  int child = -1;
  EquivRelation relation;  // stabilizer of the edge section
  PartialSection section;  // oriented parent -> child over the child's domain
};

struct ExtraEdge {
  int origin_vertex = -1;
  int terminus_vertex = -1;
  PartialIso phi;          // element of the acting pseudogroup, off-diagonal
  PartialSection section;  // edge section on phi's source
  EquivRelation relation;  // stabilizer of the section (trivial by construction)
};

/// Represented rooted tree of relations, optionally completed by extra edges
/// into a desingularization of the action.
struct Desingularization {
  GraphField field;  // the acted-on field
  std::vector<RepVertex> vertices;
  std::vector<RepTreeEdge> tree_edges;
  std::vector<ExtraEdge> extra_edges;
};

struct DesingOptions {
  /// Seed the construction with the field's distinguished edge section
  /// (available on canonical bi-colored fields).
  bool diagonal_first = false;
  /// Trivialize every stage by restricting it to a fundamental domain of its
  /// stabilizer (the quasi-free construction); forced off by diagonal_first.
  bool trivialize = false;
  /// Factor mode: restrict stages so tree-edge stabilizers are trivial and
  /// each vertex section carries an injective conjugator onto a restriction
  /// of its color's factor.
  bool factor_mode = false;
  const EquivRelation* factor1 = nullptr;        // behind color 1 (full domain)
  const EquivRelation* factor2 = nullptr;        // behind color 2 (full domain)
  const EquivRelation* ambient = nullptr;        // relation the conjugators live in
};

/// Default options for a field: diagonal-first on fields with a distinguished
/// edge section, trivializing otherwise.
DesingOptions default_desing_options(const GraphField& g);

/// Staged construction of an arboretum of representatives.
Desingularization representatives_forest(const GraphField& g,
                                         const DesingOptions& opts);
Desingularization representatives_forest(const GraphField& g);

/// representatives_forest completed with extra edges until the edge-orbit
/// saturations partition the whole edge space.
Desingularization desingularize(const GraphField& g, const DesingOptions& opts);
Desingularization desingularize(const GraphField& g);

struct DesingCheck {
  bool ok = true;
  std::string bullet;         // violated condition, empty when ok
  std::vector<int> witness;
};
DesingCheck validate_desingularization(const Desingularization& d);

/// Forget structure down to the general graph-of-relations type
/// (tree edges become identity-morphism edge pairs).
RootedTreeOfRelations to_rooted_tree(const Desingularization& d);

/// Amalgam statement along the geodesic between two tree vertices (Accept
/// certificate on success).
struct GeodesicAmalgam {
  PointSet common;           // X_{P,Q}
  EquivRelation core;        // intersection of the geodesic edge relations
  EquivRelation joined;      // join of the endpoint restrictions
  ProductCheck certificate;  // amalgam verification result
};
GeodesicAmalgam geodesic_amalgam(const Desingularization& d, int p, int q);

/// R' = join of vertex relations, R'' = relation generated by the extra-edge
/// partial isos, plus the structural checks that make them a generating pair.
struct GenerationSplit {
  EquivRelation r_prime;
  EquivRelation r_double_prime;
  Graphing treeing;  // graphs of the extra-edge isos
  bool trivial_intersections = false;
  bool treeing_ok = false;
  bool generates = false;
  bool translate_coherence = false;
};
GenerationSplit generation_split(const Desingularization& d);

}  // namespace arbo

#endif
