#ifndef ARBO_TREE_FIELD_HPP
#define ARBO_TREE_FIELD_HPP

#include <optional>
#include <vector>

#include "arbo/fibered.hpp"
#include "arbo/graphing.hpp"

namespace arbo {

/// Field of graphs over X: vertex and edge fibered spaces with origin,
/// terminus and opposite maps, optionally carrying a relation action.
struct GraphField {
  FiberedSpace vertices;
  FiberedSpace edges;
  std::vector<int> origin;    // edge point -> vertex point
  std::vector<int> terminus;  // edge point -> vertex point
  std::vector<int> opposite;  // fixed-point-free involution on edge points
  std::optional<Action> vertex_action;
  std::optional<Action> edge_action;
  /// 2-coloring of the vertex carrier for bi-colored fields (-1 when absent).
  std::vector<int> vertex_color;
  /// Distinguished oriented-edge section for canonical constructions.
  std::optional<PartialSection> edge_section;
  /// Oriented-edge subspace marker: +1 / -1 per edge point (0 when unoriented).
  std::vector<int> edge_sign;

  bool has_actions() const { return vertex_action && edge_action; }
};

/// Structural invariants of a graph field (involution, incidences,
/// fiber preservation, equivariance of o, t and the involution).
void validate_graph_field(const GraphField& g);

struct FiberWitness {
  int base_point = -1;
  enum Kind { cycle, disconnected } kind = cycle;
  std::vector<int> vertices;  // cycle vertices, or two component representatives
};

struct TreeCheck {
  bool ok = true;
  std::optional<FiberWitness> witness;
};

/// Every fiber connected and acyclic; otherwise the least offending fiber
/// with a cycle or a disconnection witness.
TreeCheck is_treefield(const GraphField& g);

/// Canonical field of a graphing: vertices = canonical left space of the
/// generated relation, one edge over x per graphing pair in x's class.
struct GraphingField {
  EquivRelation relation;
  GraphField field;
};
GraphingField from_graphing(const Graphing& phi);

/// Fundamental domain of the vertex action (throws on corrupted actions).
std::vector<int> quasi_free_check(const GraphField& g);

/// Sub-forest over a sub-domain whose vertex set is a fundamental domain of
/// the vertex orbit relation, with connected fibers; built stage by stage.
struct Subforest {
  PointSet base;                       // stage-1 domain X1
  std::vector<int> vertex_points;      // sorted vertex carrier subset
  std::vector<int> edge_points;        // edges with both ends inside
  std::vector<PartialSection> stages;  // registered vertex sections, in order
  std::vector<int> parent_stage;       // attachment stage per stage (-1 for first)
};
Subforest fundamental_subforest(const GraphField& a);

/// Fiberwise contraction of every translate of the subforest to a point.
struct Contraction {
  GraphField field;        // contracted tree field
  PartialSection section;  // collapsed points over the subforest base
};
Contraction contract(const GraphField& a, const Subforest& sub);

/// Treeing read off a tree field with a section whose image is a vertex
/// fundamental domain; adds the retraction stars when the section domain is
/// a proper complete sub-domain.
Graphing treeing_from_fd_section(const GraphField& a, const PartialSection& s);

/// fundamental_subforest -> contract -> treeing_from_fd_section.
Graphing extract_treeing(const GraphField& a);

/// Canonical bi-colored field of a pair of full-domain sub-relations:
/// oriented edges = canonical left space of R, vertices = R/R1 and R/R2.
GraphField bass_serre_free(const EquivRelation& r, const EquivRelation& r1,
                           const EquivRelation& r2);

/// Amalgam variant: oriented edges = R/R3.
GraphField bass_serre_amalgam(const EquivRelation& r, const EquivRelation& r1,
                              const EquivRelation& r2, const EquivRelation& r3);

/// Restriction of a field (and its actions) to a base sub-domain.
GraphField restrict_field(const GraphField& g, const PointSet& y);

/// Replace both actions by the action of a sub-relation S of the acting
/// relation (table restriction to S-pairs).
GraphField act_by_subrelation(const GraphField& g, const EquivRelation& s);

}  // namespace arbo

#endif
