#ifndef ARBO_INSTANCE_HPP
#define ARBO_INSTANCE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "arbo/graphing.hpp"
#include "arbo/partial_iso.hpp"
#include "arbo/relation.hpp"

namespace arbo {

/// Parsed instance file: named relations, partial isos and graphings over one
/// space, plus optional declared structure (free product, amalgam,
/// sub-relation, restriction set).
struct InstanceFile {
  int space_size = 1;
  std::vector<std::pair<std::string, EquivRelation>> relations;
  std::vector<std::pair<std::string, PartialIso>> isos;
  std::vector<std::pair<std::string, Graphing>> graphings;

  std::string free_relation;               // declared R = free product of ...
  std::vector<std::string> free_factors;
  std::string amalgam_relation;            // declared R = R1 *_{R3} R2
  std::string amalgam_r1, amalgam_r2, amalgam_core;
  std::string sub_name, sub_of;            // declared sub-relation
  std::optional<std::vector<int>> restrict_set;

  FiniteSpace space() const { return FiniteSpace(space_size); }
  const EquivRelation* find_relation(const std::string& name) const;
  const EquivRelation& relation(const std::string& name) const;
};

/// Line-based structured text, canonical key order; ValidationError on
/// malformed partitions, ParseError with a line number otherwise.
InstanceFile parse_instance(const std::string& text);
std::string serialize_instance(const InstanceFile& inst);

uint64_t fnv1a(const std::string& text);
std::string digest_hex(uint64_t d);
inline uint64_t instance_digest(const InstanceFile& inst) {
  return fnv1a(serialize_instance(inst));
}

}  // namespace arbo

#endif
