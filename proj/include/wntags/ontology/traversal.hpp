#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "wntags/ontology/graph.hpp"

namespace wntags::ontology {

// Hop counts from one source to every synset reachable within a bound.
// Built by one bounded breadth-first search; lookups are O(1).
class DistanceField {
 public:
  static constexpr std::uint32_t kUnreached = UINT32_MAX;

  DistanceField(const OntologyGraph& graph, SynsetId source, RelationSet relations,
                std::uint32_t max_distance);

  std::optional<std::uint32_t> distance_to(SynsetId target) const;
  // Visited synsets in breadth-first order, the source first.
  const std::vector<OntologyGraph::NodeIndex>& reached() const noexcept { return order_; }
  std::uint32_t distance_at(OntologyGraph::NodeIndex index) const noexcept { return dist_[index]; }

 private:
  const OntologyGraph* graph_;
  std::vector<std::uint32_t> dist_;
  std::vector<OntologyGraph::NodeIndex> order_;
};

// Shortest path length between a and b over edges whose type (or its
// inverse) is in cfg.relations; absent when no path of length
// <= cfg.max_distance exists. Throws unknown_synset.
std::optional<std::uint32_t> node_distance(SynsetId a, SynsetId b, const NeighborhoodConfig& cfg,
                                           const OntologyGraph& graph);

// Every sense of every synset within cfg.max_distance of `seed`, seed
// synset included.
std::set<Sense> neighborhood(SynsetId seed, const NeighborhoodConfig& cfg, const OntologyGraph& graph);

// Sense-seeded variant: the seed sense itself, its synonyms when
// cfg.include_synonyms, and all senses of the other synsets in range.
std::set<Sense> neighborhood(const Sense& seed, const NeighborhoodConfig& cfg, const OntologyGraph& graph);

}  // namespace wntags::ontology
