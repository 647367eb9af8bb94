#include "wntags/ontology/traversal.hpp"

#include "wntags/error.hpp"

namespace wntags::ontology {

DistanceField::DistanceField(const OntologyGraph& graph, SynsetId source, RelationSet relations,
                             std::uint32_t max_distance)
    : graph_(&graph) {
  const auto start = graph.index_of(source);
  if (!start) throw Error(Errc::unknown_synset, "unknown synset " + to_string(source));
  const auto allowed = relations.symmetric_closure();
  dist_.assign(graph.synset_count(), kUnreached);
  dist_[*start] = 0;
  order_.push_back(*start);
  for (std::size_t head = 0; head < order_.size(); ++head) {
    const auto u = order_[head];
    const auto du = dist_[u];
    if (du >= max_distance) continue;
    for (const auto& edge : graph.edges(u)) {
      if (!allowed.contains(edge.type) || dist_[edge.target] != kUnreached) continue;
      dist_[edge.target] = du + 1;
      order_.push_back(edge.target);
    }
  }
}

std::optional<std::uint32_t> DistanceField::distance_to(SynsetId target) const {
  const auto idx = graph_->index_of(target);
  if (!idx) throw Error(Errc::unknown_synset, "unknown synset " + to_string(target));
  if (dist_[*idx] == kUnreached) return std::nullopt;
  return dist_[*idx];
}

std::optional<std::uint32_t> node_distance(SynsetId a, SynsetId b, const NeighborhoodConfig& cfg,
                                           const OntologyGraph& graph) {
  cfg.validate();
  if (!graph.contains(b)) throw Error(Errc::unknown_synset, "unknown synset " + to_string(b));
  if (a == b) {
    graph.at(a);
    return 0u;
  }
  return DistanceField(graph, a, cfg.relations, cfg.max_distance).distance_to(b);
}

namespace {

void add_neighbors(const DistanceField& field, const OntologyGraph& graph, std::set<Sense>& out,
                   bool skip_source) {
  for (const auto idx : field.reached()) {
    const auto& synset = graph.node(idx);
    if (skip_source && field.distance_at(idx) == 0) continue;
    for (const auto& lemma : synset.lemmas) out.insert({lemma, synset.id});
  }
}

}  // namespace

std::set<Sense> neighborhood(SynsetId seed, const NeighborhoodConfig& cfg, const OntologyGraph& graph) {
  cfg.validate();
  std::set<Sense> out;
  add_neighbors(DistanceField(graph, seed, cfg.relations, cfg.max_distance), graph, out, false);
  return out;
}

std::set<Sense> neighborhood(const Sense& seed, const NeighborhoodConfig& cfg, const OntologyGraph& graph) {
  cfg.validate();
  const auto& synset = graph.at(seed.synset);
  std::set<Sense> out;
  out.insert(seed);
  if (cfg.include_synonyms) {
    for (const auto& lemma : synset.lemmas) out.insert({lemma, synset.id});
  }
  add_neighbors(DistanceField(graph, seed.synset, cfg.relations, cfg.max_distance), graph, out, true);
  return out;
}

}  // namespace wntags::ontology
