#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <unordered_map>
#include <utility>

#include "wntags/ontology/graph.hpp"
#include "wntags/ontology/traversal.hpp"

namespace wntags::ontology {

inline constexpr std::uint32_t kDefaultSimilarityMaxDistance = 30;

// Precomputed relatedness for unordered sense pairs, scores in [0, 1].
class SimilarityTable {
 public:
  // Overwrites an existing entry. Throws score_out_of_range.
  void set(const Sense& a, const Sense& b, double score);
  std::optional<double> get(const Sense& a, const Sense& b) const;
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

 private:
  struct KeyHash {
    std::size_t operator()(const std::pair<Sense, Sense>& k) const noexcept {
      const std::hash<Sense> h;
      return h(k.first) * 31 + h(k.second);
    }
  };
  static std::pair<Sense, Sense> key(const Sense& a, const Sense& b);

  std::unordered_map<std::pair<Sense, Sense>, double, KeyHash> entries_;
};

// SimPairs format: "lemma#pos#n TAB lemma#pos#n TAB score", `#` comments.
// Sense numbers resolve against `graph`. Throws malformed_line,
// score_out_of_range or unknown_sense, each tagged with the line number.
SimilarityTable load_similarity_pairs(std::istream& in, const OntologyGraph& graph);
SimilarityTable load_similarity_pairs(const std::filesystem::path& file, const OntologyGraph& graph);

// Relatedness of two senses. Identical senses score 1; a table entry wins
// next; otherwise 1 / (1 + d) with d the hypernym/hyponym path length,
// or 0 beyond max_distance. Throws unknown_synset / unknown_sense.
double similarity(const Sense& a, const Sense& b, const OntologyGraph& graph,
                  const SimilarityTable* table, std::uint32_t max_distance = kDefaultSimilarityMaxDistance);

// Path-measure value for a hop count.
inline double path_similarity(std::optional<std::uint32_t> distance) {
  return distance ? 1.0 / (1.0 + static_cast<double>(*distance)) : 0.0;
}

// Similarity from one fixed sense to many others. Runs one bounded search
// up front, so each score() is a table probe plus an array lookup.
class SenseSimilarity {
 public:
  SenseSimilarity(const Sense& source, const OntologyGraph& graph, const SimilarityTable* table,
                  std::uint32_t max_distance);

  const Sense& source() const noexcept { return source_; }
  double score(const Sense& other) const;

 private:
  Sense source_;
  const OntologyGraph* graph_;
  const SimilarityTable* table_;
  DistanceField field_;
};

}  // namespace wntags::ontology
