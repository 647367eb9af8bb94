#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "wntags/evaluation/benchmark.hpp"

namespace wntags::evaluation {

struct TagCountDistribution {
  enum class Kind { constant, truncated_normal };

  Kind kind = Kind::truncated_normal;
  std::size_t value = 20;  // constant
  double mean = 20.56;
  double sd = 2.77;
  std::size_t min = 13;
  std::size_t max = 28;

  static TagCountDistribution constant(std::size_t n) { return {Kind::constant, n}; }
};

struct SyntheticSpec {
  std::size_t image_count = 100;
  TagCountDistribution tag_counts;
  std::size_t graph_size = 2000;  // synsets, when no ontology is given
  std::size_t query_count = 10;
  std::uint32_t relevance_distance = 1;  // neighbours this close also count as relevant
  std::uint64_t seed = 1;
};

struct SyntheticCorpus {
  std::shared_ptr<const ontology::OntologyGraph> graph;
  repository::Repository repo;
  std::vector<JudgedQuery> queries;
};

// Random taxonomy with one unique lemma per synset, "c<offset>".
std::shared_ptr<const ontology::OntologyGraph> synthetic_ontology(std::size_t synsets, std::uint64_t seed);

// Committed images with sampled tag counts, random ratings and affect.
// Each query names one sense planted on a few images; its relevant set is
// every image holding a tag within relevance_distance of that sense.
// Queries are parsed against the graph, so a supplied ontology should have
// lemmas that resolve to a single sense. Throws invalid_spec.
SyntheticCorpus generate_synthetic_corpus(const SyntheticSpec& spec,
                                          std::shared_ptr<const ontology::OntologyGraph> graph = nullptr);

}  // namespace wntags::evaluation
