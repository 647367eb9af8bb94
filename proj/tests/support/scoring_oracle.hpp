#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "support/graph_oracle.hpp"
#include "wntags/ontology/parsers.hpp"
#include "wntags/ontology/similarity.hpp"
#include "wntags/repository/repository.hpp"
#include "wntags/util/random.hpp"

namespace oracle {

using wntags::ontology::OntologyGraph;
using wntags::ontology::Sense;
using wntags::ontology::SimilarityTable;
using wntags::repository::ImageRecord;
using wntags::repository::Repository;

inline wntags::ontology::SynsetId noun(std::uint32_t offset) { return {wntags::ontology::PartOfSpeech::Noun, offset}; }

// Random corpus over a random graph plus an oracle that knows the raw
// edges. Similarity in the oracle comes from the test BFS, never from the
// library traversal.
struct ScoringFixture {
  oracle::RawGraph raw;
  std::shared_ptr<const OntologyGraph> graph;
  Repository repo;
  std::map<std::pair<std::string, std::string>, double> table_entries;
  SimilarityTable table;

  ScoringFixture(std::uint64_t seed, int nodes, int images, int tags_per_image)
      : raw(oracle::random_graph(seed, nodes)), graph(load(raw)), repo(graph) {
    wntags::util::Rng rng(seed * 7 + 1);
    for (int i = 0; i < images; ++i) {
      const auto id = repo.add_image("img" + std::to_string(i)).id;
      std::set<int> nodes_used;
      while (static_cast<int>(nodes_used.size()) < tags_per_image) nodes_used.insert(static_cast<int>(rng.below(nodes)));
      for (int v : nodes_used) {
        const auto& lemmas = raw.lemmas[v];
        const Sense s{lemmas[rng.below(lemmas.size())], noun(v + 1)};
        const int raters = 1 + static_cast<int>(rng.below(3));
        for (int r = 0; r < raters; ++r) repo.annotate(id, s, rng.uniform(), "r" + std::to_string(r));
      }
      repo.commit_image(id);
    }
  }

  static std::shared_ptr<const OntologyGraph> load(const oracle::RawGraph& raw) {
    std::istringstream in(raw.to_simple_graph());
    return std::make_shared<const OntologyGraph>(wntags::ontology::parse_simple_graph(in));
  }

  static std::string key(const Sense& s) { return s.lemma + "@" + std::to_string(s.synset.offset); }

  void add_table_entry(const Sense& a, const Sense& b, double v) {
    table.set(a, b, v);
    table_entries[{key(a), key(b)}] = v;
    table_entries[{key(b), key(a)}] = v;
  }

  double oracle_sim(const Sense& a, const Sense& b, int max_d) const {
    if (a == b) return 1.0;
    if (auto it = table_entries.find({key(a), key(b)}); it != table_entries.end()) return it->second;
    const bool taxonomy[4] = {true, true, false, false};
    const int d = oracle::bfs(raw, static_cast<int>(a.synset.offset) - 1, taxonomy, max_d)[b.synset.offset - 1];
    return d < 0 ? 0.0 : 1.0 / (1.0 + d);
  }

  // Literal double loop over the cross product.
  std::pair<double, double> oracle_score(const std::vector<Sense>& qs, const ImageRecord& img, int max_d) const {
    double raw_score = 0.0;
    for (const auto& q : qs) {
      for (const auto& tag : img.annotations) {
        double sum = 0.0;
        for (const auto& r : tag.ratings) sum += r.weight;
        raw_score += sum / static_cast<double>(tag.ratings.size()) * oracle_sim(q, tag.sense, max_d);
      }
    }
    double mass = 0.0;
    for (const auto& tag : img.annotations) {
      double sum = 0.0;
      for (const auto& r : tag.ratings) sum += r.weight;
      mass += sum / static_cast<double>(tag.ratings.size());
    }
    const double denom = static_cast<double>(qs.size()) * mass;
    return {raw_score, denom > 0 ? raw_score / denom : 0.0};
  }

  std::vector<Sense> random_query(wntags::util::Rng& rng, int count) const {
    std::vector<Sense> qs;
    while (static_cast<int>(qs.size()) < count) {
      const int v = static_cast<int>(rng.below(raw.nodes));
      Sense s{raw.lemmas[v][0], noun(v + 1)};
      if (std::find(qs.begin(), qs.end(), s) == qs.end()) qs.push_back(s);
    }
    return qs;
  }
};

}  // namespace oracle
