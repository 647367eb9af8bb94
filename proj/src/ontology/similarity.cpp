#include "wntags/ontology/similarity.hpp"

#include <cmath>
#include <fstream>

#include "wntags/error.hpp"
#include "wntags/ontology/lexicon.hpp"
#include "wntags/util/strings.hpp"

namespace wntags::ontology {

namespace {

void check_sense(const Sense& s, const OntologyGraph& graph) {
  const auto& synset = graph.at(s.synset);
  for (const auto& lemma : synset.lemmas) {
    if (lemma == s.lemma) return;
  }
  throw Error(Errc::unknown_sense, "lemma '" + s.lemma + "' is not in synset " + to_string(s.synset));
}

const OntologyGraph& checked(const Sense& source, const OntologyGraph& graph,
                            std::uint32_t max_distance) {
  check_sense(source, graph);
  NeighborhoodConfig{max_distance, RelationSet::taxonomy(), true}.validate();
  return graph;
}

}  // namespace

std::pair<Sense, Sense> SimilarityTable::key(const Sense& a, const Sense& b) {
  return a < b ? std::pair{a, b} : std::pair{b, a};
}

void SimilarityTable::set(const Sense& a, const Sense& b, double score) {
  if (!(score >= 0.0 && score <= 1.0)) {
    throw Error(Errc::score_out_of_range, "similarity score " + std::to_string(score) + " outside [0, 1]");
  }
  entries_[key(a, b)] = score;
}

std::optional<double> SimilarityTable::get(const Sense& a, const Sense& b) const {
  if (entries_.empty()) return std::nullopt;
  const auto it = entries_.find(key(a, b));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

SimilarityTable load_similarity_pairs(std::istream& in, const OntologyGraph& graph) {
  SimilarityTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = util::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    try {
      const auto fields = util::split(trimmed, '\t');
      if (fields.size() != 3) {
        throw Error(Errc::malformed_line, "expected 3 tab-separated fields");
      }
      const auto a = resolve_sense_key(fields[0], graph);
      const auto b = resolve_sense_key(fields[1], graph);
      const auto score = util::parse_double(fields[2]);
      if (!score) throw Error(Errc::malformed_line, "bad score '" + std::string(fields[2]) + "'");
      table.set(a, b, *score);
    } catch (const Error& e) {
      Error err(e.code(), "simpairs:" + std::to_string(line_no) + ": " + e.what());
      err.with_line(line_no);
      throw err;
    }
  }
  return table;
}

SimilarityTable load_similarity_pairs(const std::filesystem::path& file, const OntologyGraph& graph) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + file.string());
  return load_similarity_pairs(in, graph);
}

double similarity(const Sense& a, const Sense& b, const OntologyGraph& graph,
                  const SimilarityTable* table, std::uint32_t max_distance) {
  check_sense(a, graph);
  check_sense(b, graph);
  if (a == b) return 1.0;
  if (table != nullptr) {
    if (const auto v = table->get(a, b)) return *v;
  }
  const NeighborhoodConfig cfg{max_distance, RelationSet::taxonomy(), true};
  return path_similarity(node_distance(a.synset, b.synset, cfg, graph));
}

SenseSimilarity::SenseSimilarity(const Sense& source, const OntologyGraph& graph,
                                 const SimilarityTable* table, std::uint32_t max_distance)
    : source_(source),
      graph_(&graph),
      table_(table),
      field_(checked(source, graph, max_distance), source.synset, RelationSet::taxonomy(),
             max_distance) {}

double SenseSimilarity::score(const Sense& other) const {
  if (other == source_) return 1.0;
  if (table_ != nullptr) {
    if (const auto v = table_->get(source_, other)) return *v;
  }
  return path_similarity(field_.distance_to(other.synset));
}

}  // namespace wntags::ontology
