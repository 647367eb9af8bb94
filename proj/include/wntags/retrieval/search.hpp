#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wntags/ontology/similarity.hpp"
#include "wntags/repository/repository.hpp"

namespace wntags::retrieval {

using ontology::OntologyGraph;
using ontology::Sense;
using ontology::SimilarityTable;
using repository::ImageId;
using repository::ImageRecord;
using repository::Repository;

inline constexpr std::uint32_t kDefaultSearchMaxDistance = 10;

struct Query {
  std::string raw_text;
  std::vector<std::string> collocations;  // matched lemmas, in query order
  std::vector<Sense> senses;
  std::vector<std::string> unresolved_tokens;
};

// Lowercased tokens. Letters, digits, '-', '\'' and non-ASCII bytes form
// words; everything else separates them.
std::vector<std::string> tokenize(std::string_view text);

// Longest-match collocation scan over up to four tokens. Every sense of
// every matched lemma joins the query. Throws empty_query.
Query parse_query(std::string_view text, const OntologyGraph& graph);

struct MatchDetail {
  Sense query_sense;
  Sense image_sense;
  double mean_weight = 0.0;
  double similarity = 0.0;
  double contribution = 0.0;
};

struct RankedResult {
  ImageId image{};
  double raw_score = 0.0;
  double relevance = 0.0;
  std::vector<MatchDetail> matches;  // pairs with similarity > 0
};

// Scores images against one query. Holds one distance field per query
// sense, so reuse it across images.
class QueryScorer {
 public:
  QueryScorer(const Query& query, const OntologyGraph& graph, const SimilarityTable* table,
              std::uint32_t max_distance);

  // Throws uncommitted_image.
  RankedResult score(const ImageRecord& image) const;
  // Same, without the committed check.
  RankedResult score_unchecked(const ImageRecord& image) const;

 private:
  std::vector<ontology::SenseSimilarity> per_sense_;
};

RankedResult score_image(const Query& query, const ImageRecord& image, const OntologyGraph& graph,
                         const SimilarityTable* table, std::uint32_t max_distance = kDefaultSearchMaxDistance);

// Copy of `image` keeping ceil(fraction * tags) tags chosen uniformly
// without replacement. Original tag order is preserved. Throws
// invalid_argument unless 0 < fraction <= 1.
ImageRecord subsample_tags(const ImageRecord& image, double fraction, std::uint64_t seed);

enum class RankBy { relevance, raw_score };

struct Subsample {
  double fraction = 1.0;
  std::uint64_t seed = 0;
};

struct SearchOptions {
  std::uint32_t max_distance = kDefaultSearchMaxDistance;
  double min_relevance = 0.0;
  std::optional<std::size_t> limit;
  RankBy rank_by = RankBy::relevance;
  // Each image gets its own seed derived from this one and its id.
  std::optional<Subsample> subsample;
  unsigned threads = 1;  // 0 picks the hardware concurrency
};

using Range = std::pair<double, double>;

struct AffectFilter {
  std::optional<Range> valence;
  std::optional<Range> arousal;
  std::optional<Range> dominance;
};

struct SearchFilters {
  std::optional<AffectFilter> affect;
  std::optional<std::string> keyword;  // exact, case-insensitive
};

// Throws invalid_range for min > max or bounds outside [1, 9].
void validate(const AffectFilter& filter);
bool passes(const ImageRecord& image, const SearchFilters& filters);

// Scores every committed image, drops zero scores and results at or below
// min_relevance, orders by the ranking key descending then id ascending.
std::vector<RankedResult> search(const Query& query, const Repository& repo, const SimilarityTable* table,
                                 const SearchOptions& options = {}, const SearchFilters& filters = {});
std::vector<RankedResult> search(std::string_view text, const Repository& repo, const SimilarityTable* table,
                                 const SearchOptions& options = {});
std::vector<RankedResult> search_with_filters(std::string_view text, const Repository& repo,
                                              const SimilarityTable* table, const SearchOptions& options,
                                              const SearchFilters& filters);

}  // namespace wntags::retrieval
