#pragma once

#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "wntags/retrieval/search.hpp"

namespace wntags::evaluation {

using repository::ImageId;

struct JudgedQuery {
  std::string text;
  std::set<ImageId> relevant;

  bool operator==(const JudgedQuery&) const = default;
};

// |relevant in top k| / min(k, |ranked|), 0 for an empty ranking.
// Throws invalid_k for k = 0.
double precision_at_k(std::span<const ImageId> ranked, const std::set<ImageId>& relevant, std::size_t k);

struct RecallProfile {
  std::size_t result_count = 0;
  std::vector<double> normalized_recall;  // index k-1 holds recall at k
};

// Throws empty_judgment.
RecallProfile recall_profile(std::span<const ImageId> ranked, const std::set<ImageId>& relevant);

struct QueryReport {
  std::string query;
  std::size_t result_count = 0;
  std::vector<double> precision_at_k;
  std::vector<double> normalized_recall;
  double average_precision = 0.0;  // mean of precision_at_k, 0 with no results
  std::optional<std::string> error;  // set when the query could not run
};

struct CurvePoint {
  std::size_t rank = 0;
  double mean_precision = 0.0;
  double mean_recall = 0.0;
};

// Failed queries are listed but left out of every mean. A query without
// results counts as precision 0 at rank 1 and is absent from deeper ranks.
struct EvaluationReport {
  std::vector<QueryReport> per_query;
  double mean_precision = 0.0;
  double mean_result_count = 0.0;
  std::vector<CurvePoint> curve;
};

// Produces the ranking for one query. wntags::Error is recorded on the
// query; anything else propagates.
using Ranker = std::function<std::vector<ImageId>(const JudgedQuery&)>;

EvaluationReport run_benchmark(std::span<const JudgedQuery> queries, const Ranker& ranker, unsigned threads = 1);

struct BenchmarkOptions {
  retrieval::SearchOptions search;
  unsigned threads = 1;  // queries evaluated concurrently
};

EvaluationReport run_benchmark(std::span<const JudgedQuery> queries, const retrieval::Repository& repo,
                               const ontology::SimilarityTable* table, const BenchmarkOptions& options = {});

// Header `rank,mean_precision,mean_recall`, six fractional digits, "\n"
// line ends. Throws io_error if the stream fails.
void emit_curve_csv(const EvaluationReport& report, std::ostream& out);

// Lines `query TAB id,id,...`; `#` comments and blank lines skipped.
// Throws malformed_line, empty_judgment.
std::vector<JudgedQuery> read_judged_queries(std::istream& in);
void write_judged_queries(std::span<const JudgedQuery> queries, std::ostream& out);

}  // namespace wntags::evaluation
