#include "wntags/evaluation/benchmark.hpp"

#include <algorithm>
#include <thread>

#include "wntags/error.hpp"
#include "wntags/util/strings.hpp"

namespace wntags::evaluation {

namespace {

std::size_t hits_in_prefix(std::span<const ImageId> ranked, const std::set<ImageId>& relevant, std::size_t k) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i) hits += relevant.count(ranked[i]);
  return hits;
}

QueryReport evaluate_query(const JudgedQuery& q, const Ranker& ranker) {
  QueryReport r;
  r.query = q.text;
  std::vector<ImageId> ranked;
  try {
    if (q.relevant.empty()) throw Error(Errc::empty_judgment, "query '" + q.text + "' has no relevant images");
    ranked = ranker(q);
  } catch (const Error& e) {
    r.error = std::string(code_name(e.code())) + ": " + e.what();
    return r;
  }
  const auto profile = recall_profile(ranked, q.relevant);
  r.result_count = profile.result_count;
  r.normalized_recall = profile.normalized_recall;
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 1; k <= ranked.size(); ++k) {
    hits += q.relevant.count(ranked[k - 1]);
    r.precision_at_k.push_back(static_cast<double>(hits) / static_cast<double>(k));
    sum += r.precision_at_k.back();
  }
  r.average_precision = ranked.empty() ? 0.0 : sum / static_cast<double>(ranked.size());
  return r;
}

}  // namespace

double precision_at_k(std::span<const ImageId> ranked, const std::set<ImageId>& relevant, std::size_t k) {
  if (k == 0) throw Error(Errc::invalid_k, "k must be at least 1");
  if (ranked.empty()) return 0.0;
  return static_cast<double>(hits_in_prefix(ranked, relevant, k)) /
         static_cast<double>(std::min(k, ranked.size()));
}

RecallProfile recall_profile(std::span<const ImageId> ranked, const std::set<ImageId>& relevant) {
  if (relevant.empty()) throw Error(Errc::empty_judgment, "relevant set is empty");
  RecallProfile p;
  p.result_count = ranked.size();
  std::size_t hits = 0;
  for (const auto id : ranked) {
    hits += relevant.count(id);
    p.normalized_recall.push_back(static_cast<double>(hits) / static_cast<double>(relevant.size()));
  }
  return p;
}

EvaluationReport run_benchmark(std::span<const JudgedQuery> queries, const Ranker& ranker, unsigned threads) {
  if (queries.empty()) throw Error(Errc::empty_judgment, "no queries to evaluate");
  EvaluationReport report;
  report.per_query.resize(queries.size());

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, queries.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < queries.size(); ++i) report.per_query[i] = evaluate_query(queries[i], ranker);
  } else {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&, t] {
        for (std::size_t i = t; i < queries.size(); i += threads) {
          report.per_query[i] = evaluate_query(queries[i], ranker);
        }
      });
    }
  }

  std::size_t ran = 0, depth = 0;
  double precision_sum = 0.0, count_sum = 0.0;
  for (const auto& q : report.per_query) {
    if (q.error) continue;
    ++ran;
    precision_sum += q.average_precision;
    count_sum += static_cast<double>(q.result_count);
    depth = std::max(depth, q.result_count);
  }
  if (ran == 0) return report;
  report.mean_precision = precision_sum / static_cast<double>(ran);
  report.mean_result_count = count_sum / static_cast<double>(ran);

  for (std::size_t k = 1; k <= depth; ++k) {
    double p = 0.0, r = 0.0;
    std::size_t n = 0;
    for (const auto& q : report.per_query) {
      if (q.error) continue;
      if (q.result_count >= k) {
        p += q.precision_at_k[k - 1];
        r += q.normalized_recall[k - 1];
        ++n;
      } else if (k == 1) {
        ++n;
      }
    }
    report.curve.push_back({k, p / static_cast<double>(n), r / static_cast<double>(n)});
  }
  return report;
}

EvaluationReport run_benchmark(std::span<const JudgedQuery> queries, const retrieval::Repository& repo,
                               const ontology::SimilarityTable* table, const BenchmarkOptions& options) {
  auto search_options = options.search;
  search_options.threads = 1;
  const Ranker ranker = [&](const JudgedQuery& q) {
    for (const auto id : q.relevant) {
      if (!repo.find(id)) throw Error(Errc::unknown_image, "judged image " + repository::to_string(id) + " not found");
    }
    std::vector<ImageId> ids;
    for (const auto& r : retrieval::search(q.text, repo, table, search_options)) ids.push_back(r.image);
    return ids;
  };
  return run_benchmark(queries, ranker, options.threads);
}

void emit_curve_csv(const EvaluationReport& report, std::ostream& out) {
  out << "rank,mean_precision,mean_recall\n";
  for (const auto& p : report.curve) {
    out << p.rank << ',' << util::format_fixed(p.mean_precision, 6) << ',' << util::format_fixed(p.mean_recall, 6)
        << '\n';
  }
  out.flush();
  if (!out) throw Error(Errc::io_error, "failed to write curve csv");
}

std::vector<JudgedQuery> read_judged_queries(std::istream& in) {
  std::vector<JudgedQuery> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto trimmed = util::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto fields = util::split(line, '\t');
    if (fields.size() != 2 || util::trim(fields[0]).empty()) {
      throw Error(Errc::malformed_line, "queries:" + std::to_string(number) + ": expected query TAB ids")
          .with_line(number);
    }
    JudgedQuery q{std::string(util::trim(fields[0])), {}};
    for (const auto part : util::split(fields[1], ',')) {
      const auto t = util::trim(part);
      if (t.empty()) continue;
      const auto id = util::parse_int<std::uint64_t>(t);
      if (!id) {
        throw Error(Errc::malformed_line, "queries:" + std::to_string(number) + ": bad image id '" +
                                              std::string(t) + "'")
            .with_line(number);
      }
      q.relevant.insert(ImageId{*id});
    }
    if (q.relevant.empty()) {
      throw Error(Errc::empty_judgment, "queries:" + std::to_string(number) + ": no relevant ids").with_line(number);
    }
    out.push_back(std::move(q));
  }
  return out;
}

void write_judged_queries(std::span<const JudgedQuery> queries, std::ostream& out) {
  for (const auto& q : queries) {
    out << q.text << '\t';
    bool first = true;
    for (const auto id : q.relevant) {
      out << (first ? "" : ",") << repository::to_integer(id);
      first = false;
    }
    out << '\n';
  }
}

}  // namespace wntags::evaluation
