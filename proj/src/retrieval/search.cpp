#include "wntags/retrieval/search.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <thread>

#include "wntags/error.hpp"
#include "wntags/ontology/lexicon.hpp"
#include "wntags/util/random.hpp"
#include "wntags/util/strings.hpp"

namespace wntags::retrieval {

namespace {

constexpr std::size_t kMaxCollocation = 4;

bool word_byte(unsigned char c) {
  return std::isalnum(c) || c == '-' || c == '\'' || c >= 0x80;
}

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

bool in_range(double v, const std::optional<Range>& r) { return !r || (v >= r->first && v <= r->second); }

void check_range(const std::optional<Range>& r, const char* axis) {
  if (!r) return;
  const auto [lo, hi] = *r;
  constexpr double kMin = repository::EmotionTuple::kMin;
  constexpr double kMax = repository::EmotionTuple::kMax;
  if (!(lo <= hi) || lo < kMin || hi > kMax) {
    throw Error(Errc::invalid_range, std::string(axis) + " range [" + util::format_fixed(lo, 2) + ", " +
                                         util::format_fixed(hi, 2) + "] is not within [1, 9] with min <= max");
  }
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (const char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (word_byte(c)) {
      cur += static_cast<char>(std::tolower(c));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

Query parse_query(std::string_view text, const OntologyGraph& graph) {
  Query q;
  q.raw_text = std::string(text);
  const auto tokens = tokenize(text);
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t used = 0;
    for (std::size_t n = std::min(kMaxCollocation, tokens.size() - i); n >= 1; --n) {
      std::string joined = tokens[i];
      for (std::size_t k = 1; k < n; ++k) joined += "_" + tokens[i + k];
      const auto lemmas = ontology::normalize_lemma_any(joined, graph);
      if (lemmas.empty()) continue;
      for (const auto& lemma : lemmas) {
        if (std::find(q.collocations.begin(), q.collocations.end(), lemma) != q.collocations.end()) continue;
        q.collocations.push_back(lemma);
        for (auto& s : ontology::lookup_senses(lemma, std::nullopt, graph)) {
          if (std::find(q.senses.begin(), q.senses.end(), s) == q.senses.end()) q.senses.push_back(std::move(s));
        }
      }
      used = n;
      break;
    }
    if (used == 0) {
      q.unresolved_tokens.push_back(tokens[i]);
      used = 1;
    }
    i += used;
  }
  if (q.senses.empty()) throw Error(Errc::empty_query, "query '" + q.raw_text + "' matches no sense");
  return q;
}

QueryScorer::QueryScorer(const Query& query, const OntologyGraph& graph, const SimilarityTable* table,
                         std::uint32_t max_distance) {
  per_sense_.reserve(query.senses.size());
  for (const auto& s : query.senses) per_sense_.emplace_back(s, graph, table, max_distance);
}

RankedResult QueryScorer::score(const ImageRecord& image) const {
  if (!image.committed) {
    throw Error(Errc::uncommitted_image, "image " + repository::to_string(image.id) + " is not committed");
  }
  return score_unchecked(image);
}

RankedResult QueryScorer::score_unchecked(const ImageRecord& image) const {
  RankedResult r;
  r.image = image.id;
  std::vector<double> weights;
  weights.reserve(image.annotations.size());
  double mass = 0.0;
  for (const auto& tag : image.annotations) {
    weights.push_back(tag.mean_weight());
    mass += weights.back();
  }
  for (const auto& qs : per_sense_) {
    for (std::size_t j = 0; j < image.annotations.size(); ++j) {
      const auto& tag = image.annotations[j];
      const double sim = qs.score(tag.sense);
      if (sim <= 0.0) continue;
      const double c = weights[j] * sim;
      r.raw_score += c;
      r.matches.push_back({qs.source(), tag.sense, weights[j], sim, c});
    }
  }
  const double denom = static_cast<double>(per_sense_.size()) * mass;
  r.relevance = denom > 0.0 ? std::min(1.0, r.raw_score / denom) : 0.0;
  return r;
}

RankedResult score_image(const Query& query, const ImageRecord& image, const OntologyGraph& graph,
                         const SimilarityTable* table, std::uint32_t max_distance) {
  return QueryScorer(query, graph, table, max_distance).score(image);
}

ImageRecord subsample_tags(const ImageRecord& image, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(Errc::invalid_argument, "subsample fraction must be in (0, 1]");
  }
  const std::size_t n = image.annotations.size();
  const auto keep = std::min(n, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9)));
  if (keep == n) return image;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  util::Rng rng(seed);
  for (std::size_t i = 0; i < keep; ++i) std::swap(idx[i], idx[i + rng.below(n - i)]);
  idx.resize(keep);
  std::sort(idx.begin(), idx.end());
  ImageRecord out = image;
  out.annotations.clear();
  for (const auto i : idx) out.annotations.push_back(image.annotations[i]);
  return out;
}

void validate(const AffectFilter& filter) {
  check_range(filter.valence, "valence");
  check_range(filter.arousal, "arousal");
  check_range(filter.dominance, "dominance");
}

bool passes(const ImageRecord& image, const SearchFilters& filters) {
  if (filters.keyword) {
    if (!image.keyword || util::to_lower(*image.keyword) != util::to_lower(*filters.keyword)) return false;
  }
  if (filters.affect) {
    const auto& f = *filters.affect;
    if (!f.valence && !f.arousal && !f.dominance) return true;
    if (!image.emotion) return false;
    const auto& e = *image.emotion;
    return in_range(e.valence, f.valence) && in_range(e.arousal, f.arousal) && in_range(e.dominance, f.dominance);
  }
  return true;
}

std::vector<RankedResult> search(const Query& query, const Repository& repo, const SimilarityTable* table,
                                 const SearchOptions& options, const SearchFilters& filters) {
  if (filters.affect) validate(*filters.affect);
  ontology::NeighborhoodConfig{options.max_distance}.validate();

  std::vector<const ImageRecord*> pool;
  for (const auto* rec : repo.committed_images()) {
    if (passes(*rec, filters)) pool.push_back(rec);
  }

  const QueryScorer scorer(query, repo.ontology(), table, options.max_distance);
  std::vector<RankedResult> scored(pool.size());
  const auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto& rec = *pool[i];
      if (options.subsample) {
        const auto seed = mix(options.subsample->seed ^ mix(repository::to_integer(rec.id)));
        scored[i] = scorer.score_unchecked(subsample_tags(rec, options.subsample->fraction, seed));
      } else {
        scored[i] = scorer.score_unchecked(rec);
      }
    }
  };

  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, pool.size() / 16)));
  if (threads <= 1) {
    run(0, pool.size());
  } else {
    std::vector<std::jthread> workers;
    const std::size_t chunk = (pool.size() + threads - 1) / threads;
    for (std::size_t begin = 0; begin < pool.size(); begin += chunk) {
      workers.emplace_back(run, begin, std::min(pool.size(), begin + chunk));
    }
  }

  std::vector<RankedResult> out;
  for (auto& r : scored) {
    if (r.raw_score > 0.0 && r.relevance > options.min_relevance) out.push_back(std::move(r));
  }
  const bool by_raw = options.rank_by == RankBy::raw_score;
  std::sort(out.begin(), out.end(), [by_raw](const RankedResult& a, const RankedResult& b) {
    const double ka = by_raw ? a.raw_score : a.relevance;
    const double kb = by_raw ? b.raw_score : b.relevance;
    if (ka != kb) return ka > kb;
    return a.image < b.image;
  });
  if (options.limit && out.size() > *options.limit) out.resize(*options.limit);
  return out;
}

std::vector<RankedResult> search(std::string_view text, const Repository& repo, const SimilarityTable* table,
                                 const SearchOptions& options) {
  return search(parse_query(text, repo.ontology()), repo, table, options);
}

std::vector<RankedResult> search_with_filters(std::string_view text, const Repository& repo,
                                              const SimilarityTable* table, const SearchOptions& options,
                                              const SearchFilters& filters) {
  if (filters.affect) validate(*filters.affect);
  return search(parse_query(text, repo.ontology()), repo, table, options, filters);
}

}  // namespace wntags::retrieval
