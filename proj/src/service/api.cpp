#include "wntags/service/api.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "json.hpp"
#include "wntags/evaluation/benchmark.hpp"
#include "wntags/ontology/lexicon.hpp"
#include "wntags/repository/agreement.hpp"
#include "wntags/repository/persistence.hpp"
#include "wntags/repository/record_json.hpp"
#include "wntags/retrieval/search.hpp"
#include "wntags/util/strings.hpp"

namespace wntags::service {

namespace {

using json = nlohmann::ordered_json;
using repository::ImageId;
using repository::ImageRecord;

constexpr std::size_t kDefaultPageSize = 50;

// Failures that exist only on the wire.
struct WireError {
  int status;
  std::string code;
  std::string message;
};

Response reply(int status, const json& body) { return {status, body.dump(), {}}; }

Response error_reply(int status, std::string_view code, const std::string& message) {
  return reply(status, json{{"code", code}, {"message", message}});
}

Response error_reply(const Error& e) {
  json body{{"code", code_name(e.code())}, {"message", e.what()}};
  if (e.code() == Errc::too_few_senses && e.count()) body["found"] = *e.count();
  if (e.line()) body["line"] = *e.line();
  return reply(http_status(e.code()), body);
}

[[noreturn]] void bad_param(const std::string& name, const std::string& why) {
  throw Error(Errc::invalid_argument, "parameter '" + name + "' " + why);
}

const std::string* param(const Request& r, const std::string& name) {
  const auto it = r.params.find(name);
  return it == r.params.end() ? nullptr : &it->second;
}

template <class Int>
std::optional<Int> int_param(const Request& r, const std::string& name) {
  const auto* v = param(r, name);
  if (!v) return std::nullopt;
  const auto parsed = util::parse_int<Int>(util::trim(*v));
  if (!parsed) bad_param(name, "is not a non-negative integer");
  return parsed;
}

std::optional<double> double_param(const Request& r, const std::string& name) {
  const auto* v = param(r, name);
  if (!v) return std::nullopt;
  const auto parsed = util::parse_double(util::trim(*v));
  if (!parsed || !std::isfinite(*parsed)) bad_param(name, "is not a number");
  return parsed;
}

std::optional<bool> bool_param(const Request& r, const std::string& name) {
  const auto* v = param(r, name);
  if (!v) return std::nullopt;
  const auto s = util::to_lower(util::trim(*v));
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  bad_param(name, "must be true or false");
}

// "a..b" with both ends given.
std::optional<retrieval::Range> range_param(const Request& r, const std::string& name) {
  const auto* v = param(r, name);
  if (!v) return std::nullopt;
  const auto dots = v->find("..");
  const auto lo = dots == std::string::npos ? std::nullopt : util::parse_double(util::trim(v->substr(0, dots)));
  const auto hi = dots == std::string::npos ? std::nullopt : util::parse_double(util::trim(v->substr(dots + 2)));
  if (!lo || !hi) throw Error(Errc::invalid_range, "parameter '" + name + "' must look like a..b");
  return retrieval::Range{*lo, *hi};
}

std::uint32_t max_distance_param(const Request& r, std::uint32_t fallback) {
  const auto d = int_param<std::uint32_t>(r, "maxd").value_or(fallback);
  ontology::NeighborhoodConfig{d}.validate();
  return d;
}

ImageId image_id(std::string_view text) {
  const auto id = util::parse_int<std::uint64_t>(text);
  if (!id) throw Error(Errc::unknown_image, "no image '" + std::string(text) + "'");
  return ImageId{*id};
}

json sense_json(const ontology::Sense& s) {
  return {{"lemma", s.lemma}, {"pos", std::string(1, ontology::pos_letter(s.synset.pos))}, {"offset", s.synset.offset}};
}

json summary_json(const ImageRecord& rec) {
  json full = repository::record_to_json(rec);
  json tags = json::array();
  for (const auto& tag : rec.annotations) {
    json t = sense_json(tag.sense);
    t["mean_weight"] = tag.mean_weight();
    t["raters"] = tag.ratings.size();
    tags.push_back(std::move(t));
  }
  return {{"id", full["id"]},          {"uri", full["uri"]},     {"keyword", full["keyword"]},
          {"emotion", full["emotion"]}, {"tags", std::move(tags)}, {"committed", rec.committed}};
}

bool is_json_content(const std::string& content_type) {
  const auto lower = util::to_lower(content_type);
  return lower.rfind("application/json", 0) == 0;
}

json parse_body(const Request& r) {
  if (!is_json_content(r.content_type)) {
    throw WireError{415, "unsupported_media_type", "POST bodies must be application/json"};
  }
  try {
    auto body = json::parse(r.body);
    if (!body.is_object()) throw WireError{400, "malformed_json", "request body must be a JSON object"};
    return body;
  } catch (const json::parse_error& e) {
    throw WireError{400, "malformed_json", e.what()};
  }
}

template <class T>
T field(const json& body, const char* name) {
  if (!body.contains(name) || body[name].is_null()) bad_param(name, "is required");
  try {
    return body[name].get<T>();
  } catch (const json::exception&) {
    bad_param(name, "has the wrong type");
  }
}

template <class T>
std::optional<T> optional_field(const json& body, const char* name) {
  if (!body.contains(name) || body[name].is_null()) return std::nullopt;
  return field<T>(body, name);
}

json ranked_json(const retrieval::RankedResult& r, const repository::Repository& repo) {
  json matches = json::array();
  for (const auto& m : r.matches) {
    matches.push_back({{"query_sense", sense_json(m.query_sense)},
                       {"image_sense", sense_json(m.image_sense)},
                       {"mean_weight", m.mean_weight},
                       {"similarity", m.similarity},
                       {"contribution", m.contribution}});
  }
  return {{"id", repository::to_integer(r.image)},
          {"uri", repo.get(r.image).uri},
          {"raw_score", r.raw_score},
          {"relevance", r.relevance},
          {"matches", std::move(matches)}};
}

}  // namespace

int http_status(Errc code) noexcept {
  switch (code) {
    case Errc::unknown_image:
    case Errc::unknown_synset:
      return 404;
    case Errc::empty_query:
    case Errc::malformed_line:
    case Errc::malformed_record:
    case Errc::dangling_pointer:
    case Errc::duplicate_offset:
      return 400;
    case Errc::too_few_senses:
    case Errc::uncommitted_image:
      return 409;
    case Errc::unknown_sense:
    case Errc::score_out_of_range:
    case Errc::emotion_out_of_range:
    case Errc::weight_out_of_range:
    case Errc::empty_ratings:
    case Errc::insufficient_raters:
    case Errc::invalid_range:
    case Errc::invalid_k:
    case Errc::empty_judgment:
    case Errc::invalid_spec:
    case Errc::invalid_argument:
      return 422;
    case Errc::io_error:
      return 500;
  }
  return 500;
}

Api::Api(repository::Repository repo, std::shared_ptr<const ontology::SimilarityTable> table, ApiOptions options)
    : repo_(std::move(repo)), table_(std::move(table)), options_(std::move(options)) {
  ontology::NeighborhoodConfig{options_.max_distance}.validate();
}

repository::Repository Api::snapshot() const {
  std::shared_lock lock(mutex_);
  return repo_;
}

void Api::flush() {
  std::unique_lock lock(mutex_);
  flush_locked();
}

void Api::flush_locked() {
  if (options_.repo_file) repository::save_file(repo_, *options_.repo_file);
}

Response Api::handle(const Request& request) {
  Response out;
  try {
    out = dispatch(request);
  } catch (const Error& e) {
    out = error_reply(e);
  } catch (const WireError& e) {
    out = error_reply(e.status, e.code, e.message);
  } catch (const std::exception& e) {
    out = error_reply(500, "internal", e.what());
  }
  out.headers.emplace("Content-Type", "application/json");
  return out;
}

Response Api::dispatch(const Request& r) {
  auto parts = util::split(r.path, '/');
  parts.erase(std::remove(parts.begin(), parts.end(), std::string_view{}), parts.end());
  const bool get = r.method == "GET", post = r.method == "POST";
  const auto route = [&](bool ok) {
    if (!ok) throw WireError{405, "method_not_allowed", r.method + " is not allowed on " + r.path};
  };
  if (parts.size() < 2 || parts[0] != "api") throw WireError{404, "not_found", "no route " + r.path};

  const auto& head = parts[1];
  if (head == "images") {
    if (parts.size() == 2) {
      route(get || post);
      return get ? list_images(r) : create_image(r);
    }
    if (parts.size() == 3) {
      route(get);
      return get_image(parts[2]);
    }
    if (parts.size() == 4 && parts[3] == "annotations") {
      route(post);
      return annotate(parts[2], r);
    }
    if (parts.size() == 4 && parts[3] == "commit") {
      route(post);
      return commit(parts[2]);
    }
  } else if (head == "search" && parts.size() == 2) {
    route(get);
    return search(r);
  } else if (head == "ontology" && parts.size() == 3 && parts[2] == "senses") {
    route(get);
    return senses(r);
  } else if (head == "ontology" && parts.size() == 4 && parts[2] == "synsets") {
    route(get);
    return synset(parts[3]);
  } else if (head == "stats" && parts.size() == 2) {
    route(get);
    return stats();
  } else if (head == "stats" && parts.size() == 3 && parts[2] == "agreement") {
    route(get);
    return agreement(r);
  } else if (head == "evaluate" && parts.size() == 2) {
    route(post);
    return evaluate(r);
  }
  throw WireError{404, "not_found", "no route " + r.path};
}

Response Api::list_images(const Request& r) const {
  const auto committed = bool_param(r, "committed");
  const auto offset = int_param<std::size_t>(r, "offset").value_or(0);
  const auto limit = int_param<std::size_t>(r, "limit").value_or(kDefaultPageSize);
  std::shared_lock lock(mutex_);
  json items = json::array();
  std::size_t total = 0;
  for (const auto& [id, rec] : repo_.images()) {
    if (committed && rec.committed != *committed) continue;
    if (total >= offset && items.size() < limit) items.push_back(summary_json(rec));
    ++total;
  }
  auto out = reply(200, items);
  out.headers["X-Total-Count"] = std::to_string(total);
  return out;
}

Response Api::get_image(std::string_view id) const {
  std::shared_lock lock(mutex_);
  return reply(200, repository::record_to_json(repo_.get(image_id(id))));
}

Response Api::create_image(const Request& r) {
  const auto body = parse_body(r);
  const auto uri = field<std::string>(body, "uri");
  const auto keyword = optional_field<std::string>(body, "keyword");
  std::optional<repository::EmotionTuple> emotion;
  if (body.contains("emotion") && !body["emotion"].is_null()) {
    const auto& e = body["emotion"];
    if (!e.is_object()) bad_param("emotion", "must be an object");
    emotion = repository::EmotionTuple::make(field<double>(e, "val"), field<double>(e, "ar"), field<double>(e, "dom"));
  }
  std::unique_lock lock(mutex_);
  const auto& rec = repo_.add_image(uri, keyword, emotion);
  auto out = reply(201, repository::record_to_json(rec));
  flush_locked();
  return out;
}

Response Api::annotate(std::string_view id, const Request& r) {
  const auto body = parse_body(r);
  const auto lemma = field<std::string>(body, "lemma");
  const auto pos_text = field<std::string>(body, "pos");
  const auto offset = field<std::uint32_t>(body, "offset");
  const auto weight = field<double>(body, "weight");
  const auto annotator = field<std::string>(body, "annotator");
  const auto pos = ontology::pos_from_string(pos_text);
  if (!pos) bad_param("pos", "must be one of n, v, a, r");
  const ImageId image = image_id(id);
  std::unique_lock lock(mutex_);
  const auto& rec = repo_.annotate(image, {ontology::normalize_surface(lemma), {*pos, offset}}, weight, annotator);
  auto out = reply(200, repository::record_to_json(rec));
  flush_locked();
  return out;
}

Response Api::commit(std::string_view id) {
  const ImageId image = image_id(id);
  std::unique_lock lock(mutex_);
  const auto& rec = repo_.commit_image(image);
  auto out = reply(200, repository::record_to_json(rec));
  flush_locked();
  return out;
}

Response Api::search(const Request& r) const {
  const auto* q = param(r, "q");
  if (!q || util::trim(*q).empty()) throw Error(Errc::empty_query, "parameter 'q' is empty");
  retrieval::SearchOptions options;
  options.max_distance = max_distance_param(r, options_.max_distance);
  options.min_relevance = double_param(r, "minrel").value_or(0.0);
  options.limit = int_param<std::size_t>(r, "limit");
  if (const auto* rank = param(r, "rank")) {
    if (*rank == "raw") {
      options.rank_by = retrieval::RankBy::raw_score;
    } else if (*rank != "relevance") {
      bad_param("rank", "must be relevance or raw");
    }
  }
  if (const auto f = double_param(r, "subsample")) {
    options.subsample = retrieval::Subsample{*f, int_param<std::uint64_t>(r, "seed").value_or(0)};
  }
  retrieval::SearchFilters filters;
  retrieval::AffectFilter affect{range_param(r, "val"), range_param(r, "ar"), range_param(r, "dom")};
  if (affect.valence || affect.arousal || affect.dominance) filters.affect = affect;
  if (const auto* kw = param(r, "keyword"); kw && !kw->empty()) filters.keyword = *kw;

  std::shared_lock lock(mutex_);
  const auto results = retrieval::search_with_filters(*q, repo_, table_.get(), options, filters);
  json items = json::array();
  for (const auto& res : results) items.push_back(ranked_json(res, repo_));
  auto out = reply(200, items);
  out.headers["X-Total-Count"] = std::to_string(results.size());
  return out;
}

Response Api::senses(const Request& r) const {
  const auto* lemma = param(r, "lemma");
  if (!lemma || util::trim(*lemma).empty()) bad_param("lemma", "is required");
  std::optional<ontology::PartOfSpeech> pos;
  if (const auto* p = param(r, "pos"); p && !p->empty()) {
    pos = ontology::pos_from_string(*p);
    if (!pos) bad_param("pos", "must be one of n, v, a, r");
  }
  const auto& graph = repo_.ontology();  // immutable, no lock needed
  const auto surface = ontology::normalize_surface(util::trim(*lemma));
  const bool direct = pos ? graph.has_lemma(surface, *pos) : graph.has_lemma(surface);
  std::vector<std::string> lemmas;
  if (direct) {
    lemmas.push_back(surface);
  } else {
    lemmas = pos ? ontology::normalize_lemma(surface, *pos, graph) : ontology::normalize_lemma_any(surface, graph);
  }
  json items = json::array();
  for (const auto& l : lemmas) {
    for (const auto& s : ontology::lookup_senses(l, pos, graph)) {
      const auto& syn = graph.at(s.synset);
      json item = sense_json(s);
      item["key"] = ontology::sense_key(s, graph);
      item["gloss"] = syn.gloss;
      item["synonyms"] = syn.lemmas;
      item["stemmed"] = !direct;
      items.push_back(std::move(item));
    }
  }
  return reply(200, items);
}

Response Api::synset(std::string_view id) const {
  const auto parsed = ontology::parse_synset_id(id);
  if (!parsed) throw Error(Errc::unknown_synset, "no synset '" + std::string(id) + "'");
  const auto& syn = repo_.ontology().at(*parsed);
  json relations = json::array();
  for (const auto& rel : syn.relations) {
    relations.push_back({{"type", ontology::relation_name(rel.type)}, {"target", ontology::to_string(rel.target)}});
  }
  return reply(200, json{{"id", ontology::to_string(syn.id)},
                         {"pos", std::string(1, ontology::pos_letter(syn.id.pos))},
                         {"offset", syn.id.offset},
                         {"lemmas", syn.lemmas},
                         {"gloss", syn.gloss},
                         {"relations", std::move(relations)}});
}

Response Api::stats() const {
  std::shared_lock lock(mutex_);
  const auto s = repository::corpus_stats(repo_);
  return reply(200, json{{"empty", s.empty},
                         {"image_count", s.image_count},
                         {"tag_count_median", s.tag_count_median},
                         {"tag_count_mean", s.tag_count_mean},
                         {"tag_count_sd", s.tag_count_sd},
                         {"tag_count_min", s.tag_count_min},
                         {"tag_count_max", s.tag_count_max},
                         {"distinct_synset_count", s.distinct_synset_count}});
}

Response Api::agreement(const Request& r) const {
  repository::AgreementOptions opts;
  opts.bins = int_param<std::size_t>(r, "bins").value_or(opts.bins);
  opts.inadequate_below = double_param(r, "threshold").value_or(opts.inadequate_below);
  std::shared_lock lock(mutex_);
  const auto report = repository::agreement_report(repo_, opts);
  json tags = json::array();
  for (const auto& t : report.tags) {
    json item{{"image_id", repository::to_integer(t.image)}};
    item.update(sense_json(t.sense));
    item["kappa"] = t.kappa;
    item["raters"] = t.raters;
    item["observed"] = t.observed;
    item["expected"] = t.expected;
    item["inadequate"] = t.inadequate;
    tags.push_back(std::move(item));
  }
  return reply(200, json{{"kappa", report.rated_tags ? json(report.kappa) : json(nullptr)},
                         {"rated_tags", report.rated_tags},
                         {"bins", opts.bins},
                         {"threshold", opts.inadequate_below},
                         {"tags", std::move(tags)}});
}

Response Api::evaluate(const Request& r) const {
  const auto body = parse_body(r);
  if (!body.contains("queries") || !body["queries"].is_array()) bad_param("queries", "must be an array");
  std::vector<evaluation::JudgedQuery> queries;
  for (const auto& q : body["queries"]) {
    if (!q.is_object()) bad_param("queries", "must hold objects");
    evaluation::JudgedQuery jq{field<std::string>(q, "query"), {}};
    for (const auto id : field<std::vector<std::uint64_t>>(q, "relevant")) jq.relevant.insert(ImageId{id});
    queries.push_back(std::move(jq));
  }
  evaluation::BenchmarkOptions opts;
  opts.search.max_distance = optional_field<std::uint32_t>(body, "maxd").value_or(options_.max_distance);
  ontology::NeighborhoodConfig{opts.search.max_distance}.validate();
  if (const auto f = optional_field<double>(body, "subsample")) {
    opts.search.subsample = retrieval::Subsample{*f, optional_field<std::uint64_t>(body, "seed").value_or(0)};
  }

  std::shared_lock lock(mutex_);
  const auto report = evaluation::run_benchmark(queries, repo_, table_.get(), opts);
  json per_query = json::array();
  for (const auto& q : report.per_query) {
    per_query.push_back({{"query", q.query},
                         {"result_count", q.result_count},
                         {"average_precision", q.average_precision},
                         {"precision_at_k", q.precision_at_k},
                         {"normalized_recall", q.normalized_recall},
                         {"error", q.error ? json(*q.error) : json(nullptr)}});
  }
  json curve = json::array();
  for (const auto& p : report.curve) {
    curve.push_back({{"rank", p.rank}, {"mean_precision", p.mean_precision}, {"mean_recall", p.mean_recall}});
  }
  return reply(200, json{{"mean_precision", report.mean_precision},
                         {"mean_result_count", report.mean_result_count},
                         {"per_query", std::move(per_query)},
                         {"curve", std::move(curve)}});
}

}  // namespace wntags::service
