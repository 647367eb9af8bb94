#include "wntags/repository/repository.hpp"

#include <algorithm>
#include <cmath>

#include "wntags/error.hpp"
#include "wntags/ontology/traversal.hpp"

namespace wntags::repository {

namespace {

Timestamp system_now() {
  return std::chrono::time_point_cast<std::chrono::milliseconds>(std::chrono::system_clock::now());
}

void check_weight(double weight) {
  if (!(weight >= 0.0 && weight <= 1.0)) {
    throw Error(Errc::weight_out_of_range, "weight " + std::to_string(weight) + " outside [0, 1]");
  }
}

}  // namespace

Repository::Repository(std::shared_ptr<const ontology::OntologyGraph> graph, Clock clock)
    : graph_(std::move(graph)), clock_(clock ? std::move(clock) : Clock(system_now)) {
  if (!graph_) throw Error(Errc::invalid_argument, "repository needs an ontology");
}

const ImageRecord& Repository::add_image(std::string uri, std::optional<std::string> keyword,
                                         std::optional<EmotionTuple> emotion) {
  ImageRecord record;
  record.id = ImageId{next_id_};
  record.uri = std::move(uri);
  record.keyword = std::move(keyword);
  record.emotion = emotion;
  return insert(std::move(record));
}

void Repository::check_sense(const Sense& sense) const {
  if (!graph_->has_sense(sense)) {
    throw Error(Errc::unknown_sense, "unknown sense " + ontology::to_string(sense));
  }
}

ImageRecord& Repository::mutable_record(ImageId id) {
  const auto it = images_.find(id);
  if (it == images_.end()) throw Error(Errc::unknown_image, "unknown image " + to_string(id));
  return it->second;
}

const ImageRecord& Repository::annotate(ImageId id, const Sense& sense, double weight,
                                        const std::string& annotator) {
  return annotate(id, sense, weight, annotator, clock_());
}

const ImageRecord& Repository::annotate(ImageId id, const Sense& sense, double weight,
                                        const std::string& annotator, Timestamp at) {
  auto& record = mutable_record(id);
  check_sense(sense);
  check_weight(weight);
  if (annotator.empty()) throw Error(Errc::invalid_argument, "annotator id must not be empty");

  auto tag = std::find_if(record.annotations.begin(), record.annotations.end(),
                          [&](const AnnotatedSense& a) { return a.sense == sense; });
  if (tag == record.annotations.end()) {
    record.annotations.push_back({sense, {}});
    tag = std::prev(record.annotations.end());
  }
  auto rating = std::find_if(tag->ratings.begin(), tag->ratings.end(),
                             [&](const WeightRating& r) { return r.annotator == annotator; });
  if (rating == tag->ratings.end()) {
    tag->ratings.push_back({annotator, weight, at});
  } else {
    rating->weight = weight;
    rating->recorded_at = at;
  }
  return record;
}

const ImageRecord& Repository::commit_image(ImageId id) {
  auto& record = mutable_record(id);
  if (record.sense_count() < ImageRecord::kMinCommittedSenses) {
    Error err(Errc::too_few_senses, "image " + to_string(id) + " has " +
                                        std::to_string(record.sense_count()) +
                                        " distinct senses, needs at least 3");
    err.with_count(record.sense_count());
    throw err;
  }
  record.committed = true;
  return record;
}

const ImageRecord& Repository::insert(ImageRecord record) {
  if (images_.contains(record.id)) {
    throw Error(Errc::invalid_argument, "duplicate image id " + to_string(record.id));
  }
  if (record.uri.empty()) throw Error(Errc::invalid_argument, "image uri must not be empty");
  if (record.emotion) record.emotion->validate();
  std::set<Sense> seen;
  for (const auto& tag : record.annotations) {
    check_sense(tag.sense);
    if (!seen.insert(tag.sense).second) {
      throw Error(Errc::invalid_argument, "duplicate tag " + ontology::to_string(tag.sense));
    }
    if (tag.ratings.empty()) throw Error(Errc::empty_ratings, "tag without ratings");
    std::set<std::string> raters;
    for (const auto& r : tag.ratings) {
      check_weight(r.weight);
      if (r.annotator.empty() || !raters.insert(r.annotator).second) {
        throw Error(Errc::invalid_argument, "tag ratings need distinct, non-empty annotators");
      }
    }
  }
  if (record.committed && record.sense_count() < ImageRecord::kMinCommittedSenses) {
    Error err(Errc::too_few_senses, "committed record with fewer than 3 senses");
    err.with_count(record.sense_count());
    throw err;
  }

  const auto id = record.id;
  if (record.keyword) ++keyword_counts_[*record.keyword];
  next_id_ = std::max(next_id_, to_integer(id) + 1);
  return images_.emplace(id, std::move(record)).first->second;
}

const ImageRecord& Repository::get(ImageId id) const {
  if (const auto* r = find(id)) return *r;
  throw Error(Errc::unknown_image, "unknown image " + to_string(id));
}

const ImageRecord* Repository::find(ImageId id) const {
  const auto it = images_.find(id);
  return it == images_.end() ? nullptr : &it->second;
}

std::vector<const ImageRecord*> Repository::committed_images() const {
  std::vector<const ImageRecord*> out;
  for (const auto& [id, record] : images_) {
    if (record.committed) out.push_back(&record);
  }
  return out;
}

std::set<std::string> Repository::keyword_vocabulary() const {
  std::set<std::string> out;
  for (const auto& [keyword, count] : keyword_counts_) {
    if (count > 0) out.insert(keyword);
  }
  return out;
}

std::set<std::string> Repository::recompute_keyword_vocabulary() const {
  std::set<std::string> out;
  for (const auto& [id, record] : images_) {
    if (record.keyword) out.insert(*record.keyword);
  }
  return out;
}

std::set<Sense> expanded_semantics(const Repository& repo, ImageId id,
                                   const ontology::NeighborhoodConfig& cfg) {
  const auto& record = repo.get(id);
  if (!record.committed) {
    throw Error(Errc::uncommitted_image, "image " + to_string(id) + " is not committed");
  }
  std::set<Sense> out;
  for (const auto& tag : record.annotations) {
    out.insert(tag.sense);
    out.merge(ontology::neighborhood(tag.sense, cfg, repo.ontology()));
  }
  return out;
}

CorpusStats corpus_stats(const Repository& repo) {
  CorpusStats stats;
  std::vector<std::size_t> counts;
  std::set<ontology::SynsetId> synsets;
  for (const auto* record : repo.committed_images()) {
    counts.push_back(record->sense_count());
    for (const auto& tag : record->annotations) synsets.insert(tag.sense.synset);
  }
  if (counts.empty()) return stats;

  std::sort(counts.begin(), counts.end());
  const std::size_t n = counts.size();
  stats.empty = false;
  stats.image_count = n;
  stats.tag_count_min = counts.front();
  stats.tag_count_max = counts.back();
  stats.tag_count_median = n % 2 == 1 ? static_cast<double>(counts[n / 2])
                                      : (static_cast<double>(counts[n / 2 - 1]) + static_cast<double>(counts[n / 2])) / 2.0;
  double sum = 0.0;
  for (const auto c : counts) sum += static_cast<double>(c);
  stats.tag_count_mean = sum / static_cast<double>(n);
  if (n > 1) {
    double ss = 0.0;
    for (const auto c : counts) {
      const double d = static_cast<double>(c) - stats.tag_count_mean;
      ss += d * d;
    }
    stats.tag_count_sd = std::sqrt(ss / static_cast<double>(n - 1));
  }
  stats.distinct_synset_count = synsets.size();
  return stats;
}

}  // namespace wntags::repository
