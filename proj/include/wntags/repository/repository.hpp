#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "wntags/ontology/graph.hpp"
#include "wntags/repository/records.hpp"

namespace wntags::repository {

// Image store. A value type: copies are independent snapshots. Not
// synchronized; the service wraps it for concurrent use.
class Repository {
 public:
  using Clock = std::function<Timestamp()>;

  explicit Repository(std::shared_ptr<const ontology::OntologyGraph> graph, Clock clock = {});

  // New uncommitted record with a fresh id. Throws invalid_argument for an
  // empty uri and emotion_out_of_range.
  const ImageRecord& add_image(std::string uri, std::optional<std::string> keyword = std::nullopt,
                               std::optional<EmotionTuple> emotion = std::nullopt);

  // Adds or replaces `annotator`'s rating of `sense`. Throws unknown_image,
  // unknown_sense, weight_out_of_range, invalid_argument (empty annotator).
  const ImageRecord& annotate(ImageId id, const Sense& sense, double weight, const std::string& annotator);
  const ImageRecord& annotate(ImageId id, const Sense& sense, double weight, const std::string& annotator,
                              Timestamp at);

  // Marks the record searchable. Throws unknown_image and too_few_senses
  // (with the distinct sense count).
  const ImageRecord& commit_image(ImageId id);

  // Inserts a fully formed record, keeping its id. Used when restoring a
  // saved repository or building synthetic corpora. Validates every field.
  const ImageRecord& insert(ImageRecord record);

  const ImageRecord& get(ImageId id) const;  // throws unknown_image
  const ImageRecord* find(ImageId id) const;
  const std::map<ImageId, ImageRecord>& images() const noexcept { return images_; }
  std::vector<const ImageRecord*> committed_images() const;
  std::size_t size() const noexcept { return images_.size(); }

  // Distinct legacy keywords currently present.
  std::set<std::string> keyword_vocabulary() const;
  // Same set computed by scanning every record.
  std::set<std::string> recompute_keyword_vocabulary() const;

  const ontology::OntologyGraph& ontology() const noexcept { return *graph_; }
  const std::shared_ptr<const ontology::OntologyGraph>& ontology_ptr() const noexcept { return graph_; }

  // Record contents only; the ontology and clock are not compared.
  bool operator==(const Repository& other) const { return images_ == other.images_; }

 private:
  ImageRecord& mutable_record(ImageId id);
  void check_sense(const Sense& sense) const;

  std::shared_ptr<const ontology::OntologyGraph> graph_;
  Clock clock_;
  std::map<ImageId, ImageRecord> images_;
  std::map<std::string, std::size_t> keyword_counts_;
  std::uint64_t next_id_ = 1;
};

// Original tag senses united with the neighborhood of every tag. Throws
// unknown_image, uncommitted_image.
std::set<Sense> expanded_semantics(const Repository& repo, ImageId id,
                                   const ontology::NeighborhoodConfig& cfg);

struct CorpusStats {
  bool empty = true;
  std::size_t image_count = 0;
  double tag_count_median = 0.0;
  double tag_count_mean = 0.0;
  double tag_count_sd = 0.0;  // sample standard deviation
  std::size_t tag_count_min = 0;
  std::size_t tag_count_max = 0;
  std::size_t distinct_synset_count = 0;

  bool operator==(const CorpusStats&) const = default;
};

// Statistics over the distinct-sense counts of committed images.
CorpusStats corpus_stats(const Repository& repo);

}  // namespace wntags::repository
