#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wntags/ontology/types.hpp"

namespace wntags::repository {

using ontology::Sense;

enum class ImageId : std::uint64_t {};

inline std::uint64_t to_integer(ImageId id) noexcept { return static_cast<std::uint64_t>(id); }
inline std::string to_string(ImageId id) { return std::to_string(to_integer(id)); }

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

// Circumplex affect ratings, each axis in [1, 9].
struct EmotionTuple {
  static constexpr double kMin = 1.0;
  static constexpr double kMax = 9.0;

  double valence = 5.0;
  double arousal = 5.0;
  double dominance = 5.0;

  // Throws emotion_out_of_range naming the first offending axis.
  static EmotionTuple make(double valence, double arousal, double dominance);
  void validate() const;

  bool operator==(const EmotionTuple&) const = default;
};

struct WeightRating {
  std::string annotator;
  double weight = 0.0;
  Timestamp recorded_at{};

  bool operator==(const WeightRating&) const = default;
};

// Arithmetic mean of the weights. Throws empty_ratings.
double mean_weight(std::span<const WeightRating> ratings);

struct AnnotatedSense {
  Sense sense;
  std::vector<WeightRating> ratings;  // one per annotator

  double mean_weight() const { return repository::mean_weight(ratings); }
  bool operator==(const AnnotatedSense&) const = default;
};

struct ImageRecord {
  static constexpr std::size_t kMinCommittedSenses = 3;

  ImageId id{};
  std::string uri;
  std::optional<std::string> keyword;
  std::optional<EmotionTuple> emotion;
  std::vector<AnnotatedSense> annotations;  // distinct senses, insertion order
  bool committed = false;

  const AnnotatedSense* find(const Sense& sense) const;
  std::size_t sense_count() const noexcept { return annotations.size(); }
  // Sum of mean weights over all tags.
  double weight_mass() const;

  bool operator==(const ImageRecord&) const = default;
};

}  // namespace wntags::repository
