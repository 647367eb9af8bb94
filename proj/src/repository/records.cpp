#include "wntags/repository/records.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "wntags/error.hpp"

namespace wntags::repository {

namespace {

void check_axis(const char* name, double value) {
  if (!(value >= EmotionTuple::kMin && value <= EmotionTuple::kMax)) {
    throw Error(Errc::emotion_out_of_range,
                std::string(name) + " " + std::to_string(value) + " outside [1, 9]");
  }
}

}  // namespace

EmotionTuple EmotionTuple::make(double valence, double arousal, double dominance) {
  EmotionTuple t{valence, arousal, dominance};
  t.validate();
  return t;
}

void EmotionTuple::validate() const {
  check_axis("valence", valence);
  check_axis("arousal", arousal);
  check_axis("dominance", dominance);
}

double mean_weight(std::span<const WeightRating> ratings) {
  if (ratings.empty()) throw Error(Errc::empty_ratings, "mean of an empty rating list");
  // Summing in sorted order makes the result independent of rating order.
  std::vector<double> weights;
  weights.reserve(ratings.size());
  for (const auto& r : ratings) weights.push_back(r.weight);
  std::sort(weights.begin(), weights.end());
  double sum = 0.0;
  for (const double w : weights) sum += w;
  const double mean = sum / static_cast<double>(weights.size());
  // Rounding can push the mean a hair past the extreme ratings.
  return std::clamp(mean, weights.front(), weights.back());
}

const AnnotatedSense* ImageRecord::find(const Sense& sense) const {
  const auto it = std::find_if(annotations.begin(), annotations.end(),
                               [&](const AnnotatedSense& a) { return a.sense == sense; });
  return it == annotations.end() ? nullptr : &*it;
}

double ImageRecord::weight_mass() const {
  double mass = 0.0;
  for (const auto& a : annotations) mass += a.mean_weight();
  return mass;
}

}  // namespace wntags::repository
