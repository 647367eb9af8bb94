#include "wntags/evaluation/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "wntags/error.hpp"
#include "wntags/ontology/traversal.hpp"
#include "wntags/util/random.hpp"

namespace wntags::evaluation {

namespace {

using ontology::PartOfSpeech;
using ontology::RelationType;
using ontology::SynsetId;
using repository::ImageRecord;

constexpr std::size_t kKeywords = 20;

// Floyd's algorithm: `count` distinct values from [0, n).
std::vector<std::size_t> sample_distinct(util::Rng& rng, std::size_t n, std::size_t count) {
  std::vector<std::size_t> out;
  std::unordered_set<std::size_t> seen;
  for (std::size_t j = n - count; j < n; ++j) {
    const auto t = static_cast<std::size_t>(rng.below(j + 1));
    const auto pick = seen.count(t) ? j : t;
    seen.insert(pick);
    out.push_back(pick);
  }
  return out;
}

void check_spec(const SyntheticSpec& spec, std::size_t synsets) {
  const auto fail = [](const std::string& why) { throw Error(Errc::invalid_spec, "synthetic spec: " + why); };
  const auto& d = spec.tag_counts;
  const std::size_t floor = ImageRecord::kMinCommittedSenses;
  if (spec.image_count == 0) fail("image count must be positive");
  if (synsets == 0) fail("graph size must be positive");
  if (spec.relevance_distance > ontology::NeighborhoodConfig::kMaxDistanceCap) fail("relevance distance above 30");
  if (spec.query_count > synsets) fail("more queries than synsets");
  if (d.kind == TagCountDistribution::Kind::constant) {
    if (d.value < floor) fail("tag count below the commit minimum of 3");
    if (d.value > synsets) fail("tag count exceeds graph size");
  } else {
    if (d.min < floor) fail("tag count minimum below the commit minimum of 3");
    if (d.min > d.max) fail("tag count min > max");
    if (d.max > synsets) fail("tag count maximum exceeds graph size");
    if (!std::isfinite(d.mean) || !std::isfinite(d.sd) || d.sd < 0) fail("bad normal parameters");
    if (d.sd == 0 && (std::llround(d.mean) < static_cast<long long>(d.min) ||
                      std::llround(d.mean) > static_cast<long long>(d.max))) {
      fail("degenerate normal outside [min, max]");
    }
  }
}

std::size_t sample_count(util::Rng& rng, const TagCountDistribution& d) {
  if (d.kind == TagCountDistribution::Kind::constant) return d.value;
  const auto lo = static_cast<long long>(d.min), hi = static_cast<long long>(d.max);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const auto x = std::llround(rng.normal(d.mean, d.sd));
    if (x >= lo && x <= hi) return static_cast<std::size_t>(x);
  }
  return static_cast<std::size_t>(std::clamp(std::llround(d.mean), lo, hi));
}

}  // namespace

std::shared_ptr<const ontology::OntologyGraph> synthetic_ontology(std::size_t synsets, std::uint64_t seed) {
  util::Rng rng(seed);
  ontology::OntologyBuilder b;
  const auto id = [](std::size_t i) { return SynsetId{PartOfSpeech::Noun, static_cast<std::uint32_t>(i + 1)}; };
  for (std::size_t i = 0; i < synsets; ++i) {
    ontology::Synset s{id(i), {"c" + std::to_string(i + 1)}, "synthetic concept " + std::to_string(i + 1), {}};
    if (i > 0) s.relations.push_back({RelationType::Hypernym, id(rng.below(i))});
    if (i > 1 && rng.below(10) == 0) s.relations.push_back({RelationType::Meronym, id(rng.below(i))});
    b.add_synset(std::move(s));
  }
  return std::make_shared<const ontology::OntologyGraph>(std::move(b).build());
}

SyntheticCorpus generate_synthetic_corpus(const SyntheticSpec& spec,
                                          std::shared_ptr<const ontology::OntologyGraph> graph) {
  check_spec(spec, graph ? graph->synset_count() : spec.graph_size);
  if (!graph) graph = synthetic_ontology(spec.graph_size, spec.seed ^ 0x5eedULL);
  const auto& synsets = graph->synsets();
  const auto sense_of = [&](std::size_t i) { return ontology::Sense{synsets[i].lemmas.front(), synsets[i].id}; };

  util::Rng rng(spec.seed);
  std::vector<ImageRecord> records(spec.image_count);
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& rec = records[i];
    rec.id = ImageId{i + 1};
    rec.uri = "synthetic:" + std::to_string(i + 1);
    rec.keyword = "kw" + std::to_string(rng.below(kKeywords));
    rec.emotion = repository::EmotionTuple{rng.uniform(1, 9), rng.uniform(1, 9), rng.uniform(1, 9)};
    for (const auto s : sample_distinct(rng, synsets.size(), sample_count(rng, spec.tag_counts))) {
      repository::AnnotatedSense tag{sense_of(s), {}};
      const auto raters = 1 + rng.below(3);
      for (std::uint64_t r = 0; r < raters; ++r) {
        tag.ratings.push_back({"rater" + std::to_string(r), std::round(rng.uniform(0.05, 1.0) * 100) / 100, {}});
      }
      rec.annotations.push_back(std::move(tag));
    }
    rec.committed = true;
  }

  const auto topics = sample_distinct(rng, synsets.size(), spec.query_count);
  const auto plants = std::max<std::size_t>(1, spec.image_count / 20);
  for (const auto t : topics) {
    const auto sense = sense_of(t);
    for (const auto img : sample_distinct(rng, records.size(), plants)) {
      auto& rec = records[img];
      if (rec.find(sense)) continue;
      auto& tag = rec.annotations[rng.below(rec.annotations.size())];
      tag.sense = sense;
      tag.ratings = {{"rater0", 1.0, {}}};
    }
  }

  SyntheticCorpus out{graph, repository::Repository(graph), {}};
  for (auto& rec : records) out.repo.insert(rec);
  for (const auto t : topics) {
    const ontology::DistanceField field(*graph, synsets[t].id, ontology::RelationSet::taxonomy(),
                                        spec.relevance_distance);
    JudgedQuery q{synsets[t].lemmas.front(), {}};
    for (const auto& rec : records) {
      const bool hit = std::any_of(rec.annotations.begin(), rec.annotations.end(),
                                   [&](const auto& a) { return field.distance_to(a.sense.synset).has_value(); });
      if (hit) q.relevant.insert(rec.id);
    }
    out.queries.push_back(std::move(q));
  }
  return out;
}

}  // namespace wntags::evaluation
