#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wntags::ontology {

enum class PartOfSpeech : std::uint8_t { Noun, Verb, Adjective, Adverb };

inline constexpr PartOfSpeech kAllPartsOfSpeech[] = {
    PartOfSpeech::Noun, PartOfSpeech::Verb, PartOfSpeech::Adjective, PartOfSpeech::Adverb};

char pos_letter(PartOfSpeech pos) noexcept;
// Accepts n, v, a, r and the adjective-satellite letter s.
std::optional<PartOfSpeech> pos_from_letter(char letter) noexcept;
std::optional<PartOfSpeech> pos_from_string(std::string_view s) noexcept;
// File-name suffix used by the WordNet database ("noun", "verb", "adj", "adv").
std::string_view pos_file_suffix(PartOfSpeech pos) noexcept;

struct SynsetId {
  PartOfSpeech pos = PartOfSpeech::Noun;
  std::uint32_t offset = 0;

  auto operator<=>(const SynsetId&) const = default;
};

// "n123" style id, matching the SimpleGraph fixture notation.
std::string to_string(SynsetId id);
std::optional<SynsetId> parse_synset_id(std::string_view s);

enum class RelationType : std::uint8_t { Hypernym, Hyponym, Holonym, Meronym };

RelationType inverse(RelationType type) noexcept;
std::string_view relation_name(RelationType type) noexcept;
std::optional<RelationType> relation_from_name(std::string_view name) noexcept;

// Small bit set over the four relation types.
class RelationSet {
 public:
  constexpr RelationSet() = default;
  constexpr RelationSet(std::initializer_list<RelationType> types) {
    for (auto t : types) bits_ |= bit(t);
  }

  static constexpr RelationSet all() {
    return {RelationType::Hypernym, RelationType::Hyponym, RelationType::Holonym,
            RelationType::Meronym};
  }
  static constexpr RelationSet taxonomy() {
    return {RelationType::Hypernym, RelationType::Hyponym};
  }

  constexpr bool contains(RelationType t) const { return (bits_ & bit(t)) != 0; }
  constexpr void insert(RelationType t) { bits_ |= bit(t); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint8_t bits() const { return bits_; }

  // Adds the inverse of every member; edges are traversed undirected.
  constexpr RelationSet symmetric_closure() const {
    RelationSet out = *this;
    if (contains(RelationType::Hypernym) || contains(RelationType::Hyponym)) {
      out.insert(RelationType::Hypernym);
      out.insert(RelationType::Hyponym);
    }
    if (contains(RelationType::Holonym) || contains(RelationType::Meronym)) {
      out.insert(RelationType::Holonym);
      out.insert(RelationType::Meronym);
    }
    return out;
  }

  friend constexpr bool operator==(RelationSet, RelationSet) = default;

 private:
  static constexpr std::uint8_t bit(RelationType t) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(t));
  }
  std::uint8_t bits_ = 0;
};

struct Relation {
  RelationType type = RelationType::Hypernym;
  SynsetId target;

  auto operator<=>(const Relation&) const = default;
};

struct Synset {
  SynsetId id;
  std::vector<std::string> lemmas;
  std::string gloss;
  std::vector<Relation> relations;

  bool operator==(const Synset&) const = default;
};

// One meaning of one word: a lemma paired with a synset containing it.
struct Sense {
  std::string lemma;
  SynsetId synset;

  auto operator<=>(const Sense&) const = default;
};

// "lemma#pos#n" notation is resolved against a graph; see OntologyGraph.
std::string to_string(const Sense& sense);

struct NeighborhoodConfig {
  static constexpr std::uint32_t kMaxDistanceCap = 30;

  std::uint32_t max_distance = 1;
  RelationSet relations = RelationSet::all();
  bool include_synonyms = true;

  // Throws invalid_argument when max_distance exceeds the cap.
  void validate() const;
};

}  // namespace wntags::ontology

template <>
struct std::hash<wntags::ontology::SynsetId> {
  std::size_t operator()(const wntags::ontology::SynsetId& id) const noexcept {
    return (static_cast<std::size_t>(id.pos) << 32) ^ id.offset;
  }
};

template <>
struct std::hash<wntags::ontology::Sense> {
  std::size_t operator()(const wntags::ontology::Sense& s) const noexcept {
    const std::size_t h = std::hash<std::string>{}(s.lemma);
    return h ^ (std::hash<wntags::ontology::SynsetId>{}(s.synset) + 0x9e3779b97f4a7c15ULL +
                (h << 6) + (h >> 2));
  }
};
