#include "wntags/ontology/types.hpp"

#include "wntags/error.hpp"
#include "wntags/util/strings.hpp"

namespace wntags::ontology {

char pos_letter(PartOfSpeech pos) noexcept {
  switch (pos) {
    case PartOfSpeech::Noun: return 'n';
    case PartOfSpeech::Verb: return 'v';
    case PartOfSpeech::Adjective: return 'a';
    case PartOfSpeech::Adverb: return 'r';
  }
  return '?';
}

std::optional<PartOfSpeech> pos_from_letter(char letter) noexcept {
  switch (letter) {
    case 'n': return PartOfSpeech::Noun;
    case 'v': return PartOfSpeech::Verb;
    case 'a':
    case 's': return PartOfSpeech::Adjective;
    case 'r': return PartOfSpeech::Adverb;
    default: return std::nullopt;
  }
}

std::optional<PartOfSpeech> pos_from_string(std::string_view s) noexcept {
  if (s.size() == 1) return pos_from_letter(s.front());
  if (s == "noun") return PartOfSpeech::Noun;
  if (s == "verb") return PartOfSpeech::Verb;
  if (s == "adj" || s == "adjective") return PartOfSpeech::Adjective;
  if (s == "adv" || s == "adverb") return PartOfSpeech::Adverb;
  return std::nullopt;
}

std::string_view pos_file_suffix(PartOfSpeech pos) noexcept {
  switch (pos) {
    case PartOfSpeech::Noun: return "noun";
    case PartOfSpeech::Verb: return "verb";
    case PartOfSpeech::Adjective: return "adj";
    case PartOfSpeech::Adverb: return "adv";
  }
  return "";
}

std::string to_string(SynsetId id) {
  return pos_letter(id.pos) + std::to_string(id.offset);
}

std::optional<SynsetId> parse_synset_id(std::string_view s) {
  if (s.size() < 2) return std::nullopt;
  const auto pos = pos_from_letter(s.front());
  const auto offset = util::parse_int<std::uint32_t>(s.substr(1));
  if (!pos || !offset) return std::nullopt;
  return SynsetId{*pos, *offset};
}

RelationType inverse(RelationType type) noexcept {
  switch (type) {
    case RelationType::Hypernym: return RelationType::Hyponym;
    case RelationType::Hyponym: return RelationType::Hypernym;
    case RelationType::Holonym: return RelationType::Meronym;
    case RelationType::Meronym: return RelationType::Holonym;
  }
  return type;
}

std::string_view relation_name(RelationType type) noexcept {
  switch (type) {
    case RelationType::Hypernym: return "hypernym";
    case RelationType::Hyponym: return "hyponym";
    case RelationType::Holonym: return "holonym";
    case RelationType::Meronym: return "meronym";
  }
  return "";
}

std::optional<RelationType> relation_from_name(std::string_view name) noexcept {
  if (name == "hypernym") return RelationType::Hypernym;
  if (name == "hyponym") return RelationType::Hyponym;
  if (name == "holonym") return RelationType::Holonym;
  if (name == "meronym") return RelationType::Meronym;
  return std::nullopt;
}

std::string to_string(const Sense& sense) {
  return sense.lemma + "@" + to_string(sense.synset);
}

void NeighborhoodConfig::validate() const {
  if (max_distance > kMaxDistanceCap) {
    throw Error(Errc::invalid_argument, "neighborhood distance " + std::to_string(max_distance) +
                                            " exceeds cap " + std::to_string(kMaxDistanceCap));
  }
}

}  // namespace wntags::ontology
