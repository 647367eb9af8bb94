#include "wntags/ontology/lexicon.hpp"

#include <algorithm>
#include <array>

#include "wntags/error.hpp"
#include "wntags/util/strings.hpp"

namespace wntags::ontology {

namespace {

struct Detachment {
  std::string_view suffix;
  std::string_view replacement;
};

constexpr std::array kNounRules{
    Detachment{"s", ""},    Detachment{"ses", "s"},   Detachment{"xes", "x"},
    Detachment{"zes", "z"}, Detachment{"ches", "ch"}, Detachment{"shes", "sh"},
    Detachment{"ies", "y"},
};

constexpr std::array kVerbRules{
    Detachment{"s", ""},  Detachment{"ies", "y"}, Detachment{"es", "e"}, Detachment{"es", ""},
    Detachment{"ed", "e"}, Detachment{"ed", ""},  Detachment{"ing", "e"}, Detachment{"ing", ""},
};

std::span<const Detachment> rules_for(PartOfSpeech pos) {
  switch (pos) {
    case PartOfSpeech::Noun: return kNounRules;
    case PartOfSpeech::Verb: return kVerbRules;
    default: return {};
  }
}

void push_unique(std::vector<std::string>& out, std::string value) {
  if (std::find(out.begin(), out.end(), value) == out.end()) out.push_back(std::move(value));
}

}  // namespace

std::vector<std::string> normalize_lemma(std::string_view surface, PartOfSpeech pos,
                                         const OntologyGraph& graph) {
  const auto trimmed = util::trim(surface);
  if (trimmed.empty()) return {};
  const std::string form = normalize_surface(trimmed);

  if (graph.has_lemma(form, pos)) return {form};

  std::vector<std::string> out;
  for (const auto& base : graph.exception_bases(pos, form)) {
    if (graph.has_lemma(base, pos)) push_unique(out, base);
  }
  if (!out.empty()) return out;

  for (const auto& rule : rules_for(pos)) {
    if (form.size() <= rule.suffix.size() || !form.ends_with(rule.suffix)) continue;
    std::string candidate = form.substr(0, form.size() - rule.suffix.size());
    candidate += rule.replacement;
    if (graph.has_lemma(candidate, pos)) push_unique(out, std::move(candidate));
  }
  return out;
}

std::vector<std::string> normalize_lemma_any(std::string_view surface, const OntologyGraph& graph) {
  std::vector<std::string> out;
  for (const auto pos : kAllPartsOfSpeech) {
    for (auto& lemma : normalize_lemma(surface, pos, graph)) push_unique(out, std::move(lemma));
  }
  return out;
}

std::vector<Sense> lookup_senses(std::string_view lemma, std::optional<PartOfSpeech> pos,
                                 const OntologyGraph& graph) {
  std::vector<Sense> out;
  for (const auto id : graph.synsets_for(lemma)) {
    if (pos && id.pos != *pos) continue;
    out.push_back({std::string(lemma), id});
  }
  return out;
}

Sense resolve_sense_key(std::string_view key, const OntologyGraph& graph) {
  const auto parts = util::split(util::trim(key), '#');
  if (parts.size() != 3 || parts[0].empty()) {
    throw Error(Errc::malformed_line, "sense key '" + std::string(key) + "' is not lemma#pos#n");
  }
  const auto pos = pos_from_string(parts[1]);
  const auto number = util::parse_int<std::size_t>(parts[2]);
  if (!pos || !number || *number == 0) {
    throw Error(Errc::malformed_line, "sense key '" + std::string(key) + "' is not lemma#pos#n");
  }
  const auto lemma = normalize_surface(parts[0]);
  auto senses = lookup_senses(lemma, *pos, graph);
  if (*number > senses.size()) {
    throw Error(Errc::unknown_sense, "no sense " + std::string(key));
  }
  return std::move(senses[*number - 1]);
}

std::string sense_key(const Sense& sense, const OntologyGraph& graph) {
  const auto senses = lookup_senses(sense.lemma, sense.synset.pos, graph);
  const auto it = std::find(senses.begin(), senses.end(), sense);
  if (it == senses.end()) throw Error(Errc::unknown_sense, "unknown sense " + to_string(sense));
  return sense.lemma + "#" + pos_letter(sense.synset.pos) + "#" +
         std::to_string(static_cast<std::size_t>(it - senses.begin()) + 1);
}

}  // namespace wntags::ontology
