#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wntags/ontology/graph.hpp"

namespace wntags::ontology {

// Maps a surface form to base lemmas known to the graph for `pos`.
// Lowercases and joins words with underscores, then tries in order: the
// form itself, the exception list, the detachment rules. The first stage
// producing a known lemma wins; an empty result means no match.
std::vector<std::string> normalize_lemma(std::string_view surface, PartOfSpeech pos,
                                         const OntologyGraph& graph);

// Union of normalize_lemma over every part of speech, first-seen order.
std::vector<std::string> normalize_lemma_any(std::string_view surface, const OntologyGraph& graph);

// One sense per synset containing `lemma`, ordered by (pos, offset).
std::vector<Sense> lookup_senses(std::string_view lemma, std::optional<PartOfSpeech> pos,
                                 const OntologyGraph& graph);

// Resolves "lemma#pos#n" where n is the 1-based position in lookup_senses
// order. Throws malformed_line for bad syntax, unknown_sense when the
// lemma has fewer than n senses.
Sense resolve_sense_key(std::string_view key, const OntologyGraph& graph);
std::string sense_key(const Sense& sense, const OntologyGraph& graph);

}  // namespace wntags::ontology
