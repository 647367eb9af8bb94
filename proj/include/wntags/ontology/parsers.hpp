#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "wntags/ontology/graph.hpp"

namespace wntags::ontology {

// Streams for one part of speech of a Princeton WordNet 3.x database.
// Only `data` is required. `name` prefixes error messages.
struct WordNetPosSource {
  PartOfSpeech pos = PartOfSpeech::Noun;
  std::istream* data = nullptr;
  std::istream* index = nullptr;
  std::istream* exceptions = nullptr;
  std::string name;
};

// Parses data.{pos} / index.{pos} / {pos}.exc streams. Hypernym, hyponym,
// holonym and meronym pointers (including the instance and the
// member/part/substance variants) are kept; every other pointer type is
// dropped. Throws malformed_line, duplicate_offset or dangling_pointer.
OntologyGraph parse_ontology(const std::vector<WordNetPosSource>& sources);

// Opens whichever of the per-POS files exist in `dir`. Throws io_error when
// the directory is missing or holds no data file.
OntologyGraph load_wordnet_dir(const std::filesystem::path& dir);

// Tab-separated fixture format, one synset per line:
//   <id> TAB <lemma,lemma> TAB <gloss> TAB <relation:id;relation:id>
// `#` starts a comment line. Throws malformed_line.
OntologyGraph parse_simple_graph(std::istream& in);
OntologyGraph parse_simple_graph(std::istream& in, const std::vector<WordNetPosSource>& exceptions);
OntologyGraph load_simple_graph(const std::filesystem::path& file);

// Writes every synset with the relations as stored (both directions).
void write_simple_graph(const OntologyGraph& graph, std::ostream& out);

// Reads one {pos}.exc stream into the builder.
void read_exception_file(std::istream& in, PartOfSpeech pos, OntologyBuilder& builder,
                         const std::string& name = "exc");

}  // namespace wntags::ontology
