#pragma once

#include <filesystem>
#include <istream>
#include <memory>
#include <ostream>

#include "wntags/repository/repository.hpp"

namespace wntags::repository {

// One JSON object per line, fields in the fixed order
//   id, uri, keyword, emotion{val, ar, dom},
//   tags[{lemma, pos, offset, ratings[{annotator, weight, at}]}], committed
// with `at` in milliseconds since the Unix epoch. Doubles are written with
// enough digits to read back bit-identical.
void save(const Repository& repo, std::ostream& out);

// Throws malformed_record (with line number) for unparsable or invalid
// lines and unknown_sense for tags the ontology does not contain.
Repository load(std::istream& in, std::shared_ptr<const ontology::OntologyGraph> graph);

// File helpers. save_file writes to a sibling temp file and renames it.
void save_file(const Repository& repo, const std::filesystem::path& file);
Repository load_file(const std::filesystem::path& file, std::shared_ptr<const ontology::OntologyGraph> graph);

}  // namespace wntags::repository
