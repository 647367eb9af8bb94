#include "wntags/ontology/parsers.hpp"

#include <fstream>
#include <memory>
#include <optional>
#include <string_view>
#include <utility>

#include "wntags/error.hpp"
#include "wntags/util/strings.hpp"

namespace wntags::ontology {

namespace {

Error malformed(const std::string& name, std::size_t line_no, const std::string& reason) {
  Error err(Errc::malformed_line, name + ":" + std::to_string(line_no) + ": " + reason);
  err.with_line(line_no);
  return err;
}

std::optional<RelationType> pointer_relation(std::string_view symbol) {
  if (symbol == "@" || symbol == "@i") return RelationType::Hypernym;
  if (symbol == "~" || symbol == "~i") return RelationType::Hyponym;
  if (symbol == "#m" || symbol == "#s" || symbol == "#p") return RelationType::Holonym;
  if (symbol == "%m" || symbol == "%s" || symbol == "%p") return RelationType::Meronym;
  return std::nullopt;
}

// Adjective entries may carry a syntactic marker such as "(a)", "(p)" or "(ip)".
std::string_view strip_adjective_marker(std::string_view word) {
  if (!word.empty() && word.back() == ')') {
    const auto open = word.rfind('(');
    if (open != std::string_view::npos && open > 0) return word.substr(0, open);
  }
  return word;
}

bool is_license_line(std::string_view line) {
  return line.size() >= 2 && line[0] == ' ' && line[1] == ' ';
}

void parse_data_stream(const WordNetPosSource& src, OntologyBuilder& builder) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(*src.data, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || is_license_line(line)) continue;

    const auto bar = line.find('|');
    const std::string_view head = std::string_view(line).substr(0, bar);
    std::string gloss;
    if (bar != std::string::npos) gloss = std::string(util::trim(std::string_view(line).substr(bar + 1)));

    const auto tok = util::split_ws(head);
    std::size_t i = 0;
    const auto need = [&](std::size_t n, const char* what) {
      if (i + n > tok.size()) throw malformed(src.name, line_no, std::string("truncated ") + what);
    };

    need(4, "synset header");
    const auto offset = util::parse_int<std::uint32_t>(tok[0]);
    if (!offset) throw malformed(src.name, line_no, "bad synset offset '" + std::string(tok[0]) + "'");
    if (!util::parse_int<unsigned>(tok[1])) {
      throw malformed(src.name, line_no, "bad lex_filenum '" + std::string(tok[1]) + "'");
    }
    const auto ss_type = tok[2].size() == 1 ? pos_from_letter(tok[2][0]) : std::nullopt;
    if (!ss_type || *ss_type != src.pos) {
      throw malformed(src.name, line_no, "ss_type '" + std::string(tok[2]) + "' does not match file");
    }
    const auto word_count = util::parse_int<unsigned>(tok[3], 16);
    if (!word_count || *word_count == 0) throw malformed(src.name, line_no, "bad word count");
    i = 4;

    Synset synset;
    synset.id = SynsetId{src.pos, *offset};
    synset.gloss = std::move(gloss);
    need(2 * static_cast<std::size_t>(*word_count), "word list");
    for (unsigned w = 0; w < *word_count; ++w) {
      const auto word = strip_adjective_marker(tok[i]);
      if (word.empty()) throw malformed(src.name, line_no, "empty lemma");
      synset.lemmas.emplace_back(word);
      if (!util::parse_int<unsigned>(tok[i + 1], 16)) {
        throw malformed(src.name, line_no, "bad lex_id '" + std::string(tok[i + 1]) + "'");
      }
      i += 2;
    }

    need(1, "pointer count");
    const auto ptr_count = util::parse_int<unsigned>(tok[i]);
    if (!ptr_count) throw malformed(src.name, line_no, "bad pointer count '" + std::string(tok[i]) + "'");
    ++i;
    need(4 * static_cast<std::size_t>(*ptr_count), "pointer list");
    for (unsigned p = 0; p < *ptr_count; ++p) {
      const auto symbol = tok[i];
      const auto target_offset = util::parse_int<std::uint32_t>(tok[i + 1]);
      const auto target_pos = tok[i + 2].size() == 1 ? pos_from_letter(tok[i + 2][0]) : std::nullopt;
      if (!target_offset || !target_pos || tok[i + 3].size() != 4 ||
          !util::parse_int<unsigned>(tok[i + 3], 16)) {
        throw malformed(src.name, line_no, "bad pointer #" + std::to_string(p + 1));
      }
      if (const auto type = pointer_relation(symbol)) {
        synset.relations.push_back({*type, SynsetId{*target_pos, *target_offset}});
      }
      i += 4;
    }
    // Remaining tokens (verb frames) are not used.

    builder.add_synset(std::move(synset));
  }
}

struct IndexEntry {
  std::string lemma;
  SynsetId id;
  std::string name;
  std::size_t line_no;
};

void parse_index_stream(const WordNetPosSource& src, std::vector<IndexEntry>& entries) {
  std::string line;
  std::size_t line_no = 0;
  const auto name = src.name.empty() ? std::string("index") : src.name + ".index";
  while (std::getline(*src.index, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || is_license_line(line)) continue;
    const auto tok = util::split_ws(line);
    if (tok.size() < 4) throw malformed(name, line_no, "truncated index entry");
    const auto synset_count = util::parse_int<unsigned>(tok[2]);
    const auto ptr_count = util::parse_int<unsigned>(tok[3]);
    if (!synset_count || !ptr_count) throw malformed(name, line_no, "bad index counts");
    const std::size_t first_offset = 4 + *ptr_count + 2;
    if (tok.size() != first_offset + *synset_count) {
      throw malformed(name, line_no, "index entry field count mismatch");
    }
    for (std::size_t k = first_offset; k < tok.size(); ++k) {
      const auto offset = util::parse_int<std::uint32_t>(tok[k]);
      if (!offset) throw malformed(name, line_no, "bad synset offset in index");
      entries.push_back({normalize_surface(tok[0]), SynsetId{src.pos, *offset}, name, line_no});
    }
  }
}

}  // namespace

void read_exception_file(std::istream& in, PartOfSpeech pos, OntologyBuilder& builder,
                         const std::string& name) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = util::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto tok = util::split_ws(trimmed);
    if (tok.size() < 2) throw malformed(name, line_no, "exception entry needs a base form");
    std::vector<std::string> bases(tok.begin() + 1, tok.end());
    builder.add_exception(pos, std::string(tok[0]), std::move(bases));
  }
}

OntologyGraph parse_ontology(const std::vector<WordNetPosSource>& sources) {
  OntologyBuilder builder;
  std::vector<IndexEntry> index_entries;
  for (const auto& src : sources) {
    if (src.data != nullptr) parse_data_stream(src, builder);
    if (src.index != nullptr) parse_index_stream(src, index_entries);
    if (src.exceptions != nullptr) {
      read_exception_file(*src.exceptions, src.pos, builder,
                          src.name.empty() ? "exc" : src.name + ".exc");
    }
  }
  auto graph = std::move(builder).build();
  for (const auto& entry : index_entries) {
    if (!graph.contains(entry.id)) {
      Error err(Errc::dangling_pointer, entry.name + ":" + std::to_string(entry.line_no) +
                                            ": index entry '" + entry.lemma +
                                            "' points to missing synset " + to_string(entry.id));
      err.with_line(entry.line_no);
      throw err;
    }
  }
  return graph;
}

OntologyGraph load_wordnet_dir(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw Error(Errc::io_error, "not a directory: " + dir.string());
  }
  std::vector<std::unique_ptr<std::ifstream>> streams;
  std::vector<WordNetPosSource> sources;
  const auto open = [&](const fs::path& p) -> std::ifstream* {
    if (!fs::is_regular_file(p)) return nullptr;
    auto s = std::make_unique<std::ifstream>(p, std::ios::binary);
    if (!*s) throw Error(Errc::io_error, "cannot open " + p.string());
    streams.push_back(std::move(s));
    return streams.back().get();
  };
  for (const auto pos : kAllPartsOfSpeech) {
    const std::string suffix(pos_file_suffix(pos));
    auto* data = open(dir / ("data." + suffix));
    if (data == nullptr) continue;
    WordNetPosSource src;
    src.pos = pos;
    src.data = data;
    src.index = open(dir / ("index." + suffix));
    src.exceptions = open(dir / (suffix + ".exc"));
    src.name = (dir / ("data." + suffix)).string();
    sources.push_back(src);
  }
  if (sources.empty()) {
    throw Error(Errc::io_error, "no WordNet data files found in " + dir.string());
  }
  return parse_ontology(sources);
}

OntologyGraph parse_simple_graph(std::istream& in) { return parse_simple_graph(in, {}); }

OntologyGraph parse_simple_graph(std::istream& in, const std::vector<WordNetPosSource>& exceptions) {
  OntologyBuilder builder;
  std::string line;
  std::size_t line_no = 0;
  const std::string name = "simple-graph";
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (util::trim(line).empty() || line.front() == '#') continue;

    const auto fields = util::split(line, '\t');
    if (fields.size() < 3 || fields.size() > 4) {
      throw malformed(name, line_no, "expected 3 or 4 tab-separated fields");
    }
    Synset synset;
    const auto id = parse_synset_id(util::trim(fields[0]));
    if (!id) throw malformed(name, line_no, "bad synset id '" + std::string(fields[0]) + "'");
    synset.id = *id;
    for (const auto lemma : util::split(fields[1], ',')) {
      const auto l = util::trim(lemma);
      if (l.empty()) throw malformed(name, line_no, "empty lemma");
      synset.lemmas.emplace_back(l);
    }
    synset.gloss = std::string(util::trim(fields[2]));
    if (fields.size() == 4 && !util::trim(fields[3]).empty()) {
      for (const auto item : util::split(fields[3], ';')) {
        const auto rel = util::trim(item);
        if (rel.empty()) continue;
        const auto colon = rel.find(':');
        if (colon == std::string_view::npos) {
          throw malformed(name, line_no, "relation '" + std::string(rel) + "' lacks ':'");
        }
        const auto type = relation_from_name(rel.substr(0, colon));
        if (!type) {
          throw malformed(name, line_no, "unknown relation '" + std::string(rel.substr(0, colon)) + "'");
        }
        const auto target = parse_synset_id(rel.substr(colon + 1));
        if (!target) throw malformed(name, line_no, "bad relation target '" + std::string(rel) + "'");
        synset.relations.push_back({*type, *target});
      }
    }
    try {
      builder.add_synset(std::move(synset));
    } catch (Error& e) {
      e.with_line(line_no);
      throw;
    }
  }
  for (const auto& src : exceptions) {
    if (src.exceptions != nullptr) read_exception_file(*src.exceptions, src.pos, builder, src.name);
  }
  return std::move(builder).build();
}

OntologyGraph load_simple_graph(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + file.string());
  return parse_simple_graph(in);
}

void write_simple_graph(const OntologyGraph& graph, std::ostream& out) {
  for (const auto& synset : graph.synsets()) {
    out << to_string(synset.id) << '\t';
    for (std::size_t i = 0; i < synset.lemmas.size(); ++i) {
      if (i > 0) out << ',';
      out << synset.lemmas[i];
    }
    out << '\t' << synset.gloss << '\t';
    for (std::size_t i = 0; i < synset.relations.size(); ++i) {
      if (i > 0) out << ';';
      out << relation_name(synset.relations[i].type) << ':' << to_string(synset.relations[i].target);
    }
    out << '\n';
  }
}

}  // namespace wntags::ontology
