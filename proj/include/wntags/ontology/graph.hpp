#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wntags/ontology/types.hpp"

namespace wntags::ontology {

// Immutable synset graph. Built once through OntologyBuilder and then
// shared read-only; every member function is const and safe to call from
// concurrent readers.
class OntologyGraph {
 public:
  using NodeIndex = std::uint32_t;

  struct Edge {
    RelationType type;
    NodeIndex target;
  };

  OntologyGraph() = default;

  std::size_t synset_count() const noexcept { return synsets_.size(); }
  // Undirected edges, i.e. stored relations counted once per inverse pair.
  std::size_t edge_count() const noexcept { return edge_count_; }
  std::size_t lemma_count() const noexcept { return lemma_index_.size(); }

  // Synsets sorted by (pos, offset).
  std::span<const Synset> synsets() const noexcept { return synsets_; }

  const Synset* find(SynsetId id) const noexcept;
  // Throws unknown_synset.
  const Synset& at(SynsetId id) const;
  bool contains(SynsetId id) const noexcept { return find(id) != nullptr; }

  // Synsets whose lemma list contains `lemma`, sorted by (pos, offset).
  std::span<const SynsetId> synsets_for(std::string_view lemma) const;
  bool has_lemma(std::string_view lemma) const;
  bool has_lemma(std::string_view lemma, PartOfSpeech pos) const;
  bool has_sense(const Sense& sense) const;

  // Base forms listed for an irregular inflection, if any.
  std::span<const std::string> exception_bases(PartOfSpeech pos, std::string_view form) const;

  // Dense-index view used by the traversal routines.
  std::optional<NodeIndex> index_of(SynsetId id) const noexcept;
  const Synset& node(NodeIndex index) const noexcept { return synsets_[index]; }
  std::span<const Edge> edges(NodeIndex index) const noexcept { return adjacency_[index]; }

  bool operator==(const OntologyGraph& other) const;

 private:
  friend class OntologyBuilder;

  std::vector<Synset> synsets_;
  std::vector<std::vector<Edge>> adjacency_;
  std::unordered_map<SynsetId, NodeIndex> index_;
  std::unordered_map<std::string, std::vector<SynsetId>> lemma_index_;
  std::array<std::unordered_map<std::string, std::vector<std::string>>, 4> exceptions_;
  std::size_t edge_count_ = 0;
};

// Collects synsets from any source format and produces a validated graph.
// Relations may be given from one side only; build() adds the inverse,
// drops duplicates and checks that every target exists.
class OntologyBuilder {
 public:
  // Throws duplicate_offset if the id was already added. Lemmas are
  // normalized (lowercased, spaces to underscores).
  void add_synset(Synset synset);
  void add_exception(PartOfSpeech pos, std::string form, std::vector<std::string> bases);

  std::size_t size() const noexcept { return pending_.size(); }

  // Throws dangling_pointer naming the first unresolved (source, target).
  OntologyGraph build() &&;

 private:
  std::vector<Synset> pending_;
  std::unordered_map<SynsetId, std::size_t> seen_;
  std::array<std::unordered_map<std::string, std::vector<std::string>>, 4> exceptions_;
};

// Lowercases and maps spaces to underscores.
std::string normalize_surface(std::string_view form);

}  // namespace wntags::ontology
