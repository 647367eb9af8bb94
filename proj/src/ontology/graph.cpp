#include "wntags/ontology/graph.hpp"

#include <algorithm>

#include "wntags/error.hpp"

namespace wntags::ontology {

namespace {

std::size_t pos_slot(PartOfSpeech pos) { return static_cast<std::size_t>(pos); }

}  // namespace

std::string normalize_surface(std::string_view form) {
  std::string out;
  out.reserve(form.size());
  for (char c : form) {
    if (c == ' ') {
      out.push_back('_');
    } else if (c >= 'A' && c <= 'Z') {
      out.push_back(static_cast<char>(c - 'A' + 'a'));
    } else {
      out.push_back(c);
    }
  }
  return out;
}

const Synset* OntologyGraph::find(SynsetId id) const noexcept {
  const auto it = index_.find(id);
  return it == index_.end() ? nullptr : &synsets_[it->second];
}

const Synset& OntologyGraph::at(SynsetId id) const {
  if (const auto* s = find(id)) return *s;
  throw Error(Errc::unknown_synset, "unknown synset " + to_string(id));
}

std::span<const SynsetId> OntologyGraph::synsets_for(std::string_view lemma) const {
  const auto it = lemma_index_.find(std::string(lemma));
  if (it == lemma_index_.end()) return {};
  return it->second;
}

bool OntologyGraph::has_lemma(std::string_view lemma) const {
  return !synsets_for(lemma).empty();
}

bool OntologyGraph::has_lemma(std::string_view lemma, PartOfSpeech pos) const {
  const auto ids = synsets_for(lemma);
  return std::any_of(ids.begin(), ids.end(), [pos](SynsetId id) { return id.pos == pos; });
}

bool OntologyGraph::has_sense(const Sense& sense) const {
  const auto* synset = find(sense.synset);
  if (synset == nullptr) return false;
  return std::find(synset->lemmas.begin(), synset->lemmas.end(), sense.lemma) !=
         synset->lemmas.end();
}

std::span<const std::string> OntologyGraph::exception_bases(PartOfSpeech pos,
                                                            std::string_view form) const {
  const auto& table = exceptions_[pos_slot(pos)];
  const auto it = table.find(std::string(form));
  if (it == table.end()) return {};
  return it->second;
}

std::optional<OntologyGraph::NodeIndex> OntologyGraph::index_of(SynsetId id) const noexcept {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool OntologyGraph::operator==(const OntologyGraph& other) const {
  return synsets_ == other.synsets_ && exceptions_ == other.exceptions_;
}

void OntologyBuilder::add_synset(Synset synset) {
  if (seen_.contains(synset.id)) {
    throw Error(Errc::duplicate_offset, "duplicate synset " + to_string(synset.id));
  }
  for (auto& lemma : synset.lemmas) lemma = normalize_surface(lemma);
  seen_.emplace(synset.id, pending_.size());
  pending_.push_back(std::move(synset));
}

void OntologyBuilder::add_exception(PartOfSpeech pos, std::string form,
                                    std::vector<std::string> bases) {
  auto& slot = exceptions_[pos_slot(pos)][normalize_surface(form)];
  for (auto& base : bases) {
    auto normalized = normalize_surface(base);
    if (std::find(slot.begin(), slot.end(), normalized) == slot.end()) {
      slot.push_back(std::move(normalized));
    }
  }
}

OntologyGraph OntologyBuilder::build() && {
  // Resolve targets first so the error names the first dangling pointer
  // in input order.
  for (const auto& synset : pending_) {
    for (const auto& rel : synset.relations) {
      if (!seen_.contains(rel.target)) {
        throw Error(Errc::dangling_pointer, "dangling pointer from " + to_string(synset.id) +
                                                " to " + to_string(rel.target));
      }
    }
  }

  // Inverse closure.
  std::vector<std::vector<Relation>> extra(pending_.size());
  for (const auto& synset : pending_) {
    for (const auto& rel : synset.relations) {
      extra[seen_.at(rel.target)].push_back({inverse(rel.type), synset.id});
    }
  }
  for (std::size_t i = 0; i < pending_.size(); ++i) {
    auto& rels = pending_[i].relations;
    rels.insert(rels.end(), extra[i].begin(), extra[i].end());
    const auto self = pending_[i].id;
    std::erase_if(rels, [self](const Relation& r) { return r.target == self; });
    std::sort(rels.begin(), rels.end());
    rels.erase(std::unique(rels.begin(), rels.end()), rels.end());

    auto& lemmas = pending_[i].lemmas;
    std::vector<std::string> unique;
    for (auto& l : lemmas) {
      if (!l.empty() && std::find(unique.begin(), unique.end(), l) == unique.end()) {
        unique.push_back(std::move(l));
      }
    }
    lemmas = std::move(unique);
    if (lemmas.empty()) {
      throw Error(Errc::malformed_line, "synset " + to_string(self) + " has no lemmas");
    }
  }

  std::sort(pending_.begin(), pending_.end(),
            [](const Synset& a, const Synset& b) { return a.id < b.id; });

  OntologyGraph graph;
  graph.synsets_ = std::move(pending_);
  graph.exceptions_ = std::move(exceptions_);
  graph.index_.reserve(graph.synsets_.size());
  for (std::size_t i = 0; i < graph.synsets_.size(); ++i) {
    graph.index_.emplace(graph.synsets_[i].id, static_cast<OntologyGraph::NodeIndex>(i));
  }
  graph.adjacency_.resize(graph.synsets_.size());
  std::size_t directed = 0;
  for (std::size_t i = 0; i < graph.synsets_.size(); ++i) {
    const auto& synset = graph.synsets_[i];
    auto& adj = graph.adjacency_[i];
    adj.reserve(synset.relations.size());
    for (const auto& rel : synset.relations) {
      adj.push_back({rel.type, graph.index_.at(rel.target)});
    }
    directed += synset.relations.size();
    for (const auto& lemma : synset.lemmas) {
      graph.lemma_index_[lemma].push_back(synset.id);
    }
  }
  graph.edge_count_ = directed / 2;
  // Synsets were visited in sorted order, so each lemma list is sorted.
  return graph;
}

}  // namespace wntags::ontology
