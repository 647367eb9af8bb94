#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "wntags/error.hpp"
#include "wntags/evaluation/benchmark.hpp"
#include "wntags/evaluation/synthetic.hpp"
#include "wntags/ontology/lexicon.hpp"
#include "wntags/ontology/parsers.hpp"
#include "wntags/repository/agreement.hpp"
#include "wntags/repository/persistence.hpp"
#include "wntags/retrieval/search.hpp"

namespace py = pybind11;
using namespace wntags;
using ontology::OntologyGraph;
using ontology::Sense;
using ontology::SimilarityTable;
using repository::ImageId;
using repository::Repository;

using GraphPtr = std::shared_ptr<OntologyGraph>;

namespace {

ontology::PartOfSpeech pos_arg(const std::string& s) {
  const auto pos = ontology::pos_from_string(s);
  if (!pos) throw Error(Errc::invalid_argument, "unknown part of speech '" + s + "'");
  return *pos;
}

std::string pos_str(ontology::PartOfSpeech p) { return std::string(1, ontology::pos_letter(p)); }

py::dict stats_dict(const repository::CorpusStats& s) {
  py::dict d;
  d["empty"] = s.empty;
  d["image_count"] = s.image_count;
  d["tag_count_median"] = s.tag_count_median;
  d["tag_count_mean"] = s.tag_count_mean;
  d["tag_count_sd"] = s.tag_count_sd;
  d["tag_count_min"] = s.tag_count_min;
  d["tag_count_max"] = s.tag_count_max;
  d["distinct_synset_count"] = s.distinct_synset_count;
  return d;
}

py::dict report_dict(const evaluation::EvaluationReport& r) {
  py::list per_query, curve;
  for (const auto& q : r.per_query) {
    py::dict d;
    d["query"] = q.query;
    d["result_count"] = q.result_count;
    d["precision_at_k"] = q.precision_at_k;
    d["normalized_recall"] = q.normalized_recall;
    d["average_precision"] = q.average_precision;
    d["error"] = q.error ? py::object(py::str(*q.error)) : py::object(py::none());
    per_query.append(d);
  }
  for (const auto& p : r.curve) curve.append(py::make_tuple(p.rank, p.mean_precision, p.mean_recall));
  py::dict d;
  d["per_query"] = per_query;
  d["mean_precision"] = r.mean_precision;
  d["mean_result_count"] = r.mean_result_count;
  d["curve"] = curve;
  return d;
}

std::vector<evaluation::JudgedQuery> judged(const std::vector<std::pair<std::string, std::vector<std::uint64_t>>>& qs) {
  std::vector<evaluation::JudgedQuery> out;
  for (const auto& [text, ids] : qs) {
    evaluation::JudgedQuery q{text, {}};
    for (auto id : ids) q.relevant.insert(ImageId{id});
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_wntags, m) {
  m.doc() = "Ontology-backed image annotation and retrieval";

  static py::exception<Error> error(m, "WntagsError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object instance = py::reinterpret_steal<py::object>(PyObject_CallOneArg(error.ptr(), py::str(e.what()).ptr()));
      instance.attr("code") = py::str(std::string(code_name(e.code())));
      instance.attr("line") = e.line() ? py::object(py::int_(*e.line())) : py::object(py::none());
      PyErr_SetObject(error.ptr(), instance.ptr());
    }
  });

  py::class_<Sense>(m, "Sense")
      .def(py::init([](std::string lemma, const std::string& pos, std::uint32_t offset) {
             return Sense{std::move(lemma), {pos_arg(pos), offset}};
           }),
           py::arg("lemma"), py::arg("pos"), py::arg("offset"))
      .def_readonly("lemma", &Sense::lemma)
      .def_property_readonly("pos", [](const Sense& s) { return pos_str(s.synset.pos); })
      .def_property_readonly("offset", [](const Sense& s) { return s.synset.offset; })
      .def("__eq__", [](const Sense& a, const Sense& b) { return a == b; })
      .def("__hash__", [](const Sense& s) { return std::hash<Sense>{}(s); })
      .def("__repr__", [](const Sense& s) {
        return "Sense('" + s.lemma + "', '" + pos_str(s.synset.pos) + "', " + std::to_string(s.synset.offset) + ")";
      });

  py::class_<OntologyGraph, GraphPtr>(m, "Ontology")
      .def_property_readonly("synset_count", &OntologyGraph::synset_count)
      .def_property_readonly("edge_count", &OntologyGraph::edge_count)
      .def_property_readonly("lemma_count", &OntologyGraph::lemma_count)
      .def("has_lemma", [](const OntologyGraph& g, const std::string& l) { return g.has_lemma(l); })
      .def("gloss", [](const OntologyGraph& g, const Sense& s) { return g.at(s.synset).gloss; })
      .def("to_simple_graph", [](const OntologyGraph& g) {
        std::ostringstream out;
        ontology::write_simple_graph(g, out);
        return out.str();
      });

  m.def("load_wordnet", [](const std::filesystem::path& dir) {
    return std::make_shared<OntologyGraph>(ontology::load_wordnet_dir(dir));
  });
  m.def("load_simple_graph", [](const std::filesystem::path& file) {
    return std::make_shared<OntologyGraph>(ontology::load_simple_graph(file));
  });
  m.def("parse_simple_graph", [](const std::string& text) {
    std::istringstream in(text);
    return std::make_shared<OntologyGraph>(ontology::parse_simple_graph(in));
  });

  m.def("normalize_lemma", [](const std::string& surface, const std::optional<std::string>& pos, const GraphPtr& g) {
    return pos ? ontology::normalize_lemma(surface, pos_arg(*pos), *g) : ontology::normalize_lemma_any(surface, *g);
  }, py::arg("surface"), py::arg("pos") = py::none(), py::arg("ontology"));
  m.def("lookup_senses", [](const std::string& lemma, const std::optional<std::string>& pos, const GraphPtr& g) {
    return ontology::lookup_senses(lemma, pos ? std::optional(pos_arg(*pos)) : std::nullopt, *g);
  }, py::arg("lemma"), py::arg("pos") = py::none(), py::arg("ontology"));
  m.def("sense", [](const std::string& key, const GraphPtr& g) { return ontology::resolve_sense_key(key, *g); },
        py::arg("key"), py::arg("ontology"));
  m.def("sense_key", [](const Sense& s, const GraphPtr& g) { return ontology::sense_key(s, *g); });
  m.def("node_distance", [](const Sense& a, const Sense& b, std::uint32_t max_distance, const GraphPtr& g) {
    return ontology::node_distance(a.synset, b.synset, {max_distance}, *g);
  }, py::arg("a"), py::arg("b"), py::arg("max_distance"), py::arg("ontology"));
  m.def("neighborhood", [](const Sense& seed, std::uint32_t max_distance, bool include_synonyms, const GraphPtr& g) {
    const ontology::NeighborhoodConfig cfg{max_distance, ontology::RelationSet::all(), include_synonyms};
    cfg.validate();
    const auto s = ontology::neighborhood(seed, cfg, *g);
    return std::vector<Sense>(s.begin(), s.end());
  }, py::arg("seed"), py::arg("max_distance"), py::arg("include_synonyms") = true, py::arg("ontology"));

  py::class_<SimilarityTable, std::shared_ptr<SimilarityTable>>(m, "SimilarityTable")
      .def(py::init<>())
      .def("set", &SimilarityTable::set)
      .def("get", &SimilarityTable::get)
      .def("__len__", &SimilarityTable::size);
  m.def("load_similarity_pairs", [](const std::filesystem::path& file, const GraphPtr& g) {
    return std::make_shared<SimilarityTable>(ontology::load_similarity_pairs(file, *g));
  });
  m.def("similarity", [](const Sense& a, const Sense& b, const GraphPtr& g, const SimilarityTable* table,
                         std::uint32_t max_distance) { return ontology::similarity(a, b, *g, table, max_distance); },
        py::arg("a"), py::arg("b"), py::arg("ontology"), py::arg("table") = nullptr,
        py::arg("max_distance") = ontology::kDefaultSimilarityMaxDistance);

  py::class_<Repository>(m, "Repository")
      .def(py::init([](GraphPtr g) { return Repository(std::move(g)); }), py::arg("ontology"))
      .def("add_image", [](Repository& r, const std::string& uri, std::optional<std::string> keyword,
                           std::optional<std::tuple<double, double, double>> emotion) {
             std::optional<repository::EmotionTuple> emo;
             if (emotion) {
               const auto [v, a, d] = *emotion;
               emo = repository::EmotionTuple::make(v, a, d);
             }
             return repository::to_integer(r.add_image(uri, std::move(keyword), emo).id);
           },
           py::arg("uri"), py::arg("keyword") = py::none(), py::arg("emotion") = py::none())
      .def("annotate", [](Repository& r, std::uint64_t id, const Sense& s, double weight, const std::string& who) {
        r.annotate(ImageId{id}, s, weight, who);
      }, py::arg("image"), py::arg("sense"), py::arg("weight"), py::arg("annotator"))
      .def("commit", [](Repository& r, std::uint64_t id) { r.commit_image(ImageId{id}); })
      .def("tags", [](const Repository& r, std::uint64_t id) {
        std::vector<std::pair<Sense, double>> out;
        for (const auto& t : r.get(ImageId{id}).annotations) out.emplace_back(t.sense, t.mean_weight());
        return out;
      })
      .def("is_committed", [](const Repository& r, std::uint64_t id) { return r.get(ImageId{id}).committed; })
      .def("__len__", &Repository::size)
      .def("__eq__", [](const Repository& a, const Repository& b) { return a == b; })
      .def("stats", [](const Repository& r) { return stats_dict(repository::corpus_stats(r)); })
      .def("kappa", [](const Repository& r) { return repository::agreement_report(r).kappa; })
      .def("save", [](const Repository& r, const std::filesystem::path& f) { repository::save_file(r, f); })
      .def("dumps", [](const Repository& r) {
        std::ostringstream out;
        repository::save(r, out);
        return out.str();
      });
  m.def("load_repository", [](const std::filesystem::path& file, GraphPtr g) {
    return repository::load_file(file, std::move(g));
  });

  m.def("search", [](const std::string& text, const Repository& repo, const SimilarityTable* table,
                     std::uint32_t max_distance, std::optional<std::size_t> limit, double min_relevance,
                     unsigned threads) {
    retrieval::SearchOptions opts;
    opts.max_distance = max_distance;
    opts.limit = limit;
    opts.min_relevance = min_relevance;
    opts.threads = threads;
    py::list out;
    for (const auto& r : retrieval::search(text, repo, table, opts)) {
      py::dict d;
      d["id"] = repository::to_integer(r.image);
      d["raw_score"] = r.raw_score;
      d["relevance"] = r.relevance;
      py::list matches;
      for (const auto& mt : r.matches) {
        matches.append(py::make_tuple(mt.query_sense, mt.image_sense, mt.mean_weight, mt.similarity, mt.contribution));
      }
      d["matches"] = matches;
      out.append(d);
    }
    return out;
  }, py::arg("query"), py::arg("repository"), py::arg("table") = nullptr,
     py::arg("max_distance") = retrieval::kDefaultSearchMaxDistance, py::arg("limit") = py::none(),
     py::arg("min_relevance") = 0.0, py::arg("threads") = 1);

  m.def("run_benchmark", [](const std::vector<std::pair<std::string, std::vector<std::uint64_t>>>& queries,
                            const Repository& repo, const SimilarityTable* table, std::uint32_t max_distance) {
    evaluation::BenchmarkOptions opts;
    opts.search.max_distance = max_distance;
    return report_dict(evaluation::run_benchmark(judged(queries), repo, table, opts));
  }, py::arg("queries"), py::arg("repository"), py::arg("table") = nullptr,
     py::arg("max_distance") = retrieval::kDefaultSearchMaxDistance);

  m.def("curve_csv", [](const std::vector<std::tuple<std::size_t, double, double>>& curve) {
    evaluation::EvaluationReport r;
    for (const auto& [k, p, rc] : curve) r.curve.push_back({k, p, rc});
    std::ostringstream out;
    evaluation::emit_curve_csv(r, out);
    return out.str();
  });

  m.def("synthetic_corpus", [](std::size_t images, std::uint64_t seed, std::size_t graph_size,
                               std::optional<std::size_t> constant_tags) {
    evaluation::SyntheticSpec spec;
    spec.image_count = images;
    spec.seed = seed;
    spec.graph_size = graph_size;
    if (constant_tags) spec.tag_counts = evaluation::TagCountDistribution::constant(*constant_tags);
    auto corpus = evaluation::generate_synthetic_corpus(spec);
    std::vector<std::pair<std::string, std::vector<std::uint64_t>>> queries;
    for (const auto& q : corpus.queries) {
      std::vector<std::uint64_t> ids;
      for (auto id : q.relevant) ids.push_back(repository::to_integer(id));
      queries.emplace_back(q.text, ids);
    }
    return py::make_tuple(std::const_pointer_cast<OntologyGraph>(corpus.graph), std::move(corpus.repo), queries);
  }, py::arg("images"), py::arg("seed") = 1, py::arg("graph_size") = 2000, py::arg("constant_tags") = py::none());
}
