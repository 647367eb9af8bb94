#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <pthread.h>
#include <thread>

#include "CLI11.hpp"
#include "wntags/error.hpp"
#include "wntags/evaluation/benchmark.hpp"
#include "wntags/evaluation/synthetic.hpp"
#include "wntags/ontology/lexicon.hpp"
#include "wntags/ontology/parsers.hpp"
#include "wntags/repository/agreement.hpp"
#include "wntags/repository/persistence.hpp"
#include "wntags/retrieval/search.hpp"
#include "wntags/service/api.hpp"
#include "wntags/service/server.hpp"
#include "wntags/util/strings.hpp"

namespace fs = std::filesystem;
using namespace wntags;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitDomain = 3;

struct Config {
  std::string ontology_dir;
  std::string simple_file;
  std::string sim_file;
  std::string repo_file;
  std::uint32_t max_distance = retrieval::kDefaultSearchMaxDistance;
};

[[noreturn]] void input_error(const std::string& message) { throw Error(Errc::io_error, message); }

std::shared_ptr<const ontology::OntologyGraph> load_ontology(const Config& cfg) {
  if (!cfg.ontology_dir.empty()) {
    return std::make_shared<const ontology::OntologyGraph>(ontology::load_wordnet_dir(cfg.ontology_dir));
  }
  if (!cfg.simple_file.empty()) {
    return std::make_shared<const ontology::OntologyGraph>(ontology::load_simple_graph(cfg.simple_file));
  }
  input_error("no ontology given; use --ontology <dir> or --simple <file>");
}

std::shared_ptr<const ontology::SimilarityTable> load_table(const Config& cfg, const ontology::OntologyGraph& g) {
  if (cfg.sim_file.empty()) return nullptr;
  return std::make_shared<const ontology::SimilarityTable>(ontology::load_similarity_pairs(fs::path(cfg.sim_file), g));
}

const std::string& repo_path(const Config& cfg) {
  if (cfg.repo_file.empty()) input_error("no repository given; use --repo <file> or WNTAGS_REPO");
  return cfg.repo_file;
}

repository::Repository open_repo(const Config& cfg, std::shared_ptr<const ontology::OntologyGraph> graph,
                                 bool create) {
  const auto& path = repo_path(cfg);
  if (!fs::exists(path)) {
    if (create) return repository::Repository(std::move(graph));
    input_error("repository file " + path + " does not exist");
  }
  return repository::load_file(path, std::move(graph));
}

std::optional<retrieval::Range> parse_range(const std::string& text, const char* axis) {
  if (text.empty()) return std::nullopt;
  const auto dots = text.find("..");
  const auto lo = dots == std::string::npos ? std::nullopt : util::parse_double(text.substr(0, dots));
  const auto hi = dots == std::string::npos ? std::nullopt : util::parse_double(text.substr(dots + 2));
  if (!lo || !hi) throw Error(Errc::invalid_range, std::string("--") + axis + " must look like a..b");
  return retrieval::Range{*lo, *hi};
}

void print_stats(const repository::Repository& repo) {
  const auto s = repository::corpus_stats(repo);
  std::cout << "images: " << repo.size() << '\n' << "committed: " << s.image_count << '\n';
  if (s.empty) {
    std::cout << "tag counts: none committed\n";
  } else {
    std::cout << "tag count median: " << util::format_fixed(s.tag_count_median, 2) << '\n'
              << "tag count mean: " << util::format_fixed(s.tag_count_mean, 2) << '\n'
              << "tag count sd: " << util::format_fixed(s.tag_count_sd, 2) << '\n'
              << "tag count range: " << s.tag_count_min << ".." << s.tag_count_max << '\n'
              << "distinct synsets: " << s.distinct_synset_count << '\n';
  }
  const auto agreement = repository::agreement_report(repo);
  if (agreement.rated_tags == 0) {
    std::cout << "kappa: n/a (no tag has two ratings)\n";
  } else {
    const auto weak = std::count_if(agreement.tags.begin(), agreement.tags.end(), [](const auto& t) {
      return t.inadequate;
    });
    std::cout << "kappa: " << util::format_fixed(agreement.kappa, 4) << " over " << agreement.rated_tags
              << " tags, " << weak << " below threshold\n";
  }
}

// Blocks SIGINT/SIGTERM for every thread and stops the server from a
// dedicated waiter thread.
int serve(const Config& cfg, const std::string& bind) {
  const auto [host, port] = service::parse_bind_address(bind);
  auto graph = load_ontology(cfg);
  auto table = load_table(cfg, *graph);
  service::ApiOptions options{cfg.max_distance, fs::path(repo_path(cfg))};
  service::Api api(open_repo(cfg, graph, true), table, options);
  service::Server server(api);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  sigaddset(&signals, SIGUSR1);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  const int bound = server.bind(host, port);
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  std::cout << "listening on " << host << ':' << bound << std::endl;
  server.run();
  pthread_kill(waiter.native_handle(), SIGUSR1);
  waiter.join();
  api.flush();
  std::cout << "stopped; repository saved to " << repo_path(cfg) << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ontology-backed image annotation and retrieval"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  app.add_option("--ontology", cfg.ontology_dir, "WordNet database directory");
  app.add_option("--simple", cfg.simple_file, "SimpleGraph ontology file");
  app.add_option("--sim", cfg.sim_file, "SimPairs similarity file");
  app.add_option("--repo", cfg.repo_file, "Repository file")->envname("WNTAGS_REPO");
  app.add_option("--maxd", cfg.max_distance, "Similarity cutoff in nodes")->check(CLI::Range(0, 30));

  auto* import_cmd = app.add_subcommand("import-wordnet", "Load an ontology and print its size");
  std::string import_dir, import_simple, export_file;
  import_cmd->add_option("--dir", import_dir, "WordNet database directory");
  import_cmd->add_option("--simple", import_simple, "SimpleGraph file to load instead");
  import_cmd->add_option("--export", export_file, "Write the graph as a SimpleGraph file");

  auto* add_cmd = app.add_subcommand("add-image", "Add an image record");
  std::string uri, keyword;
  std::optional<double> val, ar, dom;
  add_cmd->add_option("--uri", uri, "Image location")->required();
  add_cmd->add_option("--keyword", keyword, "Legacy keyword");
  add_cmd->add_option("--val", val, "Valence in [1, 9]");
  add_cmd->add_option("--ar", ar, "Arousal in [1, 9]");
  add_cmd->add_option("--dom", dom, "Dominance in [1, 9]");

  auto* annotate_cmd = app.add_subcommand("annotate", "Rate a sense on an image");
  std::uint64_t image = 0;
  std::string sense_key, annotator;
  double weight = 0.0;
  annotate_cmd->add_option("--image", image, "Image id")->required();
  annotate_cmd->add_option("--sense", sense_key, "Sense as lemma#pos#n")->required();
  annotate_cmd->add_option("--weight", weight, "Weight in [0, 1]")->required();
  annotate_cmd->add_option("--by", annotator, "Annotator name")->required();

  auto* commit_cmd = app.add_subcommand("commit", "Make an image searchable");
  commit_cmd->add_option("--image", image, "Image id")->required();

  auto* search_cmd = app.add_subcommand("search", "Rank committed images for a query");
  std::string query, val_range, ar_range, dom_range, search_keyword, rank_by = "relevance";
  std::optional<std::size_t> limit;
  double min_relevance = 0.0;
  std::optional<double> fraction;
  std::uint64_t seed = 0;
  bool csv = false;
  search_cmd->add_option("--q", query, "Query text")->required();
  search_cmd->add_option("--val", val_range, "Valence range a..b");
  search_cmd->add_option("--ar", ar_range, "Arousal range a..b");
  search_cmd->add_option("--dom", dom_range, "Dominance range a..b");
  search_cmd->add_option("--keyword", search_keyword, "Keyword filter, case-insensitive");
  search_cmd->add_option("--limit", limit, "Maximum results");
  search_cmd->add_option("--minrel", min_relevance, "Drop results at or below this relevance");
  search_cmd->add_option("--rank", rank_by, "relevance or raw")->check(CLI::IsMember({"relevance", "raw"}));
  search_cmd->add_option("--subsample", fraction, "Score a random share of each image's tags");
  search_cmd->add_option("--seed", seed, "Subsample seed");
  search_cmd->add_flag("--csv", csv, "Machine-readable output");

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Run judged queries and report precision");
  std::string queries_file, curve_file;
  unsigned threads = 1;
  evaluate_cmd->add_option("--queries", queries_file, "Judged query file")->required();
  evaluate_cmd->add_option("--subsample", fraction, "Score a random share of each image's tags");
  evaluate_cmd->add_option("--seed", seed, "Subsample seed");
  evaluate_cmd->add_option("--out", curve_file, "Write the precision/recall curve CSV here");
  evaluate_cmd->add_option("--threads", threads, "Queries evaluated in parallel (0 = all cores)");

  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP/JSON service");
  std::string bind = "127.0.0.1:8080";
  serve_cmd->add_option("--bind", bind, "host:port to listen on");

  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic corpus");
  evaluation::SyntheticSpec spec;
  std::string synth_out, graph_out, queries_out;
  std::optional<std::size_t> constant_tags;
  synth_cmd->add_option("--images", spec.image_count, "Image count")->required();
  synth_cmd->add_option("--seed", spec.seed, "Random seed");
  synth_cmd->add_option("--out", synth_out, "Repository file to write")->required();
  synth_cmd->add_option("--graph-size", spec.graph_size, "Synsets in the generated ontology");
  synth_cmd->add_option("--graph-out", graph_out, "Write the generated ontology as SimpleGraph");
  synth_cmd->add_option("--queries-out", queries_out, "Write the judged queries");
  synth_cmd->add_option("--query-count", spec.query_count, "Judged queries to plant");
  synth_cmd->add_option("--constant-tags", constant_tags, "Give every image exactly this many tags");

  auto* stats_cmd = app.add_subcommand("stats", "Corpus statistics and annotator agreement");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*import_cmd) {
      std::shared_ptr<const ontology::OntologyGraph> graph;
      if (!import_dir.empty()) {
        graph = std::make_shared<const ontology::OntologyGraph>(ontology::load_wordnet_dir(import_dir));
      } else if (!import_simple.empty()) {
        graph = std::make_shared<const ontology::OntologyGraph>(ontology::load_simple_graph(import_simple));
      } else {
        graph = load_ontology(cfg);
      }
      std::cout << "synsets: " << graph->synset_count() << '\n'
                << "edges: " << graph->edge_count() << '\n'
                << "lemmas: " << graph->lemma_count() << '\n';
      if (const auto table = load_table(cfg, *graph)) std::cout << "similarity pairs: " << table->size() << '\n';
      if (!export_file.empty()) {
        std::ofstream out(export_file);
        if (!out) input_error("cannot write " + export_file);
        ontology::write_simple_graph(*graph, out);
      }
    } else if (*add_cmd) {
      std::optional<repository::EmotionTuple> emotion;
      if (val || ar || dom) {
        if (!(val && ar && dom)) throw Error(Errc::invalid_argument, "--val, --ar and --dom go together");
        emotion = repository::EmotionTuple::make(*val, *ar, *dom);
      }
      auto repo = open_repo(cfg, load_ontology(cfg), true);
      const auto& rec = repo.add_image(uri, keyword.empty() ? std::nullopt : std::optional(keyword), emotion);
      const auto id = rec.id;
      repository::save_file(repo, repo_path(cfg));
      std::cout << repository::to_integer(id) << '\n';
    } else if (*annotate_cmd) {
      auto graph = load_ontology(cfg);
      auto repo = open_repo(cfg, graph, false);
      const auto sense = ontology::resolve_sense_key(sense_key, *graph);
      const auto& rec = repo.annotate(repository::ImageId{image}, sense, weight, annotator);
      std::cout << "image " << image << ": " << ontology::sense_key(sense, *graph) << " rated "
                << util::format_fixed(weight, 3) << " by " << annotator << " (" << rec.sense_count()
                << " senses)\n";
      repository::save_file(repo, repo_path(cfg));
    } else if (*commit_cmd) {
      auto repo = open_repo(cfg, load_ontology(cfg), false);
      repo.commit_image(repository::ImageId{image});
      repository::save_file(repo, repo_path(cfg));
      std::cout << "image " << image << " committed\n";
    } else if (*search_cmd) {
      auto graph = load_ontology(cfg);
      const auto table = load_table(cfg, *graph);
      const auto repo = open_repo(cfg, graph, false);
      retrieval::SearchOptions options;
      options.max_distance = cfg.max_distance;
      options.min_relevance = min_relevance;
      options.limit = limit;
      options.rank_by = rank_by == "raw" ? retrieval::RankBy::raw_score : retrieval::RankBy::relevance;
      if (fraction) options.subsample = retrieval::Subsample{*fraction, seed};
      retrieval::SearchFilters filters;
      retrieval::AffectFilter affect{parse_range(val_range, "val"), parse_range(ar_range, "ar"),
                                     parse_range(dom_range, "dom")};
      if (affect.valence || affect.arousal || affect.dominance) filters.affect = affect;
      if (!search_keyword.empty()) filters.keyword = search_keyword;
      const auto results = retrieval::search_with_filters(query, repo, table.get(), options, filters);
      if (csv) {
        std::cout << "rank,image_id,relevance\n";
        for (std::size_t i = 0; i < results.size(); ++i) {
          std::cout << i + 1 << ',' << repository::to_integer(results[i].image) << ','
                    << util::format_fixed(results[i].relevance, 6) << '\n';
        }
      } else {
        std::cout << "rank  image  relevance  top matches\n";
        for (std::size_t i = 0; i < results.size(); ++i) {
          const auto& r = results[i];
          auto matches = r.matches;
          std::stable_sort(matches.begin(), matches.end(),
                           [](const auto& a, const auto& b) { return a.contribution > b.contribution; });
          std::string top;
          for (std::size_t m = 0; m < std::min<std::size_t>(3, matches.size()); ++m) {
            top += (m ? ", " : "") + ontology::sense_key(matches[m].image_sense, *graph) + "=" +
                   util::format_fixed(matches[m].contribution, 3);
          }
          std::cout << i + 1 << "  " << repository::to_integer(r.image) << "  " << util::format_fixed(r.relevance, 4)
                    << "  " << top << '\n';
        }
        if (results.empty()) std::cout << "(no matching images)\n";
      }
    } else if (*evaluate_cmd) {
      auto graph = load_ontology(cfg);
      const auto table = load_table(cfg, *graph);
      const auto repo = open_repo(cfg, graph, false);
      std::ifstream in(queries_file);
      if (!in) input_error("cannot open " + queries_file);
      const auto queries = evaluation::read_judged_queries(in);
      evaluation::BenchmarkOptions options;
      options.search.max_distance = cfg.max_distance;
      if (fraction) options.search.subsample = retrieval::Subsample{*fraction, seed};
      options.threads = threads;
      const auto report = evaluation::run_benchmark(queries, repo, table.get(), options);
      for (const auto& q : report.per_query) {
        std::cout << q.query << ": ";
        if (q.error) {
          std::cout << "failed (" << *q.error << ")\n";
        } else {
          std::cout << q.result_count << " results, average precision "
                    << util::format_fixed(q.average_precision, 4) << '\n';
        }
      }
      std::cout << "queries: " << report.per_query.size() << '\n'
                << "mean precision: " << util::format_fixed(report.mean_precision, 4) << '\n'
                << "mean result count: " << util::format_fixed(report.mean_result_count, 2) << '\n';
      if (!curve_file.empty()) {
        std::ofstream out(curve_file, std::ios::binary);
        if (!out) input_error("cannot write " + curve_file);
        evaluation::emit_curve_csv(report, out);
      }
    } else if (*serve_cmd) {
      return serve(cfg, bind);
    } else if (*synth_cmd) {
      std::shared_ptr<const ontology::OntologyGraph> graph;
      if (!cfg.ontology_dir.empty() || !cfg.simple_file.empty()) graph = load_ontology(cfg);
      if (constant_tags) spec.tag_counts = evaluation::TagCountDistribution::constant(*constant_tags);
      if (spec.image_count == 0) {
        // nothing to sample: an empty repository and no queries
        std::ofstream out(synth_out, std::ios::binary | std::ios::trunc);
        if (!out) input_error("cannot write " + synth_out);
        if (!queries_out.empty()) std::ofstream(queries_out, std::ios::trunc);
        std::cout << "images: 0\n";
        return 0;
      }
      const auto corpus = evaluation::generate_synthetic_corpus(spec, graph);
      repository::save_file(corpus.repo, synth_out);
      if (!graph_out.empty()) {
        std::ofstream out(graph_out, std::ios::binary);
        if (!out) input_error("cannot write " + graph_out);
        ontology::write_simple_graph(*corpus.graph, out);
      }
      if (!queries_out.empty()) {
        std::ofstream out(queries_out, std::ios::binary);
        if (!out) input_error("cannot write " + queries_out);
        evaluation::write_judged_queries(corpus.queries, out);
      }
      const auto s = repository::corpus_stats(corpus.repo);
      std::cout << "images: " << corpus.repo.size() << '\n'
                << "tag count median: " << util::format_fixed(s.tag_count_median, 2) << '\n'
                << "tag count mean: " << util::format_fixed(s.tag_count_mean, 2) << '\n'
                << "queries: " << corpus.queries.size() << '\n';
    } else if (*stats_cmd) {
      print_stats(open_repo(cfg, load_ontology(cfg), false));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << code_name(e.code()) << ": " << e.what() << '\n';
    return is_input_error(e.code()) ? kExitInput : kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return 0;
}
