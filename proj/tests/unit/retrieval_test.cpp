#include <algorithm>
#include <cmath>
#include <map>
#include <ranges>
#include <sstream>

#include "doctest.h"
#include "support/graph_oracle.hpp"
#include "support/scoring_oracle.hpp"
#include "wntags/error.hpp"
#include "wntags/ontology/lexicon.hpp"
#include "wntags/ontology/parsers.hpp"
#include "wntags/retrieval/search.hpp"

using namespace wntags;
using namespace wntags::retrieval;
using ontology::PartOfSpeech;
using ontology::SynsetId;
using repository::EmotionTuple;

namespace {

const std::string kData = WNTAGS_TEST_DATA;

std::shared_ptr<const OntologyGraph> mini() {
  static const auto g = std::make_shared<const OntologyGraph>(ontology::load_wordnet_dir(kData + "/wordnet_mini"));
  return g;
}

SynsetId n(std::uint32_t off) { return {PartOfSpeech::Noun, off}; }

Errc error_code(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::io_error;
}

ImageRecord record(std::uint64_t id, std::vector<std::pair<Sense, double>> tags) {
  ImageRecord r;
  r.id = ImageId{id};
  r.uri = "img" + std::to_string(id);
  for (auto& [s, w] : tags) r.annotations.push_back({s, {{"a", w, {}}}});
  r.committed = true;
  return r;
}

using Fixture = oracle::ScoringFixture;

Query query_of(std::vector<Sense> senses) {
  Query q;
  q.senses = std::move(senses);
  return q;
}

std::vector<std::uint64_t> ids(const std::vector<RankedResult>& rs) {
  std::vector<std::uint64_t> out;
  for (const auto& r : rs) out.push_back(repository::to_integer(r.image));
  return out;
}

}  // namespace

TEST_CASE("tokenize") {
  CHECK(tokenize("Fire  Engine, red!") == std::vector<std::string>{"fire", "engine", "red"});
  CHECK(tokenize("x-ray o'clock") == std::vector<std::string>{"x-ray", "o'clock"});
  CHECK(tokenize(" ..; ").empty());
}

TEST_CASE("parse_query") {
  const auto& g = *mini();
  const auto person = parse_query("person", g);
  CHECK(person.collocations == std::vector<std::string>{"person"});
  CHECK(person.senses == ontology::lookup_senses("person", std::nullopt, g));

  const auto fe = parse_query("fire engine", g);
  CHECK(fe.collocations == std::vector<std::string>{"fire_engine"});
  CHECK(fe.senses == std::vector<Sense>{{"fire_engine", n(221)}});

  const auto dogs = parse_query("Dogs", g);
  CHECK(dogs.collocations == std::vector<std::string>{"dog"});
  CHECK(dogs.senses.size() == 3);  // two nouns and a verb
  CHECK(dogs.senses.back().synset.pos == PartOfSpeech::Verb);

  const auto mixed = parse_query("big children running fire", g);
  CHECK(mixed.collocations == std::vector<std::string>{"child", "run", "fire"});
  CHECK(mixed.unresolved_tokens == std::vector<std::string>{"big"});
  for (const auto& s : mixed.senses) {
    CHECK(std::find(mixed.collocations.begin(), mixed.collocations.end(), s.lemma) != mixed.collocations.end());
  }

  CHECK(error_code([&] { parse_query("qwzx", g); }) == Errc::empty_query);
  CHECK(error_code([&] { parse_query("  ", g); }) == Errc::empty_query);
}

TEST_CASE("score_image examples") {
  const auto& g = *mini();
  const Sense lamp{"lamp", n(250)};
  const auto q = query_of({lamp});

  const auto single = score_image(q, record(1, {{lamp, 1.0}}), g, nullptr);
  CHECK(single.raw_score == 1.0);
  CHECK(single.relevance == 1.0);
  REQUIRE(single.matches.size() == 1);
  CHECK(single.matches[0].contribution == 1.0);

  std::istringstream in("n1\ta\tx\t\nn2\tb\tx\thypernym:n1\nn3\tc\tx\t\n");
  const auto split = ontology::parse_simple_graph(in);
  const auto none = score_image(query_of({{"c", n(3)}}), record(2, {{{"a", n(1)}, 0.5}, {{"b", n(2)}, 1.0}}), split,
                                nullptr);
  CHECK(none.raw_score == 0.0);
  CHECK(none.relevance == 0.0);
  CHECK(none.matches.empty());

  auto uncommitted = record(3, {{lamp, 1.0}});
  uncommitted.committed = false;
  CHECK(error_code([&] { score_image(q, uncommitted, g, nullptr); }) == Errc::uncommitted_image);

  // puppy vs dog is one hop, vs animal two
  const auto chain = score_image(query_of({{"puppy", n(131)}}),
                                 record(4, {{{"dog", n(130)}, 0.6}, {{"animal", n(120)}, 0.3}}), g, nullptr);
  CHECK(chain.raw_score == doctest::Approx(0.6 / 2 + 0.3 / 3).epsilon(1e-15));
  CHECK(chain.relevance == doctest::Approx((0.6 / 2 + 0.3 / 3) / 0.9).epsilon(1e-15));
}

TEST_CASE("score_image equals the cross-product oracle") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Fixture f(seed, 30, 10, 4);
    util::Rng rng(seed);
    // a few table overrides on pairs that will actually be scored
    const auto qs = f.random_query(rng, 3);
    const auto& first = f.repo.images().begin()->second;
    f.add_table_entry(qs[0], first.annotations[0].sense, 0.42);
    for (std::uint32_t max_d : {2u, 10u}) {
      const QueryScorer scorer(query_of(qs), *f.graph, &f.table, max_d);
      for (const auto& [id, img] : f.repo.images()) {
        const auto got = scorer.score(img);
        const auto [raw, rel] = f.oracle_score(qs, img, static_cast<int>(max_d));
        CHECK(std::abs(got.raw_score - raw) <= 1e-12);
        CHECK(std::abs(got.relevance - rel) <= 1e-12);
        double sum = 0.0;
        for (const auto& m : got.matches) {
          CHECK(m.similarity > 0.0);
          CHECK(m.contribution == m.mean_weight * m.similarity);
          sum += m.contribution;
        }
        CHECK(std::abs(sum - got.raw_score) <= 1e-12);
        CHECK(got.relevance >= 0.0);
        CHECK(got.relevance <= 1.0);
      }
    }
  }
}

TEST_CASE("search ranking matches the oracle ranking") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Fixture f(seed + 50, 40, 10, 5);
    util::Rng rng(seed);
    const auto qs = f.random_query(rng, 2);
    std::vector<std::tuple<double, std::uint64_t>> expected;
    for (const auto& [id, img] : f.repo.images()) {
      const auto [raw, rel] = f.oracle_score(qs, img, 10);
      if (raw > 0 && rel > 0) expected.emplace_back(-rel, repository::to_integer(id));
    }
    std::sort(expected.begin(), expected.end());
    const auto got = search(query_of(qs), f.repo, nullptr);
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(repository::to_integer(got[i].image) == std::get<1>(expected[i]));
      CHECK(std::abs(got[i].relevance + std::get<0>(expected[i])) <= 1e-12);
    }
  }
}

TEST_CASE("search examples") {
  auto g = mini();
  Repository repo(g);
  const Sense lamp{"lamp", n(250)}, run{"run", {PartOfSpeech::Verb, 500}}, sprint{"sprint", {PartOfSpeech::Verb, 501}};
  const Sense chase{"chase", {PartOfSpeech::Verb, 510}};
  const auto add = [&](std::vector<std::pair<Sense, double>> tags, std::optional<std::string> kw = {},
                       std::optional<EmotionTuple> emo = {}) {
    const auto id = repo.add_image("u", kw, emo).id;
    for (const auto& [s, w] : tags) repo.annotate(id, s, w, "a");
    repo.commit_image(id);
    return repository::to_integer(id);
  };
  // nouns only: no path to the verb hierarchy
  const auto planted = add({{lamp, 1.0}, {{"room", n(262)}, 1.0}, {{"house", n(261)}, 1.0}});
  add({{run, 1.0}, {sprint, 1.0}, {chase, 1.0}});
  add({{run, 0.5}, {sprint, 0.2}, {chase, 0.9}});

  const auto res = search(query_of({lamp}), repo, nullptr);
  REQUIRE(!res.empty());
  CHECK(repository::to_integer(res[0].image) == planted);
  CHECK(res.size() == 1);

  SUBCASE("ties break by id") {
    Repository tie(g);
    for (int i = 0; i < 3; ++i) {
      const auto id = tie.add_image("t").id;
      for (const auto& s : {run, sprint, chase}) tie.annotate(id, s, 0.5, "a");
      tie.commit_image(id);
    }
    CHECK(ids(search("run", tie, nullptr)) == std::vector<std::uint64_t>{1, 2, 3});
  }
  SUBCASE("limit and min relevance") {
    const auto all = search("run", repo, nullptr);
    REQUIRE(all.size() == 2);
    CHECK(search("run", repo, nullptr, {.limit = 1}).size() == 1);
    CHECK(search("run", repo, nullptr, {.min_relevance = all[1].relevance}).size() == 1);
    CHECK(search("run", repo, nullptr, {.min_relevance = all[0].relevance}).empty());
  }
  SUBCASE("rank by raw score") {
    const auto by_raw = search("run", repo, nullptr, {.rank_by = RankBy::raw_score});
    REQUIRE(by_raw.size() == 2);
    CHECK(by_raw[0].raw_score >= by_raw[1].raw_score);
  }
  SUBCASE("filters") {
    Repository fr(g);
    const auto mk = [&](std::optional<std::string> kw, std::optional<EmotionTuple> emo) {
      const auto id = fr.add_image("f", kw, emo).id;
      for (const auto& s : {run, sprint, chase}) fr.annotate(id, s, 0.5, "a");
      fr.commit_image(id);
      return repository::to_integer(id);
    };
    const auto sad = mk("Runner", EmotionTuple::make(7.2, 5, 5));
    const auto calm = mk("walker", EmotionTuple::make(3, 2, 5));
    const auto bare = mk(std::nullopt, std::nullopt);
    const auto val_low = SearchFilters{AffectFilter{Range{1, 4}, {}, {}}, {}};
    CHECK(ids(search_with_filters("run", fr, nullptr, {}, val_low)) == std::vector<std::uint64_t>{calm});
    CHECK(ids(search_with_filters("run", fr, nullptr, {}, {{}, "RUNNER"})) == std::vector<std::uint64_t>{sad});
    CHECK(ids(search_with_filters("run", fr, nullptr, {}, {AffectFilter{}, {}})) ==
          std::vector<std::uint64_t>{sad, calm, bare});
    CHECK(error_code([&] {
            search_with_filters("run", fr, nullptr, {}, {AffectFilter{Range{5, 3}, {}, {}}, {}});
          }) == Errc::invalid_range);
    CHECK(error_code([&] {
            search_with_filters("run", fr, nullptr, {}, {AffectFilter{{}, Range{0.5, 3}, {}}, {}});
          }) == Errc::invalid_range);
    CHECK(error_code([&] {
            search_with_filters("run", fr, nullptr, {}, {AffectFilter{{}, {}, Range{2, 9.5}}, {}});
          }) == Errc::invalid_range);
  }
  CHECK(error_code([&] { search("qwzx", repo, nullptr); }) == Errc::empty_query);
}

TEST_CASE("uncommitted images are not searched") {
  Repository repo(mini());
  const auto id = repo.add_image("u").id;
  repo.annotate(id, {"lamp", n(250)}, 1.0, "a");
  CHECK(search("lamp", repo, nullptr).empty());
}

TEST_CASE("search invariances") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Fixture f(seed + 200, 40, 12, 4);
    util::Rng rng(seed);
    const auto q = query_of(f.random_query(rng, 2));
    const auto base = search(q, f.repo, nullptr);
    for (std::size_t i = 1; i < base.size(); ++i) {
      const bool ordered = base[i - 1].relevance > base[i].relevance ||
                           (base[i - 1].relevance == base[i].relevance && base[i - 1].image < base[i].image);
      CHECK(ordered);
    }

    SUBCASE("threads do not change the output") {
      for (unsigned t : {0u, 2u, 3u, 8u}) {
        const auto par = search(q, f.repo, nullptr, {.threads = t});
        CHECK(ids(par) == ids(base));
      }
    }
    SUBCASE("zero-weight tag is neutral") {
      Repository extra = f.repo;
      for (const auto& [id, img] : f.repo.images()) {
        const int v = static_cast<int>(rng.below(f.raw.nodes));
        const Sense s{f.raw.lemmas[v][0], n(v + 1)};
        if (img.find(s)) continue;
        extra.annotate(id, s, 0.0, "z");
      }
      const auto after = search(q, extra, nullptr);
      REQUIRE(after.size() == base.size());
      for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(after[i].image == base[i].image);
        CHECK(after[i].raw_score == base[i].raw_score);
      }
    }
    SUBCASE("uniform weight scaling keeps the order") {
      const double c = seed % 2 ? 0.5 : 0.25;
      Repository scaled(f.graph);
      for (auto img : f.repo.images() | std::views::values) {
        for (auto& tag : img.annotations)
          for (auto& r : tag.ratings) r.weight *= c;
        scaled.insert(img);
      }
      CHECK(ids(search(q, scaled, nullptr)) == ids(base));
      CHECK(ids(search(q, scaled, nullptr, {.rank_by = RankBy::raw_score})) ==
            ids(search(q, f.repo, nullptr, {.rank_by = RankBy::raw_score})));
    }
  }
}

TEST_CASE("exact match outranks weaker matches of equal mass") {
  auto g = mini();
  Repository repo(g);
  const auto mk = [&](std::vector<Sense> tags) {
    const auto id = repo.add_image("u").id;
    for (const auto& s : tags) repo.annotate(id, s, 1.0, "a");
    repo.commit_image(id);
    return repository::to_integer(id);
  };
  const auto near = mk({{"puppy", n(131)}, {"animal", n(120)}, {"cat", n(140)}});
  const auto exact = mk({{"dog", n(130)}, {"puppy", n(131)}, {"animal", n(120)}});
  Query q = query_of({{"dog", n(130)}});
  const auto res = search(q, repo, nullptr);
  REQUIRE(res.size() == 2);
  CHECK(repository::to_integer(res[0].image) == exact);
  CHECK(repository::to_integer(res[1].image) == near);
}

TEST_CASE("subsample_tags") {
  std::vector<std::pair<Sense, double>> tags;
  for (std::uint32_t i = 0; i < 20; ++i) tags.push_back({{"w" + std::to_string(i), n(i + 1)}, 0.5});
  const auto img = record(1, tags);

  CHECK(subsample_tags(img, 1.0, 5) == img);
  const auto half = subsample_tags(img, 0.5, 5);
  CHECK(half.annotations.size() == 10);
  for (const auto& a : half.annotations) CHECK(img.find(a.sense) != nullptr);
  CHECK(subsample_tags(img, 0.5, 5) == half);
  CHECK(subsample_tags(img, 0.01, 5).annotations.size() == 1);
  CHECK(subsample_tags(img, 0.3, 5).annotations.size() == 6);

  std::set<std::vector<std::string>> distinct;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::vector<std::string> names;
    for (const auto& a : subsample_tags(img, 0.5, seed).annotations) names.push_back(a.sense.lemma);
    distinct.insert(names);
  }
  CHECK(distinct.size() > 1);

  CHECK(error_code([&] { subsample_tags(img, 0.0, 1); }) == Errc::invalid_argument);
  CHECK(error_code([&] { subsample_tags(img, 1.5, 1); }) == Errc::invalid_argument);
}

TEST_CASE("subsampled search is deterministic") {
  Fixture f(9, 40, 20, 8);
  util::Rng rng(1);
  const auto q = query_of(f.random_query(rng, 2));
  const SearchOptions opt{.subsample = Subsample{0.5, 77}};
  const auto a = search(q, f.repo, nullptr, opt);
  auto threaded = opt;
  threaded.threads = 4;
  CHECK(ids(a) == ids(search(q, f.repo, nullptr, threaded)));
  for (const auto& r : a) {
    const auto& full = f.repo.get(r.image);
    std::set<Sense> used;
    for (const auto& m : r.matches) used.insert(m.image_sense);
    CHECK(used.size() <= (full.annotations.size() + 1) / 2);
  }
}
