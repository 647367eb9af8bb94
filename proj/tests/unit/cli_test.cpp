#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"

namespace fs = std::filesystem;

extern char** environ;

namespace {

const std::string kData = WNTAGS_TEST_DATA;
const std::string kCli = WNTAGS_CLI;

struct Run {
  int exit = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const auto cmd = "env -u WNTAGS_REPO " + env + " " + kCli + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  while (const auto n = fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("wntags_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

const std::string kSimple = "--simple " + kData + "/mini.simple.tsv";

// One committed image tagged lamp/room/house, one with verbs.
std::string planted_repo(const TempDir& dir) {
  const auto repo = dir / "repo.jsonl";
  const auto base = kSimple + " --repo " + repo + " ";
  REQUIRE(run(base + "add-image --uri a.jpg --keyword Lamp --val 3 --ar 4 --dom 5").exit == 0);
  REQUIRE(run(base + "add-image --uri b.jpg").exit == 0);
  for (const auto* k : {"lamp#n#1", "room#n#1", "house#n#1"}) {
    REQUIRE(run(base + "annotate --image 1 --sense " + k + " --weight 0.9 --by ana").exit == 0);
  }
  for (const auto* k : {"run#v#1", "sprint#v#1", "chase#v#1"}) {
    REQUIRE(run(base + "annotate --image 2 --sense " + k + " --weight 0.9 --by ana").exit == 0);
  }
  REQUIRE(run(base + "commit --image 1").exit == 0);
  REQUIRE(run(base + "commit --image 2").exit == 0);
  return repo;
}

}  // namespace

TEST_CASE("import-wordnet") {
  const auto wn = run("import-wordnet --dir " + kData + "/wordnet_mini");
  CHECK(wn.exit == 0);
  CHECK(wn.out == "synsets: 24\nedges: 25\nlemmas: 40\n");
  const auto simple = run("import-wordnet --simple " + kData + "/mini.simple.tsv");
  CHECK(simple.exit == 0);
  CHECK(simple.out == wn.out);
  CHECK(run("import-wordnet --dir /definitely/missing").exit == 2);

  TempDir dir;
  std::ofstream(dir / "bad.tsv") << "n1\tdog\tgloss\tsideways:n2\n";
  const auto bad = run("import-wordnet --simple " + (dir / "bad.tsv"));
  CHECK(bad.exit == 2);
  CHECK(bad.out.find(":1:") != std::string::npos);
  CHECK(run("import-wordnet").exit == 2);
}

TEST_CASE("annotate exit codes") {
  TempDir dir;
  const auto repo = planted_repo(dir);
  const auto base = kSimple + " --repo " + repo + " ";
  CHECK(run(base + "annotate --image 1 --sense dog#n#1 --weight 0.5 --by ben").exit == 0);
  const auto heavy = run(base + "annotate --image 1 --sense dog#n#1 --weight 2 --by ben");
  CHECK(heavy.exit == 3);
  CHECK(heavy.out.find("weight_out_of_range") != std::string::npos);
  CHECK(run(base + "annotate --image 1 --sense dog#n#7 --weight 0.5 --by ben").exit == 3);
  CHECK(run(base + "annotate --image 9 --sense dog#n#1 --weight 0.5 --by ben").exit == 3);
  CHECK(run(base + "annotate --image 1 --sense dog --weight 0.5 --by ben").exit == 2);
  CHECK(run(kSimple + " annotate --image 1 --sense dog#n#1 --weight 0.5 --by ben").exit == 2);
  CHECK(run(kSimple + " --repo " + (dir / "missing.jsonl") + " annotate --image 1 --sense dog#n#1 --weight 0.5 --by b")
            .exit == 2);
  CHECK(run(base + "annotate --image 1").exit == 2);
  CHECK(run("--repo " + repo + " annotate --image 1 --sense dog#n#1 --weight 0.5 --by ben").exit == 2);
}

TEST_CASE("add-image and commit exit codes") {
  TempDir dir;
  const auto base = kSimple + " --repo " + (dir / "r.jsonl") + " ";
  const auto first = run(base + "add-image --uri x.jpg");
  CHECK(first.exit == 0);
  CHECK(first.out == "1\n");
  CHECK(run(base + "add-image --uri y.jpg --val 0.5 --ar 5 --dom 5").exit == 3);
  CHECK(run(base + "add-image --uri y.jpg --val 5").exit == 3);
  CHECK(run(base + "commit --image 1").exit == 3);
  CHECK(run(base + "commit --image 4").exit == 3);
  const auto via_env = run(kSimple + " add-image --uri z.jpg", "WNTAGS_REPO=" + (dir / "r.jsonl"));
  CHECK(via_env.exit == 0);
  CHECK(via_env.out == "2\n");
}

TEST_CASE("search") {
  TempDir dir;
  const auto repo = planted_repo(dir);
  const auto base = kSimple + " --repo " + repo + " ";
  const auto table = run(base + "search --q lamps");
  CHECK(table.exit == 0);
  CHECK(table.out.find("\n1  1  ") != std::string::npos);

  const auto csv = run(base + "search --q lamp --csv");
  CHECK(csv.exit == 0);
  CHECK(csv.out.rfind("rank,image_id,relevance\n1,1,", 0) == 0);
  const auto german = run(base + "search --q lamp --csv", "LC_ALL=de_DE.UTF-8 LANG=de_DE.UTF-8");
  CHECK(german.out == csv.out);

  CHECK(run(base + "search --q qwzx").exit == 3);
  CHECK(run(base + "search --q lamp --val 5..3").exit == 3);
  CHECK(run(base + "search --q lamp --maxd 31").exit == 2);
  CHECK(run(base + "search --q lamp --keyword LAMP --csv").out == csv.out);
  CHECK(run(base + "search --q lamp --val 5..9 --csv").out == "rank,image_id,relevance\n");
  CHECK(run(base + "search --q run --csv").out.rfind("rank,image_id,relevance\n1,2,", 0) == 0);
  CHECK(run(base + "--maxd 0 search --q chase --csv").out.find("\n1,2,") != std::string::npos);

  const auto stats = run(base + "stats");
  CHECK(stats.exit == 0);
  CHECK(stats.out.find("committed: 2") != std::string::npos);
}

TEST_CASE("evaluate") {
  TempDir dir;
  const auto golden = run("--simple " + kData + "/mini.simple.tsv --repo " + kData +
                          "/golden/repo.jsonl evaluate --queries " + kData + "/golden/queries.tsv --out " +
                          (dir / "curve.csv"));
  CHECK(golden.exit == 0);
  CHECK(slurp(dir / "curve.csv") == slurp(kData + "/golden/curve.csv"));

  const auto same = run("--simple " + kData + "/mini.simple.tsv --repo " + kData +
                        "/golden/repo.jsonl evaluate --subsample 1.0 --seed 3 --threads 3 --queries " + kData +
                        "/golden/queries.tsv --out " + (dir / "curve1.csv"));
  CHECK(same.exit == 0);
  CHECK(same.out == golden.out);
  CHECK(slurp(dir / "curve1.csv") == slurp(dir / "curve.csv"));

  REQUIRE(run("synth --images 40 --seed 2 --graph-size 300 --out " + (dir / "s.jsonl") + " --graph-out " +
              (dir / "g.tsv") + " --queries-out " + (dir / "q.tsv"))
              .exit == 0);
  const auto perfect = run("--simple " + (dir / "g.tsv") + " --repo " + (dir / "s.jsonl") +
                           " --maxd 1 evaluate --queries " + (dir / "q.tsv"));
  CHECK(perfect.exit == 0);
  CHECK(perfect.out.find("mean precision: 1.0000") != std::string::npos);

  CHECK(run("--simple " + kData + "/mini.simple.tsv --repo " + kData + "/golden/repo.jsonl evaluate --queries " +
            (dir / "none.tsv"))
            .exit == 2);
  std::ofstream(dir / "bad.tsv") << "dog\tone\n";
  CHECK(run("--simple " + kData + "/mini.simple.tsv --repo " + kData + "/golden/repo.jsonl evaluate --queries " +
            (dir / "bad.tsv"))
            .exit == 2);
}

TEST_CASE("synth") {
  TempDir dir;
  CHECK(run("synth --images 30 --seed 9 --graph-size 200 --out " + (dir / "a.jsonl")).exit == 0);
  CHECK(run("synth --images 30 --seed 9 --graph-size 200 --out " + (dir / "b.jsonl")).exit == 0);
  CHECK(slurp(dir / "a.jsonl") == slurp(dir / "b.jsonl"));
  CHECK(run("synth --images 30 --seed 10 --graph-size 200 --out " + (dir / "c.jsonl")).exit == 0);
  CHECK(slurp(dir / "a.jsonl") != slurp(dir / "c.jsonl"));

  CHECK(run("synth --images 0 --out " + (dir / "empty.jsonl")).exit == 0);
  CHECK(fs::exists(dir / "empty.jsonl"));
  CHECK(fs::file_size(dir / "empty.jsonl") == 0);

  const auto hundred = run("synth --images 100 --seed 1 --out " + (dir / "h.jsonl") + " --graph-out " + (dir / "h.tsv"));
  CHECK(hundred.exit == 0);
  const auto stats = run("--simple " + (dir / "h.tsv") + " --repo " + (dir / "h.jsonl") + " stats");
  const auto at = stats.out.find("tag count median: ");
  REQUIRE(at != std::string::npos);
  const double median = std::stod(stats.out.substr(at + 18));
  CHECK(median >= 18.0);
  CHECK(median <= 23.0);

  CHECK(run("synth --images 10 --constant-tags 2 --out " + (dir / "x.jsonl")).exit == 3);
  CHECK(run("synth --out " + (dir / "x.jsonl")).exit == 2);
}

TEST_CASE("serve") {
  TempDir dir;
  const auto repo = planted_repo(dir);

  int out_pipe[2];
  REQUIRE(pipe(out_pipe) == 0);
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
  posix_spawn_file_actions_addclose(&actions, out_pipe[0]);
  std::vector<std::string> args{kCli, "--simple", kData + "/mini.simple.tsv", "--repo", repo, "serve", "--bind",
                                "127.0.0.1:0"};
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);
  pid_t pid = 0;
  REQUIRE(posix_spawn(&pid, kCli.c_str(), &actions, nullptr, argv.data(), environ) == 0);
  posix_spawn_file_actions_destroy(&actions);
  close(out_pipe[1]);

  std::string banner;
  char c = 0;
  while (read(out_pipe[0], &c, 1) == 1 && c != '\n') banner += c;
  REQUIRE(banner.rfind("listening on 127.0.0.1:", 0) == 0);
  const int port = std::stoi(banner.substr(banner.rfind(':') + 1));

  httplib::Client client("127.0.0.1", port);
  const auto stats = client.Get("/api/stats");
  REQUIRE(stats);
  CHECK(stats->status == 200);
  CHECK(nlohmann::json::parse(stats->body)["image_count"] == 2);
  const auto created = client.Post("/api/images", R"({"uri":"served.jpg"})", "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);

  SUBCASE("occupied port") {
    const auto busy = run(kSimple + " --repo " + repo + " serve --bind 127.0.0.1:" + std::to_string(port));
    CHECK(busy.exit == 2);
  }

  kill(pid, SIGINT);
  int status = 0;
  REQUIRE(waitpid(pid, &status, 0) == pid);
  CHECK(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 0);
  close(out_pipe[0]);
  CHECK(slurp(repo).find("served.jpg") != std::string::npos);
}
