#include <doctest.h>

#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "oversmooth/cli.hpp"
#include "oversmooth/io.hpp"

using namespace oversmooth;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("oversmooth_cli_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

std::size_t data_rows(const std::string& csv) {
  std::istringstream in(csv);
  std::size_t n = 0;
  for (std::string l; std::getline(in, l);)
    if (!l.empty() && l[0] != '#') ++n;
  return n - 1;  // header
}

const std::string kData = OVERSMOOTH_DATA_DIR;

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("propagate and fit-decay example") {
  TempDir d("example");
  const auto r = cli({"propagate", "--synthetic", "grid:10x10", "--model", "gcn", "--layers", "128", "--dim", "128",
                      "--seed", "1", "--measure", "dirichlet,mad", "--out", d / "s.csv"});
  REQUIRE(r.code == 0);
  const std::string csv = read_text(d / "s.csv");
  CHECK(data_rows(csv) == 258);
  CHECK(csv.find("# model: gcn") != std::string::npos);

  const auto f = cli({"fit-decay", "--in", d / "s.csv", "--measure", "dirichlet"});
  REQUIRE(f.code == 0);
  const auto j = nlohmann::json::parse(f.out);
  CHECK(j["classification"] == "exponential");
  CHECK(j["measure"] == "dirichlet");

  const auto both = cli({"fit-decay", "--in", d / "s.csv"});
  REQUIRE(both.code == 0);
  CHECK(nlohmann::json::parse(both.out).size() == 2);
}

TEST_CASE("exit codes") {
  CHECK(cli({"propagate", "--model", "nosuch"}).code == 2);
  CHECK(cli({"nosuch"}).code == 2);
  CHECK(cli({"propagate", "--synthetic", "grid:3x3", "--bogus"}).code == 2);
  CHECK(cli({"propagate", "--synthetic", "moebius:4"}).code == 2);
  CHECK(cli({"propagate"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
  CHECK(cli({"propagate", "--graph", "/nonexistent/file"}).code == 1);
  CHECK(cli({"fit-decay", "--in", "/nonexistent/file"}).code == 1);
  CHECK_FALSE(cli({"propagate", "--graph", "/nonexistent/file"}).err.empty());
}

TEST_CASE("synthetic graph specs") {
  CHECK(synthetic_graph("grid:3x4").node_count() == 12);
  CHECK(synthetic_graph("ring:7").edge_count() == 7);
  CHECK(synthetic_graph("barbell:3").node_count() == 6);
  CHECK(is_synthetic_spec("star:5"));
  CHECK_FALSE(is_synthetic_spec("data/x.edges"));
  CHECK_THROWS_AS(synthetic_graph("grid:3"), UsageError);
}

TEST_CASE("file graphs are labeled by content hash") {
  TempDir d("hash");
  const auto r = cli({"propagate", "--graph", kData + "/texas_like.edges", "--layers", "2", "--dim", "4",
                      "--measure", "dirichlet"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("# graph_hash: ") != std::string::npos);
  CHECK(r.out.find(",gcn-file-") != std::string::npos);
}

TEST_CASE("repeated invocations write identical bytes") {
  TempDir d("determinism");
  const std::vector<std::vector<std::string>> commands{
      {"propagate", "--synthetic", "ring:12", "--model", "gat", "--layers", "8", "--dim", "6", "--seed", "3",
       "--out", "@"},
      {"ct", "--synthetic", "ring:10", "--t-end", "2", "--dt", "0.01", "--out", "@"},
      {"axioms", "--measure", "mad", "--synthetic", "ring:6", "--dim", "1", "--positive", "--trials", "50", "--out",
       "@"},
  };
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::string first;
    for (int rep = 0; rep < 2; ++rep) {
      auto args = commands[i];
      const std::string path = d / (std::to_string(i) + "_" + std::to_string(rep));
      for (auto& a : args)
        if (a == "@") a = path;
      const auto r = cli(args);
      REQUIRE_MESSAGE(r.code == 0, r.err);
      const std::string text = read_text(path);
      CHECK_FALSE(text.empty());
      if (rep == 0)
        first = text;
      else
        CHECK(text == first);
    }
  }
}

TEST_CASE("sweep config") {
  TempDir d("sweep");
  write_text(d / "cfg.json", R"({"runs": [
    {"model": "gcn", "graph": "ring:10", "layers": 6, "dim": 4, "seeds": [1, 2]},
    {"model": "sage", "graph": "grid:3x3", "layers": 6, "dim": 4, "seed": 5, "measures": ["dirichlet"]}
  ]})");
  const auto r = cli({"sweep", "--config", d / "cfg.json", "--out", d / "out.csv", "--threads", "2"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const std::string first = read_text(d / "out.csv");
  CHECK(data_rows(first) == 5);
  CHECK(first.rfind("row,run_id,measure,classification", 0) == 0);
  REQUIRE(cli({"sweep", "--config", d / "cfg.json", "--out", d / "out2.csv", "--threads", "1"}).code == 0);
  CHECK(read_text(d / "out2.csv") == first);

  write_text(d / "bad.json", R"({"runs": [{"model": "gcn", "graph": "ring:4", "colour": 1}]})");
  CHECK(cli({"sweep", "--config", d / "bad.json"}).code == 2);
}

TEST_CASE("train subcommand on the bundled sample") {
  TempDir d("train");
  const auto r = cli({"train", "--graph", kData + "/sbm/edges.txt", "--labels", kData + "/sbm/labels.txt",
                      "--features", kData + "/sbm/features.txt", "--depths", "2", "--dim", "8", "--epochs", "5",
                      "--bias", "both", "--out", d / "acc.csv", "--energy-out", d / "energy.csv"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(data_rows(read_text(d / "acc.csv")) == 2);
  CHECK(data_rows(read_text(d / "energy.csv")) == 6);
}

TEST_CASE("plot subcommand") {
  TempDir d("plot");
  REQUIRE(cli({"propagate", "--synthetic", "ring:8", "--layers", "4", "--dim", "3", "--out", d / "s.csv"}).code == 0);
  const auto r = cli({"plot", "--in", d / "s.csv", "--axes", "log-log"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("<svg", 0) == 0);
}

}  // TEST_SUITE
