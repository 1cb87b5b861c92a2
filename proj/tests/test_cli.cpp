#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <lina/io.hpp>
#include <lina/opt.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

using namespace lina;
namespace fs = std::filesystem;

namespace {

const char* cli_path() { return LINA_CLI_PATH; }

int run(const std::string& args) {
  const std::string cmd = std::string(cli_path()) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& f) {
  std::ifstream in(f, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("lina_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string sub(const std::string& name) const {
    return (path / name).string();
  }
};

}  // namespace

TEST_CASE("usage errors exit with code 2") {
  TempDir tmp;
  CHECK(run("fit") == 2);
  CHECK(run("definitely-not-a-subcommand") == 2);
  // Clusters missing and --locate absent.
  CHECK(run("simulate --q 2 --n 200 --seed 1 --out " + tmp.sub("sim")) == 0);
  CHECK(run("fit --data " + tmp.sub("sim/data.csv") + " --out " +
            tmp.sub("fit")) == 2);
}

TEST_CASE("missing input exits with code 3") {
  TempDir tmp;
  CHECK(run("fit --data " + tmp.sub("nope.csv") + " --clusters " +
            tmp.sub("nope.txt") + " --out " + tmp.sub("x")) == 3);
  CHECK(fs::exists(tmp.path / "x" / "error.txt"));
}

TEST_CASE("simulate then fit then evaluate on one domain") {
  TempDir tmp;
  REQUIRE(run("simulate --q 3 --n 500 --seed 7 --out " + tmp.sub("sim")) == 0);
  CHECK(fs::exists(tmp.path / "sim" / "data.csv"));
  CHECK(fs::exists(tmp.path / "sim" / "b_true.csv"));
  CHECK(fs::exists(tmp.path / "sim" / "clusters.txt"));
  const Matrix B_true = read_matrix_csv(tmp.path / "sim" / "b_true.csv");
  CHECK(std::abs(acyclicity_h(B_true)) < 1e-9);

  REQUIRE(run("fit --data " + tmp.sub("sim/data.csv") + " --clusters " +
              tmp.sub("sim/clusters.txt") + " --out " + tmp.sub("fit")) == 0);
  CHECK(fs::exists(tmp.path / "fit" / "b.csv"));
  CHECK(fs::exists(tmp.path / "fit" / "loadings.txt"));
  CHECK(fs::exists(tmp.path / "fit" / "graph.dot"));
  const auto report = read_keyvalue(tmp.path / "fit" / "report.txt");
  CHECK(std::stod(report.at("h")) < 1e-8);

  REQUIRE(run("evaluate --b-est " + tmp.sub("fit/b.csv") + " --b-true " +
              tmp.sub("sim/b_true.csv") + " --eps 0.3 --out " +
              tmp.sub("eval")) == 0);
  const auto metrics = read_keyvalue(tmp.path / "eval" / "metrics.txt");
  CHECK(metrics.count("skeleton_f1") == 1);

  // Self-evaluation is perfect.
  REQUIRE(run("evaluate --b-est " + tmp.sub("sim/b_true.csv") + " --b-true " +
              tmp.sub("sim/b_true.csv") + " --eps 0.1 --out " +
              tmp.sub("self")) == 0);
  const auto self = read_keyvalue(tmp.path / "self" / "metrics.txt");
  CHECK(std::stod(self.at("skeleton_f1")) == 1.0);
}

TEST_CASE("multi-domain fit emits transform artifacts") {
  TempDir tmp;
  REQUIRE(run("simulate --q 2 --n 400 --domains 2 --shared --seed 3 --out " +
              tmp.sub("sim")) == 0);
  CHECK(fs::exists(tmp.path / "sim" / "manifest.txt"));
  REQUIRE(run("fit --manifest " + tmp.sub("sim/manifest.txt") + " --clusters " +
              tmp.sub("sim/clusters.txt") + " --eps 0.05 --out " +
              tmp.sub("fit")) == 0);
  CHECK(fs::exists(tmp.path / "fit" / "b_tilde.csv"));
  CHECK(fs::exists(tmp.path / "fit" / "transform.txt"));
  const auto [H, assignment] = read_transform(tmp.path / "fit" / "transform.txt");
  CHECK(H.q() == 4);
  CHECK(H.q_tilde() == 2);
  CHECK(assignment.row_to_interest.size() == 4);
}

TEST_CASE("fixed seeds give byte-identical outputs") {
  TempDir tmp;
  for (const char* dir : {"a", "b"}) {
    REQUIRE(run(std::string("simulate --q 2 --n 300 --seed 42 --out ") +
                tmp.sub(dir)) == 0);
    REQUIRE(run(std::string("fit --data ") + tmp.sub(dir) + "/data.csv" +
                " --clusters " + tmp.sub(dir) + "/clusters.txt --seed 42" +
                " --out " + tmp.sub(dir) + "_fit") == 0);
  }
  CHECK(slurp(tmp.path / "a" / "data.csv") == slurp(tmp.path / "b" / "data.csv"));
  CHECK(slurp(tmp.path / "a_fit" / "b.csv") ==
        slurp(tmp.path / "b_fit" / "b.csv"));
  CHECK(slurp(tmp.path / "a_fit" / "loadings.txt") ==
        slurp(tmp.path / "b_fit" / "loadings.txt"));
}

TEST_CASE("cv on a small grid writes the best cell") {
  TempDir tmp;
  REQUIRE(run("simulate --q 2 --n 300 --seed 5 --out " + tmp.sub("sim")) == 0);
  REQUIRE(run("cv --data " + tmp.sub("sim/data.csv") + " --clusters " +
              tmp.sub("sim/clusters.txt") +
              " --folds 3 --lambda1-grid 0.1 --eps-grid 0.3 --out " +
              tmp.sub("cv")) == 0);
  CHECK(fs::exists(tmp.path / "cv" / "cv_grid.csv"));
  const auto best = read_keyvalue(tmp.path / "cv" / "best.txt");
  CHECK(std::stod(best.at("lambda1")) == 0.1);
  CHECK(std::stod(best.at("eps")) == 0.3);
}

TEST_CASE("config file values are honored") {
  TempDir tmp;
  REQUIRE(run("simulate --q 2 --n 300 --seed 9 --out " + tmp.sub("sim")) == 0);
  {
    std::ofstream cfg(tmp.path / "run.cfg");
    cfg << "eps=0.5\n";
  }
  REQUIRE(run("fit --config " + tmp.sub("run.cfg") + " --data " +
              tmp.sub("sim/data.csv") + " --clusters " +
              tmp.sub("sim/clusters.txt") + " --out " + tmp.sub("fit")) == 0);
  const auto report = read_keyvalue(tmp.path / "fit" / "report.txt");
  CHECK(std::stod(report.at("eps")) == 0.5);
}
