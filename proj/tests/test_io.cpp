#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <lina/io.hpp>

#include <filesystem>
#include <unistd.h>

#include "helpers.hpp"

using namespace lina;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("lina_io_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("format_double round-trips exactly") {
  for (double v : {0.0, 1.0, -1.5, 0.1, 1e-17, 3.141592653589793,
                   -2.2250738585072014e-308, 12345.6789}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("domain CSV round-trip") {
  TempDir tmp;
  DomainDataset d;
  d.data = testutil::random_matrix(3, 7, 1);
  d.variable_names = {"alpha", "beta", "gamma"};
  d.domain_id = 2;
  const fs::path f = tmp.path / "d.csv";
  write_domain_csv(f, d);
  const DomainDataset back = read_domain_csv(f, 2);
  CHECK(back.variable_names == d.variable_names);
  CHECK(back.domain_id == 2);
  CHECK((back.data - d.data).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("matrix CSV round-trip") {
  TempDir tmp;
  const Matrix m = testutil::random_matrix(4, 3, 2);
  const fs::path f = tmp.path / "m.csv";
  write_matrix_csv(f, m);
  CHECK((read_matrix_csv(f) - m).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("manifest round-trip") {
  TempDir tmp;
  DomainDataset d1, d2;
  d1.data = testutil::random_matrix(2, 5, 3);
  d1.variable_names = {"a", "b"};
  d2.data = testutil::random_matrix(3, 4, 4);
  d2.variable_names = {"c", "d", "e"};
  write_domain_csv(tmp.path / "dom1.csv", d1);
  write_domain_csv(tmp.path / "dom2.csv", d2);
  write_manifest(tmp.path / "manifest.txt", {"dom1.csv", "dom2.csv"});
  const MultiDomainDataset md = read_manifest(tmp.path / "manifest.txt");
  REQUIRE(md.domains.size() == 2);
  CHECK(md.domains[0].domain_id == 1);
  CHECK(md.domains[1].domain_id == 2);
  CHECK((md.domains[0].data - d1.data).cwiseAbs().maxCoeff() == 0.0);
  CHECK((md.domains[1].data - d2.data).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("read_manifest reports a missing file") {
  TempDir tmp;
  write_manifest(tmp.path / "manifest.txt", {"nope.csv"});
  CHECK_THROWS_AS(read_manifest(tmp.path / "manifest.txt"), IoError);
}

TEST_CASE("clusters round-trip") {
  TempDir tmp;
  ClusterSpec spec;
  spec.clusters = {{0, 2}, {1, 3, 4}};
  const std::vector<std::string> names = {"v1", "v2", "v3", "v4", "v5"};
  const fs::path f = tmp.path / "clusters.txt";
  write_clusters(f, spec, names);
  const ClusterSpec back = read_clusters(f, names);
  CHECK(back.clusters == spec.clusters);
}

TEST_CASE("measurement model round-trip") {
  TempDir tmp;
  MeasurementModel m;
  m.loadings = Matrix::Zero(4, 2);
  m.loadings(0, 0) = 0.8;
  m.loadings(1, 0) = -0.612345678901234;
  m.loadings(2, 1) = 0.9;
  m.loadings(3, 1) = 0.4;
  m.error_variances = Vector(4);
  m.error_variances << 0.3, 0.5, 0.2, 0.7;
  m.clusters.clusters = {{0, 1}, {2, 3}};
  m.heywood = true;
  const fs::path f = tmp.path / "model.txt";
  write_measurement_model(f, m);
  const MeasurementModel back = read_measurement_model(f);
  CHECK((back.loadings - m.loadings).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.error_variances - m.error_variances).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.clusters.clusters == m.clusters.clusters);
  CHECK(back.heywood == m.heywood);
}

TEST_CASE("transform round-trip") {
  TempDir tmp;
  TransformMatrix H;
  H.H = testutil::random_matrix(4, 2, 5);
  HardAssignment a;
  a.row_to_interest = {0, 1, 0, 1};
  a.kept_weight = {0.9, 0.8, 1.1, -0.7};
  const fs::path f = tmp.path / "transform.txt";
  write_transform(f, H, a);
  const auto [Hb, ab] = read_transform(f);
  CHECK((Hb.H - H.H).cwiseAbs().maxCoeff() == 0.0);
  CHECK(ab.row_to_interest == a.row_to_interest);
  for (size_t i = 0; i < a.kept_weight.size(); ++i)
    CHECK(ab.kept_weight[i] == a.kept_weight[i]);
}

TEST_CASE("DOT export round-trips the edge set") {
  TempDir tmp;
  Matrix B = Matrix::Zero(3, 3);
  B(1, 0) = 1.25;
  B(2, 1) = -0.4;
  const fs::path f = tmp.path / "g.dot";
  write_dot(f, B, {"f1", "f2", "f3"});
  const auto edges = read_dot_edges(f);
  Matrix back = Matrix::Zero(3, 3);
  for (const auto& [i, j, w] : edges) back(i, j) = w;
  CHECK((back - B).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("key-value files skip comments and round-trip") {
  TempDir tmp;
  const fs::path f = tmp.path / "cfg.txt";
  write_keyvalue(f, {{"lambda1", "0.1"}, {"note", "two words"}});
  auto kv = read_keyvalue(f);
  CHECK(kv.at("lambda1") == "0.1");
  CHECK(kv.at("note") == "two words");
}
