#include <Eigen/Dense>

#include "doctest.h"
#include "sing/datagen.hpp"
#include "sing/error.hpp"
#include "sing/io.hpp"
#include "sing/samples.hpp"
#include "sing/sing.hpp"

using namespace sing;

TEST_CASE("sample sets") {
  SampleMatrix m(3, 2);
  m << 1, 10, 2, 20, 4, 30;
  SampleSet s(m);
  CHECK(s.names() == std::vector<std::string>{"x0", "x1"});
  const auto st = s.standardized();
  CHECK(st.data().colwise().mean().cwiseAbs().maxCoeff() < 1e-15);
  const Eigen::RowVectorXd var = st.data().colwise().squaredNorm() / 2.0;
  CHECK(std::abs(var[0] - 1.0) < 1e-14);
  CHECK(st.standardization()->mean[1] == 20.0);
  CHECK(s.standardized_with(*st.standardization()).data() == st.data());

  const auto p = s.permuted({1, 0});
  CHECK(p.names() == std::vector<std::string>{"x1", "x0"});
  CHECK(p.data().col(0) == m.col(1));
  CHECK_THROWS_AS(s.permuted({0, 0}), InvalidArgument);

  SampleMatrix constant(3, 2);
  constant << 1, 1, 2, 1, 3, 1;
  CHECK_THROWS_AS(SampleSet{constant}, InvalidArgument);
  SampleMatrix one_row(1, 2);
  one_row << 1, 2;
  CHECK_THROWS_AS(SampleSet{one_row}, InvalidArgument);
  m(0, 0) = std::nan("");
  CHECK_THROWS_AS(SampleSet{m}, InvalidArgument);
}

TEST_CASE("SING on independent normals returns no edges") {
  Rng rng(1);
  SampleMatrix m(1000, 2);
  for (int i = 0; i < 1000; ++i) m.row(i) << rng.normal(), rng.normal();
  SingConfig cfg;
  cfg.max_degree = 1;
  const auto r = run_sing(SampleSet(m), cfg);
  CHECK(r.edges.edge_count() == 0);
  CHECK(r.trace.size() >= 1);
}

TEST_CASE("SING recovers a Gaussian chain with linear maps") {
  Eigen::MatrixXd theta = Eigen::MatrixXd::Identity(5, 5) * 1.5;
  for (int k = 0; k + 1 < 5; ++k) theta(k, k + 1) = theta(k + 1, k) = -0.6;
  const auto d = shuffle_columns(gen_gaussian(theta, 5000, 2), 3);
  SingConfig cfg;
  cfg.max_degree = 1;
  cfg.delta = 3.0;
  const auto r = run_sing(d.samples, cfg);
  CHECK(r.edges == d.truth);
  // stopping rule: every accepted iteration decreased the edge count
  for (std::size_t l = 1; l + 1 < r.trace.size(); ++l)
    CHECK(r.trace[l].edges.edge_count() < r.trace[l - 1].edges.edge_count());
  // later iterations use sparse maps
  if (r.trace.size() > 1) CHECK(r.trace[1].pattern.inactive.size() > 0);
}

TEST_CASE("SING runs are deterministic") {
  const auto d = shuffle_columns(gen_modified_rademacher(2, 600, 4), 5);
  SingConfig cfg;
  const auto a = run_sing(d.samples, cfg);
  const auto b = run_sing(d.samples, cfg);
  CHECK(io::format_trace_jsonl(a) == io::format_trace_jsonl(b));
  CHECK(a.edges == b.edges);
}

TEST_CASE("iteration cap") {
  const auto d = gen_modified_rademacher(2, 600, 6);
  SingConfig cfg;
  cfg.max_iterations = 1;
  const auto r = run_sing(d.samples, cfg);
  CHECK(r.trace.size() == 1);
  if (r.trace[0].edges.edge_count() < 6) CHECK(r.hit_max_iterations);
}

TEST_CASE("config validation") {
  SingConfig cfg;
  cfg.delta = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.max_degree = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  CHECK(matrix_checksum(Eigen::MatrixXd::Zero(2, 2)) == matrix_checksum(Eigen::MatrixXd::Zero(2, 2)));
  CHECK(matrix_checksum(Eigen::MatrixXd::Zero(2, 2)) != matrix_checksum(Eigen::MatrixXd::Identity(2, 2)));
}
