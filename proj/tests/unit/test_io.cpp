#include <charconv>
#include <filesystem>
#include <limits>

#include "doctest.h"
#include "helpers.hpp"
#include "sing/datagen.hpp"
#include "sing/error.hpp"
#include "sing/io.hpp"

using namespace sing;

TEST_CASE("sample CSV round trip is exact") {
  const auto d = gen_stochastic_volatility(3, 50, 1);
  const std::string text = io::format_samples_csv(d.samples);
  const auto back = io::parse_samples_csv(text);
  CHECK(back.names() == d.samples.names());
  CHECK(back.data() == d.samples.data());
  CHECK(io::format_samples_csv(back) == text);

  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 1e308, std::numeric_limits<double>::denorm_min()}) {
    const std::string s = io::format_double(v);
    double parsed = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), parsed);
    CHECK(parsed == v);
  }
}

TEST_CASE("CSV errors name the row and column") {
  try {
    io::parse_samples_csv("a,b\n1,2\n3,x\n");
    FAIL("expected IoError");
  } catch (const IoError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("row 3") != std::string::npos);
    CHECK(msg.find("column 2") != std::string::npos);
  }
  CHECK_THROWS_AS(io::parse_samples_csv("a,b\n1,2\n3,nan\n"), IoError);
  CHECK_THROWS_AS(io::parse_samples_csv("a,b\n1,2\n3,inf\n"), IoError);
  CHECK_THROWS_AS(io::parse_samples_csv("a,b\n1,2\n3\n"), IoError);
  CHECK_THROWS_AS(io::parse_samples_csv(""), IoError);
  CHECK_THROWS_AS(io::parse_samples_csv("a,b\n1,2\n1,3\n"), IoError);  // constant column
  CHECK_THROWS_AS(io::read_samples_csv("/nonexistent/file.csv"), IoError);
  // whitespace and CRLF are tolerated
  const auto ok = io::parse_samples_csv("a, b\r\n1, 2\r\n3,4\r\n");
  CHECK(ok.data()(1, 1) == 4.0);
  CHECK(ok.names()[1] == "b");
}

TEST_CASE("graph and matrix formats") {
  Graph g(4, {{0, 3}, {1, 2}});
  const auto j = io::graph_to_json(g, {"a", "b", "c", "d"});
  CHECK(j["p"] == 4);
  CHECK(io::graph_from_json(j) == g);
  CHECK_THROWS_AS(io::graph_from_json(nlohmann::json{{"edges", nlohmann::json::array()}}), IoError);
  const std::string csv = io::format_graph_csv(g, {"a", "b", "c", "d"});
  CHECK(csv == "a,b,c,d\n0,0,0,1\n0,0,1,0\n0,1,0,0\n1,0,0,0\n");

  Eigen::MatrixXd m(2, 2);
  m << 1.0 / 3.0, 2, 2, 1e-17;
  std::vector<std::string> names;
  const auto back = io::parse_matrix_csv(io::format_matrix_csv(m, {"u", "v"}), &names);
  CHECK(back == m);
  CHECK(names == std::vector<std::string>{"u", "v"});
}

TEST_CASE("map and fit JSON round trip bit-exactly") {
  std::mt19937_64 rng(3);
  SparsityPattern pattern = SparsityPattern::dense(4);
  pattern.inactive = {{0, 3}, {1, 3}, {0, 2}};
  pattern.order = {3, 1, 0, 2};
  const auto map = testing::random_map(pattern, 3, rng);
  const auto j = io::map_to_json(map);
  const auto back = io::map_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.pattern().inactive == pattern.inactive);
  CHECK(back.pattern().order == pattern.order);
  for (int k = 0; k < 4; ++k) {
    CHECK(back.component(k).coefficients() == map.component(k).coefficients());
    CHECK(back.component(k).active_inputs() == map.component(k).active_inputs());
  }
  CHECK(io::map_to_json(back).dump() == j.dump());

  const auto d = gen_modified_rademacher(1, 300, 4);
  const auto st = d.samples.standardized();
  const auto fit = fit_map(st, SparsityPattern::dense(2), 2);
  const auto fj = io::fit_to_json(fit);
  const auto fit2 = io::fit_from_json(nlohmann::json::parse(fj.dump()));
  CHECK(fit2.n == fit.n);
  CHECK(fit2.standardization->mean == st.standardization()->mean);
  CHECK(fit2.diagnostics.size() == 2);
  CHECK(fit2.map.component(1).coefficients() == fit.map.component(1).coefficients());

  CHECK_THROWS_AS(io::map_from_json(nlohmann::json{{"dimension", 2}}), IoError);
}

TEST_CASE("trace lines and checksums") {
  SingResult r;
  SingIteration it;
  it.iteration = 1;
  it.pattern = SparsityPattern::dense(3);
  it.omega = Eigen::MatrixXd::Identity(3, 3);
  it.rho = Eigen::MatrixXd::Zero(3, 3);
  it.edges = Graph(3, {{0, 1}});
  it.wall_seconds = 1.5;
  r.trace = {it, it};
  r.trace[1].iteration = 2;
  const std::string text = io::format_trace_jsonl(r);
  const auto recs = io::parse_trace_jsonl(text);
  REQUIRE(recs.size() == 2);
  CHECK(recs[1]["iteration"] == 2);
  CHECK(recs[0]["edge_count"] == 1);
  CHECK_FALSE(recs[0].contains("wall_seconds"));
  CHECK(io::parse_trace_jsonl(io::format_trace_jsonl(r, true))[0]["wall_seconds"] == 1.5);
  CHECK(io::parse_trace_jsonl("").empty());
  CHECK_THROWS_AS(io::parse_trace_jsonl("{\"foo\": 1}\n"), IoError);
  CHECK(io::fnv1a_hex("") == "cbf29ce484222325");
  CHECK(io::fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("files") {
  const auto dir = std::filesystem::temp_directory_path() / "sing_io_test";
  std::filesystem::remove_all(dir);
  const auto path = dir / "nested" / "x.csv";
  const auto d = gen_modified_rademacher(1, 20, 2);
  io::write_samples_csv(path, d.samples);
  CHECK(io::read_samples_csv(path).data() == d.samples.data());
  std::filesystem::remove_all(dir);
}
