#include "doctest.h"
#include "sing/error.hpp"
#include "sing/graph.hpp"
#include "sing/study.hpp"

using namespace sing;

TEST_CASE("study patterns") {
  // 2 x 2 lattice: a 4-cycle, which needs one fill-in edge
  const Graph cycle(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  const auto patterns = study_patterns(cycle);
  REQUIRE(patterns.size() == 3);
  CHECK(patterns[0].second.inactive.empty());
  CHECK(patterns[1].second.inactive.size() == 1);
  CHECK(patterns[2].second.inactive.size() == 6);
}

TEST_CASE("variance study rows") {
  VarianceStudyConfig cfg;
  cfg.side = 2;
  cfg.sample_sizes = {200, 800};
  cfg.replicates = 4;
  const auto rows = variance_study(cfg);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].pattern == "dense");
  CHECK(rows[5].pattern == "diagonal");
  CHECK(rows[0].coefficients > rows[2].coefficients);
  CHECK(rows[2].coefficients > rows[4].coefficients);
  for (const auto& r : rows) CHECK(r.variance > 0.0);
  const auto again = variance_study(cfg);
  CHECK(again[3].variance == rows[3].variance);

  cfg.replicates = 1;
  CHECK_THROWS_AS(variance_study(cfg), InvalidArgument);
}
