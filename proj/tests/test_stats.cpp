#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "mtefim/stats.hpp"

using namespace mtefim;

TEST_CASE("average ranks share tied positions", "[stats]") {
  const std::vector<double> v{10.0, 20.0, 20.0, 30.0};
  REQUIRE(average_ranks(v) == std::vector<double>{1.0, 2.5, 2.5, 4.0});

  const std::vector<double> all_same{7.0, 7.0, 7.0};
  REQUIRE(average_ranks(all_same) == std::vector<double>{2.0, 2.0, 2.0});

  const std::vector<double> reversed{3.0, 2.0, 1.0};
  REQUIRE(average_ranks(reversed) == std::vector<double>{3.0, 2.0, 1.0});

  REQUIRE(average_ranks(std::vector<double>{}).empty());
}

TEST_CASE("rank correlation on hand-computed examples", "[stats]") {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  const std::vector<double> y{1.0, 3.0, 2.0, 4.0};
  REQUIRE(spearman_rho(x, y) == Catch::Approx(0.8).margin(1e-15));

  // Perfect agreement and perfect reversal.
  const std::vector<double> up{10.0, 20.0, 30.0};
  const std::vector<double> down{5.0, 4.0, 3.0};
  REQUIRE(spearman_rho(up, up) == Catch::Approx(1.0));
  REQUIRE(spearman_rho(up, down) == Catch::Approx(-1.0));

  // Ties: (1,1,2) ranks to (1.5,1.5,3), correlating 0.8660... with (1,2,3).
  const std::vector<double> tied{1.0, 1.0, 2.0};
  const std::vector<double> clean{1.0, 2.0, 3.0};
  REQUIRE(spearman_rho(tied, clean) ==
          Catch::Approx(0.86602540378443871).margin(1e-15));

  // Monotone transforms leave the coefficient unchanged.
  const std::vector<double> squared{100.0, 400.0, 900.0, 1600.0};
  REQUIRE(spearman_rho(squared, y) == Catch::Approx(0.8).margin(1e-15));
}

TEST_CASE("rank correlation is undefined for constant inputs", "[stats]") {
  const std::vector<double> flat{2.0, 2.0, 2.0};
  const std::vector<double> varying{1.0, 2.0, 3.0};
  REQUIRE(std::isnan(spearman_rho(flat, varying)));
  REQUIRE(std::isnan(spearman_rho(varying, flat)));

  const std::vector<double> one{1.0};
  REQUIRE_THROWS_AS(spearman_rho(one, one), std::invalid_argument);
  const std::vector<double> two{1.0, 2.0};
  REQUIRE_THROWS_AS(spearman_rho(two, varying), std::invalid_argument);
}

TEST_CASE("rank-sum test reproduces a frozen no-tie example", "[stats]") {
  // (1,2,3) vs (4,5,6): U = 0, z = -4.5 / sqrt(5.25).
  const std::vector<double> a{1.0, 2.0, 3.0};
  const std::vector<double> b{4.0, 5.0, 6.0};
  const auto res = wilcoxon_rank_sum(a, b, 0.05);
  REQUIRE(res.u_statistic == 0.0);
  REQUIRE(res.z == Catch::Approx(-1.9639610121239315).margin(1e-15));
  REQUIRE(res.p_value == Catch::Approx(0.049534613435626748).margin(1e-15));
  REQUIRE(res.verdict == '-');

  // The same comparison from the other side flips the verdict.
  const auto flipped = wilcoxon_rank_sum(b, a, 0.05);
  REQUIRE(flipped.verdict == '+');
  REQUIRE(flipped.u_statistic + res.u_statistic == Catch::Approx(9.0));
  REQUIRE(flipped.z == Catch::Approx(-res.z));

  // A slightly stricter alpha turns it insignificant.
  REQUIRE(wilcoxon_rank_sum(a, b, 0.04).verdict == '=');
}

TEST_CASE("rank-sum test applies the tie correction", "[stats]") {
  // (1,1,2) vs (2,3,3): U = 0.5, variance 4.8 after tie correction.
  const std::vector<double> a{1.0, 1.0, 2.0};
  const std::vector<double> b{2.0, 3.0, 3.0};
  const auto res = wilcoxon_rank_sum(a, b, 0.05);
  REQUIRE(res.u_statistic == Catch::Approx(0.5));
  REQUIRE(res.z == Catch::Approx(-4.0 / std::sqrt(4.8)).margin(1e-15));
  REQUIRE(res.p_value == Catch::Approx(0.067889154861829074).margin(1e-15));
  REQUIRE(res.verdict == '=');
}

TEST_CASE("rank-sum test treats identical samples as equal", "[stats]") {
  const std::vector<double> a{5.0, 5.0, 5.0};
  const auto res = wilcoxon_rank_sum(a, a, 0.05);
  REQUIRE(res.p_value == 1.0);
  REQUIRE(res.z == 0.0);
  REQUIRE(res.verdict == '=');
}

TEST_CASE("rank-sum test validates its inputs", "[stats]") {
  const std::vector<double> a{1.0};
  const std::vector<double> empty;
  REQUIRE_THROWS_AS(wilcoxon_rank_sum(empty, a), std::invalid_argument);
  REQUIRE_THROWS_AS(wilcoxon_rank_sum(a, empty), std::invalid_argument);
  REQUIRE_THROWS_AS(wilcoxon_rank_sum(a, a, 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(wilcoxon_rank_sum(a, a, 1.0), std::invalid_argument);
}

TEST_CASE("U statistics of the two sides always sum to na*nb", "[stats]") {
  // Property over a few deterministic grids, with and without ties.
  const std::vector<std::pair<std::vector<double>, std::vector<double>>> cases{
      {{1, 4, 2, 8}, {3, 3, 9}},
      {{-1, -1, 0}, {0, 0, 1, 1}},
      {{2, 2, 2, 2}, {2, 2}},
      {{0.5, 1.5, 2.5, 3.5, 4.5}, {1, 2}},
  };
  for (const auto& [a, b] : cases) {
    const auto ra = wilcoxon_rank_sum(a, b);
    const auto rb = wilcoxon_rank_sum(b, a);
    REQUIRE(ra.u_statistic + rb.u_statistic ==
            Catch::Approx(static_cast<double>(a.size() * b.size())));
    REQUIRE(ra.p_value == Catch::Approx(rb.p_value));
  }
}

TEST_CASE("two-sided normal tail probabilities", "[stats]") {
  REQUIRE(normal_two_sided_p(0.0) == 1.0);
  REQUIRE(normal_two_sided_p(1.959963984540054) == Catch::Approx(0.05).margin(1e-12));
  REQUIRE(normal_two_sided_p(-1.959963984540054) ==
          Catch::Approx(0.05).margin(1e-12));
}
