#include <cmath>
#include <vector>

#include "catch_amalgamated.hpp"
#include "raw_costs.hpp"
#include "switchcontrol/oracle.hpp"

using namespace swc::oracle;
using Catch::Matchers::WithinAbs;

TEST_CASE("conj_oracle on known values") {
  const auto g = rawcost::switching(1.0, 0.5);
  const std::vector<double> zero{0.0, 0.0}, q33{3.0, 3.0};
  CHECK_THAT(conj_oracle(g, zero, conj_box(zero, 1.0, 0.5, 400)), WithinAbs(0.0, 1e-12));
  // v = (3,3): 18 - 9 - 0.5
  CHECK_THAT(conj_oracle(g, q33, conj_box(q33, 1.0, 0.5, 400)), WithinAbs(8.5, 1e-6));
  const std::vector<double> q3{3.0};
  CHECK_THAT(conj_oracle(rawcost::sparse(1.0, 0.5), q3, conj_box(q3, 1.0, 0.5, 2000)), WithinAbs(4.0, 1e-6));
}

TEST_CASE("prox_oracle") {
  SECTION("quadratic g* gives a shrink") {
    // g*(w) = |w|^2 / 2: prox_gamma(v) = v / (1 + gamma)
    auto gs = [](std::span<const double> w) { return 0.5 * (w[0] * w[0] + w[1] * w[1]); };
    const auto w = prox_oracle(gs, std::vector<double>{4.0, -2.0}, 1.0, GridSpec::cube({0, 0}, 5.0, 400));
    CHECK_THAT(w[0], WithinAbs(2.0, 1e-6));
    CHECK_THAT(w[1], WithinAbs(-1.0, 1e-6));
  }
  SECTION("minimizer of g* is a fixed point") {
    auto gs = [](std::span<const double> w) { return std::abs(w[0] - 0.3) + std::abs(w[1] + 0.7); };
    const auto w = prox_oracle(gs, std::vector<double>{0.3, -0.7}, 2.0, GridSpec::cube({0, 0}, 2.0, 400));
    CHECK_THAT(w[0], WithinAbs(0.3, 1e-6));
    CHECK_THAT(w[1], WithinAbs(-0.7, 1e-6));
  }
  SECTION("multi-bang jump midpoint") {
    // conjugate of the multi-bang cost on levels (0,1), alpha = 1, beta = 1/8, by grid
    const auto g = rawcost::multibang(1.0, 0.125, {0.0, 1.0});
    const auto box = rawcost::multibang_box({0.0, 1.0}, 2000);
    auto gs = [&](std::span<const double> q) { return conj_oracle(g, q, box); };
    GridSpec pg = GridSpec::cube({0.0}, 2.0, 400);
    pg.refine_rounds = 2;
    const auto w = prox_oracle(gs, std::vector<double>{0.8}, 1.0, pg);
    CHECK_THAT(w[0], WithinAbs(0.5, 1e-4));
  }
}

TEST_CASE("error shrinks with refinement") {
  // f(x) = -(x - c)^2 with c off the lattice
  const double c = 0.123456789;
  auto f = [&](std::span<const double> v) { return (v[0] - 1.0) * (v[0] - 1.0) + c * v[0]; };
  double prev = 1.0;
  for (int rounds = 0; rounds <= 3; ++rounds) {
    GridSpec g = GridSpec::cube({0.0}, 4.0, 100);
    g.refine_rounds = rounds;
    const std::vector<double> q{0.0};
    // sup_v -f(v), exact value -(c - c^2/4)
    const double exact = -(c - c * c / 4.0);
    const double err = std::abs(conj_oracle(f, q, g) - exact);
    CHECK(err <= prev);
    if (rounds > 0 && prev > 1e-14) CHECK(err <= prev / 100.0 + 1e-15);
    prev = err;
  }
}

TEST_CASE("box checks") {
  const auto g = rawcost::switching(1.0, 0.5);
  const std::vector<double> q{3.0, 0.0};
  CHECK_THROWS_AS(conj_oracle(g, q, GridSpec::cube({0, 0}, 1.0, 100)), BoxTooSmall);
  GridSpec bad = GridSpec::cube({0, 0}, 1.0, 100);
  bad.coarse_step = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS_AS(conj_oracle(g, std::vector<double>{1.0}, GridSpec::cube({0, 0}, 1.0, 100)), std::invalid_argument);
}

TEST_CASE("fd_jacobian") {
  auto id = [](std::span<const double> x) { return Point(x.begin(), x.end()); };
  const Eigen::MatrixXd j = fd_jacobian(id, std::vector<double>{0.3, -2.0}, 1e-5);
  CHECK(j.isApprox(Eigen::MatrixXd::Identity(2, 2), 1e-9));
  auto sq = [](std::span<const double> x) { return Point{x[0] * x[1], x[0] * x[0]}; };
  const Eigen::MatrixXd k = fd_jacobian(sq, std::vector<double>{2.0, 3.0}, 1e-5);
  CHECK_THAT(k(0, 0), WithinAbs(3.0, 1e-8));
  CHECK_THAT(k(0, 1), WithinAbs(2.0, 1e-8));
  CHECK_THAT(k(1, 0), WithinAbs(4.0, 1e-8));
  CHECK_THAT(k(1, 1), WithinAbs(0.0, 1e-8));
  CHECK_THROWS(fd_jacobian(id, std::vector<double>{1.0}, 0.0));
}
