#include <cmath>
#include <random>
#include <vector>

#include "catch_amalgamated.hpp"
#include "raw_costs.hpp"
#include "switchcontrol/oracle.hpp"
#include "switchcontrol/scalar_penalties.hpp"

using namespace swc;
using Catch::Matchers::WithinAbs;

namespace {

const SparseParams kSparse(1.0, 0.5);                  // threshold 1
const MultibangParams kMb(1.0, 0.125, {0.0, 1.0});     // threshold 0.5

double sparse_conj_oracle(double q) {
  const std::vector<double> qv{q};
  return oracle::conj_oracle(rawcost::sparse(1.0, 0.5), qv, oracle::conj_box(qv, 1.0, 0.5, 2000));
}

double mb_conj_oracle(double q, const MultibangParams& p) {
  return oracle::conj_oracle(rawcost::multibang(p.alpha(), p.beta(), p.levels()), std::vector<double>{q},
                             rawcost::multibang_box(p.levels(), 2000));
}

double mb_prox_oracle(double v, const MultibangParams& p, double gamma) {
  auto gstar = [&](std::span<const double> w) { return mb_conj(w[0], p); };
  const auto grid = oracle::GridSpec::cube({0.0}, std::abs(v) + 1.0, 2000);
  return oracle::prox_oracle(gstar, std::vector<double>{v}, gamma, grid)[0];
}

double fd(double (*f)(double, const SparseParams&, double), double q) {
  const double e = 1e-6;
  return (f(q + e, kSparse, 1.0) - f(q - e, kSparse, 1.0)) / (2 * e);
}

double fd_mb(double q) {
  const double e = 1e-6;
  return (mb_my(q + e, kMb, 1.0) - mb_my(q - e, kMb, 1.0)) / (2 * e);
}

}  // namespace

TEST_CASE("sparse conjugate") {
  CHECK(sparse_conj(0.0, kSparse) == 0.0);
  CHECK_THAT(sparse_conj(0.5, kSparse), WithinAbs(0.0, 1e-12));
  CHECK_THAT(sparse_conj(3.0, kSparse), WithinAbs(4.0, 1e-12));
  for (double q : {0.5, 3.0, -1.7, 1.0}) CHECK_THAT(sparse_conj(q, kSparse), WithinAbs(sparse_conj_oracle(q), 1e-6));
}

TEST_CASE("sparse subdifferential") {
  const Interval a = sparse_subdiff(0.5, kSparse);
  CHECK((a.lo == 0.0 && a.hi == 0.0));
  const Interval b = sparse_subdiff(1.0, kSparse);
  CHECK(b.lo == 0.0);
  CHECK_THAT(b.hi, WithinAbs(1.0, 1e-15));
  const Interval c = sparse_subdiff(-2.0, kSparse);
  CHECK((c.lo == -2.0 && c.hi == -2.0));
}

TEST_CASE("sparse Moreau-Yosida and Newton derivative") {
  CHECK(sparse_my(0.0, kSparse, 1.0) == 0.0);
  CHECK(sparse_my(0.5, kSparse, 1.0) == 0.0);
  CHECK_THAT(sparse_my(1.5, kSparse, 1.0), WithinAbs(0.5, 1e-15));
  CHECK_THAT(sparse_my(4.0, kSparse, 1.0), WithinAbs(2.0, 1e-15));
  CHECK(sparse_newton_deriv(0.5, kSparse, 1.0) == 0.0);
  CHECK(sparse_newton_deriv(1.5, kSparse, 1.0) == 1.0);
  CHECK(sparse_newton_deriv(4.0, kSparse, 1.0) == 0.5);
  for (double q : {0.5, 1.5, 4.0, -1.2, -3.0}) {
    CHECK_THAT(sparse_newton_deriv(q, kSparse, 1.0), WithinAbs(fd(sparse_my, q), 1e-6));
  }
}

TEST_CASE("multibang conjugate") {
  CHECK_THAT(mb_conj(0.2, kMb), WithinAbs(0.0, 1e-12));
  CHECK_THAT(mb_conj(2.0, kMb), WithinAbs(1.5, 1e-12));
  CHECK_THAT(mb_conj(0.7, kMb), WithinAbs(0.2, 1e-12));
  for (double q : {0.2, 2.0, 0.7, -0.4, 1.1}) CHECK_THAT(mb_conj(q, kMb), WithinAbs(mb_conj_oracle(q, kMb), 1e-6));
}

TEST_CASE("multibang prox and Moreau-Yosida") {
  CHECK_THAT(mb_prox(0.2, kMb, 1.0), WithinAbs(0.2, 1e-12));
  CHECK_THAT(mb_prox(0.8, kMb, 1.0), WithinAbs(0.5, 1e-12));
  CHECK_THAT(mb_prox(2.0, kMb, 1.0), WithinAbs(1.0, 1e-12));
  for (double v : {0.2, 0.8, 2.0, -0.5, 0.55}) CHECK_THAT(mb_prox(v, kMb, 1.0), WithinAbs(mb_prox_oracle(v, kMb, 1.0), 1e-5));
  CHECK_THAT(mb_my(0.2, kMb, 1.0), WithinAbs(0.0, 1e-12));
  CHECK_THAT(mb_my(0.8, kMb, 1.0), WithinAbs(0.3, 1e-12));
  CHECK_THAT(mb_my(2.0, kMb, 1.0), WithinAbs(1.0, 1e-12));
  CHECK(mb_newton_deriv(0.2, kMb, 1.0) == 0.0);
  CHECK(mb_newton_deriv(0.8, kMb, 1.0) == 1.0);
  CHECK(mb_newton_deriv(2.0, kMb, 1.0) == 0.0);
  for (double q : {0.2, 0.8, 2.0, 0.6, -1.0}) CHECK_THAT(mb_newton_deriv(q, kMb, 1.0), WithinAbs(fd_mb(q), 1e-6));
}

TEST_CASE("multibang parameters are validated") {
  CHECK_THROWS(MultibangParams(1.0, 0.1, {1.0, 0.0}));
  CHECK_THROWS(MultibangParams(1.0, 0.1, {0.0}));
  CHECK_THROWS(SparseParams(-1.0, 0.1));
}

TEST_CASE("scalar properties on random draws") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> logu(-2.0, 1.0), unit(-1.0, 1.0);
  for (int k = 0; k < 300; ++k) {
    const double alpha = std::pow(10.0, logu(rng)), beta = std::pow(10.0, logu(rng)), gamma = std::pow(10.0, logu(rng));
    const SparseParams sp(alpha, beta);
    std::vector<double> levels{unit(rng)};
    const int d = 2 + k % 3;
    for (int i = 1; i < d; ++i) levels.push_back(levels.back() + 0.1 + std::abs(unit(rng)));
    const MultibangParams mp(alpha, beta, levels);

    const double scale = 3.0 * (sp.threshold() + alpha * (std::abs(levels.front()) + std::abs(levels.back()))) *
                         (1.0 + gamma / alpha);
    const double q1 = scale * unit(rng), q2 = scale * unit(rng);
    // monotone and 1/gamma Lipschitz
    const double ds = sparse_my(q1, sp, gamma) - sparse_my(q2, sp, gamma);
    const double dm = mb_my(q1, mp, gamma) - mb_my(q2, mp, gamma);
    CHECK(ds * (q1 - q2) >= -1e-12 * std::abs(q1 - q2));
    CHECK(dm * (q1 - q2) >= -1e-12 * std::abs(q1 - q2));
    CHECK(std::abs(ds) <= std::abs(q1 - q2) / gamma * (1 + 1e-10) + 1e-14);
    CHECK(std::abs(dm) <= std::abs(q1 - q2) / gamma * (1 + 1e-10) + 1e-14);
    // resolvent identity and oddness
    CHECK_THAT(sparse_my(q1, sp, gamma), WithinAbs((q1 - sparse_prox(q1, sp, gamma)) / gamma, 1e-10 * (1 + std::abs(q1) / gamma)));
    CHECK_THAT(mb_my(q1, mp, gamma), WithinAbs((q1 - mb_prox(q1, mp, gamma)) / gamma, 1e-10 * (1 + std::abs(q1) / gamma)));
    CHECK(sparse_my(-q1, sp, gamma) == -sparse_my(q1, sp, gamma));
    // tiny gamma stays inside the admissible box
    const double u0 = mb_my(q1, mp, 1e-8);
    CHECK(u0 >= levels.front() - 1e-9);
    CHECK(u0 <= levels.back() + 1e-9);
    // complementarity: v in dg*(q) gives my(q + gamma v) = v
    const Interval si = sparse_subdiff(q1, sp);
    const double v = 0.5 * (si.lo + si.hi);
    CHECK_THAT(sparse_my(q1 + gamma * v, sp, gamma), WithinAbs(v, 1e-10 * (1 + std::abs(v))));
    const Interval mi = mb_subdiff(q1, mp);
    const double w = 0.5 * (mi.lo + mi.hi);
    CHECK_THAT(mb_my(q1 + gamma * w, mp, gamma), WithinAbs(w, 1e-10 * (1 + std::abs(w))));
  }
}
