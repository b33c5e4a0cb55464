#include "switchcontrol/scalar_penalties.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace swc {

namespace {

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

void require_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("gamma must be positive and finite, got " + std::to_string(gamma));
  }
}

void require_weights(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw std::invalid_argument("penalty requires alpha > 0 and beta > 0");
  }
}

// Pieces of the multi-bang conjugate: affine pieces q u_i - alpha/2 u_i^2 and
// the continuum piece sup_{v in [u_1,u_d]} q v - alpha/2 v^2 - beta.
double level_piece(double q, double u, double alpha) { return q * u - 0.5 * alpha * u * u; }

double continuum_argmax(double q, const MultibangParams& p) {
  return std::clamp(q / p.alpha(), p.lower(), p.upper());
}

double continuum_piece(double q, const MultibangParams& p) {
  const double v = continuum_argmax(q, p);
  return q * v - 0.5 * p.alpha() * v * v - p.beta();
}

double tie_tolerance(double q, double value, const MultibangParams& p) {
  const double umax = std::max(std::abs(p.lower()), std::abs(p.upper()));
  return 1e-12 * (1.0 + std::abs(value) + std::abs(q) * umax + p.alpha() * umax * umax);
}

}  // namespace

// --- sparse ---------------------------------------------------------------

SparseParams::SparseParams(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  require_weights(alpha, beta);
  threshold_ = std::sqrt(2.0 * alpha * beta);
}

double sparse_value(double v, const SparseParams& p) {
  return 0.5 * p.alpha() * v * v + (v != 0.0 ? p.beta() : 0.0);
}

double sparse_conj(double q, const SparseParams& p) {
  return std::max(0.0, q * q / (2.0 * p.alpha()) - p.beta());
}

Interval sparse_subdiff(double q, const SparseParams& p) {
  const double a = std::abs(q);
  const double s = p.threshold();
  if (a < s) return Interval::point(0.0);
  if (a > s) return Interval::point(q / p.alpha());
  return Interval::hull(0.0, q / p.alpha());
}

int sparse_region(double q, const SparseParams& p, double gamma) {
  require_gamma(gamma);
  const double a = std::abs(q);
  const double s = p.threshold();
  if (a < s) return 0;
  if (a <= (1.0 + gamma / p.alpha()) * s) return 1;
  return 2;
}

double sparse_prox(double v, const SparseParams& p, double gamma) {
  switch (sparse_region(v, p, gamma)) {
    case 0: return v;
    case 1: return std::copysign(p.threshold(), v);
    default: return p.alpha() / (p.alpha() + gamma) * v;
  }
}

double sparse_my(double q, const SparseParams& p, double gamma) {
  switch (sparse_region(q, p, gamma)) {
    case 0: return 0.0;
    case 1: return sgn(q) * (std::abs(q) - p.threshold()) / gamma;
    default: return q / (p.alpha() + gamma);
  }
}

double sparse_newton_deriv(double q, const SparseParams& p, double gamma) {
  switch (sparse_region(q, p, gamma)) {
    case 0: return 0.0;
    case 1: return 1.0 / gamma;
    default: return 1.0 / (p.alpha() + gamma);
  }
}

// --- multi-bang -----------------------------------------------------------

MultibangParams::MultibangParams(double alpha, double beta, std::vector<double> levels)
    : alpha_(alpha), beta_(beta), levels_(std::move(levels)) {
  require_weights(alpha, beta);
  if (levels_.size() < 2) throw std::invalid_argument("multi-bang needs at least two levels");
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (!std::isfinite(levels_[i])) throw std::invalid_argument("multi-bang levels must be finite");
    if (i > 0 && !(levels_[i] > levels_[i - 1])) {
      throw std::invalid_argument("multi-bang levels must be strictly increasing");
    }
  }
  threshold_ = std::sqrt(2.0 * alpha * beta);
}

int MultibangCase::code(int num_levels) const {
  switch (kind) {
    case Kind::Level: return index;
    case Kind::Continuum: return num_levels;
    case Kind::ThresholdBand: return num_levels + 1 + 2 * index + (side > 0 ? 1 : 0);
    case Kind::Jump: return 3 * num_levels + 1 + index;
  }
  return -1;
}

double mb_value(double v, const MultibangParams& p) {
  if (v < p.lower() || v > p.upper()) return std::numeric_limits<double>::infinity();
  const bool on_level = std::find(p.levels().begin(), p.levels().end(), v) != p.levels().end();
  return 0.5 * p.alpha() * v * v + (on_level ? 0.0 : p.beta());
}

double mb_conj(double q, const MultibangParams& p) {
  double best = continuum_piece(q, p);
  for (double u : p.levels()) best = std::max(best, level_piece(q, u, p.alpha()));
  return best;
}

Interval mb_subdiff(double q, const MultibangParams& p) {
  const double value = mb_conj(q, p);
  const double tol = tie_tolerance(q, value, p);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  auto take = [&](double slope) {
    lo = std::min(lo, slope);
    hi = std::max(hi, slope);
  };
  for (double u : p.levels()) {
    if (level_piece(q, u, p.alpha()) >= value - tol) take(u);
  }
  if (continuum_piece(q, p) >= value - tol) take(continuum_argmax(q, p));
  return {lo, hi};
}

MultibangProx mb_prox_case(double v, const MultibangParams& p, double gamma) {
  require_gamma(gamma);
  using Kind = MultibangCase::Kind;
  const double alpha = p.alpha();
  const double s = p.threshold();
  const auto& u = p.levels();
  const int d = static_cast<int>(u.size());

  auto objective = [&](double w) { return gamma * mb_conj(w, p) + 0.5 * (w - v) * (w - v); };
  auto level_active = [&](double w, int i) {
    const double value = mb_conj(w, p);
    return level_piece(w, u[i], alpha) >= value - tie_tolerance(w, value, p);
  };
  auto continuum_active = [&](double w) {
    const double value = mb_conj(w, p);
    return continuum_piece(w, p) >= value - tie_tolerance(w, value, p);
  };
  auto slope_ok = [&](double w, double lo, double hi) {
    const double slope = (v - w) / gamma;
    const double tol = 1e-10 * (1.0 + std::abs(lo) + std::abs(hi) + std::abs(slope));
    return Interval::hull(lo, hi).contains(slope, tol);
  };

  MultibangProx best{0.0, {}};
  double best_obj = std::numeric_limits<double>::infinity();
  auto offer = [&](double w, MultibangCase which) {
    const double obj = objective(w);
    if (obj < best_obj) {
      best_obj = obj;
      best = {w, which};
    }
  };

  for (int i = 0; i < d; ++i) {
    const double w = v - gamma * u[i];
    if (level_active(w, i)) offer(w, {Kind::Level, i, 0});
  }
  {
    const double w = alpha / (alpha + gamma) * v;
    if (w >= alpha * p.lower() && w <= alpha * p.upper() && continuum_active(w)) {
      offer(w, {Kind::Continuum, 0, 0});
    }
  }
  for (int i = 0; i < d; ++i) {
    for (int side : {-1, 1}) {
      const double w = alpha * u[i] + side * s;
      if (level_active(w, i) && continuum_active(w) && slope_ok(w, u[i], w / alpha)) {
        offer(w, {Kind::ThresholdBand, i, side});
      }
    }
  }
  for (int i = 0; i + 1 < d; ++i) {
    const double w = 0.5 * alpha * (u[i] + u[i + 1]);
    if (level_active(w, i) && level_active(w, i + 1) && slope_ok(w, u[i], u[i + 1])) {
      offer(w, {Kind::Jump, i, 0});
    }
  }
  if (!std::isfinite(best_obj)) {
    throw NoFeasibleCandidate("multi-bang prox: no resolvent case is consistent at v = " +
                              std::to_string(v));
  }
  return best;
}

double mb_prox(double v, const MultibangParams& p, double gamma) {
  return mb_prox_case(v, p, gamma).w;
}

double mb_my(double q, const MultibangParams& p, double gamma) {
  const MultibangProx r = mb_prox_case(q, p, gamma);
  switch (r.which.kind) {
    case MultibangCase::Kind::Level: return p.levels()[r.which.index];
    case MultibangCase::Kind::Continuum: return q / (p.alpha() + gamma);
    default: return (q - r.w) / gamma;
  }
}

double mb_newton_deriv(double q, const MultibangParams& p, double gamma) {
  switch (mb_prox_case(q, p, gamma).which.kind) {
    case MultibangCase::Kind::Level: return 0.0;
    case MultibangCase::Kind::Continuum: return 1.0 / (p.alpha() + gamma);
    case MultibangCase::Kind::ThresholdBand:
    case MultibangCase::Kind::Jump: return 1.0 / gamma;
  }
  return 0.0;
}

}  // namespace swc
