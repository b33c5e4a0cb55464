#include "switchcontrol/switching.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace swc {

namespace {

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

void require_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("gamma must be positive and finite, got " + std::to_string(gamma));
  }
}

}  // namespace

double norm(Point2 a) { return std::hypot(a.c1, a.c2); }

SwitchingParams::SwitchingParams(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw std::invalid_argument("switching penalty requires alpha > 0 and beta > 0");
  }
  threshold_ = std::sqrt(2.0 * alpha * beta);
  if (!(threshold_ > 0.0) || !std::isfinite(threshold_)) {
    throw std::invalid_argument("sqrt(2 alpha beta) is not a positive finite number");
  }
}

SwitchingParams SwitchingParams::with_scaled_threshold(double alpha, double beta, double factor) {
  SwitchingParams p(alpha, beta);
  p.threshold_ *= factor;
  return p;
}

std::string_view to_string(RegionExact r) {
  switch (r) {
    case RegionExact::Q1: return "Q1";
    case RegionExact::Q2: return "Q2";
    case RegionExact::Q0: return "Q0";
    case RegionExact::Q10: return "Q10";
    case RegionExact::Q20: return "Q20";
    case RegionExact::Q12: return "Q12";
  }
  return "?";
}

std::string_view to_string(RegionGamma r) {
  switch (r) {
    case RegionGamma::Q1g: return "Q1g";
    case RegionGamma::Q2g: return "Q2g";
    case RegionGamma::Q0g: return "Q0g";
    case RegionGamma::Q10g: return "Q10g";
    case RegionGamma::Q20g: return "Q20g";
    case RegionGamma::Q00g: return "Q00g";
    case RegionGamma::Q12g: return "Q12g";
  }
  return "?";
}

std::string_view to_string(Arc a) {
  switch (a) {
    case Arc::Switching: return "switching";
    case Arc::Free: return "free";
    case Arc::FreeBoundary: return "free_boundary";
    case Arc::Singular: return "singular";
  }
  return "?";
}

Interval Interval::hull(double a, double b) { return {std::min(a, b), std::max(a, b)}; }

bool SubdiffSet::single_valued() const {
  return !segment_start && first.is_point() && second.is_point();
}

bool SubdiffSet::contains(Point2 v, double tol) const {
  if (segment_start) {
    // distance from v to the segment [start, end]
    const Point2 a = *segment_start;
    const Point2 d = *segment_end - a;
    const double len2 = dot(d, d);
    double t = len2 > 0.0 ? dot(v - a, d) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return norm(v - (a + t * d)) <= tol;
  }
  return first.contains(v.c1, tol) && second.contains(v.c2, tol);
}

double Deriv2x2::operator_norm() const {
  // largest singular value of a 2x2 matrix
  const double s1 = a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22;
  const double det = a11 * a22 - a12 * a21;
  const double disc = std::sqrt(std::max(0.0, s1 * s1 - 4.0 * det * det));
  return std::sqrt(0.5 * (s1 + disc));
}

double g_value(Point2 v, const SwitchingParams& p) {
  const double both = (v.c1 != 0.0 && v.c2 != 0.0) ? 1.0 : 0.0;
  return 0.5 * p.alpha() * (v.c1 * v.c1 + v.c2 * v.c2) + p.beta() * both;
}

double g_conj(Point2 q, const SwitchingParams& p) {
  const double a2 = q.c1 * q.c1;
  const double b2 = q.c2 * q.c2;
  const double inv = 0.5 / p.alpha();
  return std::max({inv * a2, inv * b2, inv * (a2 + b2) - p.beta()});
}

RegionExact classify_exact(Point2 q, const SwitchingParams& p) {
  const double a = std::abs(q.c1);
  const double b = std::abs(q.c2);
  const double s = p.threshold();
  if (a == b && a <= s) return RegionExact::Q12;
  if (a > s && b > s) return RegionExact::Q0;
  if (a > b) return b < s ? RegionExact::Q1 : RegionExact::Q10;
  return a < s ? RegionExact::Q2 : RegionExact::Q20;
}

SubdiffSet subdiff_conj(Point2 q, const SwitchingParams& p) {
  const double ia = 1.0 / p.alpha();
  const double d1 = ia * q.c1;
  const double d2 = ia * q.c2;
  SubdiffSet out{classify_exact(q, p), {}, {}, std::nullopt, std::nullopt};
  switch (out.region) {
    case RegionExact::Q1:
      out.first = Interval::point(d1);
      out.second = Interval::point(0.0);
      break;
    case RegionExact::Q2:
      out.first = Interval::point(0.0);
      out.second = Interval::point(d2);
      break;
    case RegionExact::Q0:
      out.first = Interval::point(d1);
      out.second = Interval::point(d2);
      break;
    case RegionExact::Q10:
      out.first = Interval::point(d1);
      out.second = Interval::hull(0.0, d2);
      break;
    case RegionExact::Q20:
      out.first = Interval::hull(0.0, d1);
      out.second = Interval::point(d2);
      break;
    case RegionExact::Q12:
      out.first = Interval::hull(0.0, d1);
      out.second = Interval::hull(0.0, d2);
      if (q.c1 == 0.0 && q.c2 == 0.0) break;
      out.segment_start = Point2{0.0, d2};
      out.segment_end = Point2{d1, 0.0};
      break;
  }
  return out;
}

RegionGamma classify_gamma(Point2 q, const SwitchingParams& p, double gamma) {
  require_gamma(gamma);
  const double a = std::abs(q.c1);
  const double b = std::abs(q.c2);
  const double s = p.threshold();
  const double c = 1.0 + gamma / p.alpha();
  const double cs = c * s;
  const double ca = c * a;
  const double cb = c * b;
  const bool a_band = a >= s && a <= cs;
  const bool b_band = b >= s && b <= cs;

  if (ca >= b && a <= cb && a + b <= s + cs) return RegionGamma::Q12g;
  if (a_band && b_band) return RegionGamma::Q00g;
  if (a >= cs && b_band) return RegionGamma::Q10g;
  if (b >= cs && a_band) return RegionGamma::Q20g;
  if (a >= cs && b >= cs) return RegionGamma::Q0g;
  if (a >= cb && b <= s) return RegionGamma::Q1g;
  if (b >= ca && a <= s) return RegionGamma::Q2g;
  throw std::logic_error("classify_gamma: point not covered by any region");
}

Point2 prox_conj(Point2 v, const SwitchingParams& p, double gamma) {
  const double alpha = p.alpha();
  const double s = p.threshold();
  const double shrink = alpha / (alpha + gamma);
  switch (classify_gamma(v, p, gamma)) {
    case RegionGamma::Q1g: return {shrink * v.c1, v.c2};
    case RegionGamma::Q2g: return {v.c1, shrink * v.c2};
    case RegionGamma::Q0g: return {shrink * v.c1, shrink * v.c2};
    case RegionGamma::Q10g: return {shrink * v.c1, std::copysign(s, v.c2)};
    case RegionGamma::Q20g: return {std::copysign(s, v.c1), shrink * v.c2};
    case RegionGamma::Q00g: return {std::copysign(s, v.c1), std::copysign(s, v.c2)};
    case RegionGamma::Q12g: {
      const double m = alpha / (2.0 * alpha + gamma) * (std::abs(v.c1) + std::abs(v.c2));
      return {sgn(v.c1) * m, sgn(v.c2) * m};
    }
  }
  return v;
}

Point2 my_grad(Point2 q, const SwitchingParams& p, double gamma) {
  const double alpha = p.alpha();
  const double s = p.threshold();
  const double ag = 1.0 / (alpha + gamma);
  const double a = std::abs(q.c1);
  const double b = std::abs(q.c2);
  switch (classify_gamma(q, p, gamma)) {
    case RegionGamma::Q1g: return {ag * q.c1, 0.0};
    case RegionGamma::Q2g: return {0.0, ag * q.c2};
    case RegionGamma::Q0g: return {ag * q.c1, ag * q.c2};
    case RegionGamma::Q10g: return {ag * q.c1, sgn(q.c2) * (b - s) / gamma};
    case RegionGamma::Q20g: return {sgn(q.c1) * (a - s) / gamma, ag * q.c2};
    case RegionGamma::Q00g: return {sgn(q.c1) * (a - s) / gamma, sgn(q.c2) * (b - s) / gamma};
    case RegionGamma::Q12g: {
      // ((alpha+gamma)|q_i| - alpha|q_j|) / (gamma (2 alpha + gamma)), with the
      // difference |q_i| - |q_j| formed first.
      const double den = gamma * (2.0 * alpha + gamma);
      return {sgn(q.c1) * (alpha * (a - b) + gamma * a) / den,
              sgn(q.c2) * (alpha * (b - a) + gamma * b) / den};
    }
  }
  return {};
}

Deriv2x2 newton_deriv(Point2 q, const SwitchingParams& p, double gamma) {
  const double alpha = p.alpha();
  const double ag = 1.0 / (alpha + gamma);
  const double ig = 1.0 / gamma;
  switch (classify_gamma(q, p, gamma)) {
    case RegionGamma::Q1g: return {ag, 0.0, 0.0, 0.0};
    case RegionGamma::Q2g: return {0.0, 0.0, 0.0, ag};
    case RegionGamma::Q0g: return {ag, 0.0, 0.0, ag};
    case RegionGamma::Q10g: return {ag, 0.0, 0.0, ig};
    case RegionGamma::Q20g: return {ig, 0.0, 0.0, ag};
    case RegionGamma::Q00g: return {ig, 0.0, 0.0, ig};
    case RegionGamma::Q12g: {
      const double den = gamma * (2.0 * alpha + gamma);
      const double diag = (alpha + gamma) / den;
      // d h_1 / d q_2 = -sgn(q1 q2) alpha / den
      const double off = -sgn(q.c1) * sgn(q.c2) * alpha / den;
      return {diag, off, off, diag};
    }
  }
  return {};
}

double g_biconj(Point2 v, const SwitchingParams& p) {
  const double alpha = p.alpha();
  const double beta = p.beta();
  const double s = p.threshold();
  const double r = p.primal_threshold();
  const double a = std::abs(v.c1);
  const double b = std::abs(v.c2);
  if (a >= r && b >= r) return 0.5 * alpha * (a * a + b * b) + beta;  // D0
  if (a >= r) return 0.5 * alpha * a * a + s * b;                      // D1
  if (b >= r) return 0.5 * alpha * b * b + s * a;                      // D2
  if (a + b <= r) return 0.5 * alpha * (a + b) * (a + b);              // D4
  return s * (a + b) - beta;                                           // D3
}

double gap_pointwise(Point2 v, Point2 q, const SwitchingParams& p) {
  const double gv = g_value(v, p);
  const double gq = g_conj(q, p);
  const double gap = gv + gq - dot(q, v);
  const double tol = 1e-12 * (1.0 + std::abs(gv) + std::abs(gq));
  if (gap < -tol) {
    throw NegativeGap("duality gap is negative: " + std::to_string(gap));
  }
  return std::max(gap, 0.0);
}

Arc arc_label(Point2 q, const SwitchingParams& p) {
  switch (classify_exact(q, p)) {
    case RegionExact::Q1:
    case RegionExact::Q2: return Arc::Switching;
    case RegionExact::Q0: return Arc::Free;
    case RegionExact::Q10:
    case RegionExact::Q20: return Arc::FreeBoundary;
    case RegionExact::Q12:
      return (q.c1 == 0.0 && q.c2 == 0.0) ? Arc::Switching : Arc::Singular;
  }
  return Arc::Switching;
}

}  // namespace swc
