#pragma once

#include <optional>
#include <stdexcept>
#include <string_view>

namespace swc {

/// A point of the plane. Used both for primal controls v and dual values q.
struct Point2 {
  double c1 = 0.0;
  double c2 = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.c1 + b.c1, a.c2 + b.c2}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.c1 - b.c1, a.c2 - b.c2}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.c1, s * a.c2}; }
inline double dot(Point2 a, Point2 b) { return a.c1 * b.c1 + a.c2 * b.c2; }
double norm(Point2 a);

/// Cost weights of g(v) = alpha/2 |v|^2 + beta |v1 v2|_0.
class SwitchingParams {
 public:
  SwitchingParams(double alpha, double beta);

  /// Fault-injection hook for the verification harness: a parameter set whose
  /// threshold is scaled by `factor`, so the closed forms disagree with g.
  static SwitchingParams with_scaled_threshold(double alpha, double beta, double factor);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  /// sqrt(2 alpha beta): dual threshold separating one and two active controls.
  double threshold() const { return threshold_; }
  /// sqrt(2 beta / alpha): the same threshold on the primal side.
  double primal_threshold() const { return threshold_ / alpha_; }

 private:
  double alpha_;
  double beta_;
  double threshold_;
};

/// Cases of the subdifferential of g*.
enum class RegionExact { Q1, Q2, Q0, Q10, Q20, Q12 };

/// Cases of the Moreau-Yosida regularization (d g*)_gamma.
enum class RegionGamma { Q1g, Q2g, Q0g, Q10g, Q20g, Q00g, Q12g };

inline constexpr int kNumRegionGamma = 7;

enum class Arc { Switching, Free, FreeBoundary, Singular };

std::string_view to_string(RegionExact r);
std::string_view to_string(RegionGamma r);
std::string_view to_string(Arc a);

/// Closed interval with unordered construction: Interval::hull(a, b) = [min, max].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static Interval point(double a) { return {a, a}; }
  static Interval hull(double a, double b);
  bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
  bool is_point() const { return lo == hi; }
};

/// Value of d g*(q). On Q12 the set is the segment from `segment_start` (t = 0)
/// to `segment_end` (t = 1), not the box spanned by the two intervals.
struct SubdiffSet {
  RegionExact region;
  Interval first;
  Interval second;
  std::optional<Point2> segment_start;
  std::optional<Point2> segment_end;

  bool single_valued() const;
  bool contains(Point2 v, double tol = 1e-12) const;
};

/// Symmetric 2x2 matrix stored by entries.
struct Deriv2x2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a21 = 0.0;
  double a22 = 0.0;

  Point2 apply(Point2 x) const { return {a11 * x.c1 + a12 * x.c2, a21 * x.c1 + a22 * x.c2}; }
  double operator_norm() const;
};

class NegativeGap : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double g_value(Point2 v, const SwitchingParams& p);
double g_conj(Point2 q, const SwitchingParams& p);
RegionExact classify_exact(Point2 q, const SwitchingParams& p);
SubdiffSet subdiff_conj(Point2 q, const SwitchingParams& p);

/// Regions are tested in the order Q12g, Q00g, Q10g, Q20g, Q0g, Q1g, Q2g with
/// closed inequalities; my_grad is continuous, so shared boundaries agree.
/// Q10g is the band |q2| in [s, (1 + gamma/alpha) s] with |q1| beyond it.
RegionGamma classify_gamma(Point2 q, const SwitchingParams& p, double gamma);

/// prox_{gamma g*}(v), evaluated from its own case formulas.
Point2 prox_conj(Point2 v, const SwitchingParams& p, double gamma);

/// (d g*)_gamma(q) = (q - prox_{gamma g*}(q)) / gamma, evaluated from its own case formulas.
Point2 my_grad(Point2 q, const SwitchingParams& p, double gamma);

Deriv2x2 newton_deriv(Point2 q, const SwitchingParams& p, double gamma);

double g_biconj(Point2 v, const SwitchingParams& p);

/// g(v) + g*(q) - q.v; throws NegativeGap when it is negative beyond rounding.
double gap_pointwise(Point2 v, Point2 q, const SwitchingParams& p);

Arc arc_label(Point2 q, const SwitchingParams& p);

}  // namespace swc
