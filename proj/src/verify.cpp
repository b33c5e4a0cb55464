#include "switchcontrol/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "switchcontrol/oracle.hpp"
#include "switchcontrol/pde.hpp"
#include "switchcontrol/scalar_penalties.hpp"
#include "switchcontrol/switching.hpp"

namespace swc::verify {

namespace {

using Rng = std::mt19937_64;

constexpr int k2dPoints = 400;
constexpr int k1dPoints = 2000;

class Recorder {
 public:
  Recorder(std::string name, const Options& o) : o_(o) { r_.name = std::move(name); }

  Rng rng(int draw) const {
    std::seed_seq seq{static_cast<std::uint32_t>(o_.seed), static_cast<std::uint32_t>(o_.seed >> 32),
                      static_cast<std::uint32_t>(draw),
                      static_cast<std::uint32_t>(std::hash<std::string>{}(r_.name))};
    return Rng(seq);
  }

  void check(bool ok, int draw, const std::string& what) {
    ++r_.checks;
    if (ok) return;
    ++r_.failures;
    if (r_.first_failure.empty()) {
      std::ostringstream os;
      os << what << " [seed=" << o_.seed << " draw=" << draw << "]";
      r_.first_failure = os.str();
    }
  }

  template <class F>
  void guarded(int draw, F&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      check(false, draw, std::string("exception: ") + e.what());
    }
  }

  SuiteResult finish(std::chrono::steady_clock::time_point t0) {
    r_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r_;
  }

 private:
  const Options& o_;
  SuiteResult r_;
};

double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

double log_uniform(Rng& rng, double a, double b) { return std::exp(uniform(rng, std::log(a), std::log(b))); }

double sign_of(Rng& rng) { return uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0; }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::string fmt(Point2 q) { return "(" + fmt(q.c1) + ", " + fmt(q.c2) + ")"; }

struct Draw {
  double alpha, beta, gamma;
};

Draw draw_params(Rng& rng) {
  return {log_uniform(rng, 1e-3, 10.0), log_uniform(rng, 1e-3, 10.0), log_uniform(rng, 1e-3, 10.0)};
}

SwitchingParams params_for(const Draw& d, const Options& o) {
  if (o.threshold_scale != 1.0) return SwitchingParams::with_scaled_threshold(d.alpha, d.beta, o.threshold_scale);
  return SwitchingParams(d.alpha, d.beta);
}

// Raw switching cost, written out here so the oracles never touch the closed forms.
double raw_switching(std::span<const double> v, double alpha, double beta) {
  const double both = (v[0] != 0.0 && v[1] != 0.0) ? beta : 0.0;
  return 0.5 * alpha * (v[0] * v[0] + v[1] * v[1]) + both;
}

// Dual point on the scale of the gamma-regions; includes axis and diagonal draws.
Point2 sample_dual(Rng& rng, double s, double c) {
  const double r = 2.5 * c * s;
  const double k = uniform(rng, 0.0, 1.0);
  const double x = uniform(rng, -r, r);
  if (k < 0.1) return {x, 0.0};
  if (k < 0.2) return {x, sign_of(rng) * std::abs(x)};
  return {x, uniform(rng, -r, r)};
}

// Dual point that lands on the lower-dimensional exact regions often.
Point2 sample_dual_exact(Rng& rng, double s) {
  const double k = uniform(rng, 0.0, 1.0);
  if (k < 0.15) return {sign_of(rng) * uniform(rng, 1.0, 3.0) * s, sign_of(rng) * s};  // Q10
  if (k < 0.30) return {sign_of(rng) * s, sign_of(rng) * uniform(rng, 1.0, 3.0) * s};  // Q20
  if (k < 0.50) {
    const double a = uniform(rng, 0.0, 1.0) * s;
    return {sign_of(rng) * a, sign_of(rng) * a};  // Q12
  }
  return {uniform(rng, -3.0 * s, 3.0 * s), uniform(rng, -3.0 * s, 3.0 * s)};
}

Point2 pick_subgradient(Rng& rng, const SubdiffSet& set, double* t_out = nullptr) {
  const double t = uniform(rng, 0.0, 1.0);
  if (t_out) *t_out = t;
  if (set.segment_start) {
    const Point2 a = *set.segment_start;
    return a + t * (*set.segment_end - a);
  }
  const double t2 = uniform(rng, 0.0, 1.0);
  return {set.first.lo + t * (set.first.hi - set.first.lo), set.second.lo + t2 * (set.second.hi - set.second.lo)};
}

std::vector<double> sample_levels(Rng& rng) {
  const int d = 2 + static_cast<int>(uniform(rng, 0.0, 3.0));
  std::vector<double> u{uniform(rng, -2.0, 0.5)};
  for (int i = 1; i < d; ++i) u.push_back(u.back() + uniform(rng, 0.2, 1.5));
  return u;
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

bool close(Point2 a, Point2 b, double tol) { return norm(a - b) <= tol; }

}  // namespace

// --- oracle equivalence -----------------------------------------------------

SuiteResult oracle_switching(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  Recorder rec("oracle_switching", o);
  for (int k = 0; k < o.count; ++k) {
    rec.guarded(k, [&] {
      Rng rng = rec.rng(k);
      const Draw d = draw_params(rng);
      const SwitchingParams p = params_for(d, o);
      const double s = std::sqrt(2.0 * d.alpha * d.beta);
      const double c = 1.0 + d.gamma / d.alpha;
      auto g = [&](std::span<const double> v) { return raw_switching(v, d.alpha, d.beta); };

      const Point2 q = sample_dual(rng, s, c);
      const std::vector<double> qv{q.c1, q.c2};
      const double qn = norm(q);
      const auto cgrid = oracle::conj_box(qv, d.alpha, 0.1 * s / d.alpha + 0.1 * qn / d.alpha, k2dPoints);
      const double ref = oracle::conj_oracle(g, qv, cgrid);
      const double tol_c = 1e-5 * (qn * qn / (2.0 * d.alpha) + d.beta);
      rec.check(close(g_conj(q, p), ref, tol_c), k,
                "g_conj" + fmt(q) + " = " + fmt(g_conj(q, p)) + ", oracle " + fmt(ref));

      const Point2 v = sample_dual(rng, s, c);
      const std::vector<double> vv{v.c1, v.c2};
      auto gstar = [&](std::span<const double> w) { return g_conj({w[0], w[1]}, p); };
      const auto pgrid = oracle::GridSpec::cube({0.0, 0.0}, 1.05 * norm(v) + 0.05 * s, k2dPoints);
      const auto w = oracle::prox_oracle(gstar, vv, d.gamma, pgrid);
      const Point2 prox = prox_conj(v, p, d.gamma);
      const double tol_p = 1e-5 * (norm(v) + s);
      rec.check(close(prox, Point2{w[0], w[1]}, tol_p), k,
                "prox_conj" + fmt(v) + " = " + fmt(prox) + ", oracle " + fmt(Point2{w[0], w[1]}));
    });
  }
  return rec.finish(t0);
}

SuiteResult oracle_scalar(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  Recorder rec("oracle_scalar", o);
  for (int k = 0; k < o.count; ++k) {
    rec.guarded(k, [&] {
      Rng rng = rec.rng(k);
      const Draw d = draw_params(rng);
      // sparse
      {
        const SparseParams p(d.alpha, d.beta);
        const double s = p.threshold();
        const double r = 2.5 * (1.0 + d.gamma / d.alpha) * s;
        const double q = uniform(rng, -r, r);
        auto g = [&](std::span<const double> v) {
          return 0.5 * d.alpha * v[0] * v[0] + (v[0] != 0.0 ? d.beta : 0.0);
        };
        const std::vector<double> qv{q};
        const double ref = oracle::conj_oracle(
            g, qv, oracle::conj_box(qv, d.alpha, 0.1 * (s + std::abs(q)) / d.alpha, k1dPoints));
        rec.check(close(sparse_conj(q, p), ref, 1e-5 * (q * q / (2.0 * d.alpha) + d.beta)), k,
                  "sparse_conj(" + fmt(q) + ") = " + fmt(sparse_conj(q, p)) + ", oracle " + fmt(ref));

        const double v = uniform(rng, -r, r);
        auto gstar = [&](std::span<const double> w) { return sparse_conj(w[0], p); };
        const auto w = oracle::prox_oracle(gstar, std::vector<double>{v}, d.gamma,
                                           oracle::GridSpec::cube({0.0}, 1.05 * std::abs(v) + 0.05 * s, k1dPoints));
        rec.check(close(sparse_prox(v, p, d.gamma), w[0], 1e-5 * (std::abs(v) + s)), k,
                  "sparse_prox(" + fmt(v) + ") = " + fmt(sparse_prox(v, p, d.gamma)) + ", oracle " + fmt(w[0]));
      }
      // multi-bang
      {
        const MultibangParams p(d.alpha, d.beta, sample_levels(rng));
        const auto& u = p.levels();
        const double s = p.threshold();
        const double umax = std::max(std::abs(p.lower()), std::abs(p.upper()));
        const double lo = d.alpha * p.lower() - 2.0 * s - d.alpha;
        const double hi = d.alpha * p.upper() + 2.0 * s + d.alpha;
        const double q = uniform(rng, lo, hi);

        auto g = [&](std::span<const double> v) {
          const double x = v[0];
          if (x < p.lower() || x > p.upper()) return std::numeric_limits<double>::infinity();
          const bool on_level = std::find(u.begin(), u.end(), x) != u.end();
          return 0.5 * d.alpha * x * x + (on_level ? 0.0 : d.beta);
        };
        oracle::GridSpec cg;
        cg.lower = {p.lower()};
        cg.upper = {p.upper()};
        cg.coarse_step = (p.upper() - p.lower()) / k1dPoints;
        cg.box_is_domain = true;
        for (double level : u) cg.atoms.push_back({level});
        const double ref = oracle::conj_oracle(g, std::vector<double>{q}, cg);
        const double scale = std::abs(q) * umax + d.alpha * umax * umax + d.beta;
        rec.check(close(mb_conj(q, p), ref, 1e-5 * scale), k,
                  "mb_conj(" + fmt(q) + ") = " + fmt(mb_conj(q, p)) + ", oracle " + fmt(ref));

        const double v = uniform(rng, lo + d.gamma * p.lower(), hi + d.gamma * p.upper());
        auto gstar = [&](std::span<const double> w) { return mb_conj(w[0], p); };
        const double wlo = v - d.gamma * p.upper(), whi = v - d.gamma * p.lower();
        const double margin = 0.05 * (whi - wlo) + 0.05 * (std::abs(v) + s);
        oracle::GridSpec pg;
        pg.lower = {wlo - margin};
        pg.upper = {whi + margin};
        pg.coarse_step = (pg.upper[0] - pg.lower[0]) / k1dPoints;
        const auto w = oracle::prox_oracle(gstar, std::vector<double>{v}, d.gamma, pg);
        const double mp = mb_prox(v, p, d.gamma);
        rec.check(close(mp, w[0], 1e-5 * (std::abs(v) + s + d.gamma * umax)), k,
                  "mb_prox(" + fmt(v) + ") = " + fmt(mp) + ", oracle " + fmt(w[0]));
      }
    });
  }
  return rec.finish(t0);
}

// --- Moreau-Yosida contracts ------------------------------------------------

SuiteResult my_contracts_switching(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  Recorder rec("my_contracts_switching", o);
  for (int k = 0; k < o.count; ++k) {
    rec.guarded(k, [&] {
      Rng rng = rec.rng(k);
      const Draw d = draw_params(rng);
      const SwitchingParams p = params_for(d, o);
      const double s = std::sqrt(2.0 * d.alpha * d.beta);
      const double c = 1.0 + d.gamma / d.alpha;
      const double gm = d.gamma;
      const Point2 q = sample_dual(rng, s, c);
      Point2 q2 = sample_dual(rng, s, c);
      if (uniform(rng, 0.0, 1.0) < 0.5) q2 = q + (1e-3 * s * c) * Point2{uniform(rng, -1, 1), uniform(rng, -1, 1)};
      const Point2 h = my_grad(q, p, gm);
      const Point2 h2 = my_grad(q2, p, gm);

      const Point2 via_prox = (1.0 / gm) * (q - prox_conj(q, p, gm));
      const double tol_r = 1e-10 * (norm(h) + norm(q) / (d.alpha + gm)) + 1e-14 * norm(q) / gm;
      rec.check(close(h, via_prox, tol_r), k, "resolvent identity at " + fmt(q));

      const double dq = norm(q - q2);
      const double dh = norm(h - h2);
      const double slack = 1e-12 * (norm(q) + norm(q2)) / gm;
      rec.check(dh <= dq / gm * (1.0 + 1e-10) + slack, k, "Lipschitz between " + fmt(q) + " and " + fmt(q2));
      rec.check(dot(h - h2, q - q2) >= -1e-10 * dh * dq - slack * dq, k,
                "monotonicity between " + fmt(q) + " and " + fmt(q2));
      rec.check(norm(h) <= norm(q) / d.alpha * (1.0 + 1e-10), k, "norm bound at " + fmt(q));

      const Point2 qe = sample_dual_exact(rng, s);
      const Point2 v = pick_subgradient(rng, subdiff_conj(qe, p));
      const Point2 back = my_grad(qe + gm * v, p, gm);
      rec.check(close(back, v, 1e-10 * (norm(v) + norm(qe) / d.alpha) + 1e-14 * norm(qe) / gm), k,
                "complementarity at q=" + fmt(qe) + " v=" + fmt(v) + " gives " + fmt(back));

      const Point2 w = prox_conj(q, p, gm);
      const double env = g_conj(w, p) + dot(w - q, w - q) / (2.0 * gm);
      const double gq = g_conj(q, p);
      const double tol_e = 1e-12 * (gq + dot(q, q) / d.alpha);
      rec.check(env >= g_conj(w, p) - tol_e && env <= gq + tol_e, k, "envelope ordering at " + fmt(q));

      const Point2 hf = my_grad({-q.c1, q.c2}, p, gm);
      const Point2 hs = my_grad({q.c2, q.c1}, p, gm);
      const double tol_s = 1e-14 * norm(q) / gm + 1e-15 * norm(h);
      rec.check(close(hf, Point2{-h.c1, h.c2}, tol_s) && close(hs, Point2{h.c2, h.c1}, tol_s), k,
                "sign/swap symmetry at " + fmt(q));
    });
  }
  return rec.finish(t0);
}

SuiteResult my_contracts_scalar(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  Recorder rec("my_contracts_scalar", o);
  for (int k = 0; k < o.count; ++k) {
    rec.guarded(k, [&] {
      Rng rng = rec.rng(k);
      const Draw d = draw_params(rng);
      const double gm = d.gamma;
      {
        const SparseParams p(d.alpha, d.beta);
        const double s = p.threshold();
        const double r = 2.5 * (1.0 + gm / d.alpha) * s;
        const double q = uniform(rng, -r, r), q2 = uniform(rng, -r, r);
        const double h = sparse_my(q, p, gm), h2 = sparse_my(q2, p, gm);
        const double slack = 1e-12 * (std::abs(q) + std::abs(q2)) / gm;
        rec.check((h - h2) * (q - q2) >= -slack * std::abs(q - q2), k, "sparse_my monotone");
        rec.check(std::abs(h - h2) <= std::abs(q - q2) / gm * (1 + 1e-10) + slack, k, "sparse_my Lipschitz");
        rec.check(close(h, (q - sparse_prox(q, p, gm)) / gm, 1e-10 * std::abs(h) + 1e-14 * std::abs(q) / gm), k,
                  "sparse resolvent identity at " + fmt(q));
        rec.check(sparse_my(-q, p, gm) == -h, k, "sparse_my odd at " + fmt(q));
        const double qe = uniform(rng, 0.0, 1.0) < 0.3 ? sign_of(rng) * s : q;
        const Interval iv = sparse_subdiff(qe, p);
        const double v = iv.lo + uniform(rng, 0.0, 1.0) * (iv.hi - iv.lo);
        const double back = sparse_my(qe + gm * v, p, gm);
        rec.check(close(back, v, 1e-10 * (std::abs(v) + std::abs(qe) / d.alpha) + 1e-14 * std::abs(qe) / gm), k,
                  "sparse complementarity at q=" + fmt(qe) + " v=" + fmt(v));
      }
      {
        const MultibangParams p(d.alpha, d.beta, sample_levels(rng));
        const auto& u = p.levels();
        const double s = p.threshold();
        const double lo = d.alpha * p.lower() - 2.0 * s - d.alpha - gm * std::abs(p.lower());
        const double hi = d.alpha * p.upper() + 2.0 * s + d.alpha + gm * std::abs(p.upper());
        const double q = uniform(rng, lo, hi), q2 = uniform(rng, lo, hi);
        const double h = mb_my(q, p, gm), h2 = mb_my(q2, p, gm);
        const double umax = std::max(std::abs(p.lower()), std::abs(p.upper()));
        const double slack = 1e-12 * (std::abs(q) + std::abs(q2) + umax) / gm;
        rec.check((h - h2) * (q - q2) >= -slack * std::abs(q - q2), k, "mb_my monotone");
        rec.check(std::abs(h - h2) <= std::abs(q - q2) / gm * (1 + 1e-10) + slack, k, "mb_my Lipschitz");
        rec.check(close(h, (q - mb_prox(q, p, gm)) / gm, 1e-10 * (std::abs(h) + umax) + 1e-14 * std::abs(q) / gm),
                  k, "mb resolvent identity at " + fmt(q));
        const double tol_box = 1e-12 * (umax + std::abs(q) / gm);
        rec.check(h >= p.lower() - tol_box && h <= p.upper() + tol_box, k, "mb_my range at " + fmt(q));
        const double h0 = mb_my(q, p, 1e-8);
        rec.check(h0 >= p.lower() - 1e-6 * umax && h0 <= p.upper() + 1e-6 * umax, k, "mb_my small-gamma range");

        // ties: jump midpoints and threshold bands, where the subdifferential is an interval
        double qe = q;
        const double pick = uniform(rng, 0.0, 1.0);
        const int i = static_cast<int>(uniform(rng, 0.0, static_cast<double>(u.size() - 1)));
        if (pick < 0.25) qe = 0.5 * d.alpha * (u[i] + u[i + 1]);
        else if (pick < 0.5) qe = d.alpha * u[i] + sign_of(rng) * s;
        const Interval iv = mb_subdiff(qe, p);
        const double v = iv.lo + uniform(rng, 0.0, 1.0) * (iv.hi - iv.lo);
        const double back = mb_my(qe + gm * v, p, gm);
        rec.check(close(back, v, 1e-9 * (umax + std::abs(qe) / d.alpha) + 1e-13 * std::abs(qe) / gm), k,
                  "mb complementarity at q=" + fmt(qe) + " v=" + fmt(v) + " gives " + fmt(back));
      }
    });
  }
  return rec.finish(t0);
}

// --- Newton derivatives -----------------------------------------------------

SuiteResult newton_fd(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  Recorder rec("newton_fd", o);
  const Point2 dirs[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  for (int k = 0; k < o.count; ++k) {
    rec.guarded(k, [&] {
      Rng rng = rec.rng(k);
      const Draw d = draw_params(rng);
      const double gm = d.gamma;
      // switching: redraw until the point is 1e-4 * scale inside its region
      {
        const SwitchingParams p = params_for(d, o);
        const double s = std::sqrt(2.0 * d.alpha * d.beta);
        for (int attempt = 0; attempt < 50; ++attempt) {
          const Point2 q = sample_dual(rng, s, 1.0 + gm / d.alpha);
          const double scale = std::max(norm(q), s);
          const RegionGamma reg = classify_gamma(q, p, gm);
          bool interior = true;
          for (Point2 dir : dirs) interior = interior && classify_gamma(q + (1e-4 * scale) * dir, p, gm) == reg;
          if (!interior) continue;
          auto h = [&](std::span<const double> x) {
            const Point2 r = my_grad({x[0], x[1]}, p, gm);
            return std::vector<double>{r.c1, r.c2};
          };
          const Eigen::MatrixXd j = oracle::fd_jacobian(h, std::vector<double>{q.c1, q.c2}, 1e-6 * scale);
          const Deriv2x2 nd = newton_deriv(q, p, gm);
          Eigen::Matrix2d m;
          m << nd.a11, nd.a12, nd.a21, nd.a22;
          const double tol = 1e-6 * std::max(m.cwiseAbs().maxCoeff(), 1.0 / (d.alpha + gm));
          rec.check((j - m).cwiseAbs().maxCoeff() <= tol, k,
                    "switching newton_deriv at " + fmt(q) + " in " + std::string(to_string(reg)));
          break;
        }
      }
      // sparse
      {
        const SparseParams p(d.alpha, d.beta);
        const double s = p.threshold();
        for (int attempt = 0; attempt < 50; ++attempt) {
          const double r = 2.5 * (1.0 + gm / d.alpha) * s;
          const double q = uniform(rng, -r, r);
          const double scale = std::max(std::abs(q), s);
          const int reg = sparse_region(q, p, gm);
          if (sparse_region(q + 1e-4 * scale, p, gm) != reg || sparse_region(q - 1e-4 * scale, p, gm) != reg) continue;
          auto h = [&](std::span<const double> x) { return std::vector<double>{sparse_my(x[0], p, gm)}; };
          const double fd = oracle::fd_jacobian(h, std::vector<double>{q}, 1e-6 * scale)(0, 0);
          const double nd = sparse_newton_deriv(q, p, gm);
          rec.check(close(fd, nd, 1e-6 * std::max(std::abs(nd), 1.0 / (d.alpha + gm))), k,
                    "sparse_newton_deriv at " + fmt(q));
          break;
        }
      }
      // multi-bang
      {
        const MultibangParams p(d.alpha, d.beta, sample_levels(rng));
        const int nl = static_cast<int>(p.levels().size());
        const double s = p.threshold();
        const double lo = d.alpha * p.lower() - 2.0 * s - d.alpha - gm * std::abs(p.lower());
        const double hi = d.alpha * p.upper() + 2.0 * s + d.alpha + gm * std::abs(p.upper());
        for (int attempt = 0; attempt < 50; ++attempt) {
          const double q = uniform(rng, lo, hi);
          const double scale = std::max({std::abs(q), s, d.alpha * (p.upper() - p.lower())});
          const int reg = mb_prox_case(q, p, gm).which.code(nl);
          if (mb_prox_case(q + 1e-4 * scale, p, gm).which.code(nl) != reg ||
              mb_prox_case(q - 1e-4 * scale, p, gm).which.code(nl) != reg) {
            continue;
          }
          auto h = [&](std::span<const double> x) { return std::vector<double>{mb_my(x[0], p, gm)}; };
          const double fd = oracle::fd_jacobian(h, std::vector<double>{q}, 1e-6 * scale)(0, 0);
          const double nd = mb_newton_deriv(q, p, gm);
          rec.check(close(fd, nd, 1e-6 * std::max(std::abs(nd), 1.0 / (d.alpha + gm))), k,
                    "mb_newton_deriv at " + fmt(q) + " fd " + fmt(fd) + " closed " + fmt(nd));
          break;
        }
      }
    });
  }
  return rec.finish(t0);
}

// --- biconjugate ------------------------------------------------------------

SuiteResult biconjugate(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  Recorder rec("biconjugate", o);
  for (int k = 0; k < o.count; ++k) {
    rec.guarded(k, [&] {
      Rng rng = rec.rng(k);
      const Draw d = draw_params(rng);
      const SwitchingParams p = params_for(d, o);
      const double r = std::sqrt(2.0 * d.beta / d.alpha);
      const double s = std::sqrt(2.0 * d.alpha * d.beta);
      auto sample = [&] {
        const double x = uniform(rng, -3 * r, 3 * r);
        const double kind = uniform(rng, 0.0, 1.0);
        if (kind < 0.1) return Point2{x, 0.0};
        if (kind < 0.2) return Point2{x, sign_of(rng) * std::abs(x)};
        return Point2{x, uniform(rng, -3 * r, 3 * r)};
      };
      const Point2 v = sample(), w = sample();
      const double gv = g_biconj(v, p);
      const double quad = 0.5 * d.alpha * dot(v, v);
      const double tol = 1e-12 * (quad + d.beta);
      rec.check(gv <= g_value(v, p) + tol, k, "g** <= g at " + fmt(v));
      rec.check(gv >= quad - tol, k, "g** >= alpha/2 |v|^2 at " + fmt(v));
      const double mid = g_biconj(0.5 * (v + w), p);
      rec.check(mid <= 0.5 * (gv + g_biconj(w, p)) + 1e-12 * (gv + g_biconj(w, p) + d.beta), k,
                "midpoint convexity between " + fmt(v) + " and " + fmt(w));

      auto gstar = [&](std::span<const double> q) { return g_conj({q[0], q[1]}, p); };
      const auto grid = oracle::GridSpec::cube({0.0, 0.0}, 1.5 * d.alpha * norm(v) + 2.0 * s, k2dPoints);
      const double ref = oracle::conj_oracle(gstar, std::vector<double>{v.c1, v.c2}, grid);
      rec.check(close(gv, ref, 1e-5 * (quad + d.beta)), k,
                "g_biconj" + fmt(v) + " = " + fmt(gv) + ", oracle " + fmt(ref));
    });
  }
  return rec.finish(t0);
}

// --- duality gap ------------------------------------------------------------

SuiteResult gap_bounds(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  Recorder rec("gap_bounds", o);
  for (int k = 0; k < o.count; ++k) {
    rec.guarded(k, [&] {
      Rng rng = rec.rng(k);
      const Draw d = draw_params(rng);
      const SwitchingParams p = params_for(d, o);
      const double s = std::sqrt(2.0 * d.alpha * d.beta);
      const Point2 q = sample_dual_exact(rng, s);
      const SubdiffSet set = subdiff_conj(q, p);
      double t = 0.0;
      const Point2 v = pick_subgradient(rng, set, &t);
      const double gap = gap_pointwise(v, q, p);
      const double tol = 1e-10 * (d.beta + dot(q, q) / d.alpha);
      switch (set.region) {
        case RegionExact::Q1:
        case RegionExact::Q2:
        case RegionExact::Q0:
          rec.check(gap <= tol, k, "zero gap on single-valued region at " + fmt(q));
          break;
        case RegionExact::Q10:
        case RegionExact::Q20: {
          rec.check(gap <= d.beta + tol, k, "gap <= beta at " + fmt(q) + " v=" + fmt(v));
          const bool interior = !set.single_valued() && t > 0.01 && t < 0.99;
          if (interior) rec.check(gap < d.beta, k, "gap < beta for interior selection at " + fmt(q));
          break;
        }
        case RegionExact::Q12:
          rec.check(gap <= 2.0 * d.beta + tol, k, "gap <= 2 beta at " + fmt(q) + " v=" + fmt(v));
          break;
      }
    });
  }
  return rec.finish(t0);
}

// --- classification ---------------------------------------------------------

SuiteResult classification(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  Recorder rec("classification", o);
  const Point2 dirs[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  for (int k = 0; k < o.count; ++k) {
    rec.guarded(k, [&] {
      Rng rng = rec.rng(k);
      const Draw d = draw_params(rng);
      const SwitchingParams p = params_for(d, o);
      const double s = p.threshold();
      const double c = 1.0 + d.gamma / d.alpha;
      // points on the boundary lines of the gamma-regions and exact regions
      const double a = uniform(rng, 0.0, 2.5 * c * s);
      const double lines[] = {s, c * s, s + c * s - a, a / c, c * a, a};
      const double b = lines[static_cast<int>(uniform(rng, 0.0, 6.0)) % 6];
      const Point2 q{sign_of(rng) * a, sign_of(rng) * b};
      const Point2 qs = uniform(rng, 0.0, 1.0) < 0.5 ? q : Point2{q.c2, q.c1};
      (void)classify_exact(qs, p);
      (void)classify_gamma(qs, p, d.gamma);
      const Point2 h = my_grad(qs, p, d.gamma);
      const double delta = 1e-9 * std::max(norm(qs), s);
      for (Point2 dir : dirs) {
        const Point2 hn = my_grad(qs + delta * dir, p, d.gamma);
        rec.check(norm(hn - h) <= norm(delta * dir) / d.gamma * 1.0001 + 1e-12 * norm(qs) / d.gamma, k,
                  "my_grad jumps across a region boundary at " + fmt(qs));
      }
    });
  }
  return rec.finish(t0);
}

// --- PDE adjoints -----------------------------------------------------------

SuiteResult adjoint(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  Recorder rec("adjoint", o);
  if (o.count <= 0) return rec.finish(t0);
  const EllipticProblem ell(12);
  const ParabolicProblem par(12, 10);
  const int draws = std::min(o.count, 100);
  for (int k = 0; k < draws; ++k) {
    rec.guarded(k, [&] {
      Rng rng = rec.rng(k);
      for (const ControlProblem* prob : {static_cast<const ControlProblem*>(&ell),
                                         static_cast<const ControlProblem*>(&par)}) {
        Vec u(2 * prob->control_size()), w(prob->state_size());
        for (auto& x : u) x = uniform(rng, -1.0, 1.0);
        for (auto& x : w) x = uniform(rng, -1.0, 1.0);
        const double lhs = prob->state_dot(prob->apply_S(u), w);
        const double rhs = prob->control_dot(u, prob->apply_Sstar(w));
        rec.check(std::abs(lhs - rhs) <= 1e-10 * prob->control_norm(u) * prob->state_norm(w), k,
                  prob->name() + " adjoint mismatch " + fmt(lhs - rhs));
      }
    });
  }
  return rec.finish(t0);
}

const std::vector<Suite>& all_suites() {
  static const std::vector<Suite> suites{
      {"oracle_switching", oracle_switching},
      {"oracle_scalar", oracle_scalar},
      {"my_contracts_switching", my_contracts_switching},
      {"my_contracts_scalar", my_contracts_scalar},
      {"newton_fd", newton_fd},
      {"biconjugate", biconjugate},
      {"gap_bounds", gap_bounds},
      {"classification", classification},
      {"adjoint", adjoint},
  };
  return suites;
}

std::vector<SuiteResult> run_all(const Options& o) {
  std::vector<SuiteResult> out;
  for (const Suite& s : all_suites()) out.push_back(s.run(o));
  return out;
}

}  // namespace swc::verify
