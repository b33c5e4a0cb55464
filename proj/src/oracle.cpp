#include "switchcontrol/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace swc::oracle {

namespace {

struct Sample {
  Point x;
  double value;
};

bool inside(const Point& x, const GridSpec& g) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < g.lower[i] || x[i] > g.upper[i]) return false;
  }
  return true;
}

double chebyshev(const Point& a, const Point& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Lattice {k * step} restricted to [lo, hi].
std::vector<double> axis(double lo, double hi, double step) {
  std::vector<double> out;
  const auto k0 = static_cast<long long>(std::ceil(lo / step));
  const auto k1 = static_cast<long long>(std::floor(hi / step));
  out.reserve(static_cast<std::size_t>(std::max(0LL, k1 - k0 + 1)));
  for (long long k = k0; k <= k1; ++k) out.push_back(static_cast<double>(k) * step);
  return out;
}

std::vector<Sample> coarse_scan(const ScalarFn& f, const GridSpec& g) {
  std::vector<Sample> samples;
  const std::size_t d = g.dims();
  if (d == 1) {
    for (double x : axis(g.lower[0], g.upper[0], g.coarse_step)) {
      Point p{x};
      samples.push_back({p, f(p)});
    }
  } else {
    const auto ax0 = axis(g.lower[0], g.upper[0], g.coarse_step);
    const auto ax1 = axis(g.lower[1], g.upper[1], g.coarse_step);
    samples.reserve(ax0.size() * ax1.size());
    Point p(2);
    for (double x0 : ax0) {
      p[0] = x0;
      for (double x1 : ax1) {
        p[1] = x1;
        samples.push_back({p, f(p)});
      }
    }
  }
  for (const Point& a : g.atoms) {
    if (inside(a, g)) samples.push_back({a, f(a)});
  }
  return samples;
}

// Greedy ascent on the lattice x + step * Z^d, then the same on finer lattices.
Sample climb(const ScalarFn& f, Sample start, double step, const GridSpec& g) {
  const std::size_t d = g.dims();
  std::vector<Point> dirs;
  if (d == 1) {
    dirs = {{-1.0}, {1.0}};
  } else {
    for (int i = -1; i <= 1; ++i) {
      for (int j = -1; j <= 1; ++j) {
        if (i != 0 || j != 0) dirs.push_back({double(i), double(j)});
      }
    }
  }
  Sample cur = std::move(start);
  for (int round = 0; round <= g.refine_rounds; ++round) {
    if (round > 0) step /= g.refine_factor;
    for (;;) {
      Sample best = cur;
      Point trial(d);
      for (const Point& dir : dirs) {
        for (std::size_t i = 0; i < d; ++i) trial[i] = cur.x[i] + dir[i] * step;
        if (!inside(trial, g)) continue;
        const double v = f(trial);
        if (v > best.value) best = {trial, v};
      }
      if (best.value <= cur.value) break;
      cur = std::move(best);
    }
  }
  return cur;
}

Sample maximize(const ScalarFn& f, const GridSpec& g) {
  g.validate();
  std::vector<Sample> samples = coarse_scan(f, g);
  if (samples.empty()) throw std::invalid_argument("oracle grid contains no points");

  // Seeds: the best coarse samples that are pairwise more than two steps apart,
  // plus every atom.
  constexpr std::size_t kSeeds = 8;
  std::vector<std::size_t> order(samples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::partial_sort(order.begin(), order.begin() + std::min<std::size_t>(order.size(), 256),
                    order.end(),
                    [&](std::size_t a, std::size_t b) { return samples[a].value > samples[b].value; });
  std::vector<Sample> seeds;
  for (std::size_t k = 0; k < std::min<std::size_t>(order.size(), 256) && seeds.size() < kSeeds;
       ++k) {
    const Sample& s = samples[order[k]];
    if (!std::isfinite(s.value)) continue;
    const bool far = std::all_of(seeds.begin(), seeds.end(), [&](const Sample& t) {
      return chebyshev(s.x, t.x) > 2.0 * g.coarse_step;
    });
    if (far) seeds.push_back(s);
  }
  for (const Point& a : g.atoms) {
    if (inside(a, g)) seeds.push_back({a, f(a)});
  }

  Sample best{{}, -std::numeric_limits<double>::infinity()};
  for (Sample& s : seeds) {
    Sample r = climb(f, std::move(s), g.coarse_step, g);
    if (r.value > best.value) best = std::move(r);
  }
  if (!std::isfinite(best.value)) throw std::runtime_error("oracle objective is not finite anywhere");

  if (!g.box_is_domain) {
    for (std::size_t i = 0; i < g.dims(); ++i) {
      if (best.x[i] - g.lower[i] < g.coarse_step || g.upper[i] - best.x[i] < g.coarse_step) {
        throw BoxTooSmall("oracle optimum lies on the search box boundary");
      }
    }
  }
  return best;
}

}  // namespace

void GridSpec::validate() const {
  if (lower.empty() || lower.size() != upper.size() || lower.size() > 2) {
    throw std::invalid_argument("GridSpec: bounds must have matching dimension 1 or 2");
  }
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || !(lower[i] < upper[i])) {
      throw std::invalid_argument("GridSpec: bounds must be finite with lower < upper");
    }
  }
  if (!(coarse_step > 0.0) || refine_factor < 2 || refine_rounds < 0) {
    throw std::invalid_argument("GridSpec: steps must be positive");
  }
  for (const Point& a : atoms) {
    if (a.size() != lower.size()) throw std::invalid_argument("GridSpec: atom has wrong dimension");
  }
}

double GridSpec::final_step() const {
  return coarse_step / std::pow(static_cast<double>(refine_factor), refine_rounds);
}

GridSpec GridSpec::cube(const Point& center, double radius, int points_per_dim) {
  GridSpec g;
  for (double c : center) {
    g.lower.push_back(c - radius);
    g.upper.push_back(c + radius);
  }
  g.coarse_step = 2.0 * radius / points_per_dim;
  return g;
}

double conj_oracle(const ScalarFn& g, std::span<const double> q, const GridSpec& grid) {
  if (q.size() != grid.dims()) throw std::invalid_argument("conj_oracle: dimension mismatch");
  const Point qv(q.begin(), q.end());
  auto objective = [&](std::span<const double> v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += qv[i] * v[i];
    return s - g(v);
  };
  return maximize(objective, grid).value;
}

Point prox_oracle(const ScalarFn& gstar, std::span<const double> v, double gamma,
                  const GridSpec& grid) {
  if (!(gamma > 0.0)) throw std::invalid_argument("prox_oracle: gamma must be positive");
  if (v.size() != grid.dims()) throw std::invalid_argument("prox_oracle: dimension mismatch");
  const Point vv(v.begin(), v.end());
  auto objective = [&](std::span<const double> w) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) d2 += (w[i] - vv[i]) * (w[i] - vv[i]);
    return -(gstar(w) + d2 / (2.0 * gamma));
  };
  return maximize(objective, grid).x;
}

Eigen::MatrixXd fd_jacobian(const VectorFn& h, std::span<const double> q, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("fd_jacobian: eps must be positive");
  const std::size_t n = q.size();
  Point x(q.begin(), q.end());
  Eigen::MatrixXd jac;
  for (std::size_t j = 0; j < n; ++j) {
    const double x0 = x[j];
    x[j] = x0 + eps;
    const Point fp = h(x);
    x[j] = x0 - eps;
    const Point fm = h(x);
    x[j] = x0;
    if (j == 0) jac.resize(static_cast<Eigen::Index>(fp.size()), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < fp.size(); ++i) {
      jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (fp[i] - fm[i]) / (2.0 * eps);
    }
  }
  return jac;
}

GridSpec conj_box(std::span<const double> q, double alpha, double margin, int points_per_dim) {
  double qn = 0.0;
  for (double x : q) qn += x * x;
  const double radius = 2.0 * std::sqrt(qn) / alpha + margin;
  return GridSpec::cube(Point(q.size(), 0.0), radius, points_per_dim);
}

}  // namespace swc::oracle
