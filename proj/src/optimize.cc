// Copyright 2026 The fishsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fishsim/optimize.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <boost/math/distributions/normal.hpp>

namespace fishsim {

void Bounds::Validate() const {
  if (lower.size() != upper.size() || lower.empty()) throw Error("bounds: lower/upper size mismatch");
  for (size_t i = 0; i < lower.size(); ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || !(lower[i] <= upper[i])) {
      throw Error("bounds: dimension " + std::to_string(i) + " is not a finite interval");
    }
  }
}

bool Bounds::Contains(const std::vector<double>& x) const {
  if (x.size() != size()) return false;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lower[i] && x[i] <= upper[i])) return false;
  }
  return true;
}

std::vector<double> Bounds::Reflect(std::vector<double> x) const {
  for (size_t i = 0; i < x.size(); ++i) {
    const double lo = lower[i], hi = upper[i], w = hi - lo;
    if (w <= 0.0) {
      x[i] = lo;
      continue;
    }
    if (!std::isfinite(x[i])) {
      x[i] = x[i] > 0.0 ? hi : lo;
      continue;
    }
    if (x[i] >= lo && x[i] <= hi) continue;
    // Unfold onto a sawtooth of period 2w.
    double r = std::fmod(x[i] - lo, 2.0 * w);
    if (r < 0.0) r += 2.0 * w;
    x[i] = r <= w ? lo + r : hi - (r - w);
    x[i] = std::clamp(x[i], lo, hi);
  }
  return x;
}

void FitResult::Record(const std::vector<double>& x, double value) {
  ++evaluations;
  trace.push_back({x, value});
  if (value < best_value || best.empty()) {
    best_value = value;
    best = x;
  }
}

void FitResult::Append(const FitResult& other) {
  for (const TraceEntry& e : other.trace) Record(e.x, e.value);
}

double SanitizeObjective(double value) {
  return std::isnan(value) ? std::numeric_limits<double>::infinity() : value;
}

FitResult nelder_mead(const ObjectiveFn& f, const std::vector<double>& x0,
                      const NelderMeadOptions& options, const Bounds* bounds) {
  const size_t n = x0.size();
  if (n == 0) throw Error("nelder_mead: empty starting point");
  for (double v : x0) {
    if (!std::isfinite(v)) throw Error("nelder_mead: starting point must be finite");
  }
  if (bounds) {
    bounds->Validate();
    if (bounds->size() != n) throw Error("nelder_mead: bounds dimension mismatch");
  }

  FitResult result;
  auto project = [&](std::vector<double> x) { return bounds ? bounds->Reflect(std::move(x)) : x; };
  auto eval = [&](const std::vector<double>& x) {
    const double v = SanitizeObjective(f(x));
    result.Record(x, v);
    return v;
  };

  // Adaptive coefficients for dimension n.
  const double dn = static_cast<double>(n);
  const double alpha = 1.0;
  const double beta = 1.0 + 2.0 / dn;
  const double gamma = 0.75 - 0.5 / dn;
  const double delta = 1.0 - 1.0 / dn;

  std::vector<std::vector<double>> simplex(n + 1, project(x0));
  for (size_t i = 0; i < n; ++i) {
    std::vector<double>& v = simplex[i + 1];
    double step;
    if (bounds) {
      step = options.initial_step * (bounds->upper[i] - bounds->lower[i]);
      // Step toward the side with more room so the vertex stays inside.
      if (v[i] + step > bounds->upper[i]) step = -step;
    } else {
      step = v[i] != 0.0 ? options.initial_step * std::abs(v[i]) : 0.00025;
    }
    v[i] += step;
    v = project(v);
  }
  std::vector<double> values(n + 1);
  for (size_t i = 0; i <= n && result.evaluations < options.max_evals; ++i) values[i] = eval(simplex[i]);
  if (result.evaluations < static_cast<int>(n + 1)) return result;

  std::vector<size_t> order(n + 1);
  while (result.evaluations < options.max_evals) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return values[a] < values[b]; });
    {
      std::vector<std::vector<double>> s(n + 1);
      std::vector<double> v(n + 1);
      for (size_t i = 0; i <= n; ++i) {
        s[i] = simplex[order[i]];
        v[i] = values[order[i]];
      }
      simplex.swap(s);
      values.swap(v);
    }
    double size = 0.0;
    for (size_t i = 1; i <= n; ++i) {
      double d = 0.0;
      for (size_t k = 0; k < n; ++k) d = std::max(d, std::abs(simplex[i][k] - simplex[0][k]));
      size = std::max(size, d);
    }
    if (size < options.tolerance) break;

    std::vector<double> centroid(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
      for (size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / dn;
    }
    auto along = [&](double t) {
      std::vector<double> x(n);
      for (size_t k = 0; k < n; ++k) x[k] = centroid[k] + t * (simplex[n][k] - centroid[k]);
      return project(x);
    };

    const std::vector<double> xr = along(-alpha);
    const double fr = eval(xr);
    if (fr < values[0]) {
      if (result.evaluations >= options.max_evals) {
        simplex[n] = xr;
        values[n] = fr;
        break;
      }
      const std::vector<double> xe = along(-alpha * beta);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[n] = xe;
        values[n] = fe;
      } else {
        simplex[n] = xr;
        values[n] = fr;
      }
      continue;
    }
    if (fr < values[n - 1]) {
      simplex[n] = xr;
      values[n] = fr;
      continue;
    }
    if (result.evaluations >= options.max_evals) break;
    const bool outside = fr < values[n];
    const std::vector<double> xc = along(outside ? -alpha * gamma : gamma);
    const double fc = eval(xc);
    if (fc < (outside ? fr : values[n])) {
      simplex[n] = xc;
      values[n] = fc;
      continue;
    }
    for (size_t i = 1; i <= n && result.evaluations < options.max_evals; ++i) {
      for (size_t k = 0; k < n; ++k) simplex[i][k] = simplex[0][k] + delta * (simplex[i][k] - simplex[0][k]);
      simplex[i] = project(simplex[i]);
      values[i] = eval(simplex[i]);
    }
  }
  return result;
}

namespace {

double Matern52(double r, double length) {
  const double s = std::sqrt(5.0) * r / length;
  return (1.0 + s + s * s / 3.0) * std::exp(-s);
}

struct Surrogate {
  Eigen::MatrixXd x;  // unit box, one point per row
  Eigen::LLT<Eigen::MatrixXd> llt;
  Eigen::VectorXd alpha;
  double length = 0.2;
  double mean = 0.0, scale = 1.0;

  double Kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    return Matern52((a - b).norm(), length);
  }
};

constexpr double kNoise = 1e-6;

// Fits the length scale by marginal likelihood over a fixed grid. Returns
// false when no Cholesky factorization succeeds.
bool FitSurrogate(const std::vector<Eigen::VectorXd>& pts, const std::vector<double>& ys, Surrogate* gp) {
  const int n = static_cast<int>(pts.size());
  const int d = static_cast<int>(pts[0].size());
  double finite_max = -std::numeric_limits<double>::infinity();
  for (double y : ys) {
    if (std::isfinite(y)) finite_max = std::max(finite_max, y);
  }
  if (!std::isfinite(finite_max)) return false;
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y[i] = std::isfinite(ys[i]) ? ys[i] : finite_max;
  gp->mean = y.mean();
  const double var = (y.array() - gp->mean).square().mean();
  gp->scale = var > 0.0 ? std::sqrt(var) : 1.0;
  y = (y.array() - gp->mean) / gp->scale;

  gp->x.resize(n, d);
  for (int i = 0; i < n; ++i) gp->x.row(i) = pts[i].transpose();

  double best_lml = -std::numeric_limits<double>::infinity();
  bool ok = false;
  const double dim_scale = std::sqrt(static_cast<double>(d));
  for (double l : {0.05, 0.1, 0.2, 0.4, 0.8, 1.6}) {
    const double length = l * dim_scale;
    Eigen::MatrixXd k(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j <= i; ++j) {
        k(i, j) = k(j, i) = Matern52((gp->x.row(i) - gp->x.row(j)).norm(), length);
      }
      k(i, i) += kNoise;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() != Eigen::Success) continue;
    const Eigen::VectorXd a = llt.solve(y);
    const Eigen::MatrixXd lmat = llt.matrixL();
    const double lml = -0.5 * y.dot(a) - lmat.diagonal().array().log().sum();
    if (!std::isfinite(lml)) continue;
    if (lml > best_lml) {
      best_lml = lml;
      gp->length = length;
      gp->llt = llt;
      gp->alpha = a;
      ok = true;
    }
  }
  return ok;
}

double ExpectedImprovement(const Surrogate& gp, const Eigen::VectorXd& u, double best_std) {
  const int n = static_cast<int>(gp.x.rows());
  Eigen::VectorXd ks(n);
  for (int i = 0; i < n; ++i) ks[i] = Matern52((gp.x.row(i).transpose() - u).norm(), gp.length);
  const double mu = ks.dot(gp.alpha);
  const Eigen::VectorXd v = gp.llt.matrixL().solve(ks);
  const double var = std::max(1.0 + kNoise - v.squaredNorm(), 0.0);
  const double sigma = std::sqrt(var);
  if (sigma < 1e-12) return 0.0;
  const double z = (best_std - mu) / sigma;
  static const boost::math::normal_distribution<double> normal;
  return (best_std - mu) * boost::math::cdf(normal, z) + sigma * boost::math::pdf(normal, z);
}

}  // namespace

int InitialDesignSize(const GlobalSearchOptions& options, size_t dims) {
  if (options.initial_design > 0) return options.initial_design;
  return std::max(10, 2 * static_cast<int>(dims) + 2);
}

FitResult global_search(const ObjectiveFn& f, const Bounds& bounds, int budget,
                        const GlobalSearchOptions& options) {
  bounds.Validate();
  const size_t d = bounds.size();
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  FitResult result;
  std::vector<Eigen::VectorXd> pts;
  std::vector<double> ys;
  auto to_box = [&](const Eigen::VectorXd& u) {
    std::vector<double> x(d);
    for (size_t i = 0; i < d; ++i) x[i] = bounds.lower[i] + u[i] * (bounds.upper[i] - bounds.lower[i]);
    return x;
  };
  auto eval = [&](const Eigen::VectorXd& u) {
    const std::vector<double> x = to_box(u);
    const double v = SanitizeObjective(f(x));
    result.Record(x, v);
    pts.push_back(u);
    ys.push_back(v);
  };

  // Latin hypercube: one point per stratum in every dimension.
  const int n_init = InitialDesignSize(options, d);
  std::vector<std::vector<int>> strata(d, std::vector<int>(n_init));
  for (size_t i = 0; i < d; ++i) {
    std::iota(strata[i].begin(), strata[i].end(), 0);
    std::shuffle(strata[i].begin(), strata[i].end(), rng);
  }
  for (int p = 0; p < n_init; ++p) {
    Eigen::VectorXd u(d);
    for (size_t i = 0; i < d; ++i) u[i] = (strata[i][p] + unit(rng)) / n_init;
    eval(u);
  }

  for (int it = 0; it < budget; ++it) {
    Surrogate gp;
    Eigen::VectorXd next(d);
    if (!FitSurrogate(pts, ys, &gp)) {
      for (size_t i = 0; i < d; ++i) next[i] = unit(rng);
      eval(next);
      continue;
    }
    const double best_std = (result.best_value - gp.mean) / gp.scale;
    size_t best_idx = 0;
    for (size_t i = 1; i < ys.size(); ++i) {
      if (ys[i] < ys[best_idx]) best_idx = i;
    }
    std::normal_distribution<double> jitter(0.0, 1.0);
    double best_ei = -1.0;
    for (int c = 0; c < options.candidates; ++c) {
      Eigen::VectorXd u(d);
      if (c % 4 == 3) {
        // Local candidates around the incumbent.
        const double radius = c % 8 == 3 ? 0.05 : 0.01;
        for (size_t i = 0; i < d; ++i) u[i] = std::clamp(pts[best_idx][i] + radius * jitter(rng), 0.0, 1.0);
      } else {
        for (size_t i = 0; i < d; ++i) u[i] = unit(rng);
      }
      const double ei = ExpectedImprovement(gp, u, best_std);
      if (ei > best_ei) {
        best_ei = ei;
        next = u;
      }
    }
    eval(next);
  }
  return result;
}

}  // namespace fishsim
