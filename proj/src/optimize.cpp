#include "qctl/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qctl::opt {

MinimizeResult nelder_mead(const Objective& f, Vec x0, const NelderMeadOptions& options) {
  const std::size_t n = x0.size();
  MinimizeResult out;
  if (n == 0) {
    out.value = f(x0);
    out.evaluations = 1;
    out.x = std::move(x0);
    return out;
  }
  const double dn = static_cast<double>(n);
  const double alpha = 1.0, beta = 1.0 + 2.0 / dn, gamma = 0.75 - 0.5 / dn, delta = 1.0 - 1.0 / dn;

  std::vector<Vec> simplex(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += options.initial_step;
  std::vector<double> values(n + 1);
  int evals = 0;
  auto eval = [&](const Vec& x) {
    ++evals;
    return f(x);
  };
  for (std::size_t i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  Vec centroid(n), xr(n), xe(n), xc(n);
  int iter = 0;
  while (evals < options.max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
    if (values[best] <= options.target) break;
    if (values[worst] - values[best] <= options.f_tol * (1.0 + std::abs(values[best]))) break;
    ++iter;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const auto& v = simplex[order[k]];
      for (std::size_t i = 0; i < n; ++i) centroid[i] += v[i] / dn;
    }
    const auto& xw = simplex[worst];
    for (std::size_t i = 0; i < n; ++i) xr[i] = centroid[i] + alpha * (centroid[i] - xw[i]);
    const double fr = eval(xr);
    if (fr < values[best]) {
      for (std::size_t i = 0; i < n; ++i) xe[i] = centroid[i] + beta * (xr[i] - centroid[i]);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        values[worst] = fe;
      } else {
        simplex[worst] = xr;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = xr;
      values[worst] = fr;
      continue;
    }
    const bool outside = fr < values[worst];
    for (std::size_t i = 0; i < n; ++i)
      xc[i] = outside ? centroid[i] + gamma * (xr[i] - centroid[i]) : centroid[i] - gamma * (centroid[i] - xw[i]);
    const double fc = eval(xc);
    if (fc < std::min(fr, values[worst])) {
      simplex[worst] = xc;
      values[worst] = fc;
      continue;
    }
    // shrink toward best
    const Vec xb = simplex[best];
    for (std::size_t k = 0; k <= n; ++k) {
      if (k == best) continue;
      for (std::size_t i = 0; i < n; ++i) simplex[k][i] = xb[i] + delta * (simplex[k][i] - xb[i]);
      values[k] = eval(simplex[k]);
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  out.x = simplex[best];
  out.value = values[best];
  out.evaluations = evals;
  out.iterations = iter;
  return out;
}

MinimizeResult bfgs(const ObjectiveWithGradient& fg, Vec x0, const BfgsOptions& options) {
  const std::size_t n = x0.size();
  MinimizeResult out;
  Vec g(n), gnew(n), xnew(n), dir(n), s(n), y(n), hy(n);
  double fx = fg(x0, g);
  int evals = 1;
  // inverse Hessian approximation, row-major
  std::vector<double> hinv(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) hinv[i * n + i] = 1.0;
  bool fresh = true;

  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    double gnorm = 0.0;
    for (double v : g) gnorm = std::max(gnorm, std::abs(v));
    if (gnorm < options.gradient_tol || fx <= options.target) break;

    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc -= hinv[i * n + j] * g[j];
      dir[i] = acc;
    }
    double slope = std::inner_product(g.begin(), g.end(), dir.begin(), 0.0);
    if (slope >= 0.0) {
      // not a descent direction: reset to steepest descent
      for (std::size_t i = 0; i < n; ++i) dir[i] = -g[i];
      std::fill(hinv.begin(), hinv.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) hinv[i * n + i] = 1.0;
      fresh = true;
      slope = -std::inner_product(g.begin(), g.end(), g.begin(), 0.0);
    }

    double step = 1.0;
    double fnew = fx;
    bool accepted = false;
    for (int ls = 0; ls < 50; ++ls) {
      for (std::size_t i = 0; i < n; ++i) xnew[i] = x0[i] + step * dir[i];
      fnew = fg(xnew, gnew);
      ++evals;
      if (std::isfinite(fnew) && fnew <= fx + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (fresh) break;
      std::fill(hinv.begin(), hinv.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) hinv[i * n + i] = 1.0;
      fresh = true;
      continue;
    }

    for (std::size_t i = 0; i < n; ++i) {
      s[i] = xnew[i] - x0[i];
      y[i] = gnew[i] - g[i];
    }
    const double sy = std::inner_product(s.begin(), s.end(), y.begin(), 0.0);
    if (sy > 1e-14 * std::sqrt(std::inner_product(s.begin(), s.end(), s.begin(), 0.0) *
                                 std::inner_product(y.begin(), y.end(), y.begin(), 0.0))) {
      if (fresh) {
        // scale the initial inverse Hessian
        const double yy = std::inner_product(y.begin(), y.end(), y.begin(), 0.0);
        const double scale = sy / yy;
        for (std::size_t i = 0; i < n; ++i) hinv[i * n + i] = scale;
        fresh = false;
      }
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += hinv[i * n + j] * y[j];
        hy[i] = acc;
      }
      const double yhy = std::inner_product(y.begin(), y.end(), hy.begin(), 0.0);
      const double rho = 1.0 / sy;
      const double c = (1.0 + rho * yhy) * rho;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          hinv[i * n + j] += c * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
    }
    const double improvement = fx - fnew;
    x0.swap(xnew);
    g.swap(gnew);
    fx = fnew;
    if (improvement <= 1e-16 * (1.0 + std::abs(fx))) break;
  }
  out.x = std::move(x0);
  out.value = fx;
  out.evaluations = evals;
  out.iterations = iter;
  return out;
}

}  // namespace qctl::opt
