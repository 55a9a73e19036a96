#include "uvlab/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "uvlab/errors.hpp"

namespace uvlab::quad {

namespace {

constexpr unsigned kOrder = 21;
using Kronrod = boost::math::quadrature::gauss_kronrod<double, kOrder>;
using Gauss = boost::math::quadrature::gauss<double, (kOrder - 1) / 2>;

struct Panel {
  double a;
  double b;
  double value;
  double error;
  double l1;
  int depth;
};

struct WorseFirst {
  bool operator()(const Panel& x, const Panel& y) const { return x.error < y.error; }
};

// Same node layout as Boost's non-adaptive rule: Gauss order 10 is even, so
// the centre node belongs to Kronrod only and Gauss nodes sit at odd indices.
Panel evaluate(const std::function<double(double)>& f, double a, double b, int depth) {
  const auto& xk = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double f0 = f(mid);
  double kronrod = f0 * wk[0];
  double gauss = 0.0;
  double l1 = std::abs(f0) * wk[0];
  for (unsigned i = 1; i < xk.size(); ++i) {
    const double fp = f(mid + half * xk[i]);
    const double fm = f(mid - half * xk[i]);
    kronrod += (fp + fm) * wk[i];
    l1 += (std::abs(fp) + std::abs(fm)) * wk[i];
    if (i % 2 == 1) gauss += (fp + fm) * wg[i / 2];
  }
  Panel p{a, b, kronrod * half, std::abs(kronrod - gauss) * half, l1 * std::abs(half), depth};
  p.error = std::max(p.error, 50.0 * std::numeric_limits<double>::epsilon() * p.l1);
  return p;
}

}  // namespace

Result integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> breakpoints, const QuadratureSpec& spec) {
  spec.validate();
  if (!(std::isfinite(a) && std::isfinite(b))) {
    throw PreconditionError("quad::integrate: limits must be finite");
  }
  if (a == b) return {};
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }

  std::vector<double> cuts{a};
  for (double x : breakpoints) {
    if (x > a && x < b) cuts.push_back(x);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Panel, std::vector<Panel>, WorseFirst> heap;
  double total = 0.0;
  double total_err = 0.0;
  double total_l1 = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Panel p = evaluate(f, cuts[i], cuts[i + 1], 0);
    total += p.value;
    total_err += p.error;
    total_l1 += p.l1;
    heap.push(p);
  }

  auto target = [&] {
    return std::max({spec.abs_tol, spec.rel_tol * std::abs(total),
                     100.0 * std::numeric_limits<double>::epsilon() * total_l1});
  };

  while (total_err > target()) {
    Panel worst = heap.top();
    if (worst.depth >= spec.max_refinements) {
      std::ostringstream msg;
      msg << "adaptive quadrature did not converge on [" << a << ", " << b
          << "]: error estimate " << total_err << " exceeds " << target()
          << " after " << spec.max_refinements << " refinements (partial " << total << ")";
      throw QuadratureError(msg.str(), sign * total, total_err);
    }
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = evaluate(f, worst.a, mid, worst.depth + 1);
    Panel right = evaluate(f, mid, worst.b, worst.depth + 1);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    total_l1 += left.l1 + right.l1 - worst.l1;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum to shed the drift from incremental updates.
  Result out;
  out.panels = static_cast<int>(heap.size());
  double sum = 0.0;
  double err = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  out.value = sign * sum;
  out.error = err;
  return out;
}

}  // namespace uvlab::quad
