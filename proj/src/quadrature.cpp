#include "vortexsim/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

#include "vortexsim/errors.hpp"

namespace vortexsim::quad {

namespace {

// Kronrod 15-point nodes on [0,1] (positive half) with the embedded Gauss-7
// weights on the shared nodes. Values from QUADPACK.
constexpr int kHalf = 8;
constexpr double kNodes[kHalf] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWeightsK[kHalf] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
// Gauss-7 weights; zero where the node is Kronrod-only.
constexpr double kWeightsG[kHalf] = {
    0.0,
    0.129484966168869693270611432679082,
    0.0,
    0.279705391489276667901467771423780,
    0.0,
    0.381830050505118944950369775488975,
    0.0,
    0.417959183673469387755102040816327};

struct Rule1D {
  double k15;
  double g7;
};

template <class F>
Rule1D gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double k15 = 0.0, g7 = 0.0;
  for (int i = 0; i < kHalf; ++i) {
    const double dx = h * kNodes[i];
    const double y = (i == kHalf - 1) ? f(c) : f(c - dx) + f(c + dx);
    k15 += kWeightsK[i] * y;
    g7 += kWeightsG[i] * y;
  }
  return {k15 * h, g7 * h};
}

struct Patch1D {
  double a, b;
  double val, err;
  std::size_t id;
};

struct Patch2D {
  Rect r;
  double val, err, err_x, err_y;
  std::size_t id;
};

template <class P>
struct WorstFirst {
  bool operator()(const P& lhs, const P& rhs) const {
    if (lhs.err != rhs.err) return lhs.err < rhs.err;
    return lhs.id > rhs.id;  // stable tie-break
  }
};

double tolerance_for(double value, const QuadratureSpec& spec) {
  return std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
}

// Evaluates the tensor K15xK15 rule and the three embedded combinations
// (G7xK15, K15xG7, G7xG7) from one set of 225 function evaluations.
struct Rule2D {
  double kk, gk, kg, gg;
};

Rule2D gk15_2d(const std::function<double(double, double)>& f, const Rect& r) {
  const double cx = 0.5 * (r.x0 + r.x1), hx = 0.5 * (r.x1 - r.x0);
  const double cy = 0.5 * (r.y0 + r.y1), hy = 0.5 * (r.y1 - r.y0);
  // Row sums over x for each y node, then combine over y.
  double kk = 0.0, gk = 0.0, kg = 0.0, gg = 0.0;
  for (int j = 0; j < kHalf; ++j) {
    const double dy = hy * kNodes[j];
    double row_k[2] = {0.0, 0.0};
    double row_g[2] = {0.0, 0.0};
    const int nsub = (j == kHalf - 1) ? 1 : 2;
    for (int s = 0; s < nsub; ++s) {
      const double y = (j == kHalf - 1) ? cy : (s == 0 ? cy - dy : cy + dy);
      double rk = 0.0, rg = 0.0;
      for (int i = 0; i < kHalf; ++i) {
        const double dx = hx * kNodes[i];
        const double v = (i == kHalf - 1) ? f(cx, y) : f(cx - dx, y) + f(cx + dx, y);
        rk += kWeightsK[i] * v;
        rg += kWeightsG[i] * v;
      }
      row_k[s] = rk;
      row_g[s] = rg;
    }
    const double sum_k = row_k[0] + row_k[1];
    const double sum_g = row_g[0] + row_g[1];
    kk += kWeightsK[j] * sum_k;
    gk += kWeightsK[j] * sum_g;  // gauss in x, kronrod in y
    kg += kWeightsG[j] * sum_k;  // kronrod in x, gauss in y
    gg += kWeightsG[j] * sum_g;
  }
  const double scale = hx * hy;
  return {kk * scale, gk * scale, kg * scale, gg * scale};
}

constexpr std::size_t kEvals1D = 15;
constexpr std::size_t kEvals2D = 225;

}  // namespace

namespace {
void check_spec(const QuadratureSpec& spec, const char* where) {
  if (spec.rel_tol <= 0.0 && spec.abs_tol <= 0.0) {
    throw std::invalid_argument(std::string(where) + ": at least one tolerance must be positive");
  }
}
}  // namespace

QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        const QuadratureSpec& spec) {
  check_spec(spec, "integrate_1d");
  if (a == b) return {0.0, 0.0, 0};

  std::size_t next_id = 0;
  std::size_t evals = 0;
  auto make_patch = [&](double lo, double hi) {
    const Rule1D r = gk15(f, lo, hi);
    evals += kEvals1D;
    return Patch1D{lo, hi, r.k15, std::abs(r.k15 - r.g7), next_id++};
  };

  std::priority_queue<Patch1D, std::vector<Patch1D>, WorstFirst<Patch1D>> heap;
  std::vector<Patch1D> done;
  heap.push(make_patch(a, b));
  double total_val = heap.top().val;
  double total_err = heap.top().err;

  while (total_err > tolerance_for(total_val, spec)) {
    if (evals + 2 * kEvals1D > spec.max_evals) {
      throw AccuracyError("integrate_1d: max_evals exhausted before tolerance was met",
                          total_val, total_err);
    }
    Patch1D worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // interval at floating-point resolution; accept as-is
      done.push_back(worst);
      if (heap.empty()) break;
      continue;
    }
    total_val -= worst.val;
    total_err -= worst.err;
    Patch1D left = make_patch(worst.a, mid);
    Patch1D right = make_patch(mid, worst.b);
    total_val += left.val + right.val;
    total_err += left.err + right.err;
    heap.push(left);
    heap.push(right);
  }

  // Deterministic final reduction: sum in patch-creation order.
  while (!heap.empty()) {
    done.push_back(heap.top());
    heap.pop();
  }
  std::sort(done.begin(), done.end(),
            [](const Patch1D& l, const Patch1D& r) { return l.id < r.id; });
  double value = 0.0, err = 0.0;
  for (const Patch1D& p : done) {
    value += p.val;
    err += p.err;
  }
  return {value, err, evals};
}

QuadResult integrate_2d(const std::function<double(double, double)>& f, const Rect& domain,
                        const QuadratureSpec& spec) {
  check_spec(spec, "integrate_2d");
  if (domain.x0 == domain.x1 || domain.y0 == domain.y1) return {0.0, 0.0, 0};

  if (spec.scheme == QuadratureSpec::Scheme::fixed_tensor) {
    // Non-adaptive fallback: a fixed 16x16 grid of tensor patches.
    constexpr int n = 16;
    const double dx = (domain.x1 - domain.x0) / n;
    const double dy = (domain.y1 - domain.y0) / n;
    double value = 0.0, err = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const Rect r{domain.x0 + i * dx, domain.x0 + (i + 1) * dx, domain.y0 + j * dy,
                     domain.y0 + (j + 1) * dy};
        const Rule2D rule = gk15_2d(f, r);
        value += rule.kk;
        err += std::abs(rule.kk - rule.gk) + std::abs(rule.kk - rule.kg);
      }
    }
    return {value, err, static_cast<std::size_t>(n) * n * kEvals2D};
  }

  std::size_t next_id = 0;
  std::size_t evals = 0;
  auto make_patch = [&](const Rect& r) {
    const Rule2D rule = gk15_2d(f, r);
    evals += kEvals2D;
    const double ex = std::abs(rule.kk - rule.gk);
    const double ey = std::abs(rule.kk - rule.kg);
    return Patch2D{r, rule.kk, ex + ey, ex, ey, next_id++};
  };

  std::priority_queue<Patch2D, std::vector<Patch2D>, WorstFirst<Patch2D>> heap;
  std::vector<Patch2D> done;
  heap.push(make_patch(domain));
  double total_val = heap.top().val;
  double total_err = heap.top().err;

  while (total_err > tolerance_for(total_val, spec)) {
    if (evals + 2 * kEvals2D > spec.max_evals) {
      throw AccuracyError("integrate_2d: max_evals exhausted before tolerance was met",
                          total_val, total_err);
    }
    Patch2D worst = heap.top();
    heap.pop();
    const bool split_x = worst.err_x > worst.err_y ||
                         (worst.err_x == worst.err_y &&
                          (worst.r.x1 - worst.r.x0) >= (worst.r.y1 - worst.r.y0));
    Rect a = worst.r, b = worst.r;
    if (split_x) {
      const double mid = 0.5 * (worst.r.x0 + worst.r.x1);
      if (mid <= worst.r.x0 || mid >= worst.r.x1) {
        done.push_back(worst);
        if (heap.empty()) break;
        continue;
      }
      a.x1 = mid;
      b.x0 = mid;
    } else {
      const double mid = 0.5 * (worst.r.y0 + worst.r.y1);
      if (mid <= worst.r.y0 || mid >= worst.r.y1) {
        done.push_back(worst);
        if (heap.empty()) break;
        continue;
      }
      a.y1 = mid;
      b.y0 = mid;
    }
    total_val -= worst.val;
    total_err -= worst.err;
    Patch2D pa = make_patch(a);
    Patch2D pb = make_patch(b);
    total_val += pa.val + pb.val;
    total_err += pa.err + pb.err;
    heap.push(pa);
    heap.push(pb);
  }

  while (!heap.empty()) {
    done.push_back(heap.top());
    heap.pop();
  }
  std::sort(done.begin(), done.end(),
            [](const Patch2D& l, const Patch2D& r) { return l.id < r.id; });
  double value = 0.0, err = 0.0;
  for (const Patch2D& p : done) {
    value += p.val;
    err += p.err;
  }
  return {value, err, evals};
}

}  // namespace vortexsim::quad
