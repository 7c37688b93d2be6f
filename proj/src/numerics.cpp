#include "impwf/numerics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace impwf::numerics {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
constexpr double kEps = std::numeric_limits<double>::epsilon();

double e1_series(double x) {
  // E1(x) = -gamma - ln x - sum_{n>=1} (-x)^n / (n * n!)
  double sum = 0.0;
  double term = 1.0;  // (-x)^n / n!
  for (int n = 1; n < 200; ++n) {
    term *= -x / n;
    const double contrib = term / n;
    sum += contrib;
    if (std::abs(contrib) < kEps * std::abs(sum)) break;
  }
  return -kEulerGamma - std::log(x) - sum;
}

double e1_continued_fraction(double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h * std::exp(-x);
}

bool same_sign(double a, double b) { return (a > 0.0) == (b > 0.0); }

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <class G>
Segment gauss_kronrod(const G& g, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = g(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double pair = g(center - dx) + g(center + dx);
    kronrod += kWgk[j] * pair;
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

double exp_integral_e1(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("exp_integral_e1: argument must be positive");
  }
  if (std::isinf(x)) return 0.0;
  return x < 1.0 ? e1_series(x) : e1_continued_fraction(x);
}

double solve_monotone_root(const ScalarFn& f, Bracket bracket, double tol) {
  double lo = bracket.lo;
  double hi = bracket.hi;
  if (!(lo < hi)) {
    throw RootFindingError("solve_monotone_root: empty bracket", 0);
  }
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (same_sign(flo, fhi)) {
    throw RootFindingError("solve_monotone_root: no sign change over bracket", 0);
  }

  bool secant_ok = true;
  for (std::size_t it = 1; it <= kMaxRootIterations; ++it) {
    const double width = hi - lo;
    const double mid = lo + 0.5 * width;
    if (width <= 2.0 * tol || mid <= lo || mid >= hi) return mid;

    double x = lo - flo * width / (fhi - flo);
    if (!secant_ok || !(x > lo && x < hi)) x = mid;

    const double fx = f(x);
    if (fx == 0.0) return x;
    if (same_sign(fx, flo)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    secant_ok = (hi - lo) <= 0.5 * width;
  }
  throw RootFindingError("solve_monotone_root: iteration cap reached",
                         kMaxRootIterations);
}

Bracket expand_decreasing_bracket(const ScalarFn& f) {
  Bracket b{1e-8, 1.0};
  while (f(b.hi) > 0.0 && b.hi < 1e6) b.hi *= 2.0;
  while (f(b.lo) <= 0.0 && b.lo > 1e-300) b.lo /= 16.0;
  if (f(b.hi) > 0.0 || f(b.lo) <= 0.0) {
    throw RootFindingError("expand_decreasing_bracket: no sign change found", 0);
  }
  return b;
}

double integrate_semi_infinite(const ScalarFn& f, double lower, double rel_tol) {
  auto g = [&](double s) {
    const double t = lower + (1.0 - s) / s;
    return f(t) / (s * s);
  };

  constexpr std::size_t kMaxSegments = 4000;
  std::priority_queue<Segment> heap;
  double total = 0.0;
  double total_err = 0.0;
  // A few initial pieces so narrow features near s = 1 are seen.
  constexpr int kInitial = 8;
  for (int i = 0; i < kInitial; ++i) {
    const Segment seg = gauss_kronrod(g, double(i) / kInitial, double(i + 1) / kInitial);
    total += seg.value;
    total_err += seg.error;
    heap.push(seg);
  }

  while (total_err > std::max(rel_tol * std::abs(total), 1e-300)) {
    if (heap.size() >= kMaxSegments) {
      throw QuadratureError("integrate_semi_infinite: segment limit reached",
                            total, total_err);
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Segment left = gauss_kronrod(g, worst.a, mid);
    const Segment right = gauss_kronrod(g, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum to drop the drift from incremental updates.
  double sum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    heap.pop();
  }
  return sum;
}

}  // namespace impwf::numerics
