#include "crimed/corrupted_kl.hpp"

#include <cmath>
#include <cstring>
#include <unordered_map>

#include "crimed/normal.hpp"

namespace crimed {

namespace {

// Below this distance above delta_min, kl and its derivative are clamped to
// zero: c -> 1 there and log(1/c) cancels catastrophically.
constexpr double kDeltaMinGuard = 1e-9;
constexpr int kMaxSolveIters = 200;

struct MemoKey {
  std::int64_t delta_q;
  std::uint64_t eps_bits;
  bool operator==(const MemoKey& o) const {
    return delta_q == o.delta_q && eps_bits == o.eps_bits;
  }
};

struct MemoKeyHash {
  std::size_t operator()(const MemoKey& k) const {
    return static_cast<std::size_t>(
        split_mix64(static_cast<std::uint64_t>(k.delta_q) ^
                    split_mix64(k.eps_bits)));
  }
};

HuberPairSolution solve_c_uncached(double delta, double eps) {
  const double target = 1.0 / (1.0 - eps);
  const double c_floor = eps / (1.0 - eps);

  const auto residual = [&](double c) {
    const double shift = 2.0 * std::log(1.0 / c) / delta;
    return c * norm_cdf((delta - shift) / 2.0) +
           norm_cdf((delta + shift) / 2.0) - target;
  };

  double lo = c_floor + 1e-15;
  double hi = 1.0;
  double c;
  if (residual(lo) >= 0.0) {
    // Phi has saturated to 1 at this gap; the root coincides with the
    // bracket floor to double precision.
    c = lo;
  } else {
    c = 0.5 * (lo + hi);
    int iter = 0;
    for (;; ++iter) {
      if (iter >= kMaxSolveIters)
        throw std::runtime_error("solve_c: no convergence");
      const double f = residual(c);
      if (std::fabs(f) <= kSolverTolerance) break;
      if (f > 0.0)
        hi = c;
      else
        lo = c;
      // Newton step; the map's derivative in c is exactly Phi(Delta_-/2).
      const double dm = delta - 2.0 * std::log(1.0 / c) / delta;
      const double slope = norm_cdf(dm / 2.0);
      double next = slope > 0.0 ? c - f / slope : lo;
      if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
      c = next;
    }
  }

  HuberPairSolution sol;
  sol.delta = delta;
  sol.c = c;
  const double shift = 2.0 * std::log(1.0 / c) / delta;
  sol.delta_plus = delta + shift;
  sol.delta_minus = delta - shift;
  return sol;
}

}  // namespace

double delta_min(Eps eps) {
  if (eps.is_zero()) return 0.0;
  return 2.0 * norm_cdf_inv(1.0 / (2.0 * (1.0 - eps.value())));
}

HuberPairSolution solve_c(double delta, Eps eps) {
  if (eps.is_zero())
    throw std::domain_error("solve_c: undefined at eps = 0");
  const double dmin = delta_min(eps);
  if (!(delta > 0.0) || delta < dmin)
    throw std::domain_error("solve_c: gap below minimum distinction gap");

  if (delta <= dmin + kDeltaMinGuard) {
    // c converges to 1 with Delta_+/- pinched onto delta_min.
    return HuberPairSolution{delta, 1.0, delta, delta};
  }

  thread_local std::unordered_map<MemoKey, HuberPairSolution, MemoKeyHash>
      memo;
  std::uint64_t eps_bits;
  const double eps_value = eps.value();
  std::memcpy(&eps_bits, &eps_value, sizeof eps_bits);
  const MemoKey key{static_cast<std::int64_t>(std::llround(delta * 1e9)),
                    eps_bits};
  if (auto it = memo.find(key); it != memo.end()) return it->second;

  HuberPairSolution sol = solve_c_uncached(delta, eps_value);
  memo.emplace(key, sol);
  return sol;
}

double kl_eps_gauss(double x, double y, Eps eps) {
  const double delta = y - x;
  if (eps.is_zero()) return delta <= 0.0 ? 0.0 : 0.5 * delta * delta;

  const double dmin = delta_min(eps);
  if (delta <= dmin + kDeltaMinGuard) return 0.0;

  const HuberPairSolution sol = solve_c(delta, eps);
  const double phi_minus = norm_cdf(sol.delta_minus / 2.0);
  const double phi_plus = norm_cdf(sol.delta_plus / 2.0);
  const double value =
      (1.0 - eps.value()) *
      ((1.0 - sol.c) * phi_minus * std::log(1.0 / sol.c) +
       0.5 * delta * delta * (phi_plus - phi_minus) -
       delta * (norm_pdf(sol.delta_minus / 2.0) -
                norm_pdf(sol.delta_plus / 2.0)));
  return value > 0.0 ? value : 0.0;
}

double kl_eps_gauss_derivative(double delta, Eps eps) {
  if (delta < 0.0) return 0.0;
  if (eps.is_zero()) return delta;

  const double dmin = delta_min(eps);
  if (delta <= dmin + kDeltaMinGuard) return 0.0;

  const HuberPairSolution sol = solve_c(delta, eps);
  return (1.0 - eps.value()) * delta *
         (norm_cdf(sol.delta_plus / 2.0) - norm_cdf(sol.delta_minus / 2.0));
}

double kl_mean_value_gap_bound(double m_a, double m_b, double m_star,
                               Eps eps) {
  const double dmin = delta_min(eps);
  if (!(m_star - m_a > dmin) || !(m_star - m_b > dmin))
    throw std::domain_error(
        "kl_mean_value_gap_bound: gaps must exceed delta_min");
  const double increase = m_b - m_a;
  if (increase <= 0.0) return 0.0;
  return (1.0 - eps.value()) * increase *
         std::max(m_star - m_a, m_star - m_b);
}

double CorruptedDensityPair::h1_support_boundary() const {
  return x + solution.delta_plus / 2.0;
}

double CorruptedDensityPair::h2_support_boundary() const {
  return x + solution.delta_minus / 2.0;
}

double CorruptedDensityPair::left_density(double t) const {
  const double one_minus_eps = 1.0 - eps.value();
  if (t < h1_support_boundary()) return one_minus_eps * norm_pdf(t - x);
  return solution.c * one_minus_eps * norm_pdf(t - y);
}

double CorruptedDensityPair::right_density(double t) const {
  const double one_minus_eps = 1.0 - eps.value();
  if (t > h2_support_boundary()) return one_minus_eps * norm_pdf(t - y);
  return solution.c * one_minus_eps * norm_pdf(t - x);
}

double CorruptedDensityPair::h1_density(double t) const {
  if (t < h1_support_boundary()) return 0.0;
  const double e = eps.value();
  const double v =
      (1.0 - e) / e * (solution.c * norm_pdf(t - y) - norm_pdf(t - x));
  return v > 0.0 ? v : 0.0;
}

double CorruptedDensityPair::h2_density(double t) const {
  if (t > h2_support_boundary()) return 0.0;
  const double e = eps.value();
  const double v =
      (1.0 - e) / e * (solution.c * norm_pdf(t - x) - norm_pdf(t - y));
  return v > 0.0 ? v : 0.0;
}

CorruptedDensityPair huber_pair_densities(double x, double y, Eps eps) {
  if (eps.is_zero())
    throw std::domain_error("huber_pair_densities: undefined at eps = 0");
  const double delta = y - x;
  if (!(delta > delta_min(eps) + kDeltaMinGuard))
    throw std::domain_error(
        "huber_pair_densities: gap below minimum distinction gap");
  return CorruptedDensityPair{x, y, eps, solve_c(delta, eps)};
}

namespace {

// N(0,1) conditioned on [alpha, inf). Inverse CDF in the bulk, the
// Marsaglia/Robert Rayleigh-envelope method deep in the tail.
double truncated_std_normal_tail(double alpha, Rng& rng) {
  if (alpha < 5.0) {
    const double lo = norm_cdf(alpha);
    return norm_cdf_inv(lo + uniform01(rng) * (1.0 - lo));
  }
  for (;;) {
    const double z =
        std::sqrt(alpha * alpha - 2.0 * std::log(uniform01(rng)));
    if (uniform01(rng) * z <= alpha) return z;
  }
}

// Sample from H1 of the pair; H2 is its mirror image.
double sample_h1(const CorruptedDensityPair& pair, Rng& rng) {
  constexpr long kIterationCap = 1000000;
  const double c = pair.solution.c;
  const double delta = pair.solution.delta;
  const double mid = 0.5 * (pair.x + pair.y);
  const double alpha = -pair.solution.delta_minus / 2.0;  // boundary - y

  for (long iter = 0; iter < kIterationCap; ++iter) {
    const double t = pair.y + truncated_std_normal_tail(alpha, rng);
    // Accept with probability 1 - phi(t-x) / (c phi(t-y)).
    const double ratio = std::exp(-delta * (t - mid)) / c;
    if (uniform01(rng) >= ratio) return t;
  }
  throw std::runtime_error("sample_huber_corruption: rejection cap exceeded");
}

}  // namespace

double sample_huber_corruption(const CorruptedDensityPair& pair,
                               CorruptionSide side, Rng& rng) {
  if (side == CorruptionSide::kLeft) return sample_h1(pair, rng);
  // H2 for (x, y) is the reflection of H1 for (-y, -x); c and Delta_+/- are
  // unchanged because they depend only on (delta, eps).
  CorruptedDensityPair reflected = pair;
  reflected.x = -pair.y;
  reflected.y = -pair.x;
  return -sample_h1(reflected, rng);
}

}  // namespace crimed
