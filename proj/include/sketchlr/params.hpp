#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sketchlr/kernels.hpp"

namespace sketchlr {

enum class Field { real, cplx };

/// alpha and beta unify the real and complex expectation formulas:
/// (alpha, beta) = (1, 1) over the reals and (0, 2) over the complexes.
struct FieldConstants {
  int alpha;
  int beta;
};

constexpr FieldConstants field_constants(Field f) {
  return f == Field::real ? FieldConstants{1, 1} : FieldConstants{0, 2};
}

template <typename Scalar>
constexpr Field field_of() {
  return is_complex_v<Scalar> ? Field::cplx : Field::real;
}

/// f(s, t) = s / (t - s - alpha), defined for t > s + alpha, s >= 1.
inline double f_factor(long s, long t, Field f) {
  const int alpha = field_constants(f).alpha;
  if (s < 1 || t <= s + alpha) {
    throw std::invalid_argument("f_factor: need s >= 1 and t > s + alpha");
  }
  return static_cast<double>(s) / static_cast<double>(t - s - alpha);
}

enum class SplitRule { default_rule, flat, decay, rapid, oracle };

struct SplitChoice {
  long k;
  long l;
  SplitRule rule;
};

namespace detail {

inline void check_budget(long r, long t, int alpha, const char* who) {
  if (r < 1) throw std::invalid_argument(std::string(who) + ": need r >= 1");
  if (t < 2 * r + 3 * alpha + 3) {
    throw std::invalid_argument(std::string(who) + ": budget T below 2r + 3*alpha + 3");
  }
}

}  // namespace detail

/// k = 2r + alpha and l = 2k + alpha; the balanced choice that makes the
/// error bound collapse to 4 tau_{r+1}^2.
inline SplitChoice default_split(long r, Field f) {
  if (r < 1) throw std::invalid_argument("default_split: need r >= 1");
  const int alpha = field_constants(f).alpha;
  const long k = 2 * r + alpha;
  return {k, 2 * k + alpha, SplitRule::default_rule};
}

/// Budgeted split for spectra with a flat tail.
inline SplitChoice flat_split(long r, long t, Field f) {
  const int alpha = field_constants(f).alpha;
  detail::check_budget(r, t, alpha, "flat_split");
  long k = 0;
  if (f == Field::cplx) {
    const double rd = static_cast<double>(r);
    const double td = static_cast<double>(t);
    const double inner = td * (std::sqrt(rd * (td - rd)) - rd) / (td - 2.0 * rd);
    k = std::max(r + 1, static_cast<long>(std::floor(inner)));
  } else {
    const double rd = static_cast<double>(r);
    const double td = static_cast<double>(t);
    const double inner = (td - 1.0) *
                         (std::sqrt(rd * (td - rd - 2.0) * (1.0 - 2.0 / (td - 1.0))) - (rd - 1.0)) /
                         (td - 2.0 * rd - 1.0);
    k = std::max(r + 2, static_cast<long>(std::floor(inner)));
  }
  return {k, t - k, SplitRule::flat};
}

/// Budgeted split for slowly decaying spectra or a spectral gap; the best
/// single choice across problem classes.
inline SplitChoice decay_split(long r, long t, Field f) {
  const int alpha = field_constants(f).alpha;
  detail::check_budget(r, t, alpha, "decay_split");
  const long k = std::max(r + alpha + 1, (t - alpha) / 3);
  return {k, t - k, SplitRule::decay};
}

/// Budgeted split for rapidly decaying spectra: k as large as the budget
/// allows, l at its minimum feasible value.
inline SplitChoice rapid_split(long r, long t, Field f) {
  const int alpha = field_constants(f).alpha;
  detail::check_budget(r, t, alpha, "rapid_split");
  const long k = (t - alpha - 1) / 2;
  return {k, t - k, SplitRule::rapid};
}

/// All (k, s) pairs for the three-part sketch whose storage fits the budget
/// of a simple sketch with T = k + l: (2k+1)(m+n) + s(s+2) <= T(m+n).
/// An empty result signals that the budget is too small.
inline std::vector<std::pair<long, long>> bwz_budget_pairs(long r, long t, long m, long n) {
  if (r < 1) throw std::invalid_argument("bwz_budget_pairs: need r >= 1");
  std::vector<std::pair<long, long>> out;
  const std::int64_t budget = static_cast<std::int64_t>(t) * (m + n);
  const long s_cap = std::min(m, n);
  for (long k = r; k <= s_cap; ++k) {
    const std::int64_t base = static_cast<std::int64_t>(2 * k + 1) * (m + n);
    if (base > budget) break;
    for (long s = k; s <= s_cap; ++s) {
      const std::int64_t cost = base + static_cast<std::int64_t>(s) * (s + 2);
      if (cost > budget) break;
      out.emplace_back(k, s);
    }
  }
  return out;
}

/// A priori bound on the expected squared Frobenius error of the rank-k
/// reconstruction: (1 + f(k,l)) * min over 1 <= rho < k - alpha of
/// (1 + f(rho,k)) * tau_{rho+1}^2(sigma).
inline double frobenius_error_bound(const RealVector& sigma, long k, long l, Field f) {
  const int alpha = field_constants(f).alpha;
  if (l <= k + alpha) {
    throw std::invalid_argument("frobenius_error_bound: need l > k + alpha");
  }
  if (k - alpha <= 1) {
    throw std::invalid_argument("frobenius_error_bound: no admissible index rho < k - alpha");
  }
  // Tail energies by suffix sums, smallest terms first.
  const Index len = sigma.size();
  std::vector<double> tail(static_cast<std::size_t>(len) + 2, 0.0);
  for (Index i = len - 1; i >= 0; --i) {
    tail[static_cast<std::size_t>(i)] =
        tail[static_cast<std::size_t>(i) + 1] + sigma(i) * sigma(i);
  }
  auto tail_sq = [&](long j) {  // tau_j^2, 1-indexed
    if (j > len) return 0.0;
    return tail[static_cast<std::size_t>(j - 1)];
  };
  double best = std::numeric_limits<double>::infinity();
  for (long rho = 1; rho < k - alpha; ++rho) {
    best = std::min(best, (1.0 + f_factor(rho, k, f)) * tail_sq(rho + 1));
  }
  return (1.0 + f_factor(k, l, f)) * best;
}

}  // namespace sketchlr
