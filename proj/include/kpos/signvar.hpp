#pragma once

// Sign-variation functionals on real vectors and the orthant decomposition
// of the invariant cones they induce.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace kpos {

/// Threshold below which a floating-point entry is treated as exactly zero
/// for all sign decisions.
struct Tolerance {
  double zero_eps = 1e-9;
};

/// Minimal/maximal sign-change counts of a vector, plus membership in the
/// set V where the two coincide.
struct SignStats {
  int s_minus = 0;
  int s_plus = 0;
  bool in_V = false;
};

/// Identifies one orthant C^k_-(v) (sign=+1) or -C^k_-(v) (sign=-1).
/// Breakpoints are 1-based, strictly increasing, with back() == n.
struct ConeLabel {
  int order = 0;
  std::vector<int> breakpoints;
  int sign = +1;

  friend bool operator==(const ConeLabel& a, const ConeLabel& b) {
    return a.order == b.order && a.sign == b.sign &&
           a.breakpoints == b.breakpoints;
  }
};

namespace detail {

// Snapped sign pattern: -1, 0, +1 per entry.
template <typename Derived>
std::vector<int> sign_pattern(const Eigen::MatrixBase<Derived>& x,
                              const Tolerance& tol) {
  std::vector<int> s(static_cast<size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double v = x[i];
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite entry");
    s[static_cast<size_t>(i)] = (std::abs(v) <= tol.zero_eps) ? 0 : (v > 0 ? 1 : -1);
  }
  return s;
}

inline int sigma_of_signs(const std::vector<int>& s) {
  int count = 0;
  for (size_t i = 0; i + 1 < s.size(); ++i)
    if (s[i] * s[i + 1] < 0) ++count;
  return count;
}

}  // namespace detail

/// Number of adjacent sign changes of a totally nonzero vector.
template <typename Derived>
int sigma(const Eigen::MatrixBase<Derived>& x, const Tolerance& tol = {}) {
  const auto s = detail::sign_pattern(x, tol);
  for (int v : s)
    if (v == 0)
      throw std::invalid_argument("sigma: vector has a zero entry");
  return detail::sigma_of_signs(s);
}

/// Minimal sign-change count: sigma of the vector with zeros deleted;
/// zero for the zero vector.
template <typename Derived>
int s_minus(const Eigen::MatrixBase<Derived>& x, const Tolerance& tol = {}) {
  const auto s = detail::sign_pattern(x, tol);
  int count = 0, last = 0;
  for (int v : s) {
    if (v == 0) continue;
    if (last != 0 && v != last) ++count;
    last = v;
  }
  return count;
}

/// Maximal sign-change count: maximum of sigma over all +-1 substitutions
/// of the zero entries, computed by a single forward scan.
template <typename Derived>
int s_plus(const Eigen::MatrixBase<Derived>& x, const Tolerance& tol = {}) {
  const auto s = detail::sign_pattern(x, tol);
  if (s.empty()) return 0;
  // best[j]: max alternation count over prefixes ending with sign (+1, -1).
  constexpr int kNeg = -(1 << 20);
  int best_pos = s[0] >= 0 ? 0 : kNeg;
  int best_neg = s[0] <= 0 ? 0 : kNeg;
  for (size_t i = 1; i < s.size(); ++i) {
    int next_pos = kNeg, next_neg = kNeg;
    if (s[i] >= 0) next_pos = std::max(best_pos, best_neg + 1);
    if (s[i] <= 0) next_neg = std::max(best_neg, best_pos + 1);
    best_pos = next_pos;
    best_neg = next_neg;
  }
  return std::max(best_pos, best_neg);
}

/// Applies the alternating-sign involution D = diag(1,-1,...,(-1)^{n-1}).
template <typename Derived>
Eigen::VectorXd alternate(const Eigen::MatrixBase<Derived>& x) {
  Eigen::VectorXd y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    y[i] = (i % 2 == 0) ? double(x[i]) : -double(x[i]);
  return y;
}

/// True iff s_minus(x) == s_plus(x) and x != 0.
template <typename Derived>
bool in_V(const Eigen::MatrixBase<Derived>& x, const Tolerance& tol = {}) {
  const auto s = detail::sign_pattern(x, tol);
  bool nonzero = false;
  for (int v : s) nonzero = nonzero || (v != 0);
  if (!nonzero) return false;
  return s_minus(x, tol) == s_plus(x, tol);
}

/// Structural characterization of V: endpoints nonzero and every interior
/// zero flanked by entries of strictly opposite sign.
template <typename Derived>
bool in_V_structural(const Eigen::MatrixBase<Derived>& x,
                     const Tolerance& tol = {}) {
  const auto s = detail::sign_pattern(x, tol);
  const size_t n = s.size();
  if (n == 0 || s.front() == 0 || s.back() == 0) return false;
  for (size_t i = 1; i + 1 < n; ++i)
    if (s[i] == 0 && s[i - 1] * s[i + 1] >= 0) return false;
  return true;
}

/// Full sign statistics of a vector.
template <typename Derived>
SignStats sign_stats(const Eigen::MatrixBase<Derived>& x,
                     const Tolerance& tol = {}) {
  SignStats st;
  st.s_minus = s_minus(x, tol);
  st.s_plus = s_plus(x, tol);
  st.in_V = in_V(x, tol);
  return st;
}

enum class PkVariant { minus, plus };

/// Membership in P^k_- (s_minus <= k-1) or P^k_+ (s_plus <= k-1).
template <typename Derived>
bool in_Pk(const Eigen::MatrixBase<Derived>& x, int k, PkVariant variant,
           const Tolerance& tol = {}) {
  const int n = static_cast<int>(x.size());
  if (k < 1 || k > n) throw std::invalid_argument("in_Pk: k out of range");
  const int count = (variant == PkVariant::minus) ? s_minus(x, tol) : s_plus(x, tol);
  return count <= k - 1;
}

/// The unique orthant +-C^k_-(v) containing a nonzero x, with maximal
/// breakpoints (each block extended through trailing zeros, leading zeros
/// assigned to the first block). Returns nullopt for the zero vector.
template <typename Derived>
std::optional<ConeLabel> classify_cone(const Eigen::MatrixBase<Derived>& x,
                                       const Tolerance& tol = {}) {
  const auto s = detail::sign_pattern(x, tol);
  const int n = static_cast<int>(s.size());
  int first = -1;
  for (int i = 0; i < n; ++i)
    if (s[i] != 0) { first = i; break; }
  if (first < 0) return std::nullopt;

  ConeLabel label;
  label.sign = s[static_cast<size_t>(first)];
  int last_sign = label.sign;
  for (int i = first + 1; i < n; ++i) {
    if (s[static_cast<size_t>(i)] != 0 && s[static_cast<size_t>(i)] != last_sign) {
      label.breakpoints.push_back(i);  // 1-based index of previous entry
      last_sign = s[static_cast<size_t>(i)];
    }
  }
  label.breakpoints.push_back(n);
  label.order = static_cast<int>(label.breakpoints.size());
  return label;
}

/// All breakpoint vectors 1 <= v_1 < ... < v_k = n, in lexicographic order.
/// There are exactly C(n-1, k-1) of them.
inline std::vector<std::vector<int>> enumerate_cones(int n, int k) {
  if (k < 1 || k > n) throw std::invalid_argument("enumerate_cones: k out of range");
  std::vector<std::vector<int>> out;
  std::vector<int> v(static_cast<size_t>(k));
  for (int i = 0; i < k - 1; ++i) v[static_cast<size_t>(i)] = i + 1;
  v[static_cast<size_t>(k - 1)] = n;
  while (true) {
    out.push_back(v);
    // advance the k-1 free positions over [1, n-1]
    int i = k - 2;
    while (i >= 0 && v[static_cast<size_t>(i)] == n - 1 - (k - 2 - i)) --i;
    if (i < 0) break;
    ++v[static_cast<size_t>(i)];
    for (int j = i + 1; j < k - 1; ++j)
      v[static_cast<size_t>(j)] = v[static_cast<size_t>(j - 1)] + 1;
  }
  return out;
}

}  // namespace kpos
