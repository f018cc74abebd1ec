#pragma once

// Static certification: Metzler tests, the sign-pattern classes M^k_n,
// sign-regularity, total nonnegativity/positivity, oscillatory matrices
// and their spectral structure, irreducibility, and per-k positivity
// verdicts for a system matrix.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "kpos/compound.hpp"
#include "kpos/signvar.hpp"

namespace kpos {

/// 1-based entry position plus its value, reported when a test fails.
struct Witness {
  int row = 0;
  int col = 0;
  double value = 0.0;
  int sample = 0;  // index of the offending sample for sampled systems
};

/// Boolean verdict carrying the offending entry on failure.
struct Checked {
  bool ok = true;
  std::optional<Witness> witness;
  explicit operator bool() const { return ok; }
};

/// Input was claimed oscillatory but the computed spectrum contradicts it.
class StructuralViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// True iff every off-diagonal entry >= -zero_eps; on failure reports the
/// most negative off-diagonal entry.
inline Checked is_metzler(const Eigen::MatrixXd& A, const Tolerance& tol = {}) {
  if (A.rows() != A.cols()) throw std::invalid_argument("is_metzler: matrix not square");
  Checked res;
  double worst = -tol.zero_eps;
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j) {
      if (i == j) continue;
      if (A(i, j) < worst) {
        worst = A(i, j);
        res.ok = false;
        res.witness = Witness{i + 1, j + 1, A(i, j), 0};
      }
    }
  return res;
}

/// Membership in the sign-pattern class M^k_n:
///   k = 1     -> Metzler;
///   k in [2,n-2] -> corners (-1)^{k-1} a_{1n}, (-1)^{k-1} a_{n1} >= 0,
///                   band |i-j|=1 nonnegative, other off-band entries zero;
///   k = n-1   -> a_{ij} >= 0 for odd |i-j|, a_{ij} <= 0 for even |i-j|;
///   k = n     -> always true (A^[n] is a scalar).
inline Checked in_class_M(const Eigen::MatrixXd& A, int k, const Tolerance& tol = {}) {
  if (A.rows() != A.cols()) throw std::invalid_argument("in_class_M: matrix not square");
  const int n = static_cast<int>(A.rows());
  if (k < 1 || k > n) throw std::invalid_argument("in_class_M: k out of range");
  if (k == 1) return is_metzler(A, tol);
  if (k == n) return Checked{};
  if (n <= 2) throw std::invalid_argument("in_class_M: n must exceed 2 for k in [2,n-1]");

  const double eps = tol.zero_eps;
  auto fail = [&](int i, int j) {
    return Checked{false, Witness{i + 1, j + 1, A(i, j), 0}};
  };

  if (k == n - 1) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const int d = std::abs(i - j);
        if (d % 2 == 1 && A(i, j) < -eps) return fail(i, j);
        if (d % 2 == 0 && A(i, j) > eps) return fail(i, j);
      }
    return Checked{};
  }

  const double corner_sign = (k % 2 == 1) ? 1.0 : -1.0;  // (-1)^{k-1}
  if (corner_sign * A(0, n - 1) < -eps) return fail(0, n - 1);
  if (corner_sign * A(n - 1, 0) < -eps) return fail(n - 1, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int d = std::abs(i - j);
      if (d == 1 && A(i, j) < -eps) return fail(i, j);
      if (d > 1 && d < n - 1 && std::abs(A(i, j)) > eps) return fail(i, j);
    }
  return Checked{};
}

/// Self-test predicate: the class test and the Metzler test of A^[k] must
/// always agree.
inline bool metzler_equiv_check(const Eigen::MatrixXd& A, int k,
                                const Tolerance& tol = {}) {
  return is_metzler(add_compound(A, k), tol).ok == in_class_M(A, k, tol).ok;
}

namespace detail {

// Scale for the sign decision of a minor: product of row max-abs values of
// the submatrix; determinant magnitudes vary wildly with order.
inline double minor_scale(const Eigen::MatrixXd& A, const IndexSet& alpha,
                          const IndexSet& beta) {
  double scale = 1.0;
  for (int i : alpha) {
    double rowmax = 0.0;
    for (int j : beta) rowmax = std::max(rowmax, std::abs(A(i - 1, j - 1)));
    scale *= std::max(rowmax, 1e-300);
  }
  return scale;
}

}  // namespace detail

/// Sign-regularity of order k: all order-k minors nonnegative or all
/// nonpositive. Strict mode (SSR_k) requires all nonzero with common sign.
inline bool is_SR(const Eigen::MatrixXd& A, int k, bool strict,
                  const Tolerance& tol = {}) {
  const int nr = static_cast<int>(A.rows()), nc = static_cast<int>(A.cols());
  if (k < 1 || k > std::min(nr, nc)) throw std::invalid_argument("is_SR: k out of range");
  detail::check_guardrail(nr, k);
  detail::check_guardrail(nc, k);
  const auto rows = index_sets(nr, k);
  const auto cols = index_sets(nc, k);
  bool saw_pos = false, saw_neg = false;
  for (const auto& alpha : rows)
    for (const auto& beta : cols) {
      const double m = minor(A, alpha, beta);
      const double thresh = tol.zero_eps * detail::minor_scale(A, alpha, beta);
      if (m > thresh) saw_pos = true;
      else if (m < -thresh) saw_neg = true;
      else if (strict) return false;  // a zero minor
      if (saw_pos && saw_neg) return false;
    }
  return true;
}

/// Totally nonnegative: every minor of every order is nonnegative.
inline bool is_TN(const Eigen::MatrixXd& A, const Tolerance& tol = {}) {
  const int kmax = static_cast<int>(std::min(A.rows(), A.cols()));
  for (int k = 1; k <= kmax; ++k) {
    const auto rows = index_sets(static_cast<int>(A.rows()), k);
    const auto cols = index_sets(static_cast<int>(A.cols()), k);
    for (const auto& alpha : rows)
      for (const auto& beta : cols) {
        const double m = minor(A, alpha, beta);
        if (m < -tol.zero_eps * detail::minor_scale(A, alpha, beta)) return false;
      }
  }
  return true;
}

/// Totally positive: every minor of every order is strictly positive.
inline bool is_TP(const Eigen::MatrixXd& A, const Tolerance& tol = {}) {
  const int kmax = static_cast<int>(std::min(A.rows(), A.cols()));
  for (int k = 1; k <= kmax; ++k) {
    const auto rows = index_sets(static_cast<int>(A.rows()), k);
    const auto cols = index_sets(static_cast<int>(A.cols()), k);
    for (const auto& alpha : rows)
      for (const auto& beta : cols) {
        const double m = minor(A, alpha, beta);
        if (m <= tol.zero_eps * detail::minor_scale(A, alpha, beta)) return false;
      }
  }
  return true;
}

/// Oscillatory test: TN(A) together with TP(A^(n-1)). The exponent n-1 is
/// the classical Gantmacher-Krein bound, so no power search is needed.
inline bool is_oscillatory(const Eigen::MatrixXd& A, const Tolerance& tol = {}) {
  if (A.rows() != A.cols()) throw std::invalid_argument("is_oscillatory: matrix not square");
  const int n = static_cast<int>(A.rows());
  if (!is_TN(A, tol)) return false;
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n - 1; ++i) P = P * A;
  if (n == 1) P = A;
  return is_TP(P, tol);
}

/// Symmetric Gaussian-kernel matrix with entries exp(-(i-j)^2 y); totally
/// positive for every y > 0 and tending to the identity as y grows.
inline Eigen::MatrixXd gaussian_tp(int n, double y) {
  if (y <= 0) throw std::invalid_argument("gaussian_tp: y must be positive");
  Eigen::MatrixXd F(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      F(i, j) = std::exp(-static_cast<double>((i - j) * (i - j)) * y);
  return F;
}

/// Strong connectivity of the digraph with an edge j->k whenever
/// |a_{jk}| > zero_eps, j != k.
inline bool is_irreducible(const Eigen::MatrixXd& A, const Tolerance& tol = {}) {
  if (A.rows() != A.cols()) throw std::invalid_argument("is_irreducible: matrix not square");
  const int n = static_cast<int>(A.rows());
  if (n == 1) return std::abs(A(0, 0)) > tol.zero_eps;
  auto reaches_all = [&](bool transpose) {
    std::vector<bool> seen(static_cast<size_t>(n), false);
    std::vector<int> stack{0};
    seen[0] = true;
    int count = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n; ++v) {
        if (seen[static_cast<size_t>(v)] || v == u) continue;
        const double e = transpose ? A(v, u) : A(u, v);
        if (std::abs(e) > tol.zero_eps) {
          seen[static_cast<size_t>(v)] = true;
          ++count;
          stack.push_back(v);
        }
      }
    }
    return count == n;
  };
  return reaches_all(false) && reaches_all(true);
}

/// Eigen-decomposition of an oscillatory matrix: strictly positive distinct
/// real eigenvalues in descending order, with eigenvector sign variations
/// s^-(u^i) = s^+(u^i) = i-1.
struct EigenStructure {
  Eigen::VectorXd eigenvalues;   // descending
  Eigen::MatrixXd eigenvectors;  // columns u^1..u^n
  std::vector<SignStats> signvar_per_vector;
  bool combination_bounds_ok = true;  // sampled check of the span bounds
};

/// Sampled check: for random nonzero (c_i..c_j),
/// i-1 <= s^-(sum c_k u^k) <= s^+(sum c_k u^k) <= j-1.
inline bool check_combination_bounds(const EigenStructure& es, int samples,
                                     unsigned seed, const Tolerance& tol = {}) {
  const int n = static_cast<int>(es.eigenvectors.cols());
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> pick(1, n);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    int i = pick(rng), j = pick(rng);
    if (i > j) std::swap(i, j);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    bool nonzero = false;
    for (int k = i; k <= j; ++k) {
      const double c = coef(rng);
      if (std::abs(c) > 0.05) nonzero = true;
      x += c * es.eigenvectors.col(k - 1);
    }
    if (!nonzero) { --s; continue; }
    const int lo = s_minus(x, tol), hi = s_plus(x, tol);
    if (lo < i - 1 || hi > j - 1 || lo > hi) return false;
  }
  return true;
}

inline EigenStructure eigen_structure(const Eigen::MatrixXd& A,
                                      const Tolerance& tol = {},
                                      int combination_samples = 32,
                                      unsigned seed = 7u) {
  if (A.rows() != A.cols()) throw std::invalid_argument("eigen_structure: matrix not square");
  const int n = static_cast<int>(A.rows());
  Eigen::EigenSolver<Eigen::MatrixXd> solver(A);
  const double scale = std::max(A.cwiseAbs().maxCoeff(), 1.0);
  const double eps = 1e-8 * scale;
  for (int i = 0; i < n; ++i)
    if (std::abs(solver.eigenvalues()[i].imag()) > eps)
      throw StructuralViolation("eigen_structure: complex eigenvalue; input is not oscillatory");

  std::vector<int> order(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return solver.eigenvalues()[a].real() > solver.eigenvalues()[b].real();
  });

  EigenStructure es;
  es.eigenvalues.resize(n);
  es.eigenvectors.resize(n, n);
  for (int i = 0; i < n; ++i) {
    es.eigenvalues[i] = solver.eigenvalues()[order[static_cast<size_t>(i)]].real();
    es.eigenvectors.col(i) = solver.eigenvectors().col(order[static_cast<size_t>(i)]).real();
  }
  for (int i = 0; i + 1 < n; ++i)
    if (es.eigenvalues[i] - es.eigenvalues[i + 1] <= eps)
      throw StructuralViolation("eigen_structure: repeated eigenvalue; input is not oscillatory");

  es.signvar_per_vector.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    es.signvar_per_vector.push_back(sign_stats(es.eigenvectors.col(i), tol));
  if (combination_samples > 0)
    es.combination_bounds_ok = check_combination_bounds(es, combination_samples, seed, tol);
  return es;
}

enum class Verdict { k_positive, strongly_k_positive_candidate, not_k_positive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::k_positive: return "k_positive";
    case Verdict::strongly_k_positive_candidate: return "strongly_k_positive_candidate";
    default: return "not_k_positive";
  }
}

/// Per-k positivity verdicts for a (sampled) system matrix.
struct CertReport {
  int n = 0;
  std::map<int, Verdict> verdicts;
  std::map<int, Witness> witnesses;  // for negative verdicts
  bool corollary1_applies = false;   // 1-positive and 2-positive
  bool corollary4_applies = false;   // odd i and even j in [1,n-2]
  bool corollaries_consistent = true;
  std::string note;

  bool positive(int k) const {
    const auto v = verdicts.at(k);
    return v != Verdict::not_k_positive;
  }
};

/// Certifies per-k positivity of a system from matrix samples: k-positive
/// iff every sample lies in M^k_n; the strong verdict additionally requires
/// irreducibility of A^[k] at some sample and is only a candidate, since
/// sampling cannot establish the density condition.
inline CertReport certify_system(const std::vector<Eigen::MatrixXd>& samples,
                                 const Tolerance& tol = {}) {
  if (samples.empty()) throw std::invalid_argument("certify_system: no samples");
  const int n = static_cast<int>(samples.front().rows());
  for (const auto& S : samples)
    if (S.rows() != n || S.cols() != n)
      throw std::invalid_argument("certify_system: sample dimension mismatch");

  CertReport report;
  report.n = n;
  report.note =
      "strong verdicts are sampling-based candidates: pointwise irreducibility "
      "of A^[k] stands in for the density condition";

  for (int k = 1; k <= n; ++k) {
    bool positive = true;
    for (size_t s = 0; s < samples.size() && positive; ++s) {
      const Checked c = in_class_M(samples[s], k, tol);
      if (!c.ok) {
        positive = false;
        Witness w = *c.witness;
        w.sample = static_cast<int>(s);
        report.witnesses[k] = w;
      }
    }
    if (!positive) {
      report.verdicts[k] = Verdict::not_k_positive;
      continue;
    }
    bool strong = false;
    for (const auto& S : samples)
      if (is_irreducible(add_compound(S, k), tol)) { strong = true; break; }
    report.verdicts[k] = strong ? Verdict::strongly_k_positive_candidate
                                : Verdict::k_positive;
  }

  // cross-checks: the corollary propagation rules must agree with the
  // direct per-k verdicts
  report.corollary1_applies = n >= 2 && report.positive(1) && report.positive(2);
  bool odd_pos = false, even_pos = false;
  for (int k = 1; k <= n - 2; ++k) {
    if (report.positive(k)) (k % 2 == 1 ? odd_pos : even_pos) = true;
  }
  report.corollary4_applies = odd_pos && even_pos;
  if (report.corollary1_applies || report.corollary4_applies) {
    for (int k = 1; k <= n; ++k)
      if (!report.positive(k)) report.corollaries_consistent = false;
  }
  return report;
}

}  // namespace kpos
