#pragma once

// Lexicographic index-set combinatorics, minors, and the multiplicative
// and additive compound matrices.

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace kpos {

/// Strictly increasing 1-based indices.
using IndexSet = std::vector<int>;

namespace detail {

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

// Desk-scale analysis only; refuse combinatorial blow-ups.
inline void check_guardrail(int n, int k) {
  if (n > 20)
    throw std::invalid_argument("compound: n > 20 exceeds the size guardrail");
  if (binomial(n, k) > 20000)
    throw std::invalid_argument("compound: C(n,k) > 20000 exceeds the size guardrail");
}

inline void check_k_range(int n, int k, const char* who) {
  if (k < 1 || k > n) throw std::invalid_argument(std::string(who) + ": k out of range");
}

}  // namespace detail

/// All k-subsets of [1,n] in lexicographic order.
inline std::vector<IndexSet> index_sets(int n, int k) {
  detail::check_k_range(n, k, "index_sets");
  detail::check_guardrail(n, k);
  std::vector<IndexSet> out;
  IndexSet s(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) s[static_cast<size_t>(i)] = i + 1;
  while (true) {
    out.push_back(s);
    int i = k - 1;
    while (i >= 0 && s[static_cast<size_t>(i)] == n - (k - 1 - i)) --i;
    if (i < 0) break;
    ++s[static_cast<size_t>(i)];
    for (int j = i + 1; j < k; ++j) s[static_cast<size_t>(j)] = s[static_cast<size_t>(j - 1)] + 1;
  }
  return out;
}

/// Lexicographic rank of a k-subset of [1,n]; O(k) arithmetic.
inline std::uint64_t subset_rank(int n, const IndexSet& s) {
  const int k = static_cast<int>(s.size());
  detail::check_k_range(n, k, "subset_rank");
  std::uint64_t rank = 0;
  int prev = 0;
  for (int i = 0; i < k; ++i) {
    const int si = s[static_cast<size_t>(i)];
    if (si <= prev || si > n) throw std::invalid_argument("subset_rank: not a valid index set");
    for (int c = prev + 1; c < si; ++c)
      rank += detail::binomial(n - c, k - 1 - i);
    prev = si;
  }
  return rank;
}

/// Inverse of subset_rank.
inline IndexSet subset_unrank(int n, int k, std::uint64_t rank) {
  detail::check_k_range(n, k, "subset_unrank");
  IndexSet s(static_cast<size_t>(k));
  int c = 1;
  for (int i = 0; i < k; ++i) {
    while (true) {
      const std::uint64_t block = detail::binomial(n - c, k - 1 - i);
      if (rank < block) break;
      rank -= block;
      ++c;
    }
    s[static_cast<size_t>(i)] = c++;
  }
  return s;
}

/// The minor A(alpha|beta): determinant of the submatrix selected by the
/// 1-based row set alpha and column set beta.
inline double minor(const Eigen::MatrixXd& A, const IndexSet& alpha,
                    const IndexSet& beta) {
  const int k = static_cast<int>(alpha.size());
  if (static_cast<int>(beta.size()) != k)
    throw std::invalid_argument("minor: alpha/beta size mismatch");
  for (int i : alpha)
    if (i < 1 || i > A.rows()) throw std::invalid_argument("minor: row index out of bounds");
  for (int j : beta)
    if (j < 1 || j > A.cols()) throw std::invalid_argument("minor: column index out of bounds");

  auto a = [&](int i, int j) {
    return A(alpha[static_cast<size_t>(i)] - 1, beta[static_cast<size_t>(j)] - 1);
  };
  switch (k) {
    case 0: return 1.0;
    case 1: return a(0, 0);
    case 2: return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    case 3:
      return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
             a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
             a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    default: {
      Eigen::MatrixXd sub(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) sub(i, j) = a(i, j);
      return sub.partialPivLu().determinant();
    }
  }
}

/// k'th multiplicative compound: the C(n,k) x C(n,k) matrix of all order-k
/// minors in lexicographic order.
inline Eigen::MatrixXd mult_compound(const Eigen::MatrixXd& A, int k) {
  if (A.rows() != A.cols()) throw std::invalid_argument("mult_compound: matrix not square");
  const int n = static_cast<int>(A.rows());
  detail::check_k_range(n, k, "mult_compound");
  detail::check_guardrail(n, k);
  const auto sets = index_sets(n, k);
  const int m = static_cast<int>(sets.size());
  Eigen::MatrixXd C(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      C(i, j) = minor(A, sets[static_cast<size_t>(i)], sets[static_cast<size_t>(j)]);
  return C;
}

/// k'th additive compound via the explicit entry formula: diagonal entries
/// are k-sums of diagonal entries of A; off-diagonal entries are +-a_{ij}
/// when the index sets differ in exactly one position, else zero.
inline Eigen::MatrixXd add_compound(const Eigen::MatrixXd& A, int k) {
  if (A.rows() != A.cols()) throw std::invalid_argument("add_compound: matrix not square");
  const int n = static_cast<int>(A.rows());
  detail::check_k_range(n, k, "add_compound");
  detail::check_guardrail(n, k);
  const auto sets = index_sets(n, k);
  const int m = static_cast<int>(sets.size());
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(m, m);
  for (int r = 0; r < m; ++r) {
    const IndexSet& alpha = sets[static_cast<size_t>(r)];
    for (int c = 0; c < m; ++c) {
      const IndexSet& beta = sets[static_cast<size_t>(c)];
      if (r == c) {
        double d = 0;
        for (int idx : alpha) d += A(idx - 1, idx - 1);
        C(r, c) = d;
        continue;
      }
      // locate the symmetric difference; bail once it exceeds one per side
      int l = -1, mm = -1, ia = 0, ib = 0, extra = 0;
      const int kk = static_cast<int>(alpha.size());
      while (ia < kk && ib < kk) {
        if (alpha[static_cast<size_t>(ia)] == beta[static_cast<size_t>(ib)]) { ++ia; ++ib; }
        else if (alpha[static_cast<size_t>(ia)] < beta[static_cast<size_t>(ib)]) {
          if (l >= 0) { extra = 1; break; }
          l = ia++;
        } else {
          if (mm >= 0) { extra = 1; break; }
          mm = ib++;
        }
      }
      if (extra) continue;
      if (ia < kk) { if (l >= 0) continue; l = ia; }
      if (ib < kk) { if (mm >= 0) continue; mm = ib; }
      if (l < 0 || mm < 0) continue;
      const double sgn = ((l + mm) % 2 == 0) ? 1.0 : -1.0;
      C(r, c) = sgn * A(alpha[static_cast<size_t>(l)] - 1, beta[static_cast<size_t>(mm)] - 1);
    }
  }
  return C;
}

/// Finite-difference oracle for the additive compound:
/// ((I + eps*A)^(k) - I) / eps.
inline Eigen::MatrixXd add_compound_fd(const Eigen::MatrixXd& A, int k,
                                       double eps) {
  if (eps <= 0) throw std::invalid_argument("add_compound_fd: eps must be positive");
  const int n = static_cast<int>(A.rows());
  const Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n) + eps * A;
  Eigen::MatrixXd C = mult_compound(P, k);
  C.diagonal().array() -= 1.0;
  return C / eps;
}

/// Human-readable label of a compound row/column, e.g. "{1,3}".
inline std::string index_set_label(const IndexSet& s) {
  std::string out = "{";
  for (size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s[i]);
  }
  out += '}';
  return out;
}

}  // namespace kpos
