#pragma once

// Independent brute-force oracles used to freeze expected values; these
// deliberately avoid the code paths they check.

#include <Eigen/Dense>

#include <random>
#include <vector>

namespace oracles {

// Adjacent sign changes of a totally nonzero sign pattern.
inline int sigma_signs(const std::vector<int>& s) {
  int c = 0;
  for (size_t i = 0; i + 1 < s.size(); ++i)
    if (s[i] * s[i + 1] < 0) ++c;
  return c;
}

inline std::vector<int> signs_of(const Eigen::VectorXd& x, double eps = 1e-9) {
  std::vector<int> s;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    s.push_back(std::abs(x[i]) <= eps ? 0 : (x[i] > 0 ? 1 : -1));
  return s;
}

// s^- by zero deletion.
inline int s_minus_brute(const Eigen::VectorXd& x, double eps = 1e-9) {
  std::vector<int> s;
  for (int v : signs_of(x, eps))
    if (v != 0) s.push_back(v);
  return sigma_signs(s);
}

// s^+ by exhaustive +-1 substitution of the zero entries.
inline int s_plus_brute(const Eigen::VectorXd& x, double eps = 1e-9) {
  std::vector<int> s = signs_of(x, eps);
  std::vector<size_t> zeros;
  for (size_t i = 0; i < s.size(); ++i)
    if (s[i] == 0) zeros.push_back(i);
  int best = 0;
  for (size_t mask = 0; mask < (size_t{1} << zeros.size()); ++mask) {
    std::vector<int> t = s;
    for (size_t b = 0; b < zeros.size(); ++b)
      t[zeros[b]] = (mask >> b) & 1 ? 1 : -1;
    best = std::max(best, sigma_signs(t));
  }
  return best;
}

inline Eigen::VectorXd random_vector(std::mt19937& rng, int n,
                                     double zero_prob = 0.0) {
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = u(rng) < zero_prob ? 0.0 : val(rng);
  return x;
}

inline Eigen::MatrixXd random_matrix(std::mt19937& rng, int n, double lo = -1.0,
                                     double hi = 1.0) {
  std::uniform_real_distribution<double> val(lo, hi);
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = val(rng);
  return A;
}

// Every vector over {-1,0,1}^n, enumerated by base-3 counting.
inline std::vector<Eigen::VectorXd> all_sign_vectors(int n) {
  std::vector<Eigen::VectorXd> out;
  size_t total = 1;
  for (int i = 0; i < n; ++i) total *= 3;
  for (size_t code = 0; code < total; ++code) {
    Eigen::VectorXd x(n);
    size_t c = code;
    for (int i = 0; i < n; ++i) {
      x[i] = static_cast<double>(static_cast<int>(c % 3) - 1);
      c /= 3;
    }
    out.push_back(x);
  }
  return out;
}

}  // namespace oracles
