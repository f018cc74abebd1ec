#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kpos/signvar.hpp"
#include "oracles.hpp"

#include <random>

using namespace kpos;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> vals) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double v : vals) x[i++] = v;
  return x;
}

}  // namespace

TEST_CASE("sigma counts adjacent sign changes") {
  CHECK(sigma(vec({-4.2, 3, -0.5})) == 2);
  CHECK(sigma(vec({1, 1, 1})) == 0);
  CHECK(sigma(vec({1, -1, 1, -1})) == 3);
  CHECK_THROWS_AS(sigma(vec({1, 0, -1})), std::invalid_argument);
  CHECK_THROWS_AS(sigma(vec({1, 1e-12, -1})), std::invalid_argument);  // snapped zero
}

TEST_CASE("s_minus deletes zeros") {
  CHECK(s_minus(vec({-1, 1, 0, 0, -3.5})) == 2);
  CHECK(s_minus(vec({0, 0, 0})) == 0);
  CHECK(s_minus(vec({1, 0, -1})) == 1);
}

TEST_CASE("s_plus maximizes over zero substitutions") {
  CHECK(s_plus(vec({-1, 1, 0, 0, -3.5})) == 4);
  CHECK(s_plus(Eigen::VectorXd::Zero(5)) == 4);
  CHECK(s_plus(Eigen::VectorXd::Zero(1)) == 0);
  CHECK(s_plus(vec({1, 0, -1})) == 1);
}

TEST_CASE("fast s_minus / s_plus match brute-force oracles exhaustively") {
  for (int n = 1; n <= 8; ++n) {
    for (const auto& x : oracles::all_sign_vectors(n)) {
      CAPTURE(x.transpose());
      CHECK(s_minus(x) == oracles::s_minus_brute(x));
      CHECK(s_plus(x) == oracles::s_plus_brute(x));
    }
  }
}

TEST_CASE("bounds 0 <= s^- <= s^+ <= n-1 on random vectors") {
  std::mt19937 rng(12345);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 9);
    const Eigen::VectorXd x = oracles::random_vector(rng, n, 0.3);
    const int lo = s_minus(x), hi = s_plus(x);
    CHECK(lo >= 0);
    CHECK(lo <= hi);
    CHECK(hi <= n - 1);
  }
}

TEST_CASE("alternate applies D and is an involution") {
  const Eigen::VectorXd y = vec({-1, 1, 0, 0, -3.5});
  CHECK(alternate(y) == vec({-1, -1, 0, 0, -3.5}));
  CHECK(alternate(Eigen::VectorXd::Zero(4)) == Eigen::VectorXd::Zero(4));
  CHECK(alternate(vec({1, 1})) == vec({1, -1}));
  std::mt19937 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd x = oracles::random_vector(rng, 1 + int(rng() % 8), 0.2);
    CHECK(alternate(alternate(x)) == x);
  }
}

TEST_CASE("duality s^-(x) + s^+(Dx) = n-1") {
  for (int n = 1; n <= 6; ++n)
    for (const auto& x : oracles::all_sign_vectors(n))
      CHECK(s_minus(x) + s_plus(alternate(x)) == n - 1);
  std::mt19937 rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 9);
    const Eigen::VectorXd x = oracles::random_vector(rng, n, 0.25);
    CHECK(s_minus(x) + s_plus(alternate(x)) == n - 1);
  }
}

TEST_CASE("in_V agrees with the structural characterization") {
  CHECK(in_V(vec({1, 0.3, -1})));
  CHECK(in_V(vec({1, 0, -1})));
  CHECK_FALSE(in_V(vec({-1, 1, 0, 0, -3.5})));
  CHECK_FALSE(in_V(Eigen::VectorXd::Zero(3)));
  for (int n = 1; n <= 6; ++n)
    for (const auto& x : oracles::all_sign_vectors(n))
      CHECK(in_V(x) == in_V_structural(x));
}

TEST_CASE("in_Pk membership and nesting") {
  CHECK(in_Pk(vec({1, 1}), 1, PkVariant::plus));
  CHECK_FALSE(in_Pk(Eigen::VectorXd::Zero(2), 1, PkVariant::plus));
  CHECK(in_Pk(vec({0.34, -0.54, -1.06, 0.49}), 3, PkVariant::minus));
  CHECK_THROWS_AS(in_Pk(vec({1, 1}), 0, PkVariant::minus), std::invalid_argument);
  CHECK_THROWS_AS(in_Pk(vec({1, 1}), 3, PkVariant::minus), std::invalid_argument);

  std::mt19937 rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 6);
    const Eigen::VectorXd x = oracles::random_vector(rng, n, 0.3);
    // any x lies in P^n_-, and the sets are nested in k
    CHECK(in_Pk(x, n, PkVariant::minus));
    for (int k = 1; k < n; ++k) {
      if (in_Pk(x, k, PkVariant::minus)) CHECK(in_Pk(x, k + 1, PkVariant::minus));
      if (in_Pk(x, k, PkVariant::plus)) CHECK(in_Pk(x, k + 1, PkVariant::plus));
      if (in_Pk(x, k, PkVariant::plus)) CHECK(in_Pk(x, k, PkVariant::minus));
    }
  }
}

TEST_CASE("classify_cone reproduces the worked block decomposition") {
  const auto lab = classify_cone(vec({0, 1, 2, 0, -2, 0, 1, 2}));
  REQUIRE(lab.has_value());
  CHECK(lab->order == 3);
  CHECK(lab->breakpoints == std::vector<int>{4, 6, 8});
  CHECK(lab->sign == 1);

  const auto one = classify_cone(vec({1, 1, 1}));
  REQUIRE(one.has_value());
  CHECK(one->order == 1);
  CHECK(one->breakpoints == std::vector<int>{3});
  CHECK(one->sign == 1);

  const auto ex = classify_cone(vec({0.34, -0.54, -1.06, 0.49}));
  REQUIRE(ex.has_value());
  CHECK(ex->order == 3);
  CHECK(ex->breakpoints == std::vector<int>{1, 3, 4});
  CHECK(ex->sign == 1);

  CHECK_FALSE(classify_cone(Eigen::VectorXd::Zero(5)).has_value());
}

namespace {

// Defining inequalities of sign * C^k_-(v): block j carries sign
// sign*(-1)^{j-1}; its first entry is strictly signed for j >= 2, and each
// block holds at least one nonzero entry.
bool satisfies_cone(const Eigen::VectorXd& x, const ConeLabel& lab) {
  int block = 0;
  int block_sign = lab.sign;
  bool block_has_nonzero = false;
  for (int i = 1; i <= x.size(); ++i) {
    const double v = x[i - 1];
    const int s = std::abs(v) <= 1e-9 ? 0 : (v > 0 ? 1 : -1);
    const bool block_start = block > 0 && i == lab.breakpoints[size_t(block - 1)] + 1;
    if (block_start && s != block_sign) return false;  // entry after a breakpoint is strict
    if (s != 0) {
      if (s != block_sign) return false;
      block_has_nonzero = true;
    }
    if (i == lab.breakpoints[static_cast<size_t>(block)]) {
      if (!block_has_nonzero) return false;
      ++block;
      block_sign = -block_sign;
      block_has_nonzero = false;
    }
  }
  return block == lab.order;
}

}  // namespace

TEST_CASE("classify_cone round-trip: label satisfies the orthant inequalities") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const Eigen::VectorXd x = oracles::random_vector(rng, n, 0.35);
    const auto lab = classify_cone(x);
    if (!lab) {
      CHECK(x.cwiseAbs().maxCoeff() <= 1e-9);
      continue;
    }
    CAPTURE(x.transpose());
    CHECK(lab->order == s_minus(x) + 1);
    CHECK(lab->breakpoints.back() == n);
    CHECK(satisfies_cone(x, *lab));
  }
}

TEST_CASE("P^2_- is not convex: fixed midpoint witness") {
  const Eigen::VectorXd x = vec({1, -1, 0});
  const Eigen::VectorXd y = vec({0, -1, 1});
  CHECK(in_Pk(x, 2, PkVariant::minus));
  CHECK(in_Pk(y, 2, PkVariant::minus));
  CHECK_FALSE(in_Pk(0.5 * (x + y), 2, PkVariant::minus));
}

TEST_CASE("set duality: x in D*P^k_- iff s^+(x) >= n-k") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 6);
    const Eigen::VectorXd x = oracles::random_vector(rng, n, 0.3);
    for (int k = 1; k <= n; ++k) {
      const bool in_dpk = s_minus(alternate(x)) <= k - 1;  // Dx in P^k_- with D^-1=D
      CHECK(in_dpk == (s_plus(x) >= n - k));
    }
  }
}

TEST_CASE("enumerate_cones counts and shapes") {
  const auto v43 = enumerate_cones(4, 3);
  REQUIRE(v43.size() == 3);
  CHECK(std::find(v43.begin(), v43.end(), std::vector<int>{1, 3, 4}) != v43.end());
  CHECK(std::find(v43.begin(), v43.end(), std::vector<int>{2, 3, 4}) != v43.end());
  CHECK(std::find(v43.begin(), v43.end(), std::vector<int>{1, 2, 4}) != v43.end());

  CHECK(enumerate_cones(5, 1) == std::vector<std::vector<int>>{{5}});
  CHECK(enumerate_cones(4, 4) == std::vector<std::vector<int>>{{1, 2, 3, 4}});
  CHECK_THROWS_AS(enumerate_cones(4, 5), std::invalid_argument);

  // binomial count and validity for a range of (n,k)
  auto binom = [](int n, int k) {
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  };
  for (int n = 1; n <= 9; ++n)
    for (int k = 1; k <= n; ++k) {
      const auto vs = enumerate_cones(n, k);
      CHECK(static_cast<long>(vs.size()) == binom(n - 1, k - 1));
      for (const auto& v : vs) {
        CHECK(v.back() == n);
        CHECK(v.front() >= 1);
        for (size_t i = 1; i < v.size(); ++i) CHECK(v[i] > v[i - 1]);
      }
    }
}

TEST_CASE("tolerance snapping treats tiny entries as zero") {
  Tolerance loose{0.5};
  CHECK(s_minus(vec({1, -0.4, 1}), loose) == 0);
  CHECK(s_plus(vec({1, -0.4, 1}), loose) == 2);
  CHECK_THROWS_AS(sigma(vec({1, -0.4, 1}), loose), std::invalid_argument);
}
