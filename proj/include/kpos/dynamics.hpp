#pragma once

// ODE integration of linear, compound, variational, and nonlinear systems;
// sign-variation traces along trajectories; invariance and monotonicity
// verification; omega-limit classification.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kpos/certify.hpp"
#include "kpos/compound.hpp"
#include "kpos/signvar.hpp"

namespace kpos {

/// A state went non-finite during integration; carries the last finite time.
class BlowupError : public std::runtime_error {
 public:
  explicit BlowupError(double t)
      : std::runtime_error("integration blow-up at t=" + std::to_string(t)),
        last_finite_time(t) {}
  double last_finite_time;
};

/// Linear time-varying system x' = A(t) x on (t_begin, t_end).
struct LinearSystem {
  int dim = 0;
  double t_begin = -std::numeric_limits<double>::infinity();
  double t_end = std::numeric_limits<double>::infinity();
  std::function<Eigen::MatrixXd(double)> matrix_at;

  static LinearSystem constant(const Eigen::MatrixXd& A) {
    if (A.rows() != A.cols()) throw std::invalid_argument("LinearSystem: matrix not square");
    LinearSystem sys;
    sys.dim = static_cast<int>(A.rows());
    sys.matrix_at = [A](double) { return A; };
    return sys;
  }

  // Piecewise-constant table: A(t) = mats[i] for t in [times[i], times[i+1]).
  static LinearSystem piecewise(std::vector<double> times,
                                std::vector<Eigen::MatrixXd> mats) {
    if (times.size() != mats.size() || mats.empty())
      throw std::invalid_argument("LinearSystem: table size mismatch");
    LinearSystem sys;
    sys.dim = static_cast<int>(mats.front().rows());
    for (const auto& M : mats)
      if (M.rows() != sys.dim || M.cols() != sys.dim)
        throw std::invalid_argument("LinearSystem: sample dimension mismatch");
    sys.matrix_at = [times = std::move(times), mats = std::move(mats)](double t) {
      size_t i = 0;
      while (i + 1 < times.size() && t >= times[i + 1]) ++i;
      return mats[i];
    };
    return sys;
  }
};

/// Nonlinear system x' = f(t,x) with Jacobian, on a convex box Omega.
struct NonlinearSystem {
  int dim = 0;
  std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)> vector_field;
  std::function<Eigen::MatrixXd(double, const Eigen::VectorXd&)> jacobian;
  Eigen::VectorXd box_lo, box_hi;  // state-space bounds

  bool in_box(const Eigen::VectorXd& x) const {
    if (box_lo.size() != x.size()) return true;  // unbounded
    return (x.array() >= box_lo.array()).all() && (x.array() <= box_hi.array()).all();
  }

  static NonlinearSystem from_linear(const Eigen::MatrixXd& A) {
    NonlinearSystem sys;
    sys.dim = static_cast<int>(A.rows());
    sys.vector_field = [A](double, const Eigen::VectorXd& x) -> Eigen::VectorXd { return A * x; };
    sys.jacobian = [A](double, const Eigen::VectorXd&) { return A; };
    return sys;
  }
};

/// Time-stamped sequence of states.
struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  std::string integrator = "rk4";
  double step = 0.0;

  size_t size() const { return times.size(); }
};

namespace detail {

// One classical RK4 step for a generic state (vector or matrix).
template <typename State, typename Rhs>
State rk4_step(const Rhs& rhs, double t, const State& y, double h) {
  const State k1 = rhs(t, y);
  const State k2 = rhs(t + 0.5 * h, y + (0.5 * h) * k1);
  const State k3 = rhs(t + 0.5 * h, y + (0.5 * h) * k2);
  const State k4 = rhs(t + h, y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

inline void check_step(double step) {
  if (!(step > 0)) throw std::invalid_argument("integration step must be positive");
}

}  // namespace detail

/// Transition matrix Phi(t1,t0): RK4 solution of Phi' = A(t) Phi, Phi(t0)=I.
inline Eigen::MatrixXd transition_matrix(const LinearSystem& sys, double t0,
                                         double t1, double step) {
  detail::check_step(step);
  if (!(t0 < t1)) throw std::invalid_argument("transition_matrix: need t0 < t1");
  auto rhs = [&](double t, const Eigen::MatrixXd& Y) -> Eigen::MatrixXd {
    return sys.matrix_at(t) * Y;
  };
  Eigen::MatrixXd Phi = Eigen::MatrixXd::Identity(sys.dim, sys.dim);
  double t = t0;
  while (t < t1 - 1e-12) {
    const double h = std::min(step, t1 - t);
    Phi = detail::rk4_step(rhs, t, Phi, h);
    t += h;
    if (!Phi.allFinite()) throw BlowupError(t - h);
  }
  return Phi;
}

/// Integrates the induced flow on order-k minors, Y' = A^[k](t) Y with
/// Y(t0) = I; agrees with mult_compound(transition_matrix(...), k).
inline Eigen::MatrixXd compound_flow(const LinearSystem& sys, int k, double t0,
                                     double t1, double step) {
  detail::check_step(step);
  if (!(t0 < t1)) throw std::invalid_argument("compound_flow: need t0 < t1");
  if (k < 1 || k > sys.dim) throw std::invalid_argument("compound_flow: k out of range");
  const int m = static_cast<int>(detail::binomial(sys.dim, k));
  auto rhs = [&](double t, const Eigen::MatrixXd& Y) -> Eigen::MatrixXd {
    return add_compound(sys.matrix_at(t), k) * Y;
  };
  Eigen::MatrixXd Y = Eigen::MatrixXd::Identity(m, m);
  double t = t0;
  while (t < t1 - 1e-12) {
    const double h = std::min(step, t1 - t);
    Y = detail::rk4_step(rhs, t, Y, h);
    t += h;
    if (!Y.allFinite()) throw BlowupError(t - h);
  }
  return Y;
}

namespace detail {

template <typename Rhs>
Trajectory integrate(const Rhs& rhs, const Eigen::VectorXd& x0, double t0,
                     double t1, double step) {
  check_step(step);
  if (!(t0 < t1)) throw std::invalid_argument("simulate: need t0 < t1");
  Trajectory traj;
  traj.step = step;
  traj.times.push_back(t0);
  traj.states.push_back(x0);
  double t = t0;
  Eigen::VectorXd x = x0;
  while (t < t1 - 1e-12) {
    const double h = std::min(step, t1 - t);
    x = rk4_step(rhs, t, x, h);
    t += h;
    if (!x.allFinite()) throw BlowupError(t - h);
    traj.times.push_back(t);
    traj.states.push_back(x);
  }
  return traj;
}

}  // namespace detail

inline Trajectory simulate(const LinearSystem& sys, const Eigen::VectorXd& x0,
                           double t0, double t1, double step) {
  if (x0.size() != sys.dim) throw std::invalid_argument("simulate: x0 dimension mismatch");
  auto rhs = [&](double t, const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return sys.matrix_at(t) * x;
  };
  return detail::integrate(rhs, x0, t0, t1, step);
}

inline Trajectory simulate(const NonlinearSystem& sys, const Eigen::VectorXd& x0,
                           double t0, double t1, double step) {
  if (x0.size() != sys.dim) throw std::invalid_argument("simulate: x0 dimension mismatch");
  if (!sys.in_box(x0)) throw std::invalid_argument("simulate: x0 outside the state-space box");
  auto rhs = [&](double t, const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return sys.vector_field(t, x);
  };
  return detail::integrate(rhs, x0, t0, t1, step);
}

/// Per-sample sign statistics and cone classification.
struct TraceSample {
  double t = 0.0;
  SignStats stats;
  std::optional<ConeLabel> cone;  // nullopt for the zero vector
};

inline std::vector<TraceSample> signvar_trace(const Trajectory& traj,
                                              const Tolerance& tol = {}) {
  std::vector<TraceSample> out;
  out.reserve(traj.size());
  for (size_t i = 0; i < traj.size(); ++i) {
    TraceSample s;
    s.t = traj.times[i];
    s.stats = sign_stats(traj.states[i], tol);
    s.cone = classify_cone(traj.states[i], tol);
    out.push_back(std::move(s));
  }
  return out;
}

/// Cone-visit sequence with consecutive equal labels merged; zero-vector
/// samples are dropped.
inline std::vector<ConeLabel> dedup_cone_sequence(
    const std::vector<TraceSample>& trace) {
  std::vector<ConeLabel> out;
  for (const auto& s : trace) {
    if (!s.cone) continue;
    if (out.empty() || !(out.back() == *s.cone)) out.push_back(*s.cone);
  }
  return out;
}

/// Result of checking the monotone sign-variation chain
/// s^-(x(t_0)) >= s^+(x(t_1)) >= s^-(x(t_1)) >= s^+(x(t_2)) >= ...
struct ChainReport {
  bool ok = true;
  int strict_drops = 0;
  bool terminal_in_V = false;
  // sample indices where the chain increased (violations)
  std::vector<size_t> violations;
};

inline ChainReport monotone_chain_check(const Trajectory& traj, int k,
                                        const Tolerance& tol = {}) {
  ChainReport rep;
  if (traj.size() == 0) return rep;
  int prev = s_minus(traj.states[0], tol);
  for (size_t i = 1; i < traj.size(); ++i) {
    const int hi = s_plus(traj.states[i], tol);
    const int lo = s_minus(traj.states[i], tol);
    if (hi > prev || lo > hi) {
      rep.ok = false;
      rep.violations.push_back(i);
    }
    if (hi < prev) ++rep.strict_drops;
    if (lo < hi) ++rep.strict_drops;
    prev = lo;
  }
  if (rep.strict_drops > k - 1) rep.ok = false;
  rep.terminal_in_V = in_V(traj.states.back(), tol);
  return rep;
}

namespace detail {

// Gauss-Legendre nodes/weights on [0,1] via the Golub-Welsch eigenproblem.
inline void gauss_legendre_01(int nodes, std::vector<double>& x,
                              std::vector<double>& w) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(nodes, nodes);
  for (int i = 1; i < nodes; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    J(i - 1, i) = J(i, i - 1) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  x.resize(static_cast<size_t>(nodes));
  w.resize(static_cast<size_t>(nodes));
  for (int i = 0; i < nodes; ++i) {
    x[static_cast<size_t>(i)] = 0.5 * (es.eigenvalues()[i] + 1.0);
    const double v = es.eigenvectors()(0, i);
    w[static_cast<size_t>(i)] = v * v;  // weights on [0,1] sum to 1
  }
}

}  // namespace detail

/// Variational matrix: Gauss-Legendre quadrature of the Jacobian along the
/// segment gamma(r) = r*xp + (1-r)*xq.
inline Eigen::MatrixXd variational_matrix(const NonlinearSystem& sys,
                                          const Eigen::VectorXd& xp,
                                          const Eigen::VectorXd& xq, double t,
                                          int nodes = 8) {
  if (nodes < 2) throw std::invalid_argument("variational_matrix: nodes must be >= 2");
  std::vector<double> r, w;
  detail::gauss_legendre_01(nodes, r, w);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(sys.dim, sys.dim);
  for (int i = 0; i < nodes; ++i) {
    const Eigen::VectorXd g = r[static_cast<size_t>(i)] * xp +
                              (1.0 - r[static_cast<size_t>(i)]) * xq;
    acc += w[static_cast<size_t>(i)] * sys.jacobian(t, g);
  }
  return acc;
}

/// Secant slope (f(p)-f(q))/(p-q), switching to the derivative at q when
/// |p-q| <= 1e-9 to avoid cancellation.
inline double secant_gain(const std::function<double(double)>& f,
                          const std::function<double(double)>& fprime,
                          double p, double q) {
  if (std::abs(p - q) <= 1e-9) return fprime(q);
  return (f(p) - f(q)) / (p - q);
}

/// Sampling grid for k-cooperativity certification.
struct GridSpec {
  std::vector<double> times;         // time samples
  int points_per_dim = 10;           // spatial samples per dimension
};

/// Checks J(t,z) in M^k_n on a grid covering the box Omega; evidence is
/// sampling-based, recorded as such in the report note.
inline CertReport certify_k_cooperative(const NonlinearSystem& sys,
                                        const GridSpec& grid,
                                        const Tolerance& tol = {}) {
  if (grid.times.empty() || grid.points_per_dim < 1)
    throw std::invalid_argument("certify_k_cooperative: empty grid");
  if (sys.box_lo.size() != sys.dim)
    throw std::invalid_argument("certify_k_cooperative: system has no state-space box");

  std::vector<Eigen::MatrixXd> jac_samples;
  const int ppd = grid.points_per_dim;
  std::vector<int> idx(static_cast<size_t>(sys.dim), 0);
  while (true) {
    Eigen::VectorXd z(sys.dim);
    for (int d = 0; d < sys.dim; ++d) {
      const double frac = (ppd == 1) ? 0.5 : double(idx[static_cast<size_t>(d)]) / (ppd - 1);
      z[d] = sys.box_lo[d] + frac * (sys.box_hi[d] - sys.box_lo[d]);
    }
    for (double t : grid.times) jac_samples.push_back(sys.jacobian(t, z));
    int d = 0;
    while (d < sys.dim && ++idx[static_cast<size_t>(d)] == ppd) idx[static_cast<size_t>(d++)] = 0;
    if (d == sys.dim) break;
  }
  CertReport rep = certify_system(jac_samples, tol);
  rep.note = "k-cooperativity evidence from " + std::to_string(jac_samples.size()) +
             " sampled Jacobians; " + rep.note;
  return rep;
}

/// Result of simulating pairs and checking s^-(x(t,p)-x(t,q)) <= k-1.
struct InvarianceReport {
  bool ok = true;
  int pairs_checked = 0;
  int pairs_skipped = 0;  // p-q outside P^k_- at t=0
  std::vector<std::pair<int, double>> violations;  // (pair index, time)
};

inline InvarianceReport invariance_check(
    const NonlinearSystem& sys, int k,
    const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& pairs,
    double horizon, double step, const Tolerance& tol = {}) {
  InvarianceReport rep;
  for (size_t idx = 0; idx < pairs.size(); ++idx) {
    const auto& [p, q] = pairs[idx];
    if (s_minus(p - q, tol) > k - 1) {
      ++rep.pairs_skipped;
      continue;
    }
    const Trajectory tp = simulate(sys, p, 0.0, horizon, step);
    const Trajectory tq = simulate(sys, q, 0.0, horizon, step);
    ++rep.pairs_checked;
    for (size_t i = 0; i < tp.size(); ++i) {
      if (s_minus(tp.states[i] - tq.states[i], tol) > k - 1) {
        rep.ok = false;
        rep.violations.emplace_back(static_cast<int>(idx), tp.times[i]);
        break;
      }
    }
  }
  return rep;
}

/// Omega-limit classification of a long trajectory.
struct OmegaVerdict {
  enum class Kind { Equilibrium, ClosedOrbit, Unknown };
  Kind kind = Kind::Unknown;
  std::optional<double> period;
  std::optional<Eigen::VectorXd> equilibrium;
  double recurrence_distance = std::numeric_limits<double>::infinity();
  double derivative_norm = std::numeric_limits<double>::infinity();
  bool p2_hypothesis_seen = false;  // some sampled x'(tau) lay in P^2_-
};

inline const char* to_string(OmegaVerdict::Kind k) {
  switch (k) {
    case OmegaVerdict::Kind::Equilibrium: return "Equilibrium";
    case OmegaVerdict::Kind::ClosedOrbit: return "ClosedOrbit";
    default: return "Unknown";
  }
}

struct OmegaOptions {
  double transient_fraction = 0.5;
  double eq_tol_scale = 1e-6;     // eq_tol = scale * (1 + |x|)
  double orbit_tol_scale = 1e-4;  // orbit_tol = scale * orbit diameter
};

namespace detail {

// Derivative samples: from the vector field if available, otherwise central
// differences on the trajectory.
inline std::vector<Eigen::VectorXd> derivative_samples(
    const Trajectory& traj, const NonlinearSystem* sys, size_t begin) {
  std::vector<Eigen::VectorXd> out;
  for (size_t i = begin; i < traj.size(); ++i) {
    if (sys && sys->vector_field) {
      out.push_back(sys->vector_field(traj.times[i], traj.states[i]));
    } else if (i > 0 && i + 1 < traj.size()) {
      const double dt = traj.times[i + 1] - traj.times[i - 1];
      out.push_back((traj.states[i + 1] - traj.states[i - 1]) / dt);
    }
  }
  return out;
}

}  // namespace detail

inline OmegaVerdict classify_omega_limit(const Trajectory& traj,
                                         const NonlinearSystem* sys = nullptr,
                                         const Tolerance& tol = {},
                                         const OmegaOptions& opt = {}) {
  OmegaVerdict verdict;
  const size_t n = traj.size();
  if (n < 10) return verdict;  // not enough data; Unknown is the safe fallback

  const size_t begin = static_cast<size_t>(opt.transient_fraction * double(n));
  const size_t m = n - begin;
  if (m < 8) return verdict;

  const auto derivs = detail::derivative_samples(traj, sys, begin);
  for (const auto& d : derivs)
    if (d.size() >= 2 && in_Pk(d, 2, PkVariant::minus, tol)) {
      verdict.p2_hypothesis_seen = true;
      break;
    }
  if (!derivs.empty()) verdict.derivative_norm = derivs.back().norm();

  // equilibrium: small terminal derivative and small displacement over the
  // last tenth of the retained tail
  const Eigen::VectorXd& x_end = traj.states.back();
  const double eq_tol = opt.eq_tol_scale * (1.0 + x_end.norm());
  double tail_disp = 0.0;
  const size_t win = std::max<size_t>(2, m / 10);
  for (size_t i = n - win; i < n; ++i)
    tail_disp = std::max(tail_disp, (traj.states[i] - x_end).norm());
  if (verdict.derivative_norm < eq_tol && tail_disp < eq_tol) {
    verdict.kind = OmegaVerdict::Kind::Equilibrium;
    verdict.equilibrium = x_end;
    return verdict;
  }

  // orbit diameter over the tail
  Eigen::VectorXd lo = traj.states[begin], hi = traj.states[begin];
  for (size_t i = begin; i < n; ++i) {
    lo = lo.cwiseMin(traj.states[i]);
    hi = hi.cwiseMax(traj.states[i]);
  }
  const double diameter = (hi - lo).norm();
  if (diameter <= 0) return verdict;
  const double orbit_tol = opt.orbit_tol_scale * diameter;

  // dominant period from the autocorrelation of the widest coordinate
  int coord = 0;
  (hi - lo).maxCoeff(&coord);
  std::vector<double> sig(m);
  double mean = 0.0;
  for (size_t i = 0; i < m; ++i) mean += traj.states[begin + i][coord];
  mean /= double(m);
  for (size_t i = 0; i < m; ++i) sig[i] = traj.states[begin + i][coord] - mean;
  double c0 = 0.0;
  for (size_t i = 0; i < m; ++i) c0 += sig[i] * sig[i];
  if (c0 <= 0) return verdict;

  size_t best_lag = 0;
  double prev = 1.0;
  bool dipped = false;
  for (size_t lag = 1; lag < m / 2; ++lag) {
    double c = 0.0;
    for (size_t i = 0; i + lag < m; ++i) c += sig[i] * sig[i + lag];
    c /= c0;
    if (c < 0.5) dipped = true;
    if (dipped && c > 0.5 && c > prev) best_lag = lag;
    if (dipped && best_lag && c < prev) break;  // passed the first peak
    prev = c;
  }
  if (best_lag == 0) return verdict;

  // refine by near-return around the autocorrelation lag; the raw sampled
  // distance is bounded below by step * speed, so slide along the local flow
  // direction and judge only the transversal residual
  auto refine = [&](size_t ref, size_t approx_lag) -> std::optional<double> {
    const size_t lo_l = approx_lag - std::min(approx_lag / 5 + 2, approx_lag - 1);
    const size_t hi_l = std::min(approx_lag + approx_lag / 5 + 2, m - ref - 2);
    if (lo_l > hi_l) return std::nullopt;
    double best_d = std::numeric_limits<double>::infinity();
    size_t best_j = 0;
    for (size_t l = lo_l; l <= hi_l; ++l) {
      const double d = (traj.states[begin + ref + l] - traj.states[begin + ref]).norm();
      if (d < best_d) { best_d = d; best_j = ref + l; }
    }
    if (best_j == 0 || begin + best_j + 1 >= n) return std::nullopt;
    const Eigen::VectorXd dx = traj.states[begin + best_j] - traj.states[begin + ref];
    const Eigen::VectorXd v =
        (traj.states[begin + best_j + 1] - traj.states[begin + best_j - 1]) /
        (traj.times[begin + best_j + 1] - traj.times[begin + best_j - 1]);
    const double v2 = v.squaredNorm();
    double shift = 0.0;
    if (v2 > 0) shift = -dx.dot(v) / v2;
    const double h = traj.times[begin + best_j] - traj.times[begin + best_j - 1];
    shift = std::clamp(shift, -h, h);  // first-order correction only
    const double residual = (dx + shift * v).norm();
    verdict.recurrence_distance = std::min(verdict.recurrence_distance, residual);
    if (residual > orbit_tol) return std::nullopt;
    return traj.times[begin + best_j] + shift - traj.times[begin + ref];
  };

  const auto p1 = refine(0, best_lag);
  if (!p1) return verdict;
  // consistency: a second, independent reference point must agree
  const size_t ref2 = best_lag / 2;
  if (ref2 + best_lag + 2 >= m) return verdict;
  const auto p2 = refine(ref2, best_lag);
  if (!p2) return verdict;
  if (std::abs(*p1 - *p2) > 0.05 * *p1) return verdict;

  verdict.kind = OmegaVerdict::Kind::ClosedOrbit;
  verdict.period = 0.5 * (*p1 + *p2);
  return verdict;
}

/// Least-squares coordinates of each state in the plane spanned by two
/// basis vectors.
inline std::vector<Eigen::Vector2d> project_to_plane(
    const Trajectory& traj, const Eigen::VectorXd& b1, const Eigen::VectorXd& b2) {
  if (b1.size() != b2.size()) throw std::invalid_argument("project_to_plane: basis size mismatch");
  Eigen::MatrixXd B(b1.size(), 2);
  B.col(0) = b1;
  B.col(1) = b2;
  const Eigen::Matrix2d G = B.transpose() * B;
  if (std::abs(G.determinant()) <= 1e-12 * G.norm() * G.norm())
    throw std::invalid_argument("project_to_plane: basis vectors are dependent");
  const Eigen::Matrix2d Ginv = G.inverse();
  std::vector<Eigen::Vector2d> out;
  out.reserve(traj.size());
  for (const auto& x : traj.states)
    out.push_back(Ginv * (B.transpose() * x));
  return out;
}

}  // namespace kpos
