#pragma once

// Built-in systems with fixed parameter sets, so runs are reproducible
// from the command line.

#include <Eigen/Dense>

#include "kpos/dynamics.hpp"

namespace kpos::presets {

/// Stable 3D linear system whose matrix lies in M^2_3; every trajectory
/// converges to the origin.
inline Eigen::MatrixXd stable_linear_matrix() {
  Eigen::MatrixXd A(3, 3);
  A << -1.0, 0.0, -0.5,
        1.0, -1.0, 0.0,
        0.0, 1.0, -1.0;
  return A;
}

inline LinearSystem stable_linear() {
  return LinearSystem::constant(stable_linear_matrix());
}

/// Cyclic feedback system in R^3 with positive sub-diagonal coupling.
/// delta=+1: monotone positive feedback through x3 (Jacobian in M^1_3).
/// delta=-1: repressive Hill feedback (Jacobian in M^2_3), tuned past the
/// secant instability threshold so the unique equilibrium repels and a
/// periodic orbit appears.
inline NonlinearSystem cyclic_feedback(int delta) {
  if (delta != 1 && delta != -1)
    throw std::invalid_argument("cyclic_feedback: delta must be +1 or -1");
  NonlinearSystem sys;
  sys.dim = 3;
  sys.box_lo = Eigen::VectorXd::Zero(3);
  sys.box_hi = Eigen::VectorXd::Constant(3, 2.5);
  const double a = 2.0, b = 1.0;
  if (delta == -1) {
    const double p = 20.0;
    sys.vector_field = [=](double, const Eigen::VectorXd& x) -> Eigen::VectorXd {
      Eigen::VectorXd dx(3);
      const double u = std::pow(std::max(x[2], 0.0), p);
      dx[0] = a / (1.0 + u) - b * x[0];
      dx[1] = x[0] - b * x[1];
      dx[2] = x[1] - b * x[2];
      return dx;
    };
    sys.jacobian = [=](double, const Eigen::VectorXd& x) -> Eigen::MatrixXd {
      Eigen::MatrixXd J = Eigen::MatrixXd::Zero(3, 3);
      const double z = std::max(x[2], 0.0);
      const double u = std::pow(z, p);
      const double denom = (1.0 + u) * (1.0 + u);
      J(0, 0) = -b;
      J(0, 2) = -a * p * std::pow(z, p - 1.0) / denom;
      J(1, 0) = 1.0;
      J(1, 1) = -b;
      J(2, 1) = 1.0;
      J(2, 2) = -b;
      return J;
    };
  } else {
    sys.vector_field = [=](double, const Eigen::VectorXd& x) -> Eigen::VectorXd {
      Eigen::VectorXd dx(3);
      dx[0] = a * (0.5 + 0.5 * std::tanh(x[2])) - b * x[0];
      dx[1] = x[0] - b * x[1];
      dx[2] = x[1] - b * x[2];
      return dx;
    };
    sys.jacobian = [=](double, const Eigen::VectorXd& x) -> Eigen::MatrixXd {
      Eigen::MatrixXd J = Eigen::MatrixXd::Zero(3, 3);
      const double c = std::cosh(x[2]);
      J(0, 0) = -b;
      J(0, 2) = 0.5 * a / (c * c);
      J(1, 0) = 1.0;
      J(1, 1) = -b;
      J(2, 1) = 1.0;
      J(2, 2) = -b;
      return J;
    };
  }
  return sys;
}

/// Default initial state for the cyclic-feedback presets (off-equilibrium).
inline Eigen::VectorXd cyclic_feedback_x0() {
  Eigen::VectorXd x0(3);
  x0 << 1.2, 0.8, 1.0;
  return x0;
}

/// System with scalar nonlinearities: x' = C * (tanh(x_1),...,tanh(x_n))'.
inline NonlinearSystem scalar_nonlinear(const Eigen::MatrixXd& C) {
  if (C.rows() != C.cols()) throw std::invalid_argument("scalar_nonlinear: matrix not square");
  NonlinearSystem sys;
  sys.dim = static_cast<int>(C.rows());
  sys.vector_field = [C](double, const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return C * x.array().tanh().matrix();
  };
  sys.jacobian = [C](double, const Eigen::VectorXd& x) -> Eigen::MatrixXd {
    Eigen::VectorXd d(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double c = std::cosh(x[i]);
      d[i] = 1.0 / (c * c);
    }
    return C * d.asDiagonal();
  };
  return sys;
}

/// Tridiagonal matrix with positive off-diagonals, shifted to be Hurwitz;
/// the associated flow is strongly k-positive for every k.
inline Eigen::MatrixXd tridiagonal_metzler(int n, double shift = 3.0) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    A(i, i + 1) = 1.0 + 0.25 * i;
    A(i + 1, i) = 0.75 + 0.5 * i;
  }
  A.diagonal().array() -= shift;
  return A;
}

}  // namespace kpos::presets
