#pragma once

// JSON/CSV input and output for matrices, vectors, trajectories, and
// reports.

#include <Eigen/Dense>

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "kpos/certify.hpp"
#include "kpos/dynamics.hpp"

namespace kpos::io {

/// Input could not be parsed; message carries line/column where known.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parsing from text. JSON: array of row arrays (matrix) or flat array
// (vector). CSV: comma-separated rows / single column.
Eigen::MatrixXd parse_matrix_json(const std::string& text);
Eigen::MatrixXd parse_matrix_csv(const std::string& text);
Eigen::VectorXd parse_vector_json(const std::string& text);
Eigen::VectorXd parse_vector_csv(const std::string& text);

// File loading; format chosen by extension (.json / .csv), with a content
// sniff fallback.
Eigen::MatrixXd read_matrix(const std::string& path);
Eigen::VectorXd read_vector(const std::string& path);
std::vector<Eigen::MatrixXd> read_matrix_samples(const std::string& path);

std::string format_matrix_json(const Eigen::MatrixXd& A);
std::string format_vector_json(const Eigen::VectorXd& x);

/// Compound matrix with index-set row/column labels, e.g. "{1,3}".
std::string format_labeled_compound(const Eigen::MatrixXd& C, int n, int k);

/// Compact cone token for CSV cells, e.g. "+1:3:4"; "zero" for the zero
/// vector.
std::string cone_token(const std::optional<ConeLabel>& label);

/// Human-readable cone description, e.g. "Q3: v=(4,6,8), sign=+".
std::string cone_pretty(const ConeLabel& label);

std::string cert_report_json(const CertReport& report);
std::string omega_verdict_json(const OmegaVerdict& verdict);

/// Trajectory CSV with columns t, x1..xn, s_minus, s_plus, cone.
std::string trajectory_csv(const Trajectory& traj, const Tolerance& tol = {});

/// Reads back a trajectory CSV (signvar columns are recomputed on demand
/// and ignored here).
Trajectory parse_trajectory_csv(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace kpos::io
