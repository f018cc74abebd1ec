#include "kpos/io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace kpos::io {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("JSON parse error: ") + e.what());
  }
}

std::vector<std::vector<double>> rows_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j.front().is_array())
    throw ParseError("expected a JSON array of row arrays");
  std::vector<std::vector<double>> rows;
  const size_t width = j.front().size();
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != width)
      throw ParseError("ragged JSON matrix rows");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) throw ParseError("non-numeric matrix entry");
      r.push_back(v.get<double>());
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) throw ParseError("empty matrix");
  Eigen::MatrixXd A(rows.size(), rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j)
      A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return A;
}

std::vector<std::vector<double>> rows_from_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    int col = 0;
    while (std::getline(ls, cell, ',')) {
      ++col;
      try {
        size_t pos = 0;
        const double v = std::stod(cell, &pos);
        while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
        if (pos != cell.size()) throw std::invalid_argument("trailing");
        row.push_back(v);
      } catch (const std::exception&) {
        throw ParseError("CSV parse error at line " + std::to_string(lineno) +
                         ", column " + std::to_string(col));
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("ragged CSV rows at line " + std::to_string(lineno));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("empty CSV input");
  return rows;
}

bool looks_like_json(const std::string& text) {
  const size_t pos = text.find_first_not_of(" \t\r\n");
  return pos != std::string::npos && (text[pos] == '[' || text[pos] == '{');
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Eigen::MatrixXd parse_matrix_json(const std::string& text) {
  return matrix_from_rows(rows_from_json(parse_json(text)));
}

Eigen::MatrixXd parse_matrix_csv(const std::string& text) {
  return matrix_from_rows(rows_from_csv(text));
}

Eigen::VectorXd parse_vector_json(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_array() || j.empty()) throw ParseError("expected a nonempty JSON array");
  Eigen::VectorXd x(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError("non-numeric vector entry");
    x[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return x;
}

Eigen::VectorXd parse_vector_csv(const std::string& text) {
  const auto rows = rows_from_csv(text);
  if (rows.size() == 1) {  // a single row reads as a vector too
    Eigen::VectorXd x(rows.front().size());
    for (size_t i = 0; i < rows.front().size(); ++i)
      x[static_cast<Eigen::Index>(i)] = rows.front()[i];
    return x;
  }
  if (rows.front().size() != 1)
    throw ParseError("vector CSV must be a single row or a single column");
  Eigen::VectorXd x(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) x[static_cast<Eigen::Index>(i)] = rows[i][0];
  return x;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write file: " + path);
  out << content;
}

Eigen::MatrixXd read_matrix(const std::string& path) {
  const std::string text = read_file(path);
  return looks_like_json(text) ? parse_matrix_json(text) : parse_matrix_csv(text);
}

Eigen::VectorXd read_vector(const std::string& path) {
  const std::string text = read_file(path);
  return looks_like_json(text) ? parse_vector_json(text) : parse_vector_csv(text);
}

std::vector<Eigen::MatrixXd> read_matrix_samples(const std::string& path) {
  const json j = parse_json(read_file(path));
  if (!j.is_array() || j.empty()) throw ParseError("expected a JSON array of matrices");
  // a bare matrix [[...],[...]] reads as a one-sample list
  const bool single = j.front().is_array() && !j.front().empty() &&
                      j.front().front().is_number();
  std::vector<Eigen::MatrixXd> out;
  if (single) {
    out.push_back(matrix_from_rows(rows_from_json(j)));
  } else {
    for (const auto& m : j) out.push_back(matrix_from_rows(rows_from_json(m)));
  }
  return out;
}

std::string format_matrix_json(const Eigen::MatrixXd& A) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    out += (i ? ",\n [" : "[");
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      if (j) out += ", ";
      out += fmt(A(i, j));
    }
    out += "]";
  }
  out += "]";
  return out;
}

std::string format_vector_json(const Eigen::VectorXd& x) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) out += ", ";
    out += fmt(x[i]);
  }
  out += "]";
  return out;
}

std::string format_labeled_compound(const Eigen::MatrixXd& C, int n, int k) {
  const auto sets = index_sets(n, k);
  if (static_cast<Eigen::Index>(sets.size()) != C.rows())
    throw std::invalid_argument("format_labeled_compound: size mismatch");
  std::ostringstream out;
  out << " ";
  for (const auto& s : sets) out << "\t" << index_set_label(s);
  out << "\n";
  for (Eigen::Index i = 0; i < C.rows(); ++i) {
    out << index_set_label(sets[static_cast<size_t>(i)]);
    for (Eigen::Index j = 0; j < C.cols(); ++j) out << "\t" << fmt(C(i, j));
    out << "\n";
  }
  return out.str();
}

std::string cone_token(const std::optional<ConeLabel>& label) {
  if (!label) return "zero";
  std::string out = label->sign > 0 ? "+" : "-";
  for (size_t i = 0; i < label->breakpoints.size(); ++i) {
    if (i) out += ':';
    out += std::to_string(label->breakpoints[i]);
  }
  return out;
}

std::string cone_pretty(const ConeLabel& label) {
  std::string out = "Q" + std::to_string(label.order) + ": v=(";
  for (size_t i = 0; i < label.breakpoints.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(label.breakpoints[i]);
  }
  out += "), sign=";
  out += label.sign > 0 ? '+' : '-';
  return out;
}

std::string cert_report_json(const CertReport& report) {
  json j;
  j["n"] = report.n;
  json verdicts = json::object();
  for (const auto& [k, v] : report.verdicts) {
    json entry;
    entry["verdict"] = to_string(v);
    const auto w = report.witnesses.find(k);
    if (w != report.witnesses.end()) {
      entry["witness"] = {{"row", w->second.row},
                         {"col", w->second.col},
                         {"value", w->second.value},
                         {"sample", w->second.sample}};
    }
    verdicts[std::to_string(k)] = entry;
  }
  j["verdicts"] = verdicts;
  j["corollary_flags"] = {{"corollary1_applies", report.corollary1_applies},
                          {"corollary4_applies", report.corollary4_applies},
                          {"consistent", report.corollaries_consistent}};
  j["note"] = report.note;
  return j.dump(2);
}

std::string omega_verdict_json(const OmegaVerdict& verdict) {
  json j;
  j["kind"] = to_string(verdict.kind);
  j["period"] = verdict.period ? json(*verdict.period) : json(nullptr);
  if (verdict.equilibrium) {
    json pt = json::array();
    for (Eigen::Index i = 0; i < verdict.equilibrium->size(); ++i)
      pt.push_back((*verdict.equilibrium)[i]);
    j["equilibrium"] = pt;
  }
  j["diagnostics"] = {{"recurrence_distance", verdict.recurrence_distance},
                      {"derivative_norm", verdict.derivative_norm},
                      {"p2_hypothesis_seen", verdict.p2_hypothesis_seen}};
  return j.dump(2);
}

std::string trajectory_csv(const Trajectory& traj, const Tolerance& tol) {
  std::ostringstream out;
  const Eigen::Index n = traj.states.empty() ? 0 : traj.states.front().size();
  out << "t";
  for (Eigen::Index i = 0; i < n; ++i) out << ",x" << (i + 1);
  out << ",s_minus,s_plus,cone\n";
  for (size_t s = 0; s < traj.size(); ++s) {
    out << fmt(traj.times[s]);
    for (Eigen::Index i = 0; i < n; ++i) out << "," << fmt(traj.states[s][i]);
    const SignStats st = sign_stats(traj.states[s], tol);
    out << "," << st.s_minus << "," << st.s_plus << ","
        << cone_token(classify_cone(traj.states[s], tol)) << "\n";
  }
  return out.str();
}

Trajectory parse_trajectory_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty trajectory CSV");
  // count state columns from the header
  int ncols = 0, nstates = 0;
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) {
      ++ncols;
      if (!cell.empty() && cell[0] == 'x') ++nstates;
    }
  }
  if (nstates == 0) throw ParseError("trajectory CSV has no state columns");
  Trajectory traj;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (static_cast<int>(cells.size()) < 1 + nstates)
      throw ParseError("short trajectory row at line " + std::to_string(lineno));
    try {
      traj.times.push_back(std::stod(cells[0]));
      Eigen::VectorXd x(nstates);
      for (int i = 0; i < nstates; ++i) x[i] = std::stod(cells[static_cast<size_t>(i) + 1]);
      traj.states.push_back(std::move(x));
    } catch (const std::exception&) {
      throw ParseError("numeric parse error at line " + std::to_string(lineno));
    }
  }
  if (traj.times.size() >= 2) traj.step = traj.times[1] - traj.times[0];
  return traj;
}

}  // namespace kpos::io
