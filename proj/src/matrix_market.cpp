#include "lyapkit/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <vector>

namespace lyapkit {

namespace {

struct MMHeader {
  bool coordinate = true;
  bool symmetric = false;
};

MMHeader parse_header(std::ifstream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) throw IOError("empty Matrix Market file: " + path);
  std::istringstream hs(line);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  std::transform(format.begin(), format.end(), format.begin(), ::tolower);
  std::transform(field.begin(), field.end(), field.begin(), ::tolower);
  std::transform(symmetry.begin(), symmetry.end(), symmetry.begin(), ::tolower);
  if (banner != "%%MatrixMarket" || object != "matrix") {
    throw IOError("not a Matrix Market file: " + path);
  }
  if (field != "real" && field != "integer") {
    throw IOError("unsupported Matrix Market field '" + field + "': " + path);
  }
  MMHeader h;
  if (format == "coordinate") {
    h.coordinate = true;
  } else if (format == "array") {
    h.coordinate = false;
  } else {
    throw IOError("unsupported Matrix Market format '" + format + "': " + path);
  }
  if (symmetry == "general") {
    h.symmetric = false;
  } else if (symmetry == "symmetric") {
    h.symmetric = true;
  } else {
    throw IOError("unsupported Matrix Market symmetry '" + symmetry + "': " + path);
  }
  return h;
}

std::string next_data_line(std::ifstream& in) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '%') continue;
    return line;
  }
  return {};
}

}  // namespace

SparseMatrix read_sparse_mm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot open " + path);
  MMHeader h = parse_header(in, path);
  if (!h.coordinate) throw IOError("expected coordinate format: " + path);
  std::istringstream szs(next_data_line(in));
  Eigen::Index rows = 0, cols = 0;
  long long nnz = 0;
  szs >> rows >> cols >> nnz;
  if (!szs) throw IOError("bad size line in " + path);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(h.symmetric ? 2 * nnz : nnz));
  for (long long k = 0; k < nnz; ++k) {
    std::istringstream ls(next_data_line(in));
    Eigen::Index i = 0, j = 0;
    double v = 0.0;
    ls >> i >> j >> v;
    if (!ls) throw IOError("bad entry line in " + path);
    trip.emplace_back(i - 1, j - 1, v);
    if (h.symmetric && i != j) trip.emplace_back(j - 1, i - 1, v);
  }
  SparseMatrix A(rows, cols);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  return A;
}

void write_sparse_mm(const std::string& path, const SparseMatrix& A) {
  std::ofstream out(path);
  if (!out) throw IOError("cannot open " + path + " for writing");
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.rows() << " " << A.cols() << " " << A.nonZeros() << "\n";
  out.precision(16);
  out << std::scientific;
  for (Eigen::Index c = 0; c < A.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(A, c); it; ++it) {
      out << it.row() + 1 << " " << it.col() + 1 << " " << it.value() << "\n";
    }
  }
  if (!out) throw IOError("write failed: " + path);
}

DenseMatrix read_dense_mm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot open " + path);
  MMHeader h = parse_header(in, path);
  if (h.coordinate) throw IOError("expected array format: " + path);
  if (h.symmetric) throw IOError("symmetric array format not supported: " + path);
  std::istringstream szs(next_data_line(in));
  Eigen::Index rows = 0, cols = 0;
  szs >> rows >> cols;
  if (!szs) throw IOError("bad size line in " + path);
  DenseMatrix A(rows, cols);
  // Array format is column major.
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      std::istringstream ls(next_data_line(in));
      double v = 0.0;
      ls >> v;
      if (!ls) throw IOError("bad entry line in " + path);
      A(i, j) = v;
    }
  }
  return A;
}

void write_dense_mm(const std::string& path, const DenseMatrix& A) {
  std::ofstream out(path);
  if (!out) throw IOError("cannot open " + path + " for writing");
  out << "%%MatrixMarket matrix array real general\n";
  out << A.rows() << " " << A.cols() << "\n";
  out.precision(16);
  out << std::scientific;
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    for (Eigen::Index i = 0; i < A.rows(); ++i) out << A(i, j) << "\n";
  }
  if (!out) throw IOError("write failed: " + path);
}

}  // namespace lyapkit
