#pragma once

#include <string>

#include "lyapkit/linops.hpp"

namespace lyapkit {

// Matrix Market coordinate format, real, general or symmetric.
SparseMatrix read_sparse_mm(const std::string& path);
void write_sparse_mm(const std::string& path, const SparseMatrix& A);

// Matrix Market array format, real general.
DenseMatrix read_dense_mm(const std::string& path);
void write_dense_mm(const std::string& path, const DenseMatrix& A);

}  // namespace lyapkit
