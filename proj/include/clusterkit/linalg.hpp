#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "clusterkit/core.hpp"

namespace clusterkit {

// Lower-triangular factor of a symmetric positive definite matrix, or
// nullopt when a pivot is not positive.
std::optional<Matrix> cholesky(const Matrix& a);

// Solves L z = b for lower-triangular L.
std::vector<double> forward_substitute(const Matrix& lower, const std::vector<double>& b);

struct EigenSystem {
  std::vector<double> eigenvalues;  // ascending
  Matrix eigenvectors;              // column j pairs with eigenvalues[j]
  std::size_t sweeps = 0;
};

// Cyclic Jacobi rotations, sweeping the upper triangle row by row.
EigenSystem symmetric_eigen(const Matrix& a, double tol = 1e-8, std::size_t max_sweeps = 100);

}  // namespace clusterkit
