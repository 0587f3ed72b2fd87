#pragma once

#include <vector>

namespace rankone {

struct NnlsResult {
  std::vector<double> x;
  double residual_norm = 0;  // ||A x - b||_2
  int iterations = 0;
  bool converged = true;
};

// Lawson-Hanson active-set solver for min ||A x - b|| subject to x >= 0.
// `rows` is row-major, every row of equal length.
NnlsResult nnls(const std::vector<std::vector<double>>& rows, const std::vector<double>& b);

// Euclidean projection onto {x >= 0, sum x <= cap}.
std::vector<double> project_capped_simplex(const std::vector<double>& v, double cap = 1.0);

}  // namespace rankone
