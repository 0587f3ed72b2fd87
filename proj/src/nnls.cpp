#include "rankone/nnls.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <numeric>

#include "rankone/error.hpp"

namespace rankone {

namespace {

Eigen::VectorXd solve_passive(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const std::vector<bool>& passive) {
  std::vector<int> idx;
  for (int i = 0; i < static_cast<int>(passive.size()); ++i)
    if (passive[static_cast<std::size_t>(i)]) idx.push_back(i);
  Eigen::MatrixXd sub(A.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = A.col(idx[c]);
  Eigen::VectorXd z = sub.colPivHouseholderQr().solve(b);
  Eigen::VectorXd full = Eigen::VectorXd::Zero(A.cols());
  for (std::size_t c = 0; c < idx.size(); ++c) full(idx[c]) = z(static_cast<Eigen::Index>(c));
  return full;
}

}  // namespace

NnlsResult nnls(const std::vector<std::vector<double>>& rows, const std::vector<double>& b) {
  require(!rows.empty() && rows.size() == b.size(), ErrorCode::InvalidParam, "nnls: row count mismatch");
  const auto m = static_cast<Eigen::Index>(rows.size());
  const auto n = static_cast<Eigen::Index>(rows.front().size());
  Eigen::MatrixXd A(m, n);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    require(static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) == n, ErrorCode::InvalidParam, "nnls: ragged rows");
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    y(i) = b[static_cast<std::size_t>(i)];
  }

  const double tol = 1e-12 * std::max(1.0, A.cwiseAbs().maxCoeff()) * static_cast<double>(std::max(m, n));
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  NnlsResult res;
  const int max_iter = 3 * static_cast<int>(n) + 30;

  Eigen::VectorXd w = A.transpose() * (y - A * x);
  while (res.iterations < max_iter) {
    Eigen::Index best = -1;
    for (Eigen::Index j = 0; j < n; ++j)
      if (!passive[static_cast<std::size_t>(j)] && w(j) > tol && (best < 0 || w(j) > w(best))) best = j;
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;

    for (;;) {
      ++res.iterations;
      Eigen::VectorXd z = solve_passive(A, y, passive);
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0) feasible = false;
      if (feasible) {
        x = z;
        break;
      }
      double alpha = 1;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0) alpha = std::min(alpha, x(j) / (x(j) - z(j)));
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && x(j) <= tol) {
          passive[static_cast<std::size_t>(j)] = false;
          x(j) = 0;
        }
      if (res.iterations >= max_iter) break;
    }
    w = A.transpose() * (y - A * x);
  }
  res.converged = res.iterations < max_iter;
  res.x.assign(x.data(), x.data() + n);
  res.residual_norm = (A * x - y).norm();
  return res;
}

std::vector<double> project_capped_simplex(const std::vector<double>& v, double cap) {
  std::vector<double> x(v.size());
  std::transform(v.begin(), v.end(), x.begin(), [](double t) { return std::max(t, 0.0); });
  if (std::accumulate(x.begin(), x.end(), 0.0) <= cap) return x;
  // Projection onto the face sum x = cap: threshold by the sorted prefix rule.
  std::vector<double> u(v);
  std::sort(u.begin(), u.end(), std::greater<>());
  double prefix = 0, theta = 0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    prefix += u[k];
    double t = (prefix - cap) / static_cast<double>(k + 1);
    if (u[k] - t > 0) theta = t;
  }
  for (std::size_t i = 0; i < v.size(); ++i) x[i] = std::max(v[i] - theta, 0.0);
  return x;
}

}  // namespace rankone
