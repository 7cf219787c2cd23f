#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <sstream>

#include "atollpr/eigen_solvers.hpp"
#include "atollpr/error.hpp"

namespace atollpr {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

struct Numbering {
  std::vector<int> id;  // lattice cell -> unknown, -1 outside
  std::vector<std::size_t> cell;
};

Numbering number_cells(const DomainMask& mask) {
  Numbering n;
  n.id.assign(mask.lattice().size(), -1);
  for (std::size_t k = 0; k < n.id.size(); ++k)
    if (mask[k]) {
      n.id[k] = static_cast<int>(n.cell.size());
      n.cell.push_back(k);
    }
  return n;
}

// Graph Laplacian with edge weights wx (x-neighbours) and wy (y-neighbours).
SpMat graph_laplacian(const DomainMask& mask, const Numbering& num, double wx, double wy) {
  const Lattice& lat = mask.lattice();
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(num.cell.size() * 5);
  std::vector<double> diag(num.cell.size(), 0.0);
  for (std::size_t a = 0; a < num.cell.size(); ++a) {
    const int i = lat.col(num.cell[a]), j = lat.row(num.cell[a]);
    const int ni[2] = {i + 1, i};
    const int nj[2] = {j, j + 1};
    const double w[2] = {wx, wy};
    for (int q = 0; q < 2; ++q) {
      if (ni[q] >= lat.nx || nj[q] >= lat.ny) continue;
      const int b = num.id[lat.index(ni[q], nj[q])];
      if (b < 0) continue;
      t.emplace_back(static_cast<int>(a), b, -w[q]);
      t.emplace_back(b, static_cast<int>(a), -w[q]);
      diag[a] += w[q];
      diag[static_cast<std::size_t>(b)] += w[q];
    }
  }
  for (std::size_t a = 0; a < diag.size(); ++a) t.emplace_back(static_cast<int>(a), static_cast<int>(a), diag[a]);
  const auto n = static_cast<Eigen::Index>(num.cell.size());
  SpMat L(n, n);
  L.setFromTriplets(t.begin(), t.end());
  return L;
}

void require_connected(const DomainMask& mask) {
  std::vector<int> labels;
  const int n = label_components(mask.lattice(), mask.cells(), labels);
  if (n == 0) fail(ErrorKind::domain, "empty mask");
  if (n > 1) fail(ErrorKind::domain, "mask is not 4-connected; the Neumann spectrum has a repeated zero");
}

// Deterministic start vector with no symmetry.
Vec start_vector(Eigen::Index n) {
  Vec v(n);
  for (Eigen::Index k = 0; k < n; ++k) v(k) = std::sin(0.7 * static_cast<double>(k) + 0.3) + 0.01 * std::cos(1.9 * k);
  return v;
}

}  // namespace

EigenResult neumann_lambda2(const DomainMask& mask, double tol, int max_iter) {
  require_connected(mask);
  const Lattice& lat = mask.lattice();
  const Numbering num = number_cells(mask);
  const auto n = static_cast<Eigen::Index>(num.cell.size());
  if (n < 2) fail(ErrorKind::domain, "Neumann eigenproblem needs at least two cells");
  const SpMat L = graph_laplacian(mask, num, 1.0 / (lat.dx * lat.dx), 1.0 / (lat.dy * lat.dy));
  // Grounding unknown 0 makes the reduced matrix SPD; for b orthogonal to
  // constants, x = [0; L_g^{-1} b_g] solves L x = b.
  const SpMat Lg = L.bottomRightCorner(n - 1, n - 1);
  Eigen::SimplicialLDLT<SpMat> solver(Lg);
  if (solver.info() != Eigen::Success) fail(ErrorKind::numerical, "Neumann Laplacian factorization failed");

  // Block inverse iteration with Rayleigh-Ritz: the disc and annulus have
  // a doubly degenerate lambda_2, which stalls single-vector iteration.
  const Eigen::Index m = std::min<Eigen::Index>(4, n - 1);
  Eigen::MatrixXd X(n, m);
  for (Eigen::Index c = 0; c < m; ++c) {
    const Vec s = start_vector(n + 7 * c);
    X.col(c) = s.head(n);
  }
  auto orthonormalize = [&](Eigen::MatrixXd& Y) {
    for (Eigen::Index c = 0; c < Y.cols(); ++c) Y.col(c).array() -= Y.col(c).mean();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Y);
    Y = qr.householderQ() * Eigen::MatrixXd::Identity(n, Y.cols());
  };
  orthonormalize(X);
  double lambda = 0.0, change = 1.0;
  int it = 0;
  for (; it < max_iter; ++it) {
    Eigen::MatrixXd Y(n, m);
    for (Eigen::Index c = 0; c < m; ++c) {
      Y(0, c) = 0.0;
      Y.col(c).tail(n - 1) = solver.solve(X.col(c).tail(n - 1));
    }
    orthonormalize(Y);
    const Eigen::MatrixXd LY = L * Y;
    const Eigen::MatrixXd H = Y.transpose() * LY;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (H + H.transpose()));
    if (es.info() != Eigen::Success) fail(ErrorKind::numerical, "Rayleigh-Ritz step failed");
    X = Y * es.eigenvectors();
    const double next = es.eigenvalues()(0);
    if (!(next > 0.0)) fail(ErrorKind::numerical, "inverse iteration collapsed");
    change = std::abs(next - lambda) / std::abs(next);
    lambda = next;
    if (it > 2 && change < tol) break;
  }
  if (it >= max_iter) {
    std::ostringstream os;
    os << "Neumann inverse iteration did not converge in " << max_iter << " iterations (relative change " << change
       << ")";
    fail(ErrorKind::numerical, os.str());
  }
  return {lambda, it + 1, change};
}

EigenResult trace_rayleigh_max(const DomainMask& mask, double tol, int max_iter) {
  require_connected(mask);
  const Lattice& lat = mask.lattice();
  const Numbering num = number_cells(mask);
  const auto n = static_cast<Eigen::Index>(num.cell.size());
  const double area = lat.cell_area();
  SpMat A = graph_laplacian(mask, num, area / (lat.dx * lat.dx), area / (lat.dy * lat.dy));
  for (Eigen::Index k = 0; k < n; ++k) A.coeffRef(k, k) += area;
  const auto pw = perimeter_weights(mask);
  Vec b(n);
  for (Eigen::Index k = 0; k < n; ++k) b(k) = pw[num.cell[static_cast<std::size_t>(k)]];
  Eigen::SimplicialLDLT<SpMat> solver(A);
  if (solver.info() != Eigen::Success) fail(ErrorKind::numerical, "trace operator factorization failed");

  Vec x = Vec::Ones(n) + 0.01 * start_vector(n);
  double mu = 0.0, change = 1.0;
  int it = 0;
  for (; it < max_iter; ++it) {
    Vec y = solver.solve(b.cwiseProduct(x));
    const double num_q = y.dot(b.cwiseProduct(y));
    const double den_q = y.dot(A * y);
    if (!(den_q > 0.0)) fail(ErrorKind::numerical, "trace iteration collapsed");
    const double next = num_q / den_q;
    change = std::abs(next - mu) / std::abs(next);
    mu = next;
    x = y / y.norm();
    if (it > 2 && change < tol) break;
  }
  if (it >= max_iter) {
    std::ostringstream os;
    os << "trace power iteration did not converge in " << max_iter << " iterations (relative change " << change << ")";
    fail(ErrorKind::numerical, os.str());
  }
  return {mu, it + 1, change};
}

}  // namespace atollpr
