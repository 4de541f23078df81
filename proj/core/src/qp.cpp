#include "weaknet/qp.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>

namespace weaknet {

namespace {

constexpr Scalar k_feas_tol = 1e-12;
constexpr Scalar k_mult_tol = 1e-10;

/// min ||A u - r||_2 subject to sum(u) = total, via u = (total/n) 1 + Z w with
/// Z an orthonormal basis of the zero-sum subspace.
Vector solve_affine_lsq(const Matrix& a, const Vector& r, Scalar total) {
  const Index n = a.cols();
  Vector u0 = Vector::Constant(n, total / static_cast<Scalar>(n));
  if (n == 1) {
    return u0;
  }
  Eigen::HouseholderQR<Matrix> qr(Matrix::Ones(n, 1));
  Matrix q_full = qr.householderQ();
  const Matrix z = q_full.rightCols(n - 1);
  const Matrix az = a * z;
  const Vector w = az.completeOrthogonalDecomposition().solve(r - a * u0);
  return u0 + z * w;
}

}  // namespace

LsqResult solve_simplex_lsq(const Matrix& b, const Vector& q, const Vector& lb) {
  const Index m = b.cols();
  if (q.size() != b.rows()) {
    throw input_error("objective dimensions disagree");
  }
  if (lb.size() != m) {
    throw input_error("lower bound length does not match the variable count");
  }

  LsqResult result;
  if (m == 0 || lb.sum() > 1.0 + k_feas_tol) {
    return result;  // empty polytope
  }
  result.feasible = true;

  // Start in the relative interior: spread the leftover mass evenly.
  Vector x = lb;
  x.array() += (1.0 - lb.sum()) / static_cast<Scalar>(m);

  std::vector<bool> at_bound(m, false);
  const int max_iterations = static_cast<int>(64 * m + 128);

  while (result.iterations < max_iterations) {
    ++result.iterations;

    std::vector<Index> free_vars;
    for (Index i = 0; i < m; ++i) {
      if (!at_bound[i]) free_vars.push_back(i);
    }

    if (!free_vars.empty()) {
      const Index nf = static_cast<Index>(free_vars.size());
      Matrix bf(b.rows(), nf);
      Scalar bound_mass = 0;
      Vector r = q;
      for (Index i = 0; i < m; ++i) {
        if (at_bound[i]) {
          r -= b.col(i) * lb(i);
          bound_mass += lb(i);
        }
      }
      for (Index j = 0; j < nf; ++j) {
        bf.col(j) = b.col(free_vars[j]);
      }
      const Vector xf = solve_affine_lsq(bf, r, 1.0 - bound_mass);

      // Blocked: step as far as feasibility allows and pin the first blocker.
      Scalar alpha = 1.0;
      Index blocker = -1;
      for (Index j = 0; j < nf; ++j) {
        const Index i = free_vars[j];
        const Scalar target = xf(j);
        if (target < lb(i) - k_feas_tol) {
          const Scalar step = x(i) - target;
          const Scalar room = x(i) - lb(i);
          const Scalar a = step > 0 ? room / step : 0.0;
          if (a < alpha - 1e-15 || (std::abs(a - alpha) <= 1e-15 && (blocker < 0 || i < blocker))) {
            alpha = a;
            blocker = i;
          }
        }
      }
      if (blocker >= 0) {
        for (Index j = 0; j < nf; ++j) {
          const Index i = free_vars[j];
          x(i) += alpha * (xf(j) - x(i));
        }
        x(blocker) = lb(blocker);
        at_bound[blocker] = true;
        continue;
      }
      for (Index j = 0; j < nf; ++j) {
        x(free_vars[j]) = std::max(xf(j), lb(free_vars[j]));
      }
    }

    // Optimality: every pinned variable must push against its bound.
    const Vector gradient = 2.0 * b.transpose() * (b * x - q);
    Scalar nu = 0;
    if (!free_vars.empty()) {
      for (Index i : free_vars) nu += gradient(i);
      nu /= static_cast<Scalar>(free_vars.size());
    } else {
      nu = gradient.size() > 0 ? gradient.minCoeff() : 0.0;
    }
    const Scalar scale = 1.0 + gradient.cwiseAbs().maxCoeff();
    Index drop = -1;
    Scalar worst = -k_mult_tol * scale;
    for (Index i = 0; i < m; ++i) {
      if (!at_bound[i]) continue;
      const Scalar lambda = gradient(i) - nu;
      if (lambda < worst) {
        worst = lambda;
        drop = i;
      }
    }
    if (drop < 0) {
      break;
    }
    at_bound[drop] = false;
  }

  if (result.iterations >= max_iterations) {
    throw domain_error("active-set solve did not converge");
  }

  result.x = x;
  result.residual = (b * x - q).norm();
  for (Index i = 0; i < m; ++i) {
    if (at_bound[i]) result.active.push_back(i);
  }
  return result;
}

}  // namespace weaknet
