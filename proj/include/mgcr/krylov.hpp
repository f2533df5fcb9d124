#ifndef MGCR_KRYLOV_HPP
#define MGCR_KRYLOV_HPP

#include "mgcr/sparse.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mgcr {

/// Raised when CG detects a non-positive curvature p^T A p or r^T B r.
class NotPositiveDefiniteError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

template <typename Scalar>
struct SolveReportT
{
  int iterations = 0;
  bool converged = false;
  Scalar relative_residual = Scalar(0);
  std::vector<Scalar> residual_history;     ///< ||r_k||_2, k = 0..iterations
  std::vector<Scalar> b_residual_history;   ///< sqrt(r_k^T B r_k)
  std::vector<Scalar> alpha;                ///< CG step lengths
  std::vector<Scalar> beta;                 ///< CG direction updates
  VectorT<Scalar> tridiag_diag;             ///< Lanczos matrix of BA
  VectorT<Scalar> tridiag_offdiag;
  Scalar ritz_min = std::numeric_limits<Scalar>::quiet_NaN();
  Scalar ritz_max = std::numeric_limits<Scalar>::quiet_NaN();
  Scalar condition_estimate = std::numeric_limits<Scalar>::quiet_NaN();
  VectorT<Scalar> solution;
};

using SolveReport = SolveReportT<double>;

/// Eigenvalues (ascending) of the symmetric tridiagonal matrix.
template <typename Scalar>
VectorT<Scalar> tridiagonal_eigenvalues(const VectorT<Scalar>& diag, const VectorT<Scalar>& offdiag)
{
  if (diag.size() == 0) throw std::invalid_argument("tridiagonal_eigenvalues: empty matrix");
  if (offdiag.size() + 1 != diag.size()) throw std::invalid_argument("tridiagonal_eigenvalues: size mismatch");
  if (diag.size() == 1) return diag;
  Eigen::SelfAdjointEigenSolver<DenseMatrixT<Scalar>> es;
  es.computeFromTridiagonal(diag, offdiag, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("tridiagonal eigensolve failed");
  return es.eigenvalues();
}

/// lambda_max / lambda_min of the tridiagonal matrix.
template <typename Scalar>
Scalar condition_from_tridiagonal(const VectorT<Scalar>& diag, const VectorT<Scalar>& offdiag)
{
  const VectorT<Scalar> ev = tridiagonal_eigenvalues<Scalar>(diag, offdiag);
  return ev[ev.size() - 1] / ev[0];
}

/// Lanczos matrix of BA recovered from the CG coefficients:
/// T_jj = 1/alpha_j + beta_{j-1}/alpha_{j-1}, T_{j,j+1} = sqrt(beta_j)/alpha_j.
template <typename Scalar>
void lanczos_from_cg(const std::vector<Scalar>& alpha, const std::vector<Scalar>& beta, VectorT<Scalar>& diag,
                     VectorT<Scalar>& offdiag)
{
  const Eigen::Index k = static_cast<Eigen::Index>(alpha.size());
  diag.resize(k);
  offdiag.resize(std::max<Eigen::Index>(k - 1, 0));
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    diag[j] = Scalar(1) / alpha[uj];
    if (j > 0) diag[j] += beta[uj - 1] / alpha[uj - 1];
    if (j + 1 < k) offdiag[j] = std::sqrt(beta[uj]) / alpha[uj];
  }
}

/// Preconditioned conjugate gradients for A u = f with preconditioner B.
/// `apply_a` and `apply_b` map a vector to A v and B v. Stops when
/// ||r_k||_2 / ||r_0||_2 < tol or after maxit iterations.
template <typename Scalar, typename ApplyA, typename ApplyB>
SolveReportT<Scalar> pcg(ApplyA&& apply_a, ApplyB&& apply_b, const VectorT<Scalar>& f, Scalar tol, int maxit,
                         const VectorT<Scalar>* initial_guess = nullptr)
{
  if (!(tol > Scalar(0) && tol < Scalar(1))) throw std::invalid_argument("pcg: tol must lie in (0,1)");
  if (maxit < 1) throw std::invalid_argument("pcg: maxit must be positive");

  SolveReportT<Scalar> rep;
  rep.solution = initial_guess ? *initial_guess : VectorT<Scalar>::Zero(f.size());
  if (rep.solution.size() != f.size()) throw std::invalid_argument("pcg: initial guess has wrong size");

  VectorT<Scalar> r = f - apply_a(rep.solution);
  const Scalar r0 = r.norm();
  rep.residual_history.push_back(r0);
  VectorT<Scalar> z = apply_b(r);
  Scalar rz = r.dot(z);
  rep.b_residual_history.push_back(std::sqrt(std::max(rz, Scalar(0))));
  if (r0 == Scalar(0)) {
    rep.converged = true;
    return rep;
  }
  if (!(rz > Scalar(0))) throw NotPositiveDefiniteError("pcg: preconditioner is not positive definite");

  VectorT<Scalar> p = z;
  for (int k = 0; k < maxit; ++k) {
    const VectorT<Scalar> ap = apply_a(p);
    const Scalar curvature = p.dot(ap);
    if (!(curvature > Scalar(0))) throw NotPositiveDefiniteError("pcg: operator is not positive definite");
    const Scalar a = rz / curvature;
    rep.solution += a * p;
    r -= a * ap;
    rep.alpha.push_back(a);
    ++rep.iterations;

    const Scalar rn = r.norm();
    rep.residual_history.push_back(rn);
    rep.relative_residual = rn / r0;
    z = apply_b(r);
    const Scalar rz_next = r.dot(z);
    rep.b_residual_history.push_back(std::sqrt(std::max(rz_next, Scalar(0))));
    if (rep.relative_residual < tol) {
      rep.converged = true;
      break;
    }
    if (!(rz_next > Scalar(0))) throw NotPositiveDefiniteError("pcg: preconditioner is not positive definite");
    const Scalar b = rz_next / rz;
    rep.beta.push_back(b);
    p = z + b * p;
    rz = rz_next;
  }

  lanczos_from_cg(rep.alpha, rep.beta, rep.tridiag_diag, rep.tridiag_offdiag);
  const VectorT<Scalar> ritz = tridiagonal_eigenvalues<Scalar>(rep.tridiag_diag, rep.tridiag_offdiag);
  rep.ritz_min = ritz[0];
  rep.ritz_max = ritz[ritz.size() - 1];
  rep.condition_estimate = rep.ritz_max / rep.ritz_min;
  return rep;
}

} // namespace mgcr

#endif // MGCR_KRYLOV_HPP
