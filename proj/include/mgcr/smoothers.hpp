#ifndef MGCR_SMOOTHERS_HPP
#define MGCR_SMOOTHERS_HPP

#include "mgcr/sparse.hpp"

#include <stdexcept>
#include <string>

namespace mgcr {

class SmootherError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

template <typename Scalar>
void check_sizes(const SparseMatrixT<Scalar>& a, Eigen::Index nx, Eigen::Index nb)
{
  if (a.rows() != a.cols() || a.rows() != nx || a.rows() != nb)
    throw std::invalid_argument("smoother: dimension mismatch");
}

// x_i <- (b_i - sum_{j != i} a_ij x_j) / a_ii, using the latest x.
template <typename Scalar>
inline void relax_row(const SparseMatrixT<Scalar>& a, Eigen::Index i, Scalar* x, const Scalar* b)
{
  Scalar sum = b[i];
  Scalar diag(0);
  for (typename SparseMatrixT<Scalar>::InnerIterator it(a, i); it; ++it) {
    if (it.col() == i)
      diag = it.value();
    else
      sum -= it.value() * x[it.col()];
  }
  if (diag == Scalar(0)) throw SmootherError("Gauss-Seidel: zero diagonal entry in row " + std::to_string(i));
  x[i] = sum / diag;
}

} // namespace detail

/// `steps` Gauss-Seidel sweeps in ascending row order. This is the smoother
/// R of the V-cycle.
template <typename Scalar>
void gs_forward(const SparseMatrixT<Scalar>& a, Eigen::Ref<VectorT<Scalar>> x,
                const Eigen::Ref<const VectorT<Scalar>>& b, int steps = 1)
{
  detail::check_sizes(a, x.size(), b.size());
  for (int s = 0; s < steps; ++s)
    for (Eigen::Index i = 0; i < a.rows(); ++i) detail::relax_row(a, i, x.data(), b.data());
}

/// Descending-order sweeps; the energy adjoint R* of gs_forward for symmetric A.
template <typename Scalar>
void gs_backward(const SparseMatrixT<Scalar>& a, Eigen::Ref<VectorT<Scalar>> x,
                 const Eigen::Ref<const VectorT<Scalar>>& b, int steps = 1)
{
  detail::check_sizes(a, x.size(), b.size());
  for (int s = 0; s < steps; ++s)
    for (Eigen::Index i = a.rows() - 1; i >= 0; --i) detail::relax_row(a, i, x.data(), b.data());
}

/// Damped Jacobi, x <- x + omega D^{-1} (b - A x). Symmetric, so it is its own adjoint.
template <typename Scalar>
void jacobi(const SparseMatrixT<Scalar>& a, Eigen::Ref<VectorT<Scalar>> x,
            const Eigen::Ref<const VectorT<Scalar>>& b, int steps = 1, Scalar omega = Scalar(2) / Scalar(3))
{
  detail::check_sizes(a, x.size(), b.size());
  const VectorT<Scalar> diag = a.diagonal();
  if ((diag.array() == Scalar(0)).any()) throw SmootherError("Jacobi: zero diagonal entry");
  for (int s = 0; s < steps; ++s) {
    const VectorT<Scalar> r = b - a * x;
    x += omega * r.cwiseQuotient(diag);
  }
}

} // namespace mgcr

#endif // MGCR_SMOOTHERS_HPP
