#ifndef MGCR_SPARSE_HPP
#define MGCR_SPARSE_HPP

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <iosfwd>
#include <string>

namespace mgcr {

/// Compressed sparse row matrix. After makeCompressed() the column indices of
/// each row are strictly increasing and free of duplicates.
template <typename Scalar>
using SparseMatrixT = Eigen::SparseMatrix<Scalar, Eigen::RowMajor, int>;

template <typename Scalar>
using VectorT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using DenseMatrixT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using SparseMatrix = SparseMatrixT<double>;
using Vector = VectorT<double>;
using DenseMatrix = DenseMatrixT<double>;

/// Largest absolute stored value, 0 for an empty matrix.
template <typename Scalar>
Scalar max_abs(const SparseMatrixT<Scalar>& a)
{
  Scalar m(0);
  for (int k = 0; k < a.outerSize(); ++k)
    for (typename SparseMatrixT<Scalar>::InnerIterator it(a, k); it; ++it)
      m = std::max(m, std::abs(it.value()));
  return m;
}

/// max_ij |a_ij - a_ji|
double symmetry_defect(const SparseMatrix& a);

/// Writes the lower triangle in Matrix Market coordinate format
/// (`%%MatrixMarket matrix coordinate real symmetric`, 1-based indices).
void write_matrix_market(std::ostream& os, const SparseMatrix& a);
void write_matrix_market(const std::string& path, const SparseMatrix& a);

/// Reads a real coordinate Matrix Market file, general or symmetric.
SparseMatrix read_matrix_market(std::istream& is);

} // namespace mgcr

#endif // MGCR_SPARSE_HPP
