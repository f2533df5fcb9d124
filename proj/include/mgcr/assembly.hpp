#ifndef MGCR_ASSEMBLY_HPP
#define MGCR_ASSEMBLY_HPP

#include "mgcr/mesh.hpp"
#include "mgcr/sparse.hpp"

#include <Eigen/LU>

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mgcr {

class DegenerateElementError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

enum class SpaceKind { P1, CR };

/// Free degrees of freedom of one discrete space. P1 lives on vertices, CR on
/// facet midpoints; entities on the boundary are eliminated.
struct DofMap
{
  SpaceKind kind = SpaceKind::P1;
  int level = 0;
  std::vector<int> free_entities;  ///< ascending entity ids
  std::vector<int> entity_to_dof;  ///< -1 for constrained entities

  int size() const { return static_cast<int>(free_entities.size()); }
  int dof(int entity) const { return entity_to_dof[static_cast<std::size_t>(entity)]; }
};

DofMap make_dofmap(const MeshLevel& mesh, SpaceKind kind);

/// Gradients of the barycentric coordinates of a simplex, one per column,
/// and its volume. `coords` is dim x (dim+1).
template <typename Scalar>
std::pair<DenseMatrixT<Scalar>, Scalar>
barycentric_gradients(const Eigen::Ref<const DenseMatrixT<Scalar>>& coords)
{
  const Eigen::Index d = coords.rows();
  if (coords.cols() != d + 1) throw std::invalid_argument("simplex needs dim+1 vertices");
  DenseMatrixT<Scalar> jac(d, d);
  for (Eigen::Index i = 0; i < d; ++i) jac.col(i) = coords.col(i + 1) - coords.col(0);
  const Scalar det = jac.determinant();
  Scalar fact(1);
  for (Eigen::Index i = 2; i <= d; ++i) fact *= Scalar(i);
  const Scalar volume = std::abs(det) / fact;
  Scalar scale(0);
  for (Eigen::Index i = 0; i < d; ++i) scale = std::max(scale, jac.col(i).norm());
  if (!(volume > Scalar(1e-14) * std::pow(scale, Scalar(d))))
    throw DegenerateElementError("simplex has (near) zero volume");

  // Rows of jac^{-1} are the gradients of lambda_1..lambda_d.
  const DenseMatrixT<Scalar> inv = jac.inverse();
  DenseMatrixT<Scalar> grads(d, d + 1);
  grads.rightCols(d) = inv.transpose();
  grads.col(0) = -grads.rightCols(d).rowwise().sum();
  return {grads, volume};
}

/// Conforming P1 element matrix, K_ij = kappa |T| grad(lambda_i).grad(lambda_j).
template <typename Scalar>
DenseMatrixT<Scalar> local_stiffness_p1(const Eigen::Ref<const DenseMatrixT<Scalar>>& coords, Scalar kappa)
{
  if (!(kappa > Scalar(0))) throw std::invalid_argument("coefficient must be positive");
  const auto [grads, volume] = barycentric_gradients<Scalar>(coords);
  return (kappa * volume) * (grads.transpose() * grads);
}

/// Crouzeix-Raviart element matrix. Local index i is the facet opposite
/// vertex i, whose basis function is 1 - dim * lambda_i.
template <typename Scalar>
DenseMatrixT<Scalar> local_stiffness_cr(const Eigen::Ref<const DenseMatrixT<Scalar>>& coords, Scalar kappa)
{
  const Scalar d = static_cast<Scalar>(coords.rows());
  return (d * d) * local_stiffness_p1<Scalar>(coords, kappa);
}

/// Galerkin matrix on the free DOFs of the given space.
std::pair<SparseMatrix, DofMap> assemble(const MeshLevel& mesh, SpaceKind kind);

/// Load vector by the barycenter rule; every basis function equals
/// 1/(dim+1) at the barycenter for both spaces.
Vector assemble_load(const MeshLevel& mesh, const DofMap& dofs,
                     const std::function<double(const Eigen::VectorXd&)>& f);

} // namespace mgcr

#endif // MGCR_ASSEMBLY_HPP
