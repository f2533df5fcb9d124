#ifndef MGCR_MULTIGRID_HPP
#define MGCR_MULTIGRID_HPP

#include "mgcr/assembly.hpp"
#include "mgcr/mesh.hpp"
#include "mgcr/sparse.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace mgcr {

enum class SmootherKind { GaussSeidel, Jacobi };

struct MgConfig
{
  int pre_sweeps = 1;
  int post_sweeps = 1;
  SmootherKind smoother = SmootherKind::GaussSeidel;
  double jacobi_weight = 2.0 / 3.0;
  /// Relative tolerance of the P^T A P = A_coarse check run by setup();
  /// negative disables the check.
  double galerkin_tolerance = 1e-10;

  /// 1 sweep in 2D, 5 in 3D.
  static MgConfig defaults_for(int dim);
};

class FactorizationError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Multilevel V-cycle preconditioner B.
///
/// Level 0 is solved exactly by dense Cholesky. On every other level the
/// cycle pre-smooths with forward Gauss-Seidel, corrects with the coarser
/// level through P and P^T, then post-smooths with backward Gauss-Seidel.
/// With equal pre and post sweep counts B is symmetric positive definite.
class MgHierarchy
{
public:
  /// `operators[l]` is A_l; `prolongations[l]` maps level l to level l+1.
  MgHierarchy(std::vector<SparseMatrix> operators, std::vector<SparseMatrix> prolongations,
              MgConfig config = {});

  int num_levels() const { return static_cast<int>(operators_.size()); }
  int finest_level() const { return num_levels() - 1; }
  const SparseMatrix& op(int level) const { return operators_.at(static_cast<std::size_t>(level)); }
  const SparseMatrix& finest_operator() const { return operators_.back(); }
  const SparseMatrix& prolongation(int level) const { return prolongations_.at(static_cast<std::size_t>(level)); }
  const MgConfig& config() const { return config_; }
  Eigen::Index size() const { return operators_.back().rows(); }

  /// B g. Safe to call concurrently; all work vectors are local.
  Vector apply(const Eigen::Ref<const Vector>& g) const;

  /// max |P_l^T A_{l+1} P_l - A_l| / max |A_l| for every consecutive pair.
  std::vector<double> galerkin_defects() const;

private:
  void vcycle(int level, const Vector& g, Vector& w) const;
  void smooth(int level, Vector& w, const Vector& g, bool forward, int steps) const;

  std::vector<SparseMatrix> operators_;
  std::vector<SparseMatrix> prolongations_;
  MgConfig config_;
  Eigen::LLT<DenseMatrix> coarse_;
};

/// Hierarchy built from meshes, with the dof maps needed to form load vectors.
struct MgProblem
{
  MgHierarchy mg;
  std::vector<DofMap> dofs; ///< dofs[l] matches mg.op(l); the last one is CR.
};

/// P1 operators on mesh levels 0..L, CR on mesh level L, transfers between
/// them. Throws if the Galerkin identity fails.
MgProblem setup(const MeshHierarchy& meshes, const MgConfig& config);

/// Builds the mesh hierarchy for `spec` first.
MgProblem setup(const DomainSpec& spec, int max_level, const MgConfig& config);

struct MgIterationResult
{
  Vector solution;
  std::vector<double> energy_errors; ///< ||u* - u_j||_A, j = 0..k, if u* was given
};

/// u_{j+1} = u_j + B (f - A u_j), k times.
MgIterationResult mg_iterate(const MgHierarchy& mg, const Vector& f, const Vector& u0, int iterations,
                             const Vector* exact = nullptr);

inline double energy_norm(const SparseMatrix& a, const Vector& x)
{
  return std::sqrt(std::max(0.0, x.dot(a * x)));
}

} // namespace mgcr

#endif // MGCR_MULTIGRID_HPP
