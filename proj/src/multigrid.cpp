#include "mgcr/multigrid.hpp"

#include "mgcr/smoothers.hpp"
#include "mgcr/transfer.hpp"

#include <sstream>

namespace mgcr {

MgConfig MgConfig::defaults_for(int dim)
{
  MgConfig c;
  c.pre_sweeps = c.post_sweeps = dim == 3 ? 5 : 1;
  return c;
}

MgHierarchy::MgHierarchy(std::vector<SparseMatrix> operators, std::vector<SparseMatrix> prolongations,
                         MgConfig config)
    : operators_(std::move(operators)), prolongations_(std::move(prolongations)), config_(config)
{
  if (operators_.empty()) throw std::invalid_argument("MgHierarchy: no levels");
  if (prolongations_.size() + 1 != operators_.size())
    throw std::invalid_argument("MgHierarchy: need one prolongation per pair of levels");
  if (config_.pre_sweeps < 0 || config_.post_sweeps < 0)
    throw std::invalid_argument("MgHierarchy: sweep counts must be nonnegative");
  for (std::size_t l = 0; l < operators_.size(); ++l) {
    if (operators_[l].rows() != operators_[l].cols())
      throw std::invalid_argument("MgHierarchy: level operator is not square");
    operators_[l].makeCompressed();
  }
  for (std::size_t l = 0; l < prolongations_.size(); ++l) {
    if (prolongations_[l].cols() != operators_[l].rows() || prolongations_[l].rows() != operators_[l + 1].rows())
      throw std::invalid_argument("MgHierarchy: prolongation " + std::to_string(l) + " has wrong shape");
    prolongations_[l].makeCompressed();
  }

  const DenseMatrix a0 = DenseMatrix(operators_.front());
  coarse_.compute(a0);
  if (coarse_.info() != Eigen::Success)
    throw FactorizationError("coarse operator is not symmetric positive definite");
}

void MgHierarchy::smooth(int level, Vector& w, const Vector& g, bool forward, int steps) const
{
  const SparseMatrix& a = op(level);
  if (config_.smoother == SmootherKind::Jacobi)
    jacobi<double>(a, w, g, steps, config_.jacobi_weight);
  else if (forward)
    gs_forward<double>(a, w, g, steps);
  else
    gs_backward<double>(a, w, g, steps);
}

void MgHierarchy::vcycle(int level, const Vector& g, Vector& w) const
{
  if (level == 0) {
    w = coarse_.solve(g);
    return;
  }
  const SparseMatrix& a = op(level);
  const SparseMatrix& p = prolongation(level - 1);

  w.setZero(g.size());
  smooth(level, w, g, true, config_.pre_sweeps);

  const Vector residual = g - a * w;
  const Vector coarse_residual = p.transpose() * residual;
  Vector correction;
  vcycle(level - 1, coarse_residual, correction);
  w.noalias() += p * correction;

  smooth(level, w, g, false, config_.post_sweeps);
}

Vector MgHierarchy::apply(const Eigen::Ref<const Vector>& g) const
{
  if (g.size() != size()) throw std::invalid_argument("MgHierarchy::apply: dimension mismatch");
  Vector w;
  vcycle(finest_level(), Vector(g), w);
  return w;
}

std::vector<double> MgHierarchy::galerkin_defects() const
{
  std::vector<double> out;
  for (std::size_t l = 0; l < prolongations_.size(); ++l) {
    const double scale = max_abs(operators_[l]);
    out.push_back(galerkin_check(operators_[l + 1], prolongations_[l], operators_[l]) / scale);
  }
  return out;
}

MgProblem setup(const MeshHierarchy& meshes, const MgConfig& config)
{
  if (meshes.levels.empty()) throw std::invalid_argument("setup: empty mesh hierarchy");
  std::vector<SparseMatrix> ops;
  std::vector<SparseMatrix> prolongations;
  std::vector<DofMap> dofs;
  for (const MeshLevel& mesh : meshes.levels) {
    auto [a, map] = assemble(mesh, SpaceKind::P1);
    if (!dofs.empty())
      prolongations.push_back(prolong_p1(meshes.levels[dofs.size() - 1], dofs.back(), mesh, map));
    ops.push_back(std::move(a));
    dofs.push_back(std::move(map));
  }
  const MeshLevel& finest = meshes.levels.back();
  auto [acr, crmap] = assemble(finest, SpaceKind::CR);
  prolongations.push_back(inclusion_cr(finest, dofs.back(), crmap));
  ops.push_back(std::move(acr));
  dofs.push_back(std::move(crmap));

  MgProblem problem{MgHierarchy(std::move(ops), std::move(prolongations), config), std::move(dofs)};
  if (config.galerkin_tolerance >= 0.0) {
    const std::vector<double> defects = problem.mg.galerkin_defects();
    for (std::size_t l = 0; l < defects.size(); ++l)
      if (!(defects[l] <= config.galerkin_tolerance)) {
        std::ostringstream msg;
        msg << "setup: Galerkin identity fails between levels " << l << " and " << l + 1
            << " (relative defect " << defects[l] << ")";
        throw std::logic_error(msg.str());
      }
  }
  return problem;
}

MgProblem setup(const DomainSpec& spec, int max_level, const MgConfig& config)
{
  return setup(build_hierarchy(spec, max_level), config);
}

MgIterationResult mg_iterate(const MgHierarchy& mg, const Vector& f, const Vector& u0, int iterations,
                             const Vector* exact)
{
  const SparseMatrix& a = mg.finest_operator();
  if (f.size() != a.rows() || u0.size() != a.rows() || (exact && exact->size() != a.rows()))
    throw std::invalid_argument("mg_iterate: dimension mismatch");
  MgIterationResult result{u0, {}};
  if (exact) result.energy_errors.push_back(energy_norm(a, *exact - result.solution));
  for (int k = 0; k < iterations; ++k) {
    const Vector r = f - a * result.solution;
    result.solution += mg.apply(r);
    if (exact) result.energy_errors.push_back(energy_norm(a, *exact - result.solution));
  }
  return result;
}

} // namespace mgcr
