#include "mgcr/transfer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace mgcr {

namespace {

void require_dofmap(const MeshLevel& mesh, const DofMap& dofs, SpaceKind kind, const char* what)
{
  const std::size_t n = kind == SpaceKind::P1 ? static_cast<std::size_t>(mesh.num_vertices())
                                              : static_cast<std::size_t>(mesh.num_facets());
  if (dofs.kind != kind || dofs.entity_to_dof.size() != n || dofs.level != mesh.level)
    throw std::invalid_argument(std::string(what) + ": dof map does not belong to this mesh");
}

} // namespace

SparseMatrix prolong_p1(const MeshLevel& coarse, const DofMap& coarse_dofs,
                        const MeshLevel& fine, const DofMap& fine_dofs)
{
  require_dofmap(coarse, coarse_dofs, SpaceKind::P1, "prolong_p1");
  require_dofmap(fine, fine_dofs, SpaceKind::P1, "prolong_p1");
  const int d = coarse.dim;
  if (fine.dim != d || fine.cells_per_axis != 2 * coarse.cells_per_axis)
    throw std::runtime_error("prolong_p1: meshes are not nested");
  for (int a = 0; a < d; ++a)
    if (coarse.box.lo[a] != fine.box.lo[a] || coarse.box.hi[a] != fine.box.hi[a])
      throw std::runtime_error("prolong_p1: meshes cover different boxes");

  std::vector<Eigen::Triplet<double, int>> triplets;
  triplets.reserve(static_cast<std::size_t>(fine_dofs.size()) * 2);
  for (int row = 0; row < fine_dofs.size(); ++row) {
    const int v = fine_dofs.free_entities[static_cast<std::size_t>(row)];
    // Position on the coarse grid in units of coarse spacing; integer or half-integer.
    std::array<int, 3> lower{0, 0, 0}, upper{0, 0, 0};
    for (int a = 0; a < d; ++a) {
      const double spacing = (coarse.box.hi[a] - coarse.box.lo[a]) / coarse.cells_per_axis;
      const double t2 = 2.0 * (fine.vertices(a, v) - coarse.box.lo[a]) / spacing;
      const long twice = std::lround(t2);
      if (std::abs(t2 - static_cast<double>(twice)) > 1e-8)
        throw std::runtime_error("prolong_p1: fine vertex is not a coarse vertex or edge midpoint");
      lower[static_cast<std::size_t>(a)] = static_cast<int>(twice / 2);
      upper[static_cast<std::size_t>(a)] = static_cast<int>((twice + 1) / 2);
    }
    const int lo_dof = coarse_dofs.dof(coarse.grid_vertex(lower));
    if (lower == upper) {
      if (lo_dof >= 0) triplets.emplace_back(row, lo_dof, 1.0);
      continue;
    }
    const int hi_dof = coarse_dofs.dof(coarse.grid_vertex(upper));
    if (lo_dof >= 0) triplets.emplace_back(row, lo_dof, 0.5);
    if (hi_dof >= 0) triplets.emplace_back(row, hi_dof, 0.5);
  }
  SparseMatrix p(fine_dofs.size(), coarse_dofs.size());
  p.setFromTriplets(triplets.begin(), triplets.end());
  p.makeCompressed();
  return p;
}

SparseMatrix inclusion_cr(const MeshLevel& mesh, const DofMap& p1_dofs, const DofMap& cr_dofs)
{
  require_dofmap(mesh, p1_dofs, SpaceKind::P1, "inclusion_cr");
  require_dofmap(mesh, cr_dofs, SpaceKind::CR, "inclusion_cr");
  const int d = mesh.dim;
  const double weight = 1.0 / d;
  std::vector<Eigen::Triplet<double, int>> triplets;
  triplets.reserve(static_cast<std::size_t>(cr_dofs.size() * d));
  for (int row = 0; row < cr_dofs.size(); ++row) {
    const int f = cr_dofs.free_entities[static_cast<std::size_t>(row)];
    for (int a = 0; a < d; ++a) {
      const int col = p1_dofs.dof(mesh.facets(a, f));
      if (col >= 0) triplets.emplace_back(row, col, weight);
    }
  }
  SparseMatrix inc(cr_dofs.size(), p1_dofs.size());
  inc.setFromTriplets(triplets.begin(), triplets.end());
  inc.makeCompressed();
  return inc;
}

double galerkin_check(const SparseMatrix& a_fine, const SparseMatrix& p, const SparseMatrix& a_coarse)
{
  if (a_fine.rows() != p.rows() || a_fine.cols() != p.rows() || a_coarse.rows() != p.cols() ||
      a_coarse.cols() != p.cols())
    throw std::invalid_argument("galerkin_check: dimension mismatch");
  const SparseMatrix pt = p.transpose();
  const SparseMatrix ap = a_fine * p;
  const SparseMatrix triple = pt * ap;
  const SparseMatrix diff = triple - a_coarse;
  return max_abs(diff);
}

} // namespace mgcr
