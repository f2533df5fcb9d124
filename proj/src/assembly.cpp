#include "mgcr/assembly.hpp"

namespace mgcr {

DofMap make_dofmap(const MeshLevel& mesh, SpaceKind kind)
{
  DofMap map;
  map.kind = kind;
  map.level = mesh.level;
  const auto& boundary = kind == SpaceKind::P1 ? mesh.boundary_vertex : mesh.boundary_facet;
  map.entity_to_dof.assign(boundary.size(), -1);
  for (std::size_t e = 0; e < boundary.size(); ++e)
    if (!boundary[e]) {
      map.entity_to_dof[e] = static_cast<int>(map.free_entities.size());
      map.free_entities.push_back(static_cast<int>(e));
    }
  return map;
}

namespace {

// Local-to-global entity ids of cell c: vertices for P1, opposite facets for CR.
int local_entity(const MeshLevel& mesh, SpaceKind kind, int i, int c)
{
  return kind == SpaceKind::P1 ? mesh.cells(i, c) : mesh.cell_facets(i, c);
}

} // namespace

std::pair<SparseMatrix, DofMap> assemble(const MeshLevel& mesh, SpaceKind kind)
{
  DofMap dofs = make_dofmap(mesh, kind);
  const int d = mesh.dim;
  std::vector<Eigen::Triplet<double, int>> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.num_cells() * (d + 1) * (d + 1)));
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const DenseMatrix coords = mesh.cell_coordinates(c);
    const DenseMatrix k = kind == SpaceKind::P1 ? local_stiffness_p1<double>(coords, mesh.kappa[c])
                                                : local_stiffness_cr<double>(coords, mesh.kappa[c]);
    for (int i = 0; i <= d; ++i) {
      const int gi = dofs.dof(local_entity(mesh, kind, i, c));
      if (gi < 0) continue;
      for (int j = 0; j <= d; ++j) {
        const int gj = dofs.dof(local_entity(mesh, kind, j, c));
        if (gj >= 0) triplets.emplace_back(gi, gj, k(i, j));
      }
    }
  }
  SparseMatrix a(dofs.size(), dofs.size());
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  return {std::move(a), std::move(dofs)};
}

Vector assemble_load(const MeshLevel& mesh, const DofMap& dofs,
                     const std::function<double(const Eigen::VectorXd&)>& f)
{
  const int d = mesh.dim;
  Vector b = Vector::Zero(dofs.size());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const double weight = std::abs(mesh.signed_volume(c)) * f(mesh.barycenter(c)) / (d + 1);
    for (int i = 0; i <= d; ++i) {
      const int gi = dofs.dof(local_entity(mesh, dofs.kind, i, c));
      if (gi >= 0) b[gi] += weight;
    }
  }
  return b;
}

} // namespace mgcr
