#ifndef MGCR_TRANSFER_HPP
#define MGCR_TRANSFER_HPP

#include "mgcr/assembly.hpp"
#include "mgcr/mesh.hpp"
#include "mgcr/sparse.hpp"

namespace mgcr {

/// Nodal P1 prolongation from `coarse` to its dyadic refinement `fine`
/// (rows: fine free vertices, columns: coarse free vertices). Entries that
/// would reference an eliminated coarse vertex are dropped.
SparseMatrix prolong_p1(const MeshLevel& coarse, const DofMap& coarse_dofs,
                        const MeshLevel& fine, const DofMap& fine_dofs);

/// Natural embedding of the P1 space into the CR space on the same mesh: the
/// CR value on a facet is the mean of its vertex values, so every nonzero is
/// exactly 1/dim.
SparseMatrix inclusion_cr(const MeshLevel& mesh, const DofMap& p1_dofs, const DofMap& cr_dofs);

/// max |P^T A_fine P - A_coarse|
double galerkin_check(const SparseMatrix& a_fine, const SparseMatrix& p, const SparseMatrix& a_coarse);

} // namespace mgcr

#endif // MGCR_TRANSFER_HPP
