#ifndef MGCR_MESH_HPP
#define MGCR_MESH_HPP

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace mgcr {

/// Thrown when a coefficient interface does not lie on grid lines of the
/// coarsest mesh.
class InterfaceResolutionError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Axis-aligned box; only the first `dim` components are meaningful.
struct Box
{
  std::array<double, 3> lo{0.0, 0.0, 0.0};
  std::array<double, 3> hi{1.0, 1.0, 1.0};
};

/// Box domain with piecewise constant coefficient: 1 inside the inclusions and
/// `epsilon` elsewhere.
struct DomainSpec
{
  int dim = 2;
  Box box;
  std::vector<Box> inclusions;
  double epsilon = 1.0;
  /// Cells per axis of the level-0 grid.
  int base_cells = 1;

  /// [-1,1]^2 with inclusions [-0.5,0]^2 and [0,0.5]^2, level-0 spacing 1/2.
  static DomainSpec checkerboard_2d(double epsilon);
  /// [0,1]^3 with inclusions [0.25,0.5]^3 and [0.5,0.75]^3, level-0 spacing 1/4.
  static DomainSpec checkerboard_3d(double epsilon);

  /// Throws std::invalid_argument on malformed input.
  void validate() const;
};

/// One structured simplicial mesh.
///
/// Vertices are numbered in lexicographic order of their coordinates (x
/// major, the last coordinate running fastest).
/// Facets (edges in 2D, faces in 3D) are the sorted vertex tuples, numbered in
/// lexicographic tuple order. `cell_facets(i, c)` is the facet of cell `c`
/// opposite its local vertex `i`.
struct MeshLevel
{
  int dim = 2;
  int level = 0;
  int cells_per_axis = 1;
  double h = 1.0;
  Box box;

  Eigen::MatrixXd vertices;    ///< dim x n_vertices
  Eigen::MatrixXi cells;       ///< (dim+1) x n_cells, positively oriented
  Eigen::MatrixXi facets;      ///< dim x n_facets, ascending vertex ids
  Eigen::MatrixXi cell_facets; ///< (dim+1) x n_cells
  std::vector<std::uint8_t> boundary_vertex;
  std::vector<std::uint8_t> boundary_facet;
  Eigen::VectorXd kappa;       ///< per cell
  Eigen::VectorXi subdomain_id; ///< 0 background, k+1 inside inclusion k

  int num_vertices() const { return static_cast<int>(vertices.cols()); }
  int num_cells() const { return static_cast<int>(cells.cols()); }
  int num_facets() const { return static_cast<int>(facets.cols()); }

  /// Id of the grid vertex with integer grid coordinates `idx`.
  int grid_vertex(const std::array<int, 3>& idx) const;

  /// dim x (dim+1) matrix of the vertex coordinates of cell `c`.
  Eigen::MatrixXd cell_coordinates(int c) const;
  Eigen::VectorXd barycenter(int c) const;
  /// Signed volume; positive for every cell of a valid mesh.
  double signed_volume(int c) const;
};

struct MeshHierarchy
{
  /// levels[l] has base_cells * 2^l cells per axis. The last level carries
  /// both the finest conforming space and the nonconforming space.
  std::vector<MeshLevel> levels;

  int finest() const { return static_cast<int>(levels.size()) - 1; }
};

/// Structured triangulation of the domain box: squares split along the
/// (1,1) diagonal in 2D, cubes split into the 6 Kuhn tetrahedra in 3D.
MeshLevel build_structured(const DomainSpec& spec, int cells_per_axis, int level = 0);

/// Levels 0..max_level, each generated independently at base_cells * 2^l.
MeshHierarchy build_hierarchy(const DomainSpec& spec, int max_level);

/// Number of facet-connected coefficient subdomains without a boundary facet.
int floating_subdomain_count(const DomainSpec& spec);
int floating_subdomain_count(const MeshLevel& mesh);

/// max kappa / min kappa over the cells.
double jump_ratio(const MeshLevel& mesh);

/// Plain text dump, header `mgcr-mesh v1 dim=<d> level=<l>`.
void write_mesh(std::ostream& os, const MeshLevel& mesh);

} // namespace mgcr

#endif // MGCR_MESH_HPP
