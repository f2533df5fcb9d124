#include "mgcr/mesh.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>

namespace mgcr {

namespace {

bool on_grid_line(double x, double lo, double spacing)
{
  const double t = (x - lo) / spacing;
  return std::abs(t - std::round(t)) <= 1e-9 * std::max(1.0, std::abs(t));
}

bool inside(const Box& b, const Eigen::VectorXd& p)
{
  for (int a = 0; a < p.size(); ++a)
    if (p[a] <= b.lo[a] || p[a] >= b.hi[a]) return false;
  return true;
}

// Kuhn paths: the simplex for permutation pi visits corner, +e_pi0, +e_pi1, ...
constexpr std::array<std::array<int, 3>, 6> kKuhnPermutations{{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
}};

struct FacetRecord
{
  std::array<int, 3> key;
  int cell;
  int local;
};

} // namespace

DomainSpec DomainSpec::checkerboard_2d(double epsilon)
{
  DomainSpec s;
  s.dim = 2;
  s.box = Box{{-1.0, -1.0, 0.0}, {1.0, 1.0, 0.0}};
  s.inclusions = {Box{{-0.5, -0.5, 0.0}, {0.0, 0.0, 0.0}}, Box{{0.0, 0.0, 0.0}, {0.5, 0.5, 0.0}}};
  s.epsilon = epsilon;
  s.base_cells = 4;
  return s;
}

DomainSpec DomainSpec::checkerboard_3d(double epsilon)
{
  DomainSpec s;
  s.dim = 3;
  s.box = Box{{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}};
  s.inclusions = {Box{{0.25, 0.25, 0.25}, {0.5, 0.5, 0.5}}, Box{{0.5, 0.5, 0.5}, {0.75, 0.75, 0.75}}};
  s.epsilon = epsilon;
  s.base_cells = 4;
  return s;
}

void DomainSpec::validate() const
{
  if (dim != 2 && dim != 3) throw std::invalid_argument("domain dimension must be 2 or 3");
  if (!(epsilon > 0.0)) throw std::invalid_argument("background coefficient must be positive");
  if (base_cells < 1) throw std::invalid_argument("base_cells must be at least 1");
  for (int a = 0; a < dim; ++a)
    if (!(box.hi[a] > box.lo[a])) throw std::invalid_argument("domain box has non-positive extent");
  for (const Box& inc : inclusions)
    for (int a = 0; a < dim; ++a)
      if (inc.lo[a] < box.lo[a] || inc.hi[a] > box.hi[a] || !(inc.hi[a] > inc.lo[a]))
        throw std::invalid_argument("inclusion box must be a nonempty subset of the domain");
}

int MeshLevel::grid_vertex(const std::array<int, 3>& idx) const
{
  const int np = cells_per_axis + 1;
  return dim == 2 ? idx[1] + np * idx[0] : idx[2] + np * (idx[1] + np * idx[0]);
}

Eigen::MatrixXd MeshLevel::cell_coordinates(int c) const
{
  Eigen::MatrixXd x(dim, dim + 1);
  for (int i = 0; i <= dim; ++i) x.col(i) = vertices.col(cells(i, c));
  return x;
}

Eigen::VectorXd MeshLevel::barycenter(int c) const
{
  return cell_coordinates(c).rowwise().mean();
}

double MeshLevel::signed_volume(int c) const
{
  const Eigen::MatrixXd x = cell_coordinates(c);
  Eigen::MatrixXd j(dim, dim);
  for (int i = 0; i < dim; ++i) j.col(i) = x.col(i + 1) - x.col(0);
  const double fact = dim == 2 ? 2.0 : 6.0;
  return j.determinant() / fact;
}

MeshLevel build_structured(const DomainSpec& spec, int cells_per_axis, int level)
{
  if (cells_per_axis < 1) throw std::invalid_argument("cells_per_axis must be at least 1");
  spec.validate();
  const int d = spec.dim;
  const int n = cells_per_axis;
  const int np = n + 1;

  std::array<double, 3> spacing{};
  for (int a = 0; a < d; ++a) spacing[a] = (spec.box.hi[a] - spec.box.lo[a]) / n;
  for (const Box& inc : spec.inclusions)
    for (int a = 0; a < d; ++a)
      if (!on_grid_line(inc.lo[a], spec.box.lo[a], spacing[a]) ||
          !on_grid_line(inc.hi[a], spec.box.lo[a], spacing[a]))
        throw InterfaceResolutionError("inclusion boundary does not lie on a grid line at " +
                                       std::to_string(n) + " cells per axis");

  MeshLevel m;
  m.dim = d;
  m.level = level;
  m.cells_per_axis = n;
  m.h = spacing[0];
  m.box = spec.box;

  const int nv = d == 2 ? np * np : np * np * np;
  m.vertices.resize(d, nv);
  m.boundary_vertex.assign(static_cast<std::size_t>(nv), 0);
  auto vid = [&](int i, int j, int k) { return d == 2 ? j + np * i : k + np * (j + np * i); };
  for (int k = 0; k < (d == 3 ? np : 1); ++k)
    for (int j = 0; j < np; ++j)
      for (int i = 0; i < np; ++i) {
        const int v = vid(i, j, k);
        const std::array<int, 3> idx{i, j, k};
        bool bnd = false;
        for (int a = 0; a < d; ++a) {
          m.vertices(a, v) = spec.box.lo[a] + idx[a] * spacing[a];
          bnd = bnd || idx[a] == 0 || idx[a] == n;
        }
        m.boundary_vertex[static_cast<std::size_t>(v)] = bnd ? 1 : 0;
      }

  const int cells_per_box = d == 2 ? 2 : 6;
  const int nboxes = d == 2 ? n * n : n * n * n;
  m.cells.resize(d + 1, cells_per_box * nboxes);
  int c = 0;
  for (int k = 0; k < (d == 3 ? n : 1); ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        if (d == 2) {
          const int v00 = vid(i, j, 0), v10 = vid(i + 1, j, 0);
          const int v01 = vid(i, j + 1, 0), v11 = vid(i + 1, j + 1, 0);
          m.cells.col(c++) << v00, v10, v11;
          m.cells.col(c++) << v00, v11, v01;
        } else {
          for (const auto& perm : kKuhnPermutations) {
            std::array<int, 3> p{i, j, k};
            m.cells(0, c) = vid(p[0], p[1], p[2]);
            for (int s = 0; s < 3; ++s) {
              ++p[static_cast<std::size_t>(perm[static_cast<std::size_t>(s)])];
              m.cells(s + 1, c) = vid(p[0], p[1], p[2]);
            }
            ++c;
          }
        }
      }

  for (int cc = 0; cc < m.num_cells(); ++cc) {
    const double vol = m.signed_volume(cc);
    if (vol == 0.0) throw std::logic_error("degenerate cell in structured mesh");
    if (vol < 0.0) std::swap(m.cells(d - 1, cc), m.cells(d, cc));
  }

  // Facets: sorted vertex tuples, numbered in lexicographic order.
  std::vector<FacetRecord> records;
  records.reserve(static_cast<std::size_t>(m.num_cells() * (d + 1)));
  for (int cc = 0; cc < m.num_cells(); ++cc)
    for (int i = 0; i <= d; ++i) {
      FacetRecord r{{-1, -1, -1}, cc, i};
      int s = 0;
      for (int q = 0; q <= d; ++q)
        if (q != i) r.key[static_cast<std::size_t>(s++)] = m.cells(q, cc);
      std::sort(r.key.begin(), r.key.begin() + d);
      records.push_back(r);
    }
  std::sort(records.begin(), records.end(), [](const FacetRecord& a, const FacetRecord& b) {
    if (a.key != b.key) return a.key < b.key;
    return a.cell < b.cell;
  });

  m.cell_facets.resize(d + 1, m.num_cells());
  std::vector<std::array<int, 3>> keys;
  std::vector<int> incidence;
  for (const FacetRecord& r : records) {
    if (keys.empty() || keys.back() != r.key) {
      keys.push_back(r.key);
      incidence.push_back(0);
    }
    ++incidence.back();
    m.cell_facets(r.local, r.cell) = static_cast<int>(keys.size()) - 1;
  }
  m.facets.resize(d, static_cast<Eigen::Index>(keys.size()));
  m.boundary_facet.assign(keys.size(), 0);
  for (std::size_t f = 0; f < keys.size(); ++f) {
    if (incidence[f] > 2) throw std::logic_error("facet shared by more than two cells");
    for (int a = 0; a < d; ++a) m.facets(a, static_cast<Eigen::Index>(f)) = keys[f][static_cast<std::size_t>(a)];
    m.boundary_facet[f] = incidence[f] == 1 ? 1 : 0;
  }

  m.kappa.resize(m.num_cells());
  m.subdomain_id.resize(m.num_cells());
  for (int cc = 0; cc < m.num_cells(); ++cc) {
    const Eigen::VectorXd b = m.barycenter(cc);
    m.kappa[cc] = spec.epsilon;
    m.subdomain_id[cc] = 0;
    for (std::size_t q = 0; q < spec.inclusions.size(); ++q)
      if (inside(spec.inclusions[q], b)) {
        m.kappa[cc] = 1.0;
        m.subdomain_id[cc] = static_cast<int>(q) + 1;
        break;
      }
  }
  return m;
}

MeshHierarchy build_hierarchy(const DomainSpec& spec, int max_level)
{
  if (max_level < 0) throw std::invalid_argument("max_level must be nonnegative");
  MeshHierarchy hier;
  hier.levels.reserve(static_cast<std::size_t>(max_level) + 1);
  for (int l = 0; l <= max_level; ++l)
    hier.levels.push_back(build_structured(spec, spec.base_cells << l, l));
  return hier;
}

int floating_subdomain_count(const MeshLevel& mesh)
{
  const int d = mesh.dim;
  std::vector<std::array<int, 2>> facet_cells(static_cast<std::size_t>(mesh.num_facets()), {-1, -1});
  for (int c = 0; c < mesh.num_cells(); ++c)
    for (int i = 0; i <= d; ++i) {
      auto& fc = facet_cells[static_cast<std::size_t>(mesh.cell_facets(i, c))];
      (fc[0] < 0 ? fc[0] : fc[1]) = c;
    }

  // Coefficient subdomains: cells grouped by inclusion membership.
  auto region = [&](int c) { return mesh.subdomain_id[c] != 0 ? 1 : 0; };
  std::vector<int> component(static_cast<std::size_t>(mesh.num_cells()), -1);
  int floating = 0;
  std::vector<int> stack;
  for (int seed = 0; seed < mesh.num_cells(); ++seed) {
    if (component[static_cast<std::size_t>(seed)] >= 0) continue;
    component[static_cast<std::size_t>(seed)] = seed;
    stack.assign(1, seed);
    bool touches_boundary = false;
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      for (int i = 0; i <= d; ++i) {
        const int f = mesh.cell_facets(i, c);
        if (mesh.boundary_facet[static_cast<std::size_t>(f)]) {
          touches_boundary = true;
          continue;
        }
        const auto& fc = facet_cells[static_cast<std::size_t>(f)];
        const int nb = fc[0] == c ? fc[1] : fc[0];
        if (component[static_cast<std::size_t>(nb)] < 0 && region(nb) == region(c)) {
          component[static_cast<std::size_t>(nb)] = seed;
          stack.push_back(nb);
        }
      }
    }
    if (!touches_boundary) ++floating;
  }
  return floating;
}

int floating_subdomain_count(const DomainSpec& spec)
{
  return floating_subdomain_count(build_structured(spec, spec.base_cells));
}

double jump_ratio(const MeshLevel& mesh)
{
  return mesh.kappa.maxCoeff() / mesh.kappa.minCoeff();
}

void write_mesh(std::ostream& os, const MeshLevel& mesh)
{
  os << "mgcr-mesh v1 dim=" << mesh.dim << " level=" << mesh.level << '\n';
  os << std::setprecision(17);
  os << "vertices " << mesh.num_vertices() << '\n';
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    for (int a = 0; a < mesh.dim; ++a) os << (a ? " " : "") << mesh.vertices(a, v);
    os << '\n';
  }
  os << "cells " << mesh.num_cells() << '\n';
  for (int c = 0; c < mesh.num_cells(); ++c) {
    for (int i = 0; i <= mesh.dim; ++i) os << (i ? " " : "") << mesh.cells(i, c);
    os << '\n';
  }
  os << "facets " << mesh.num_facets() << '\n';
  for (int f = 0; f < mesh.num_facets(); ++f) {
    for (int a = 0; a < mesh.dim; ++a) os << (a ? " " : "") << mesh.facets(a, f);
    os << '\n';
  }
  os << "kappa " << mesh.num_cells() << '\n';
  for (int c = 0; c < mesh.num_cells(); ++c) os << mesh.kappa[c] << '\n';
}

} // namespace mgcr
