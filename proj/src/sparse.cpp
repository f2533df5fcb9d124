#include "mgcr/sparse.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace mgcr {

double symmetry_defect(const SparseMatrix& a)
{
  if (a.rows() != a.cols())
    throw std::invalid_argument("symmetry_defect: matrix is not square");
  const SparseMatrix t = a.transpose();
  const SparseMatrix diff = a - t;
  return max_abs(diff);
}

void write_matrix_market(std::ostream& os, const SparseMatrix& a)
{
  if (a.rows() != a.cols())
    throw std::invalid_argument("write_matrix_market: symmetric format needs a square matrix");
  long nnz = 0;
  for (int i = 0; i < a.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(a, i); it; ++it)
      if (it.col() <= i) ++nnz;

  os << "%%MatrixMarket matrix coordinate real symmetric\n";
  os << a.rows() << ' ' << a.cols() << ' ' << nnz << '\n';
  os << std::setprecision(17);
  for (int i = 0; i < a.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(a, i); it; ++it)
      if (it.col() <= i) os << i + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

void write_matrix_market(const std::string& path, const SparseMatrix& a)
{
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_matrix_market(os, a);
}

SparseMatrix read_matrix_market(std::istream& is)
{
  std::string line;
  if (!std::getline(is, line) || line.rfind("%%MatrixMarket", 0) != 0)
    throw std::runtime_error("read_matrix_market: missing banner");
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (object != "matrix" || format != "coordinate" || field != "real")
    throw std::runtime_error("read_matrix_market: only real coordinate matrices are supported");
  const bool symmetric = symmetry == "symmetric";
  if (!symmetric && symmetry != "general")
    throw std::runtime_error("read_matrix_market: unsupported symmetry '" + symmetry + "'");

  while (std::getline(is, line))
    if (!line.empty() && line[0] != '%') break;
  std::istringstream header(line);
  long rows = 0, cols = 0, nnz = 0;
  if (!(header >> rows >> cols >> nnz))
    throw std::runtime_error("read_matrix_market: bad size line");

  std::vector<Eigen::Triplet<double, int>> triplets;
  triplets.reserve(static_cast<std::size_t>(symmetric ? 2 * nnz : nnz));
  for (long k = 0; k < nnz; ++k) {
    long i = 0, j = 0;
    double v = 0;
    if (!(is >> i >> j >> v)) throw std::runtime_error("read_matrix_market: truncated entries");
    triplets.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1), v);
    if (symmetric && i != j) triplets.emplace_back(static_cast<int>(j - 1), static_cast<int>(i - 1), v);
  }
  SparseMatrix a(rows, cols);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  return a;
}

} // namespace mgcr
