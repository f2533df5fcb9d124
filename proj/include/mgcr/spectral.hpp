#ifndef MGCR_SPECTRAL_HPP
#define MGCR_SPECTRAL_HPP

#include "mgcr/multigrid.hpp"
#include "mgcr/sparse.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>

namespace mgcr {

using LinearOperator = std::function<Vector(const Vector&)>;

class SizeCapError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

enum class SpectrumMethod { Dense, Iterative };

std::string to_string(SpectrumMethod m);

/// Spectrum of the preconditioned operator BA.
///
/// For the dense method `eigenvalues` holds the whole spectrum; for the
/// iterative method it holds the requested number of smallest eigenvalues.
/// Both are ascending. `lambda_max` is always the largest eigenvalue.
struct SpectrumReport
{
  SpectrumMethod method = SpectrumMethod::Dense;
  Vector eigenvalues;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  bool converged = true;
  int steps = 0; ///< Lanczos steps (iterative) or operator applications (dense)

  double condition() const { return lambda_max / lambda_min; }
  /// lambda_max / lambda_{m+1}; equals condition() for m = 0.
  double effective_condition(int m) const;
  /// lambda_{k+1}, 0-based k.
  double eigenvalue(int k) const;
};

/// Random vector with entries in [-1, 1): the top 53 bits of successive
/// std::mt19937_64 outputs, so identical on every platform for a given seed.
Vector random_vector(Eigen::Index n, std::uint64_t seed);

inline constexpr Eigen::Index kDenseSpectrumCap = 3000;

/// Forms BA column by column and solves the generalized symmetric problem
/// (A B A) x = lambda A x, which has the spectrum of BA.
SpectrumReport spectrum_dense(const SparseMatrix& a, const LinearOperator& b,
                              Eigen::Index size_cap = kDenseSpectrumCap);

struct LanczosOptions
{
  int n_small = 2;
  std::uint64_t seed = 1;
  int max_steps = 800;
  double tolerance = 1e-7; ///< relative accuracy target of reported eigenvalues
  int check_every = 5;
};

/// Lanczos on BA in the A inner product with full reorthogonalization.
/// The n_small smallest and the largest Ritz values are accepted once each
/// has a residual bound below tolerance * theta, or has moved by less than
/// that since the previous check.
SpectrumReport spectrum_iterative(const SparseMatrix& a, const LinearOperator& b, const LanczosOptions& opts = {});

/// Dense below the size cap, iterative above it.
SpectrumReport spectrum_auto(const SparseMatrix& a, const LinearOperator& b, const LanczosOptions& opts = {},
                             Eigen::Index size_cap = kDenseSpectrumCap);

struct RhoEstimate
{
  double rho = std::numeric_limits<double>::quiet_NaN();
  int steps = 0;
  bool stabilized = false;
  bool upper_bound = false; ///< error vanished before the ratio settled
};

struct RhoOptions
{
  std::uint64_t seed = 1;
  int max_steps = 200;
  /// Stop once successive ratios differ by less than this times (1 - ratio).
  double stabilization = 1e-4;
};

/// Contraction factor of the stationary iteration u <- u + B(f - A u),
/// measured in the energy norm on f = 0 from a random start: geometric mean
/// of the last 5 step ratios.
RhoEstimate estimate_rho(const MgHierarchy& mg, const RhoOptions& opts = {});

/// `index,lambda` CSV, ascending, 0-based index.
void write_eigenvalues_csv(std::ostream& os, const Vector& eigenvalues);

} // namespace mgcr

#endif // MGCR_SPECTRAL_HPP
