#ifndef MGCR_EXPERIMENT_HPP
#define MGCR_EXPERIMENT_HPP

#include "mgcr/krylov.hpp"
#include "mgcr/mesh.hpp"
#include "mgcr/multigrid.hpp"
#include "mgcr/spectral.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mgcr {

class ConfigError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

enum class Mode { Table, Rate, Spectrum, Solve };
enum class SpectrumChoice { Auto, Dense, Iterative };

/// Right-hand side of the PCG runs: f = 1, or f = 1 + x + 2y (+ 3z).
enum class LoadKind { Constant, Linear };

struct ExperimentConfig
{
  Mode mode = Mode::Table;
  int dim = 2;
  int max_level = 0;            ///< table/rate sweep levels 0..max_level; spectrum/solve use max_level
  std::vector<double> epsilons{1.0};
  int pre_sweeps = 1;
  int post_sweeps = 1;
  double tol = 1e-7;
  int maxit = 500;
  std::uint64_t seed = 1;
  std::optional<int> m;         ///< K_m index; floating subdomain count when empty
  SpectrumChoice spectrum = SpectrumChoice::Auto;
  Eigen::Index dense_cap = kDenseSpectrumCap;
  int n_small = 0;              ///< iterative spectrum: smallest eigenvalues kept (0: m + 2)
  bool exact_preconditioner = false; ///< B = A^{-1}, for debugging
  int rho_max_steps = 200;
  LoadKind rhs = LoadKind::Constant;

  /// Defaults for the checkerboard problems: 1 sweep and tol 1e-7 in 2D,
  /// 5 sweeps and tol 1e-12 in 3D.
  static ExperimentConfig defaults_for(int dim);
  void validate() const;
};

DomainSpec domain_for(int dim, double epsilon);

Vector load_vector(const MeshLevel& mesh, const DofMap& dofs, LoadKind kind);

/// One (epsilon, level) cell of the condition number study.
struct TableRow
{
  int dim = 2;
  int level = 0;
  double h = 0.0;
  double epsilon = 1.0;
  Eigen::Index n_dofs = 0;
  int pre_sweeps = 1;
  int post_sweeps = 1;
  int iters = 0;
  double kappa = 0.0;
  double kappa_eff = 0.0;
  int m = 0;
  double lambda_min = 0.0;
  double lambda_2 = 0.0;
  double lambda_max = 0.0;
  double rho = 0.0;
  double kappa_pcg = 0.0;
  std::uint64_t seed = 1;
  std::string error;
};

struct RateRow
{
  int dim = 2;
  int level = 0;
  double h = 0.0;
  double epsilon = 1.0;
  Eigen::Index n_dofs = 0;
  int pre_sweeps = 1;
  int post_sweeps = 1;
  RhoEstimate rho;
  std::uint64_t seed = 1;
  std::string error;
};

struct SolveRow
{
  int dim = 2;
  int level = 0;
  double h = 0.0;
  double epsilon = 1.0;
  Eigen::Index n_dofs = 0;
  int pre_sweeps = 1;
  int post_sweeps = 1;
  SolveReport report;
  std::uint64_t seed = 1;
  std::string error;
};

TableRow table_cell(const ExperimentConfig& cfg, double epsilon, int level);
RateRow rate_cell(const ExperimentConfig& cfg, double epsilon, int level);
SolveRow solve_cell(const ExperimentConfig& cfg, double epsilon, int level);
SpectrumReport spectrum_cell(const ExperimentConfig& cfg, double epsilon, int level);

/// Each writer emits a header and one row per (epsilon, level) in config
/// order and returns the number of cells that failed.
int run_table(const ExperimentConfig& cfg, std::ostream& os);
int run_rate(const ExperimentConfig& cfg, std::ostream& os);
int run_solve(const ExperimentConfig& cfg, std::ostream& os);
/// Single epsilon at max_level; writes `index,lambda`. Iterative spectra
/// list the smallest eigenvalues and the largest under its global index.
int run_spectrum(const ExperimentConfig& cfg, std::ostream& os);

inline constexpr const char* kTableHeader =
    "dim,level,h,epsilon,n_dofs,pre_sweeps,post_sweeps,iters,kappa,kappa_eff,m,lambda_min,lambda_2,lambda_max,rho,"
    "seed,error";
inline constexpr const char* kRateHeader =
    "dim,level,h,epsilon,n_dofs,pre_sweeps,post_sweeps,rho,rho_steps,rho_upper_bound,seed,error";
inline constexpr const char* kSolveHeader =
    "dim,level,h,epsilon,n_dofs,pre_sweeps,post_sweeps,iters,rel_residual,kappa_pcg,converged,seed,error";

} // namespace mgcr

#endif // MGCR_EXPERIMENT_HPP
