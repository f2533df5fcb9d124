#include "mgcr/experiment.hpp"

#include "mgcr/assembly.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>

namespace mgcr {

namespace {

std::string num(double x)
{
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

std::string sanitize(std::string s)
{
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

MgConfig mg_config(const ExperimentConfig& cfg)
{
  MgConfig mc;
  mc.pre_sweeps = cfg.pre_sweeps;
  mc.post_sweeps = cfg.post_sweeps;
  return mc;
}

struct Cell
{
  MeshHierarchy meshes;
  std::shared_ptr<const MgProblem> problem;
  LinearOperator precond;

  const MgHierarchy& mg() const { return problem->mg; }
  const DofMap& finest_dofs() const { return problem->dofs.back(); }
};

Cell make_cell(const ExperimentConfig& cfg, double epsilon, int level)
{
  Cell cell;
  cell.meshes = build_hierarchy(domain_for(cfg.dim, epsilon), level);
  auto problem = std::make_shared<const MgProblem>(setup(cell.meshes, mg_config(cfg)));
  cell.problem = problem;
  if (cfg.exact_preconditioner) {
    using ColMajor = Eigen::SparseMatrix<double>;
    auto solver = std::make_shared<Eigen::SimplicialLLT<ColMajor>>(ColMajor(problem->mg.finest_operator()));
    if (solver->info() != Eigen::Success) throw FactorizationError("sparse Cholesky of the CR operator failed");
    cell.precond = [solver](const Vector& g) { return Vector(solver->solve(g)); };
  } else {
    cell.precond = [problem](const Vector& g) { return problem->mg.apply(g); };
  }
  return cell;
}

SpectrumReport compute_spectrum(const ExperimentConfig& cfg, const SparseMatrix& a, const LinearOperator& b, int m)
{
  LanczosOptions lo;
  lo.seed = cfg.seed;
  lo.n_small = cfg.n_small > 0 ? cfg.n_small : m + 2;
  switch (cfg.spectrum) {
  case SpectrumChoice::Dense: return spectrum_dense(a, b, cfg.dense_cap);
  case SpectrumChoice::Iterative: return spectrum_iterative(a, b, lo);
  case SpectrumChoice::Auto: break;
  }
  return spectrum_auto(a, b, lo, cfg.dense_cap);
}

} // namespace

ExperimentConfig ExperimentConfig::defaults_for(int dim)
{
  ExperimentConfig c;
  c.dim = dim;
  c.pre_sweeps = c.post_sweeps = dim == 3 ? 5 : 1;
  c.tol = dim == 3 ? 1e-12 : 1e-7;
  return c;
}

void ExperimentConfig::validate() const
{
  if (dim != 2 && dim != 3) throw ConfigError("--dim must be 2 or 3");
  if (max_level < 0) throw ConfigError("--levels must be nonnegative");
  if (epsilons.empty()) throw ConfigError("--eps needs at least one value");
  for (double e : epsilons)
    if (!(e > 0.0)) throw ConfigError("--eps values must be positive");
  if (pre_sweeps < 0 || post_sweeps < 0) throw ConfigError("sweep counts must be nonnegative");
  if (!(tol > 0.0 && tol < 1.0)) throw ConfigError("--tol must lie in (0,1)");
  if (maxit < 1) throw ConfigError("--maxit must be positive");
  if (m && *m < 0) throw ConfigError("--m must be nonnegative");
  if (mode == Mode::Spectrum && epsilons.size() != 1) throw ConfigError("spectrum mode takes exactly one --eps");
}

DomainSpec domain_for(int dim, double epsilon)
{
  return dim == 3 ? DomainSpec::checkerboard_3d(epsilon) : DomainSpec::checkerboard_2d(epsilon);
}

Vector load_vector(const MeshLevel& mesh, const DofMap& dofs, LoadKind kind)
{
  if (kind == LoadKind::Constant) return assemble_load(mesh, dofs, [](const Eigen::VectorXd&) { return 1.0; });
  return assemble_load(mesh, dofs, [](const Eigen::VectorXd& x) {
    double v = 1.0;
    for (Eigen::Index a = 0; a < x.size(); ++a) v += static_cast<double>(a + 1) * x[a];
    return v;
  });
}

TableRow table_cell(const ExperimentConfig& cfg, double epsilon, int level)
{
  TableRow row;
  row.dim = cfg.dim;
  row.level = level;
  row.epsilon = epsilon;
  row.pre_sweeps = cfg.pre_sweeps;
  row.post_sweeps = cfg.post_sweeps;
  row.seed = cfg.seed;
  try {
    const DomainSpec spec = domain_for(cfg.dim, epsilon);
    row.m = cfg.m ? *cfg.m : floating_subdomain_count(spec);
    Cell cell = make_cell(cfg, epsilon, level);
    const MeshLevel& mesh = cell.meshes.levels.back();
    const SparseMatrix& a = cell.mg().finest_operator();
    row.h = mesh.h;
    row.n_dofs = a.rows();

    const Vector f = load_vector(mesh, cell.finest_dofs(), cfg.rhs);
    const SolveReport rep = pcg<double>([&](const Vector& v) { return Vector(a * v); }, cell.precond, f, cfg.tol,
                                        cfg.maxit);
    row.iters = rep.iterations;
    row.kappa_pcg = rep.condition_estimate;
    if (!rep.converged) row.error = "pcg did not converge";

    const SpectrumReport spec_rep = compute_spectrum(cfg, a, cell.precond, row.m);
    row.lambda_min = spec_rep.lambda_min;
    row.lambda_max = spec_rep.lambda_max;
    row.lambda_2 = spec_rep.eigenvalues.size() > 1 ? spec_rep.eigenvalues[1] : spec_rep.lambda_max;
    row.kappa = spec_rep.condition();
    row.kappa_eff = spec_rep.effective_condition(row.m);
    if (!spec_rep.converged && row.error.empty()) row.error = "spectrum not converged";

    RhoOptions ro;
    ro.seed = cfg.seed;
    ro.max_steps = cfg.rho_max_steps;
    row.rho = cfg.exact_preconditioner ? 0.0 : estimate_rho(cell.mg(), ro).rho;
  } catch (const std::exception& e) {
    row.error = sanitize(e.what());
  }
  return row;
}

RateRow rate_cell(const ExperimentConfig& cfg, double epsilon, int level)
{
  RateRow row;
  row.dim = cfg.dim;
  row.level = level;
  row.epsilon = epsilon;
  row.pre_sweeps = cfg.pre_sweeps;
  row.post_sweeps = cfg.post_sweeps;
  row.seed = cfg.seed;
  try {
    MeshHierarchy meshes = build_hierarchy(domain_for(cfg.dim, epsilon), level);
    const MgProblem problem = setup(meshes, mg_config(cfg));
    row.h = meshes.levels.back().h;
    row.n_dofs = problem.mg.size();
    RhoOptions ro;
    ro.seed = cfg.seed;
    ro.max_steps = cfg.rho_max_steps;
    row.rho = estimate_rho(problem.mg, ro);
  } catch (const std::exception& e) {
    row.error = sanitize(e.what());
  }
  return row;
}

SolveRow solve_cell(const ExperimentConfig& cfg, double epsilon, int level)
{
  SolveRow row;
  row.dim = cfg.dim;
  row.level = level;
  row.epsilon = epsilon;
  row.pre_sweeps = cfg.pre_sweeps;
  row.post_sweeps = cfg.post_sweeps;
  row.seed = cfg.seed;
  try {
    Cell cell = make_cell(cfg, epsilon, level);
    const MeshLevel& mesh = cell.meshes.levels.back();
    const SparseMatrix& a = cell.mg().finest_operator();
    row.h = mesh.h;
    row.n_dofs = a.rows();
    const Vector f = load_vector(mesh, cell.finest_dofs(), cfg.rhs);
    row.report = pcg<double>([&](const Vector& v) { return Vector(a * v); }, cell.precond, f, cfg.tol, cfg.maxit);
    if (!row.report.converged) row.error = "pcg did not converge";
  } catch (const std::exception& e) {
    row.error = sanitize(e.what());
  }
  return row;
}

SpectrumReport spectrum_cell(const ExperimentConfig& cfg, double epsilon, int level)
{
  Cell cell = make_cell(cfg, epsilon, level);
  const int m = cfg.m ? *cfg.m : floating_subdomain_count(domain_for(cfg.dim, epsilon));
  return compute_spectrum(cfg, cell.mg().finest_operator(), cell.precond, m);
}

int run_table(const ExperimentConfig& cfg, std::ostream& os)
{
  cfg.validate();
  int failures = 0;
  os << kTableHeader << '\n';
  for (double eps : cfg.epsilons)
    for (int level = 0; level <= cfg.max_level; ++level) {
      const TableRow r = table_cell(cfg, eps, level);
      if (!r.error.empty()) ++failures;
      os << r.dim << ',' << r.level << ',' << num(r.h) << ',' << num(r.epsilon) << ',' << r.n_dofs << ','
         << r.pre_sweeps << ',' << r.post_sweeps << ',' << r.iters << ',' << num(r.kappa) << ','
         << num(r.kappa_eff) << ',' << r.m << ',' << num(r.lambda_min) << ',' << num(r.lambda_2) << ','
         << num(r.lambda_max) << ',' << num(r.rho) << ',' << r.seed << ',' << r.error << '\n';
    }
  return failures;
}

int run_rate(const ExperimentConfig& cfg, std::ostream& os)
{
  cfg.validate();
  int failures = 0;
  os << kRateHeader << '\n';
  for (double eps : cfg.epsilons)
    for (int level = 0; level <= cfg.max_level; ++level) {
      const RateRow r = rate_cell(cfg, eps, level);
      if (!r.error.empty()) ++failures;
      os << r.dim << ',' << r.level << ',' << num(r.h) << ',' << num(r.epsilon) << ',' << r.n_dofs << ','
         << r.pre_sweeps << ',' << r.post_sweeps << ',' << num(r.rho.rho) << ',' << r.rho.steps << ','
         << (r.rho.upper_bound ? 1 : 0) << ',' << r.seed << ',' << r.error << '\n';
    }
  return failures;
}

int run_solve(const ExperimentConfig& cfg, std::ostream& os)
{
  cfg.validate();
  int failures = 0;
  os << kSolveHeader << '\n';
  for (double eps : cfg.epsilons) {
    const SolveRow r = solve_cell(cfg, eps, cfg.max_level);
    if (!r.error.empty()) ++failures;
    os << r.dim << ',' << r.level << ',' << num(r.h) << ',' << num(r.epsilon) << ',' << r.n_dofs << ','
       << r.pre_sweeps << ',' << r.post_sweeps << ',' << r.report.iterations << ','
       << num(r.report.relative_residual) << ',' << num(r.report.condition_estimate) << ','
       << (r.report.converged ? 1 : 0) << ',' << r.seed << ',' << r.error << '\n';
  }
  return failures;
}

int run_spectrum(const ExperimentConfig& cfg, std::ostream& os)
{
  cfg.validate();
  Cell cell = make_cell(cfg, cfg.epsilons.front(), cfg.max_level);
  const SparseMatrix& a = cell.mg().finest_operator();
  const int m = cfg.m ? *cfg.m : floating_subdomain_count(domain_for(cfg.dim, cfg.epsilons.front()));
  const SpectrumReport rep = compute_spectrum(cfg, a, cell.precond, m);
  if (rep.method == SpectrumMethod::Dense) {
    write_eigenvalues_csv(os, rep.eigenvalues);
  } else {
    os << "index,lambda\n" << std::setprecision(17);
    for (Eigen::Index i = 0; i < rep.eigenvalues.size(); ++i) os << i << ',' << rep.eigenvalues[i] << '\n';
    os << a.rows() - 1 << ',' << rep.lambda_max << '\n';
  }
  return rep.converged ? 0 : 1;
}

} // namespace mgcr
