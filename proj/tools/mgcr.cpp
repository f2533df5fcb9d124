// mgcr: multigrid V-cycle experiments for Crouzeix-Raviart discretizations
// of jump-coefficient diffusion problems.
//
//   mgcr table    --dim 2 --levels 4 --eps 1,1e-1,1e-2 --out table.csv
//   mgcr rate     --dim 3 --levels 3 --pre 2 --post 2 --eps 1,1e-2
//   mgcr spectrum --dim 2 --levels 4 --eps 1e-5 --out eig.csv
//   mgcr solve    --dim 3 --levels 2 --eps 1e-3
//
// Exit status: 0 success, 1 if any cell failed, 2 on a configuration error.

#include "mgcr/experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::vector<double> parse_list(const std::string& text)
{
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw mgcr::ConfigError("bad number in --eps: " + item);
    out.push_back(v);
  }
  return out;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Multigrid V-cycle for Crouzeix-Raviart discretizations with jump coefficients"};
  app.require_subcommand(1);

  int dim = 2;
  int levels = 0;
  std::string eps = "1";
  std::optional<int> pre, post, maxit;
  std::optional<double> tol;
  std::string m = "auto";
  std::uint64_t seed = 1;
  std::string out;
  std::string method = "auto";
  long dense_cap = static_cast<long>(mgcr::kDenseSpectrumCap);
  int n_small = 0;
  bool exact = false;
  int rho_steps = 200;
  std::string rhs = "one";

  struct Sub
  {
    const char* name;
    const char* help;
    mgcr::Mode mode;
  };
  const Sub subs[] = {
      {"table", "condition numbers, PCG iterations and spectra per (eps, level)", mgcr::Mode::Table},
      {"rate", "V-cycle convergence rate per (eps, level)", mgcr::Mode::Rate},
      {"spectrum", "eigenvalues of BA for one (eps, level)", mgcr::Mode::Spectrum},
      {"solve", "PCG solve with f = 1 at the finest level", mgcr::Mode::Solve},
  };
  mgcr::Mode mode = mgcr::Mode::Table;
  for (const Sub& s : subs) {
    CLI::App* sc = app.add_subcommand(s.name, s.help);
    sc->add_option("--dim", dim, "space dimension")->check(CLI::IsMember({2, 3}));
    sc->add_option("--levels", levels, "finest level L (table/rate sweep 0..L)");
    sc->add_option("--eps", eps, "comma separated background coefficients");
    sc->add_option("--pre", pre, "pre-smoothing sweeps (default 1 in 2D, 5 in 3D)");
    sc->add_option("--post", post, "post-smoothing sweeps (default 1 in 2D, 5 in 3D)");
    sc->add_option("--tol", tol, "PCG relative residual tolerance (default 1e-7 in 2D, 1e-12 in 3D)");
    sc->add_option("--maxit", maxit, "PCG iteration cap");
    sc->add_option("--m", m, "index m of the effective condition number, or 'auto'");
    sc->add_option("--seed", seed, "seed for random start vectors");
    sc->add_option("--out", out, "output CSV path (stdout when omitted)");
    sc->add_option("--method", method, "spectrum method")->check(CLI::IsMember({"auto", "dense", "iterative"}));
    sc->add_option("--dense-cap", dense_cap, "largest size for the dense spectrum");
    sc->add_option("--nsmall", n_small, "smallest eigenvalues kept by the iterative spectrum");
    sc->add_option("--rho-steps", rho_steps, "iteration cap of the rate estimator");
    sc->add_option("--rhs", rhs, "PCG load: one (f = 1) or linear (f = 1 + x + 2y + 3z)")
        ->check(CLI::IsMember({"one", "linear"}));
    sc->add_flag("--exact", exact, "use B = A^{-1} (debugging)");
    sc->callback([&mode, s] { mode = s.mode; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  mgcr::ExperimentConfig cfg;
  try {
    cfg = mgcr::ExperimentConfig::defaults_for(dim);
    cfg.mode = mode;
    cfg.max_level = levels;
    cfg.epsilons = parse_list(eps);
    if (pre) cfg.pre_sweeps = *pre;
    if (post) cfg.post_sweeps = *post;
    if (tol) cfg.tol = *tol;
    if (maxit) cfg.maxit = *maxit;
    if (m != "auto") {
      std::size_t used = 0;
      cfg.m = std::stoi(m, &used);
      if (used != m.size()) throw mgcr::ConfigError("--m must be an integer or 'auto'");
    }
    cfg.seed = seed;
    cfg.spectrum = method == "dense"       ? mgcr::SpectrumChoice::Dense
                   : method == "iterative" ? mgcr::SpectrumChoice::Iterative
                                           : mgcr::SpectrumChoice::Auto;
    cfg.dense_cap = dense_cap;
    cfg.n_small = n_small;
    cfg.exact_preconditioner = exact;
    cfg.rho_max_steps = rho_steps;
    cfg.rhs = rhs == "linear" ? mgcr::LoadKind::Linear : mgcr::LoadKind::Constant;
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "mgcr: " << e.what() << '\n';
    return 2;
  }

  std::ofstream file;
  if (!out.empty()) {
    file.open(out);
    if (!file) {
      std::cerr << "mgcr: cannot open " << out << '\n';
      return 2;
    }
  }
  std::ostream& os = out.empty() ? std::cout : file;

  try {
    int failures = 0;
    switch (cfg.mode) {
    case mgcr::Mode::Table: failures = mgcr::run_table(cfg, os); break;
    case mgcr::Mode::Rate: failures = mgcr::run_rate(cfg, os); break;
    case mgcr::Mode::Spectrum: failures = mgcr::run_spectrum(cfg, os); break;
    case mgcr::Mode::Solve: failures = mgcr::run_solve(cfg, os); break;
    }
    return failures == 0 ? 0 : 1;
  } catch (const mgcr::ConfigError& e) {
    std::cerr << "mgcr: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "mgcr: " << e.what() << '\n';
    return 1;
  }
}
