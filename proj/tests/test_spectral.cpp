#include "mgcr/spectral.hpp"

#include <doctest.h>

#include <Eigen/Cholesky>

#include <sstream>

using namespace mgcr;

namespace {

MgConfig sweeps(int n)
{
  MgConfig c;
  c.pre_sweeps = c.post_sweeps = n;
  return c;
}

LinearOperator as_operator(const MgHierarchy& mg)
{
  return [&mg](const Vector& v) { return mg.apply(v); };
}

} // namespace

TEST_CASE("random vectors are reproducible and platform independent")
{
  const Vector a = random_vector(100, 42), b = random_vector(100, 42), c = random_vector(100, 43);
  CHECK(a == b);
  CHECK(a != c);
  CHECK(a.minCoeff() >= -1.0);
  CHECK(a.maxCoeff() < 1.0);
  // The 10000th output of a default-seeded mt19937_64 is fixed by the C++ standard.
  const Vector v = random_vector(10000, 5489);
  CHECK(v[9999] == static_cast<double>(9981545732273789042ULL >> 11) * 0x1.0p-52 - 1.0);
}

TEST_CASE("exact preconditioner gives a unit spectrum")
{
  const MeshLevel m = build_structured(DomainSpec::checkerboard_2d(1e-4), 8, 1);
  const SparseMatrix a = assemble(m, SpaceKind::CR).first;
  const Eigen::LLT<DenseMatrix> llt{DenseMatrix(a)};
  const LinearOperator inv = [&](const Vector& v) { return Vector(llt.solve(v)); };
  const SpectrumReport dense = spectrum_dense(a, inv);
  CHECK((dense.eigenvalues.array() - 1.0).abs().maxCoeff() < 1e-10);
  CHECK(dense.condition() == doctest::Approx(1.0));

  const SpectrumReport it = spectrum_iterative(a, inv);
  CHECK(it.lambda_min == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(it.lambda_max == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(it.steps == 1);
}

TEST_CASE("single-level hierarchy gives BA = I")
{
  // Forming BA costs about cond(A) * unit roundoff, so the bound is looser for large jumps.
  for (double eps : {1.0, 1e-5}) {
    const double tol = eps == 1.0 ? 1e-12 : 1e-9;
    for (const DomainSpec& spec : {DomainSpec::checkerboard_2d(eps), DomainSpec::checkerboard_3d(eps)}) {
      const MeshLevel m = build_structured(spec, spec.base_cells);
      const MgHierarchy mg({assemble(m, SpaceKind::CR).first}, {});
      const SpectrumReport rep = spectrum_dense(mg.finest_operator(), as_operator(mg));
      CAPTURE(eps);
      CHECK((rep.eigenvalues.array() - 1.0).abs().maxCoeff() <= tol);
      CHECK(estimate_rho(mg).rho < tol);
    }
  }
}

TEST_CASE("report accessors")
{
  const MgProblem p = setup(DomainSpec::checkerboard_2d(1e-5), 1, sweeps(1));
  const SpectrumReport rep = spectrum_dense(p.mg.finest_operator(), as_operator(p.mg));
  CHECK(rep.method == SpectrumMethod::Dense);
  CHECK(to_string(rep.method) == "dense");
  CHECK(rep.eigenvalues.size() == p.mg.size());
  for (Eigen::Index i = 1; i < rep.eigenvalues.size(); ++i) CHECK(rep.eigenvalues[i] >= rep.eigenvalues[i - 1]);
  CHECK(rep.lambda_min > 0.0);
  CHECK(rep.lambda_max <= 1.0 + 1e-10);
  CHECK(rep.effective_condition(0) == rep.condition());
  CHECK(rep.effective_condition(1) <= rep.condition());
  CHECK(rep.effective_condition(2) <= rep.effective_condition(1));
  CHECK_THROWS_AS(rep.eigenvalue(-1), std::out_of_range);
  CHECK_THROWS_AS(rep.eigenvalue(static_cast<int>(p.mg.size())), std::out_of_range);
  CHECK_THROWS_AS(spectrum_dense(p.mg.finest_operator(), as_operator(p.mg), 10), SizeCapError);
  CHECK(spectrum_auto(p.mg.finest_operator(), as_operator(p.mg), {}, 10).method == SpectrumMethod::Iterative);
  CHECK(spectrum_auto(p.mg.finest_operator(), as_operator(p.mg)).method == SpectrumMethod::Dense);
}

TEST_CASE("dense and iterative spectra agree")
{
  for (const DomainSpec& spec : {DomainSpec::checkerboard_2d(1e-5), DomainSpec::checkerboard_3d(1e-3)}) {
    const MgProblem p = setup(spec, spec.dim == 2 ? 2 : 0, sweeps(spec.dim == 2 ? 1 : 5));
    const SpectrumReport dense = spectrum_dense(p.mg.finest_operator(), as_operator(p.mg));
    LanczosOptions opts;
    opts.n_small = 3;
    opts.tolerance = 1e-9;
    const SpectrumReport it = spectrum_iterative(p.mg.finest_operator(), as_operator(p.mg), opts);
    CHECK(it.method == SpectrumMethod::Iterative);
    CHECK(it.converged);
    REQUIRE(it.eigenvalues.size() == 3);
    for (int k = 0; k < 3; ++k) CHECK(it.eigenvalue(k) == doctest::Approx(dense.eigenvalue(k)).epsilon(1e-6));
    CHECK(it.lambda_max == doctest::Approx(dense.lambda_max).epsilon(1e-6));
    CHECK(it.steps < p.mg.size());

    const SpectrumReport again = spectrum_iterative(p.mg.finest_operator(), as_operator(p.mg), opts);
    CHECK(again.eigenvalues == it.eigenvalues);
  }
}

TEST_CASE("spectrum is invariant under scaling of the coefficient")
{
  const DomainSpec spec = DomainSpec::checkerboard_2d(1e-3);
  MeshHierarchy meshes = build_hierarchy(spec, 1);
  const MgProblem p = setup(meshes, sweeps(1));
  for (MeshLevel& m : meshes.levels) m.kappa *= 7.0;
  const MgProblem p7 = setup(meshes, sweeps(1));
  const SparseMatrix diff = p7.mg.finest_operator() - 7.0 * p.mg.finest_operator();
  CHECK(max_abs(diff) <= 1e-14 * max_abs(p7.mg.finest_operator()));
  const Vector e = spectrum_dense(p.mg.finest_operator(), as_operator(p.mg)).eigenvalues;
  const Vector e7 = spectrum_dense(p7.mg.finest_operator(), as_operator(p7.mg)).eigenvalues;
  CHECK(((e7 - e).array() / e.array()).abs().maxCoeff() <= 1e-8);
}

TEST_CASE("rate estimate matches the smallest eigenvalue")
{
  struct Case
  {
    DomainSpec spec;
    int levels;
    int sweeps;
  };
  const Case cases[] = {
      {DomainSpec::checkerboard_2d(1.0), 2, 2},  {DomainSpec::checkerboard_2d(1e-2), 1, 2},
      {DomainSpec::checkerboard_2d(1e-5), 1, 1}, {DomainSpec::checkerboard_3d(1.0), 0, 2},
      {DomainSpec::checkerboard_3d(1e-1), 0, 5}, {DomainSpec::checkerboard_3d(1e-4), 0, 5},
  };
  for (const Case& c : cases) {
    const MgProblem p = setup(c.spec, c.levels, sweeps(c.sweeps));
    const SpectrumReport rep = spectrum_dense(p.mg.finest_operator(), as_operator(p.mg));
    RhoOptions opts;
    opts.max_steps = 2000;
    const RhoEstimate rho = estimate_rho(p.mg, opts);
    CAPTURE(c.spec.dim);
    CAPTURE(c.spec.epsilon);
    CHECK(rho.stabilized);
    CHECK_FALSE(rho.upper_bound);
    CHECK(1.0 - rho.rho == doctest::Approx(rep.lambda_min).epsilon(0.02));
  }
}

TEST_CASE("eigenvalue CSV")
{
  std::ostringstream os;
  write_eigenvalues_csv(os, Eigen::Vector3d(0.125, 0.5, 1.0));
  CHECK(os.str() == "index,lambda\n0,0.125\n1,0.5\n2,1\n");
}
