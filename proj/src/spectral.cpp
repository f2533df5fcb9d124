#include "mgcr/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <vector>

namespace mgcr {

std::string to_string(SpectrumMethod m)
{
  return m == SpectrumMethod::Dense ? "dense" : "iterative";
}

double SpectrumReport::eigenvalue(int k) const
{
  if (k < 0 || k >= eigenvalues.size())
    throw std::out_of_range("SpectrumReport: eigenvalue index " + std::to_string(k) + " not available");
  return eigenvalues[k];
}

double SpectrumReport::effective_condition(int m) const
{
  return lambda_max / eigenvalue(m);
}

Vector random_vector(Eigen::Index n, std::uint64_t seed)
{
  std::mt19937_64 gen(seed);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v[i] = static_cast<double>(gen() >> 11) * 0x1.0p-52 - 1.0;
  return v;
}

SpectrumReport spectrum_dense(const SparseMatrix& a, const LinearOperator& b, Eigen::Index size_cap)
{
  const Eigen::Index n = a.rows();
  if (n == 0) throw std::invalid_argument("spectrum_dense: empty operator");
  if (n > size_cap)
    throw SizeCapError("spectrum_dense: " + std::to_string(n) + " unknowns exceed the dense cap of " +
                       std::to_string(size_cap) + "; use the iterative method");
  const DenseMatrix ad(a);
  DenseMatrix ba(n, n);
  for (Eigen::Index j = 0; j < n; ++j) ba.col(j) = b(ad.col(j));

  // BA is self-adjoint in the A inner product, so A(BA) is symmetric.
  DenseMatrix aba = ad * ba;
  aba = (0.5 * (aba + aba.transpose())).eval();
  Eigen::GeneralizedSelfAdjointEigenSolver<DenseMatrix> es(aba, ad, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("spectrum_dense: eigensolver failed");

  SpectrumReport rep;
  rep.method = SpectrumMethod::Dense;
  rep.eigenvalues = es.eigenvalues();
  rep.lambda_min = rep.eigenvalues[0];
  rep.lambda_max = rep.eigenvalues[n - 1];
  rep.steps = static_cast<int>(n);
  return rep;
}

SpectrumReport spectrum_iterative(const SparseMatrix& a, const LinearOperator& b, const LanczosOptions& opts)
{
  const Eigen::Index n = a.rows();
  if (n == 0) throw std::invalid_argument("spectrum_iterative: empty operator");
  if (opts.n_small < 1) throw std::invalid_argument("spectrum_iterative: n_small must be positive");
  const int cap = static_cast<int>(std::min<Eigen::Index>(opts.max_steps, n));

  auto a_norm = [&](const Vector& x) { return std::sqrt(std::max(0.0, x.dot(a * x))); };

  std::vector<Vector> basis;
  std::vector<double> alpha, beta;
  Vector v = random_vector(n, opts.seed);
  v /= a_norm(v);
  basis.push_back(v);

  SpectrumReport rep;
  rep.method = SpectrumMethod::Iterative;
  rep.converged = false;

  // Tracked Ritz values at the previous check, for the stagnation test.
  std::vector<double> previous;

  auto evaluate = [&](bool final_check) {
    const auto k = static_cast<Eigen::Index>(alpha.size());
    const Vector diag = Eigen::Map<const Vector>(alpha.data(), k);
    const Vector off = Eigen::Map<const Vector>(beta.data(), k - 1);
    Vector theta;
    DenseMatrix s;
    if (k == 1) {
      theta = diag;
      s = DenseMatrix::Ones(1, 1);
    } else {
      Eigen::SelfAdjointEigenSolver<DenseMatrix> es;
      es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
      theta = es.eigenvalues();
      s = es.eigenvectors();
    }
    const double tail = beta.size() == alpha.size() ? beta.back() : 0.0;
    bool ok = true;
    const int want = static_cast<int>(std::min<Eigen::Index>(opts.n_small, k));
    std::vector<Eigen::Index> idx;
    for (int i = 0; i < want; ++i) idx.push_back(i);
    if (k - 1 >= want) idx.push_back(k - 1);
    std::vector<double> current;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      const Eigen::Index i = idx[j];
      const double res = std::abs(tail * s(k - 1, i));
      double gap = std::numeric_limits<double>::infinity();
      if (i > 0) gap = std::min(gap, theta[i] - theta[i - 1]);
      if (i + 1 < k) gap = std::min(gap, theta[i + 1] - theta[i]);
      const double bound = std::min(res, res * res / gap);
      const double target = opts.tolerance * std::abs(theta[i]);
      // Clustered Ritz values have a poor residual bound long after their
      // values have settled, so a stagnant value also counts.
      const bool settled = previous.size() == idx.size() && std::abs(theta[i] - previous[j]) <= target;
      if (!(bound <= target || settled)) ok = false;
      current.push_back(theta[i]);
    }
    previous = current;
    if (ok || final_check) {
      rep.eigenvalues = theta.head(want);
      rep.lambda_min = theta[0];
      rep.lambda_max = theta[k - 1];
      rep.steps = static_cast<int>(k);
      rep.converged = ok && want == opts.n_small;
    }
    return ok;
  };

  int next_check = std::max(1, opts.check_every);
  for (int step = 0; step < cap; ++step) {
    const Vector& vk = basis.back();
    const Vector u = a * vk;
    Vector w = b(u);
    const double ak = w.dot(u);
    w -= ak * vk;
    if (!beta.empty()) w -= beta.back() * basis[basis.size() - 2];
    alpha.push_back(ak);
    for (int pass = 0; pass < 2; ++pass) {
      const Vector aw = a * w;
      for (const Vector& q : basis) w -= q.dot(aw) * q;
    }
    const double bk = a_norm(w);
    const bool exhausted = !(bk > 1e-12 * std::abs(ak)) || step + 1 == cap;
    if (!exhausted) beta.push_back(bk);
    if (exhausted) {
      // Invariant subspace found: the Ritz values are exact eigenvalues.
      if (!(bk > 1e-12 * std::abs(ak))) {
        beta.push_back(0.0);
        evaluate(true);
        rep.converged = rep.eigenvalues.size() == std::min<Eigen::Index>(opts.n_small, n);
      } else {
        beta.push_back(bk);
        evaluate(true);
      }
      return rep;
    }
    if (step + 1 >= next_check) {
      if (evaluate(false)) return rep;
      next_check = step + 1 + std::max(opts.check_every, (step + 1) / 10);
    }
    basis.push_back(w / bk);
  }
  return rep;
}

SpectrumReport spectrum_auto(const SparseMatrix& a, const LinearOperator& b, const LanczosOptions& opts,
                             Eigen::Index size_cap)
{
  if (a.rows() <= size_cap) return spectrum_dense(a, b, size_cap);
  return spectrum_iterative(a, b, opts);
}

RhoEstimate estimate_rho(const MgHierarchy& mg, const RhoOptions& opts)
{
  const SparseMatrix& a = mg.finest_operator();
  Vector u = random_vector(a.rows(), opts.seed);
  double norm = energy_norm(a, u);
  u /= norm;

  RhoEstimate est;
  std::vector<double> ratios;
  auto tail_mean = [&]() {
    const std::size_t k = std::min<std::size_t>(5, ratios.size());
    double log_sum = 0.0;
    for (std::size_t i = ratios.size() - k; i < ratios.size(); ++i) log_sum += std::log(ratios[i]);
    return std::exp(log_sum / static_cast<double>(k));
  };

  for (int step = 0; step < opts.max_steps; ++step) {
    u -= mg.apply(a * u);
    norm = energy_norm(a, u);
    est.steps = step + 1;
    if (!(norm > 1e-13)) {
      // Error collapsed to roundoff before the ratios settled.
      est.upper_bound = true;
      est.rho = norm;
      return est;
    }
    ratios.push_back(norm);
    u /= norm;
    if (ratios.size() >= 6) {
      const double r1 = ratios[ratios.size() - 1];
      const double r0 = ratios[ratios.size() - 2];
      if (std::abs(r1 - r0) < opts.stabilization * std::max(1.0 - r1, 1e-12)) {
        est.stabilized = true;
        break;
      }
    }
  }
  est.rho = tail_mean();
  return est;
}

void write_eigenvalues_csv(std::ostream& os, const Vector& eigenvalues)
{
  os << "index,lambda\n" << std::setprecision(17);
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) os << i << ',' << eigenvalues[i] << '\n';
}

} // namespace mgcr
