#include "qcrb/povmopt.hpp"

#include "qcrb/error.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace qcrb {

namespace {

using Generators = std::vector<ComplexVector>;

std::mt19937_64 restart_rng(std::uint64_t seed, int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  return std::mt19937_64(seq);
}

ComplexVector gaussian_vector(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ComplexVector v(dim);
  for (int i = 0; i < dim; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = cplx(re, im);
  }
  return v;
}

double objective(const Generators& gens, const FamilyAtPoint& fp, const WeightMatrix& g,
                 int copies) {
  try {
    return copies * inner_value(povm_from_generators(gens), fp, g);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InfeasiblePovm || e.kind() == ErrorKind::SingularMatrix ||
        e.kind() == ErrorKind::DegenerateOutcome) {
      return std::numeric_limits<double>::infinity();
    }
    throw;
  }
}

struct RestartOutcome {
  double value = std::numeric_limits<double>::infinity();
  Generators gens;
  std::vector<double> trajectory;
};

RestartOutcome run_restart(const FamilyAtPoint& fp, const WeightMatrix& g, const SearchOptions& o,
                           int outcomes, int restart) {
  auto rng = restart_rng(o.seed, restart);
  const int dim = static_cast<int>(fp.dim());
  RestartOutcome out;
  for (int k = 0; k < outcomes; ++k) out.gens.push_back(gaussian_vector(dim, rng));
  out.value = objective(out.gens, fp, g, o.copies);
  out.trajectory.reserve(o.iters);

  double scale = o.step0;
  for (int sweep = 0; sweep < o.iters; ++sweep, scale *= o.step_decay) {
    double norm = 0.0;
    for (const auto& v : out.gens) norm += v.squaredNorm();
    norm = std::sqrt(norm / outcomes);
    for (int k = 0; k < outcomes; ++k) {
      Generators trial = out.gens;
      trial[k] += (scale * norm) * gaussian_vector(dim, rng);
      const double v = objective(trial, fp, g, o.copies);
      if (v < out.value) {
        out.value = v;
        out.gens = std::move(trial);
      }
    }
    out.trajectory.push_back(out.value);
  }
  return out;
}

}  // namespace

void Povm::validate() const {
  if (elements.empty()) throw Error(ErrorKind::Parameter, "POVM has no elements");
  const Eigen::Index n = dim();
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (const auto& m : elements) {
    if (m.dim() != n) throw Error(ErrorKind::Parameter, "POVM elements differ in dimension");
    const double lo = min_eigenvalue(m);
    if (lo < -kPovmPsdTol) {
      std::ostringstream os;
      os << "POVM element has eigenvalue " << lo;
      throw Error(ErrorKind::Parameter, os.str());
    }
    sum += m.mat();
  }
  const double dev = max_abs(ComplexMatrix(sum - ComplexMatrix::Identity(n, n)));
  if (dev > kPovmSumTol) {
    std::ostringstream os;
    os << "POVM elements sum to identity only within " << dev;
    throw Error(ErrorKind::Parameter, os.str());
  }
}

Povm povm_from_generators(const std::vector<ComplexVector>& vectors) {
  if (vectors.empty()) throw Error(ErrorKind::Parameter, "no generating vectors");
  const Eigen::Index dim = vectors.front().size();
  ComplexMatrix s = ComplexMatrix::Zero(dim, dim);
  for (const auto& v : vectors) {
    if (v.size() != dim) throw Error(ErrorKind::Parameter, "generating vectors differ in size");
    s += v * v.adjoint();
  }
  const ComplexMatrix root = mat_func(HermitianOperator::project(s), MatFunc::InvSqrt).mat();
  Povm povm;
  povm.elements.reserve(vectors.size());
  for (const auto& v : vectors) {
    const ComplexVector w = root * v;
    povm.elements.push_back(HermitianOperator::project(w * w.adjoint()));
  }
  return povm;
}

Povm random_povm(int dim, int m, std::uint64_t seed) {
  if (dim < 1 || m < dim) {
    std::ostringstream os;
    os << "random POVM needs at least dim = " << dim << " outcomes, got " << m;
    throw Error(ErrorKind::Parameter, os.str());
  }
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 10; ++attempt) {
    Generators gens;
    for (int k = 0; k < m; ++k) gens.push_back(gaussian_vector(dim, rng));
    try {
      return povm_from_generators(gens);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SingularMatrix) throw;
    }
  }
  throw Error(ErrorKind::SingularMatrix, "random POVM draw degenerate after 10 attempts");
}

double inner_value(const Povm& povm, const FamilyAtPoint& fp, const WeightMatrix& g) {
  if (g.dim() != fp.param_dim()) throw Error(ErrorKind::Parameter, "G dimension mismatch");
  const FisherMatrix jm = classical_fisher(povm, fp);
  RealMatrix inv;
  try {
    inv = sym_func(jm.real(), MatFunc::Inv);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingularMatrix) throw;
    throw Error(ErrorKind::InfeasiblePovm,
                std::string("classical Fisher matrix is singular (") + e.what() + ")");
  }
  return (g.mat() * inv).trace();
}

RealVector LocallyUnbiasedEstimator::mean(const FamilyAtPoint& fp) const {
  RealVector m = RealVector::Zero(fp.param_dim());
  for (std::size_t k = 0; k < povm.size(); ++k) {
    m += (povm.elements[k].mat() * fp.rho.mat()).trace().real() * values[k];
  }
  return m;
}

RealMatrix LocallyUnbiasedEstimator::jacobian(const FamilyAtPoint& fp) const {
  const int d = fp.param_dim();
  RealMatrix jac = RealMatrix::Zero(d, d);
  for (std::size_t k = 0; k < povm.size(); ++k) {
    for (int j = 0; j < d; ++j) {
      const double t = (povm.elements[k].mat() * fp.derivs[j].mat()).trace().real();
      jac.col(j) += t * values[k];
    }
  }
  return jac;
}

RealMatrix LocallyUnbiasedEstimator::covariance(const FamilyAtPoint& fp) const {
  const int d = fp.param_dim();
  const RealVector center = Eigen::Map<const RealVector>(theta0.data(), d);
  RealMatrix v = RealMatrix::Zero(d, d);
  for (std::size_t k = 0; k < povm.size(); ++k) {
    const double p = (povm.elements[k].mat() * fp.rho.mat()).trace().real();
    const RealVector dev = values[k] - center;
    v += p * dev * dev.transpose();
  }
  return v;
}

LocallyUnbiasedEstimator recover_estimator(const Povm& povm, const FamilyAtPoint& fp,
                                           const ParamPoint& theta0) {
  const int d = fp.param_dim();
  if (static_cast<int>(theta0.size()) != d) {
    throw Error(ErrorKind::Parameter, "theta0 dimension does not match the family");
  }
  const FisherMatrix jm = classical_fisher(povm, fp);
  RealMatrix inv;
  try {
    inv = sym_func(jm.real(), MatFunc::Inv);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingularMatrix) throw;
    throw Error(ErrorKind::InfeasiblePovm, "classical Fisher matrix is singular");
  }
  const RealVector center = Eigen::Map<const RealVector>(theta0.data(), d);
  LocallyUnbiasedEstimator est{povm, {}, theta0};
  est.values.reserve(povm.size());
  RealVector score(d);
  for (const auto& m : povm.elements) {
    const double p = (m.mat() * fp.rho.mat()).trace().real();
    if (p < kProbFloor) {
      est.values.push_back(center);
      continue;
    }
    for (int i = 0; i < d; ++i) score(i) = (m.mat() * fp.derivs[i].mat()).trace().real() / p;
    est.values.push_back(center + inv * score);
  }
  return est;
}

SearchResult optimize(const FamilyAtPoint& fp, const WeightMatrix& g, const ParamPoint& theta0,
                      const SearchOptions& opts) {
  if (opts.copies < 1) throw Error(ErrorKind::Parameter, "copies must be >= 1");
  const double log_cap = opts.copies * std::log2(static_cast<double>(fp.dim()));
  if (log_cap > 6.0 + 1e-12) {
    std::ostringstream os;
    os << opts.copies << " copies of a " << fp.dim() << "-dimensional system exceed the cap";
    throw Error(ErrorKind::Capacity, os.str());
  }
  if (opts.restarts < 1 || opts.iters < 0 || !(opts.step0 > 0.0) ||
      !(opts.step_decay > 0.0 && opts.step_decay <= 1.0)) {
    throw Error(ErrorKind::Parameter, "search options out of range");
  }
  const FamilyAtPoint ext = extend_iid(fp, opts.copies);
  const int dim = static_cast<int>(ext.dim());
  const int d = ext.param_dim();
  const int m = opts.outcomes > 0 ? opts.outcomes : (opts.copies == 1 ? 2 * d + 2 : 2 * dim + 2);
  if (m < d + 1 || m < dim) {
    std::ostringstream os;
    os << "need at least max(d + 1, dim) = " << std::max(d + 1, dim) << " outcomes, got " << m;
    throw Error(ErrorKind::Parameter, os.str());
  }

  std::vector<RestartOutcome> outcomes(opts.restarts);
  const int threads = std::max(
      1, std::min(opts.restarts, opts.threads > 0 ? opts.threads
                                                  : static_cast<int>(std::thread::hardware_concurrency())));
  if (threads == 1) {
    for (int r = 0; r < opts.restarts; ++r) outcomes[r] = run_restart(ext, g, opts, m, r);
  } else {
    std::vector<std::future<void>> jobs;
    for (int t = 0; t < threads; ++t) {
      jobs.push_back(std::async(std::launch::async, [&, t] {
        for (int r = t; r < opts.restarts; r += threads) outcomes[r] = run_restart(ext, g, opts, m, r);
      }));
    }
    for (auto& j : jobs) j.get();
  }

  int best = -1;
  int feasible = 0;
  for (int r = 0; r < opts.restarts; ++r) {
    if (!std::isfinite(outcomes[r].value)) continue;
    ++feasible;
    if (best < 0 || outcomes[r].value < outcomes[best].value) best = r;
  }
  if (best < 0) throw Error(ErrorKind::SearchFailure, "no restart found a feasible POVM");

  Povm povm = povm_from_generators(outcomes[best].gens);
  LocallyUnbiasedEstimator est = recover_estimator(povm, ext, theta0);
  return SearchResult{outcomes[best].value, std::move(povm), std::move(est), opts.copies, m,
                      opts.restarts, feasible, opts.iters, best, opts.seed, opts.step0,
                      opts.step_decay, std::move(outcomes[best].trajectory)};
}

Povm heterodyne_povm(int fock_dim, cplx center, double sigma, int grid_points) {
  if (grid_points < 2 || !(sigma > 0.0)) {
    throw Error(ErrorKind::Parameter, "heterodyne grid needs >= 2 points and sigma > 0");
  }
  const double half = 6.0 * sigma;
  const double step = 2.0 * half / grid_points;
  const double weight = step * step / std::numbers::pi;
  Povm povm;
  povm.elements.reserve(static_cast<std::size_t>(grid_points) * grid_points + 1);
  ComplexMatrix sum = ComplexMatrix::Zero(fock_dim, fock_dim);
  for (int i = 0; i < grid_points; ++i) {
    for (int j = 0; j < grid_points; ++j) {
      const cplx beta = center + cplx(-half + (i + 0.5) * step, -half + (j + 0.5) * step);
      const ComplexVector v = coherent_state(fock_dim, beta);
      ComplexMatrix e = weight * (v * v.adjoint());
      sum += e;
      povm.elements.push_back(HermitianOperator::project(e));
    }
  }
  povm.elements.push_back(
      HermitianOperator::project(ComplexMatrix(ComplexMatrix::Identity(fock_dim, fock_dim) - sum)));
  return povm;
}

}  // namespace qcrb
