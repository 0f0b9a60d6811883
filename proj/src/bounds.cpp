#include "qcrb/bounds.hpp"

#include "qcrb/error.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

namespace qcrb {

namespace {

constexpr cplx kI{0.0, 1.0};

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

RealMatrix inverse_sqrt(const FisherMatrix& sld) { return sym_func(sld.real(), MatFunc::InvSqrt); }

RealMatrix whitened_weight(const FisherMatrix& sld, const WeightMatrix& g) {
  if (sld.dim() != g.dim()) {
    std::ostringstream os;
    os << "weight matrix is " << g.dim() << "x" << g.dim() << " but the family has "
       << sld.dim() << " parameters";
    throw Error(ErrorKind::Parameter, os.str());
  }
  const RealMatrix jm = inverse_sqrt(sld);
  RealMatrix b = jm * g.mat() * jm;
  return 0.5 * (b + b.transpose());
}

std::optional<double> bloch_radius(const StateFamily& family, const ParamPoint& theta) {
  return std::visit(overloaded{[&](const QubitFull&) -> std::optional<double> { return theta.at(0); },
                               [&](const QubitPhiZero&) -> std::optional<double> { return theta.at(0); },
                               [](const QubitRFixed& k) -> std::optional<double> { return k.r0; },
                               [](const DisplacedThermal&) -> std::optional<double> {
                                 return std::nullopt;
                               }},
                    family.kind());
}

// ---- log-barrier ascent for the RLD oracle --------------------------------

struct BarrierProblem {
  RealVector gamma;              // eigenvalues of G on its support
  std::vector<std::pair<int, int>> pairs;
  RealVector c;                  // linear objective in antisymmetric coordinates

  int k() const { return static_cast<int>(gamma.size()); }

  Eigen::MatrixXcd matrix(const RealVector& a) const {
    Eigen::MatrixXcd m = gamma.cast<cplx>().asDiagonal();
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      auto [i, j] = pairs[p];
      m(i, j) += kI * a(p);
      m(j, i) -= kI * a(p);
    }
    return m;
  }

  std::optional<double> logdet(const RealVector& a) const {
    Eigen::LLT<Eigen::MatrixXcd> llt(matrix(a));
    if (llt.info() != Eigen::Success) return std::nullopt;
    double s = 0.0;
    for (int i = 0; i < k(); ++i) {
      const double d = llt.matrixLLT()(i, i).real();
      if (!(d > 0.0)) return std::nullopt;
      s += 2.0 * std::log(d);
    }
    return s;
  }
};

struct Centered {
  RealVector a;
  int steps;
  bool converged;
};

Centered center(const BarrierProblem& pb, RealVector a, double t, int budget) {
  const int np = static_cast<int>(pb.pairs.size());
  auto psi = [&](const RealVector& x) -> std::optional<double> {
    auto ld = pb.logdet(x);
    if (!ld) return std::nullopt;
    return t * pb.c.dot(x) + *ld;
  };
  int steps = 0;
  while (steps < budget) {
    const Eigen::MatrixXcd minv = pb.matrix(a).inverse();
    std::vector<Eigen::MatrixXcd> xs(np);
    RealVector grad(np);
    for (int p = 0; p < np; ++p) {
      auto [i, j] = pb.pairs[p];
      Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(pb.k(), pb.k());
      e(i, j) = kI;
      e(j, i) = -kI;
      xs[p] = minv * e;
      grad(p) = t * pb.c(p) + xs[p].trace().real();
    }
    Eigen::MatrixXd neg_hess(np, np);
    for (int p = 0; p < np; ++p) {
      for (int q = 0; q < np; ++q) neg_hess(p, q) = (xs[p] * xs[q]).trace().real();
    }
    const RealVector dir = neg_hess.ldlt().solve(grad);
    const double dec2 = grad.dot(dir);
    ++steps;
    if (!(dec2 >= 0.0) || 0.5 * dec2 < 1e-9) return {a, steps, true};
    const double base = *psi(a);
    double s = 1.0;
    bool moved = false;
    for (int h = 0; h < 60; ++h, s *= 0.5) {
      const RealVector trial = a + s * dir;
      auto v = psi(trial);
      if (v && *v >= base + 0.25 * s * dec2) {
        a = trial;
        // progress below rounding of the barrier value: centred as far as
        // double precision allows
        moved = *v - base > 1e-14 * (std::abs(base) + 1.0);
        break;
      }
    }
    if (!moved || 0.5 * dec2 < 1e-9) return {a, steps, true};
  }
  return {a, steps, false};
}

}  // namespace

// ---------------------------------------------------------------------------

WeightMatrix::WeightMatrix(RealMatrix g) : g_(std::move(g)) {
  if (g_.rows() != g_.cols() || g_.rows() == 0) {
    throw Error(ErrorKind::Parameter, "weight matrix must be square and non-empty");
  }
  if (!g_.allFinite()) throw Error(ErrorKind::Parameter, "weight matrix has non-finite entries");
  if (max_abs(RealMatrix(g_ - g_.transpose())) > kHermitianTol) {
    throw Error(ErrorKind::Parameter, "weight matrix must be symmetric");
  }
  g_ = 0.5 * (g_ + g_.transpose());
  const double lo = min_eigenvalue(g_);
  if (lo < -kPsdClamp) {
    std::ostringstream os;
    os << "weight matrix must be PSD, min eigenvalue " << lo;
    throw Error(ErrorKind::Parameter, os.str());
  }
}

WeightMatrix WeightMatrix::from_g(double g1, double g2, double g3) {
  RealMatrix g(2, 2);
  g << g1 + g2, g3, g3, g1 - g2;
  return WeightMatrix(g);
}

WeightMatrix WeightMatrix::identity(int d) { return WeightMatrix(RealMatrix::Identity(d, d)); }

bool WeightMatrix::positive_definite() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(g_), Eigen::EigenvaluesOnly);
  const RealVector ev = es.eigenvalues();
  return ev(0) > kSingularFloor * ev.cwiseAbs().maxCoeff();
}

WeightMatrix::Coords WeightMatrix::coords() const {
  if (dim() != 2) throw Error(ErrorKind::Parameter, "(g1, g2, g3) coordinates need a 2x2 G");
  return {0.5 * (g_(0, 0) + g_(1, 1)), 0.5 * (g_(0, 0) - g_(1, 1)), g_(0, 1)};
}

// ---------------------------------------------------------------------------

double rld_bound_closed(const FisherMatrix& rld, const WeightMatrix& g) {
  if (rld.dim() != g.dim()) throw Error(ErrorKind::Parameter, "G and RLD Fisher dimensions differ");
  const ComplexMatrix jinv = mat_func(HermitianOperator::project(rld.entries), MatFunc::Inv).mat();
  const RealMatrix re = jinv.real();
  const RealMatrix im = jinv.imag();
  const RealMatrix root = sym_func(g.mat(), MatFunc::Sqrt);
  const RealMatrix k = root * im * root;  // real antisymmetric
  const double first = (re * g.mat()).trace();
  return first + trace_abs(HermitianOperator::project(kI * k.cast<cplx>()));
}

OracleResult rld_bound_oracle(const FisherMatrix& rld, const WeightMatrix& g,
                              const OracleOptions& opts) {
  if (rld.dim() != g.dim()) throw Error(ErrorKind::Parameter, "G and RLD Fisher dimensions differ");
  const int d = g.dim();
  const ComplexMatrix jinv = mat_func(HermitianOperator::project(rld.entries), MatFunc::Inv).mat();
  const RealMatrix re = jinv.real();
  const RealMatrix im = jinv.imag();
  const double base = (re * g.mat()).trace();

  // G + iA >= 0 forces A to live on the support of G.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(g.mat()));
  const RealVector gev = es.eigenvalues();
  const double cut = 1e-12 * std::max(gev.cwiseAbs().maxCoeff(), 1e-300);
  std::vector<int> keep;
  for (int i = 0; i < d; ++i) {
    if (gev(i) > cut) keep.push_back(i);
  }
  const int k = static_cast<int>(keep.size());
  Eigen::MatrixXd basis(d, k);
  BarrierProblem pb;
  pb.gamma.resize(k);
  for (int i = 0; i < k; ++i) {
    basis.col(i) = es.eigenvectors().col(keep[i]);
    pb.gamma(i) = gev(keep[i]);
  }
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) pb.pairs.emplace_back(i, j);
  }
  const int np = static_cast<int>(pb.pairs.size());
  if (np == 0) return {base, RealMatrix::Zero(d, d), 0};

  // tr(J~^{-1} (G + iA)) = base - tr(Im(J~^{-1}) A); with A = P a P^T the
  // gradient in pair coordinate (i, j) is 2 * (P^T Im P)_ij.
  const Eigen::MatrixXd s_red = basis.transpose() * Eigen::MatrixXd(im) * basis;
  pb.c.resize(np);
  for (int p = 0; p < np; ++p) pb.c(p) = 2.0 * s_red(pb.pairs[p].first, pb.pairs[p].second);

  const double gmax = pb.gamma.maxCoeff();
  const double scale = std::abs(base) + pb.c.norm() * gmax;
  if (pb.c.norm() * gmax <= 1e-300) return {base, RealMatrix::Zero(d, d), 0};

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  double best = -std::numeric_limits<double>::infinity();
  RealVector best_a;
  int total_steps = 0;
  for (int start = 0; start < std::max(1, opts.starts); ++start) {
    RealVector a = RealVector::Zero(np);
    if (start > 0) {
      RealVector u(np);
      for (int p = 0; p < np; ++p) u(p) = normal(rng);
      u.normalize();
      double lo = 0.0, hi = gmax;
      while (pb.logdet(hi * u)) hi *= 2.0;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (pb.logdet(mid * u) ? lo : hi) = mid;
      }
      a = 0.5 * lo * u;
    }
    double t = static_cast<double>(k) / (pb.c.norm() * gmax);
    int steps = 0;
    bool ok = true;
    // Duality gap certified by the last centred point.
    double certified = std::numeric_limits<double>::infinity();
    while (static_cast<double>(k) / t > 1e-10 * scale) {
      const Centered c = center(pb, a, t, opts.max_iters - steps);
      steps += c.steps;
      a = c.a;
      const double v = base + pb.c.dot(a);
      if (v > best) {
        best = v;
        best_a = a;
      }
      if (!c.converged || steps >= opts.max_iters) {
        // Near the boundary rounding can stall the last rounds; a gap already
        // certified below 1e-8 relative is as good as we can do.
        ok = certified <= 1e-8 * scale;
        break;
      }
      certified = static_cast<double>(k) / t;
      t *= 20.0;
    }
    total_steps += steps;
    if (!ok) {
      std::ostringstream os;
      os << "barrier ascent did not converge within " << opts.max_iters << " Newton steps";
      throw OracleFailure(os.str(), best);
    }
  }

  Eigen::MatrixXd a_red = Eigen::MatrixXd::Zero(k, k);
  for (int p = 0; p < np; ++p) {
    auto [i, j] = pb.pairs[p];
    a_red(i, j) = best_a(p);
    a_red(j, i) = -best_a(p);
  }
  return {best, RealMatrix(basis * a_red * basis.transpose()), total_steps};
}

AttainableBound qubit_attainable_C(const FisherMatrix& sld, const WeightMatrix& g) {
  const RealMatrix root = sym_func(whitened_weight(sld, g), MatFunc::Sqrt);
  const double tr = root.trace();
  AttainableBound out{tr * tr, std::nullopt};
  if (tr > 0.0) out.optimal_w = RealMatrix(root / tr);
  return out;
}

double rfixed_asymptotic(double r0, const FisherMatrix& sld, const WeightMatrix& g) {
  if (g.dim() != 2) throw Error(ErrorKind::Parameter, "r-fixed family takes a 2x2 G");
  const RealMatrix b = whitened_weight(sld, g);
  return b.trace() + 2.0 * r0 * std::sqrt(std::max(b.determinant(), 0.0));
}

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::ClosedForm: return "closed-form";
    case Provenance::Oracle: return "oracle";
    case Provenance::PaperClaim: return "paper-claim";
    case Provenance::NotAvailable: return "not-available";
  }
  return "not-available";
}

Provenance provenance_from_string(const std::string& s) {
  for (auto p : {Provenance::ClosedForm, Provenance::Oracle, Provenance::PaperClaim,
                 Provenance::NotAvailable}) {
    if (s == to_string(p)) return p;
  }
  throw Error(ErrorKind::Parameter, "unknown provenance '" + s + "'");
}

BoundValue asymptotic_C_A(const StateFamily& family, const FisherMatrix& sld,
                          const std::optional<FisherMatrix>& rld, const WeightMatrix& g) {
  if (sld.dim() == 1) {
    const double j = sld.entries(0, 0).real();
    if (!(j > 0.0)) throw Error(ErrorKind::SingularMatrix, "zero Fisher information");
    return {g.mat()(0, 0) / j, Provenance::ClosedForm};
  }
  auto via_rld = [&]() -> BoundValue {
    if (!rld) return {std::nullopt, Provenance::NotAvailable};
    return {rld_bound_closed(*rld, g), Provenance::PaperClaim};
  };
  return std::visit(
      overloaded{[&](const QubitFull&) { return via_rld(); },
                 [&](const QubitRFixed& k) {
                   return BoundValue{rfixed_asymptotic(k.r0, sld, g), Provenance::ClosedForm};
                 },
                 [&](const QubitPhiZero&) {
                   const RealMatrix jinv = sym_func(sld.real(), MatFunc::Inv);
                   return BoundValue{(jinv * g.mat()).trace(), Provenance::PaperClaim};
                 },
                 [&](const DisplacedThermal&) { return via_rld(); }},
      family.kind());
}

bool ordering_holds(const BoundValue& c, const BoundValue& c_a, const BoundValue& c_r) {
  if (c.value && c_a.value && *c.value < *c_a.value - kOrderingTol) return false;
  if (c_a.value && c_r.value && *c_a.value < *c_r.value - kOrderingTol) return false;
  if (c.value && c_r.value && *c.value < *c_r.value - kOrderingTol) return false;
  return true;
}

BoundReport compute_bounds(const StateFamily& family, const ParamPoint& theta0,
                           const WeightMatrix& g) {
  if (g.dim() != family.param_dim()) {
    std::ostringstream os;
    os << family.name() << " needs a " << family.param_dim() << "x" << family.param_dim()
       << " weight matrix";
    throw Error(ErrorKind::Parameter, os.str());
  }
  const FamilyAtPoint fp = eval_derivs(family, theta0);
  FisherMatrix sld = sld_fisher(fp);
  std::optional<FisherMatrix> rld;
  const auto radius = bloch_radius(family, theta0);
  if (!radius || *radius <= kRldRadiusCap) rld = rld_fisher(fp);

  BoundReport rep{family, theta0, g, sld, rld, {}, {}, {}, true};
  if (rld) rep.c_r = {rld_bound_closed(*rld, g), Provenance::ClosedForm};
  rep.c_a = asymptotic_C_A(family, sld, rld, g);
  if (family.is_qubit()) {
    rep.c = {qubit_attainable_C(sld, g).value, Provenance::ClosedForm};
  } else {
    rep.c = {rep.c_r.value, rep.c_r.value ? Provenance::PaperClaim : Provenance::NotAvailable};
  }
  rep.ordering_ok = ordering_holds(rep.c, rep.c_a, rep.c_r);
  return rep;
}

// ---------------------------------------------------------------------------

const char* to_string(FrontierKind kind) {
  switch (kind) {
    case FrontierKind::RFixedSingle: return "r-fixed-single";
    case FrontierKind::RFixedAsymptotic: return "r-fixed-asymptotic";
    case FrontierKind::FullAsymptotic: return "full-asymptotic";
    case FrontierKind::FullSingleW: return "full-single-w";
  }
  return "?";
}

namespace {

void require_radius(double r) {
  if (!(r > 0.0 && r <= 1.0)) {
    std::ostringstream os;
    os << "frontier radius " << r << " outside (0, 1]";
    throw Error(ErrorKind::Parameter, os.str());
  }
}

// Constant under the square root in x(y, z).
double frontier_offset(FrontierKind kind, double r) {
  switch (kind) {
    case FrontierKind::RFixedSingle: return 1.0;
    case FrontierKind::RFixedAsymptotic:
    case FrontierKind::FullAsymptotic: return r * r;
    case FrontierKind::FullSingleW: break;
  }
  throw Error(ErrorKind::Parameter, "W-parameterized frontier has no (y, z) form");
}

}  // namespace

FrontierPoint frontier_point(FrontierKind kind, double radius, double y, double z) {
  require_radius(radius);
  const double r2 = radius * radius;
  const double off = frontier_offset(kind, radius);
  const double x = (1.0 + std::sqrt(r2 * r2 * (y * y + z * z) + off)) / r2;
  FrontierPoint fp{kind, y, z, x, std::nullopt, {}};
  if (kind == FrontierKind::FullAsymptotic) {
    fp.v = RealMatrix::Zero(3, 3);
    fp.v(0, 0) = 1.0 - r2;
    fp.v.bottomRightCorner(2, 2) << x + y, z, z, x - y;
  } else {
    fp.v.resize(2, 2);
    fp.v << x + y, z, z, x - y;
  }
  return fp;
}

FrontierPoint frontier_point(const FisherMatrix& sld, const RealMatrix& w) {
  if (w.rows() != sld.dim() || w.cols() != sld.dim()) {
    throw Error(ErrorKind::Parameter, "W dimension does not match the Fisher matrix");
  }
  if (max_abs(RealMatrix(w - w.transpose())) > kHermitianTol) {
    throw Error(ErrorKind::Parameter, "W must be symmetric");
  }
  if (std::abs(w.trace() - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "tr W = " << w.trace() << ", expected 1";
    throw Error(ErrorKind::Parameter, os.str());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(w), Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues()(0) > kSingularFloor * es.eigenvalues().cwiseAbs().maxCoeff())) {
    throw Error(ErrorKind::Parameter, "W must be positive definite");
  }
  const RealMatrix jm = inverse_sqrt(sld);
  const RealMatrix winv = sym_func(w, MatFunc::Inv);
  RealMatrix v = jm * winv * jm;
  FrontierPoint fp{FrontierKind::FullSingleW, 0.0, 0.0, 0.0, w, 0.5 * (v + v.transpose())};
  return fp;
}

FrontierMin frontier_min(FrontierKind kind, double radius, const WeightMatrix& g) {
  require_radius(radius);
  const double off = frontier_offset(kind, radius);
  const int want = kind == FrontierKind::FullAsymptotic ? 3 : 2;
  if (g.dim() != want) {
    std::ostringstream os;
    os << to_string(kind) << " frontier takes a " << want << "x" << want << " G";
    throw Error(ErrorKind::Parameter, os.str());
  }
  if (!g.positive_definite()) throw Error(ErrorKind::Parameter, "frontier minimum needs G > 0");
  const RealMatrix block = g.mat().bottomRightCorner(2, 2);
  const double g1 = 0.5 * (block(0, 0) + block(1, 1));
  const double g2 = 0.5 * (block(0, 0) - block(1, 1));
  const double g3 = block(0, 1);
  const double r2 = radius * radius;
  const double r4 = r2 * r2;
  const double radial = want == 3 ? g.mat()(0, 0) * (1.0 - r2) : 0.0;

  // tr(G V) = radial + 2 g1 x(y, z) + 2 g2 y + 2 g3 z
  auto objective = [&](const Eigen::Vector2d& u) {
    const double x = (1.0 + std::sqrt(r4 * u.squaredNorm() + off)) / r2;
    return radial + 2.0 * g1 * x + 2.0 * g2 * u(0) + 2.0 * g3 * u(1);
  };

  Eigen::Vector2d u = Eigen::Vector2d::Zero();
  int it = 0;
  constexpr int kMaxIt = 200;
  for (; it < kMaxIt; ++it) {
    const double s = std::sqrt(r4 * u.squaredNorm() + off);
    const Eigen::Vector2d grad = 2.0 * g1 * r2 * u / s + Eigen::Vector2d(2.0 * g2, 2.0 * g3);
    const Eigen::Matrix2d hess =
        2.0 * g1 * (r2 / s * Eigen::Matrix2d::Identity() - r4 * r2 / (s * s * s) * u * u.transpose());
    const Eigen::Vector2d step = hess.ldlt().solve(grad);
    const double dec2 = grad.dot(step);
    const double f0 = objective(u);
    // dec2 / 2 estimates f - f*; stop once that is at rounding level
    if (grad.norm() < 1e-13 * (1.0 + std::abs(g1)) || 0.5 * dec2 < 1e-15 * (1.0 + std::abs(f0))) break;
    double t = 1.0;
    while (t > 1e-12 && objective(u - t * step) > f0 - 0.25 * t * dec2) t *= 0.5;
    if (t <= 1e-12) break;
    u -= t * step;
  }
  if (it == kMaxIt) {
    std::ostringstream os;
    os << "frontier Newton did not converge, last (y, z) = (" << u(0) << ", " << u(1) << ")";
    throw Error(ErrorKind::NonConvergence, os.str());
  }
  FrontierPoint fp = frontier_point(kind, radius, u(0), u(1));
  return {(g.mat() * fp.v).trace(), fp, it};
}

FrontierMin frontier_min(const FisherMatrix& sld, const WeightMatrix& g) {
  const AttainableBound c = qubit_attainable_C(sld, g);
  if (!c.optimal_w) throw Error(ErrorKind::Parameter, "frontier minimum needs G > 0");
  FrontierPoint fp = frontier_point(sld, *c.optimal_w);
  return {c.value, fp, 0};
}

}  // namespace qcrb
