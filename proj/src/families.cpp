#include "qcrb/families.hpp"

#include "qcrb/error.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace qcrb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::Usage, "cannot parse " + what + " from '" + s + "'");
  }
  return v;
}

// Shortest round-trip decimal form.
std::string shortest(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

void require_radius(double r, const char* name) {
  if (!(r >= 0.0 && r <= 1.0)) {
    std::ostringstream os;
    os << name << " = " << r << " outside [0, 1]";
    throw Error(ErrorKind::Parameter, os.str());
  }
}

void require_angle(double a, const char* name) {
  if (!(a >= 0.0 && a <= kTwoPi)) {
    std::ostringstream os;
    os << name << " = " << a << " outside [0, 2pi]";
    throw Error(ErrorKind::Parameter, os.str());
  }
}

struct Bloch {
  double r, theta, phi;
};

Bloch to_bloch(const StateFamily& family, const ParamPoint& p) {
  if (static_cast<int>(p.size()) != family.param_dim()) {
    std::ostringstream os;
    os << family.name() << " takes " << family.param_dim() << " parameters, got " << p.size();
    throw Error(ErrorKind::Parameter, os.str());
  }
  Bloch b = std::visit(
      overloaded{[&](const QubitFull&) { return Bloch{p[0], p[1], p[2]}; },
                 [&](const QubitRFixed& k) { return Bloch{k.r0, p[0], p[1]}; },
                 [&](const QubitPhiZero&) { return Bloch{p[0], p[1], 0.0}; },
                 [&](const DisplacedThermal&) -> Bloch {
                   throw Error(ErrorKind::UnsupportedFamily, "not a qubit family");
                 }},
      family.kind());
  require_radius(b.r, "r");
  require_angle(b.theta, "theta");
  require_angle(b.phi, "phi");
  return b;
}

// 1/2 [[1 + r cos t, r sin t e^{i p}], [r sin t e^{-i p}, 1 - r cos t]]
ComplexMatrix bloch_matrix(double c0, double cz, cplx cxy) {
  ComplexMatrix m(2, 2);
  m << c0 + cz, cxy, std::conj(cxy), c0 - cz;
  return 0.5 * m;
}

ComplexMatrix qubit_rho(const Bloch& b) {
  return bloch_matrix(1.0, b.r * std::cos(b.theta),
                      b.r * std::sin(b.theta) * std::exp(kI * b.phi));
}

ComplexMatrix qubit_d_r(const Bloch& b) {
  return bloch_matrix(0.0, std::cos(b.theta), std::sin(b.theta) * std::exp(kI * b.phi));
}

ComplexMatrix qubit_d_theta(const Bloch& b) {
  return bloch_matrix(0.0, -b.r * std::sin(b.theta),
                      b.r * std::cos(b.theta) * std::exp(kI * b.phi));
}

ComplexMatrix qubit_d_phi(const Bloch& b) {
  return bloch_matrix(0.0, 0.0, kI * b.r * std::sin(b.theta) * std::exp(kI * b.phi));
}

StateEval thermal_state(const DisplacedThermal& k, const ParamPoint& p) {
  if (p.size() != 2) throw Error(ErrorKind::Parameter, "thermal family takes 2 parameters");
  if (!std::isfinite(p[0]) || !std::isfinite(p[1])) {
    throw Error(ErrorKind::Parameter, "non-finite displacement");
  }
  const int dim = k.fock_dim;
  // Work in a padded space so the truncated displacement is accurate on the
  // kept block, then cut back to fock_dim.
  const int work = 2 * dim;
  const double n = k.mean_photons;
  const double ratio = n / (n + 1.0);
  ComplexMatrix thermal = ComplexMatrix::Zero(work, work);
  double w = 1.0 / (n + 1.0);
  for (int i = 0; i < work; ++i, w *= ratio) thermal(i, i) = w;
  const double beyond_work = std::pow(ratio, work);

  const ComplexMatrix d = displacement(work, cplx(p[0], p[1]));
  const ComplexMatrix full = d * thermal * d.adjoint();
  double tail = beyond_work;
  for (int i = dim; i < work; ++i) tail += full(i, i).real();
  if (tail > kMaxTailMass) {
    std::ostringstream os;
    os << "Fock cutoff " << dim << " discards mass " << tail << " > " << kMaxTailMass;
    throw Error(ErrorKind::Truncation, os.str());
  }
  ComplexMatrix kept = full.topLeftCorner(dim, dim);
  kept /= kept.trace().real();
  return {HermitianOperator::project(kept), tail};
}

// Ridders' extrapolation of central differences, applied entrywise to a
// matrix-valued function of one real variable.
template <class F>
ComplexMatrix ridders(F&& f, double h0) {
  constexpr int kTab = 8;
  constexpr double kCon = 1.4, kCon2 = kCon * kCon, kSafe = 2.0;
  std::vector<std::vector<ComplexMatrix>> a(kTab, std::vector<ComplexMatrix>(kTab));
  double h = h0;
  a[0][0] = (f(h) - f(-h)) / (2.0 * h);
  ComplexMatrix best = a[0][0];
  double err = std::numeric_limits<double>::infinity();
  for (int i = 1; i < kTab; ++i) {
    h /= kCon;
    a[0][i] = (f(h) - f(-h)) / (2.0 * h);
    double fac = kCon2;
    for (int j = 1; j <= i; ++j) {
      a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
      fac *= kCon2;
      const double e = std::max(max_abs(ComplexMatrix(a[j][i] - a[j - 1][i])),
                                max_abs(ComplexMatrix(a[j][i] - a[j - 1][i - 1])));
      if (e <= err) {
        err = e;
        best = a[j][i];
      }
    }
    if (max_abs(ComplexMatrix(a[i][i] - a[i - 1][i - 1])) >= kSafe * err) break;
  }
  return best;
}

}  // namespace

StateFamily::StateFamily(FamilyKind kind) : kind_(std::move(kind)) {
  std::visit(overloaded{[](const QubitFull&) {}, [](const QubitPhiZero&) {},
                        [](const QubitRFixed& k) {
                          if (!(k.r0 > 0.0 && k.r0 <= 1.0)) {
                            throw Error(ErrorKind::Parameter, "r0 must lie in (0, 1]");
                          }
                        },
                        [](const DisplacedThermal& k) {
                          if (!(k.mean_photons > 0.0) || !std::isfinite(k.mean_photons)) {
                            throw Error(ErrorKind::Parameter, "thermal N must be > 0");
                          }
                          if (k.fock_dim < 2 || k.fock_dim > 128) {
                            throw Error(ErrorKind::Parameter, "fock_dim must be in [2, 128]");
                          }
                        }},
             kind_);
}

StateFamily StateFamily::parse(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.empty()) throw Error(ErrorKind::Usage, "empty family spec");
  const std::string& head = parts[0];
  if (head == "full" && parts.size() == 1) return StateFamily(QubitFull{});
  if (head == "phi-zero" && parts.size() == 1) return StateFamily(QubitPhiZero{});
  if (head == "r-fixed" && parts.size() == 2) {
    return StateFamily(QubitRFixed{parse_double(parts[1], "r0")});
  }
  if (head == "thermal" && parts.size() == 3) {
    const double n = parse_double(parts[1], "thermal N");
    const double dim = parse_double(parts[2], "fock_dim");
    if (dim != std::floor(dim)) throw Error(ErrorKind::Usage, "fock_dim must be an integer");
    return StateFamily(DisplacedThermal{n, static_cast<int>(dim)});
  }
  throw Error(ErrorKind::Usage, "unknown family spec '" + spec +
                                    "' (expected full, r-fixed:<r0>, phi-zero, thermal:<N>:<dim>)");
}

int StateFamily::param_dim() const noexcept {
  return std::holds_alternative<QubitFull>(kind_) ? 3 : 2;
}

int StateFamily::hilbert_dim() const noexcept {
  if (const auto* t = std::get_if<DisplacedThermal>(&kind_)) return t->fock_dim;
  return 2;
}

std::string StateFamily::name() const {
  return std::visit(overloaded{[](const QubitFull&) { return std::string("full"); },
                               [](const QubitPhiZero&) { return std::string("phi-zero"); },
                               [](const QubitRFixed& k) { return "r-fixed:" + shortest(k.r0); },
                               [](const DisplacedThermal& k) {
                                 return "thermal:" + shortest(k.mean_photons) + ":" +
                                        std::to_string(k.fock_dim);
                               }},
                    kind_);
}

std::vector<std::string> StateFamily::param_names() const {
  return std::visit(
      overloaded{[](const QubitFull&) { return std::vector<std::string>{"r", "theta", "phi"}; },
                 [](const QubitRFixed&) { return std::vector<std::string>{"theta", "phi"}; },
                 [](const QubitPhiZero&) { return std::vector<std::string>{"r", "theta"}; },
                 [](const DisplacedThermal&) {
                   return std::vector<std::string>{"re_alpha", "im_alpha"};
                 }},
      kind_);
}

StateEval eval_state_with_tail(const StateFamily& family, const ParamPoint& theta) {
  if (const auto* t = std::get_if<DisplacedThermal>(&family.kind())) {
    return thermal_state(*t, theta);
  }
  return {HermitianOperator::project(qubit_rho(to_bloch(family, theta))), 0.0};
}

HermitianOperator eval_state(const StateFamily& family, const ParamPoint& theta) {
  return eval_state_with_tail(family, theta).rho;
}

FamilyAtPoint eval_derivs(const StateFamily& family, const ParamPoint& theta) {
  if (const auto* t = std::get_if<DisplacedThermal>(&family.kind())) {
    FamilyAtPoint fp{thermal_state(*t, theta).rho, {}};
    for (std::size_t i = 0; i < theta.size(); ++i) {
      auto shifted = [&](double h) {
        ParamPoint p = theta;
        p[i] += h;
        return ComplexMatrix(thermal_state(*t, p).rho.mat());
      };
      fp.derivs.push_back(HermitianOperator::project(ridders(shifted, 0.1)));
    }
    return fp;
  }

  const Bloch b = to_bloch(family, theta);
  FamilyAtPoint fp{HermitianOperator::project(qubit_rho(b)), {}};
  auto push = [&](const ComplexMatrix& m) { fp.derivs.push_back(HermitianOperator::project(m)); };
  std::visit(overloaded{[&](const QubitFull&) {
                          push(qubit_d_r(b));
                          push(qubit_d_theta(b));
                          push(qubit_d_phi(b));
                        },
                        [&](const QubitRFixed&) {
                          push(qubit_d_theta(b));
                          push(qubit_d_phi(b));
                        },
                        [&](const QubitPhiZero&) {
                          push(qubit_d_r(b));
                          push(qubit_d_theta(b));
                        },
                        [](const DisplacedThermal&) {}},
             family.kind());
  return fp;
}

FamilyAtPoint extend_iid(const FamilyAtPoint& fp, int n) {
  if (n < 1) throw Error(ErrorKind::Parameter, "copy count must be >= 1");
  const double total = std::pow(static_cast<double>(fp.dim()), n);
  if (total > kMaxIidDim) {
    std::ostringstream os;
    os << "dimension " << fp.dim() << "^" << n << " exceeds cap " << kMaxIidDim;
    throw Error(ErrorKind::Capacity, os.str());
  }
  if (n == 1) return fp;

  const ComplexMatrix& rho = fp.rho.mat();
  // powers[k] = rho^{(k)}
  std::vector<ComplexMatrix> powers{ComplexMatrix::Identity(1, 1)};
  for (int k = 1; k < n; ++k) powers.push_back(kron(powers.back(), rho));

  FamilyAtPoint out{HermitianOperator::project(kron(powers[n - 1], rho)), {}};
  for (const auto& d : fp.derivs) {
    ComplexMatrix sum;
    for (int slot = 0; slot < n; ++slot) {
      ComplexMatrix term = kron(kron(powers[slot], d.mat()), powers[n - 1 - slot]);
      if (slot == 0) sum = std::move(term);
      else sum += term;
    }
    out.derivs.push_back(HermitianOperator::project(sum));
  }
  return out;
}

ComplexMatrix annihilation(int dim) {
  ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
  for (int k = 1; k < dim; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

ComplexMatrix displacement(int dim, cplx alpha) {
  const ComplexMatrix a = annihilation(dim);
  const ComplexMatrix gen = alpha * a.adjoint() - std::conj(alpha) * a;  // skew-Hermitian
  // exp(gen) = exp(-i H) with H = i * gen Hermitian.
  const auto [vals, vecs] = eig_hermitian(HermitianOperator::project(kI * gen));
  ComplexVector phases(vals.size());
  for (Eigen::Index k = 0; k < vals.size(); ++k) phases(k) = std::exp(-kI * vals(k));
  return vecs * phases.asDiagonal() * vecs.adjoint();
}

ComplexVector coherent_state(int dim, cplx beta) {
  ComplexVector v(dim);
  v(0) = std::exp(-0.5 * std::norm(beta));
  for (int k = 1; k < dim; ++k) v(k) = v(k - 1) * beta / std::sqrt(static_cast<double>(k));
  return v;
}

}  // namespace qcrb
