#include "qcrb/infogeo.hpp"

#include "qcrb/error.hpp"
#include "qcrb/povm.hpp"

#include <cmath>
#include <sstream>

namespace qcrb {

namespace {

// tr(A B) for Hermitian A, B.
double trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.cwiseProduct(b.conjugate()).sum().real();
}

void require_same_dim(const HermitianOperator& rho, const HermitianOperator& drho) {
  if (rho.dim() != drho.dim()) {
    throw Error(ErrorKind::Parameter, "state and derivative dimensions differ");
  }
}

std::string family_key(const StateFamily& family) { return family.name(); }

}  // namespace

const char* to_string(FisherKind kind) {
  switch (kind) {
    case FisherKind::SLD: return "sld";
    case FisherKind::RLD: return "rld";
    case FisherKind::Classical: return "classical";
  }
  return "?";
}

HermitianOperator solve_sld(const HermitianOperator& rho, const HermitianOperator& drho) {
  require_same_dim(rho, drho);
  const auto [vals, vecs] = eig_hermitian(rho);
  const double floor = kSingularFloor * vals.cwiseAbs().maxCoeff();
  const ComplexMatrix d = vecs.adjoint() * drho.mat() * vecs;
  const Eigen::Index n = vals.size();
  ComplexMatrix l = ComplexMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double s = vals(j) + vals(k);
      if (s > floor) {
        l(j, k) = 2.0 * d(j, k) / s;
      } else if (std::abs(d(j, k)) > kSupportTol) {
        std::ostringstream os;
        os << "derivative has weight " << std::abs(d(j, k))
           << " outside the support of the state; SLD undefined";
        throw Error(ErrorKind::SupportMismatch, os.str());
      }
    }
  }
  return HermitianOperator::project(vecs * l * vecs.adjoint());
}

ComplexMatrix solve_rld(const HermitianOperator& rho, const HermitianOperator& drho) {
  require_same_dim(rho, drho);
  const auto [vals, vecs] = eig_hermitian(rho);
  const double floor = kSingularFloor * vals.cwiseAbs().maxCoeff();
  if (vals(0) <= floor) {
    std::ostringstream os;
    os << "RLD requires faithful state; min eigenvalue " << vals(0);
    throw Error(ErrorKind::SingularState, os.str());
  }
  return drho.mat() * mat_func(rho, MatFunc::Inv).mat();
}

ComplexMatrix solve_rld_on_support(const HermitianOperator& rho, const HermitianOperator& drho) {
  require_same_dim(rho, drho);
  const auto [vals, vecs] = eig_hermitian(rho);
  const double floor = kSingularFloor * vals.cwiseAbs().maxCoeff();
  const ComplexMatrix d = vecs.adjoint() * drho.mat() * vecs;
  RealVector pinv = RealVector::Zero(vals.size());
  for (Eigen::Index k = 0; k < vals.size(); ++k) {
    if (vals(k) > floor) {
      pinv(k) = 1.0 / vals(k);
      continue;
    }
    const double leak = std::max(d.row(k).cwiseAbs().maxCoeff(), d.col(k).cwiseAbs().maxCoeff());
    if (leak > kSupportTol) {
      std::ostringstream os;
      os << "RLD requires faithful state; eigenvalue " << vals(k) << " carries derivative weight "
         << leak;
      throw Error(ErrorKind::SingularState, os.str());
    }
  }
  return drho.mat() * vecs * pinv.cast<cplx>().asDiagonal() * vecs.adjoint();
}

std::vector<HermitianOperator> solve_slds(const FamilyAtPoint& fp) {
  std::vector<HermitianOperator> out;
  out.reserve(fp.derivs.size());
  for (const auto& d : fp.derivs) out.push_back(solve_sld(fp.rho, d));
  return out;
}

std::vector<ComplexMatrix> solve_rlds(const FamilyAtPoint& fp) {
  std::vector<ComplexMatrix> out;
  out.reserve(fp.derivs.size());
  for (const auto& d : fp.derivs) out.push_back(solve_rld(fp.rho, d));
  return out;
}

FisherMatrix sld_fisher(const HermitianOperator& rho, const std::vector<HermitianOperator>& slds) {
  const auto d = static_cast<Eigen::Index>(slds.size());
  RealMatrix j(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = a; b < d; ++b) {
      const ComplexMatrix prod = rho.mat() * slds[a].mat() * slds[b].mat();
      j(a, b) = j(b, a) = prod.trace().real();
    }
  }
  return {FisherKind::SLD, j.cast<cplx>()};
}

FisherMatrix rld_fisher(const HermitianOperator& rho, const std::vector<ComplexMatrix>& rlds) {
  const auto d = static_cast<Eigen::Index>(rlds.size());
  ComplexMatrix j(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = a; b < d; ++b) {
      const cplx v = (rlds[a].adjoint() * rlds[b] * rho.mat()).trace();
      j(a, b) = v;
      j(b, a) = std::conj(v);
    }
    j(a, a) = j(a, a).real();
  }
  return {FisherKind::RLD, j};
}

FisherMatrix classical_fisher(const Povm& povm, const FamilyAtPoint& fp) {
  const int d = fp.param_dim();
  RealMatrix j = RealMatrix::Zero(d, d);
  RealVector score(d);
  for (const auto& m : povm.elements) {
    const double p = trace_product(m.mat(), fp.rho.mat());
    for (int i = 0; i < d; ++i) score(i) = trace_product(m.mat(), fp.derivs[i].mat());
    if (p < kProbFloor) {
      if (score.cwiseAbs().maxCoeff() > kSupportTol) {
        std::ostringstream os;
        os << "outcome with probability " << p << " carries score " << score.cwiseAbs().maxCoeff();
        throw Error(ErrorKind::DegenerateOutcome, os.str());
      }
      continue;
    }
    j.noalias() += score * score.transpose() / p;
  }
  return {FisherKind::Classical, j.cast<cplx>()};
}

FisherMatrix sld_fisher(const FamilyAtPoint& fp) { return sld_fisher(fp.rho, solve_slds(fp)); }

std::optional<FisherMatrix> rld_fisher(const FamilyAtPoint& fp) {
  const auto vals = eig_hermitian(fp.rho).eigenvalues;
  if (vals(0) > kSingularFloor * vals.cwiseAbs().maxCoeff()) {
    return rld_fisher(fp.rho, solve_rlds(fp));
  }
  std::vector<ComplexMatrix> rlds;
  try {
    for (const auto& d : fp.derivs) rlds.push_back(solve_rld_on_support(fp.rho, d));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SingularState) return std::nullopt;
    throw;
  }
  return rld_fisher(fp.rho, rlds);
}

FisherCache::Entry FisherCache::get(const StateFamily& family, const ParamPoint& theta) {
  Key key{family_key(family), theta};
  {
    std::shared_lock lock(mu_);
    if (auto it = entries_.find(key); it != entries_.end()) {
      ++hits_;
      return it->second;
    }
  }
  const FamilyAtPoint fp = eval_derivs(family, theta);
  Entry entry{sld_fisher(fp), rld_fisher(fp)};
  std::unique_lock lock(mu_);
  return entries_.emplace(std::move(key), std::move(entry)).first->second;
}

std::size_t FisherCache::size() const {
  std::shared_lock lock(mu_);
  return entries_.size();
}

std::size_t FisherCache::hits() const { return hits_; }

}  // namespace qcrb
