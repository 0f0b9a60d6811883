#include "doctest.h"
#include "support.hpp"

#include "qcrb/error.hpp"
#include "qcrb/families.hpp"

using namespace qcrb;
using namespace qcrb::test;

namespace {

// Independent Bloch-vector construction: 1/2 (I + x sx - y sy + z sz), with
// the sign of sy chosen so the upper-right entry is r sin(t) e^{i p}.
ComplexMatrix bloch_oracle(double r, double t, double p) {
  const double x = r * std::sin(t) * std::cos(p);
  const double y = r * std::sin(t) * std::sin(p);
  const double z = r * std::cos(t);
  ComplexMatrix sx = mat2(0, 1, 1, 0), sy = mat2(0, -I, I, 0), sz = mat2(1, 0, 0, -1);
  return 0.5 * (ComplexMatrix::Identity(2, 2) + x * sx - y * sy + z * sz);
}

ComplexMatrix central_diff(const StateFamily& f, ParamPoint p, int i, double h = 1e-5) {
  ParamPoint a = p, b = p;
  a[i] += h;
  b[i] -= h;
  return (eval_state(f, a).mat() - eval_state(f, b).mat()) / (2 * h);
}

}  // namespace

TEST_CASE("family spec parsing") {
  CHECK(StateFamily::parse("full").param_dim() == 3);
  CHECK(StateFamily::parse("r-fixed:0.5").param_dim() == 2);
  CHECK(StateFamily::parse("phi-zero").param_dim() == 2);
  auto th = StateFamily::parse("thermal:0.5:40");
  CHECK(th.param_dim() == 2);
  CHECK(th.hilbert_dim() == 40);
  CHECK_FALSE(th.is_qubit());
  CHECK(StateFamily::parse("r-fixed:0.5").name() == "r-fixed:0.5");
  CHECK(StateFamily(QubitRFixed{0.1}).name() !=
        StateFamily(QubitRFixed{std::nextafter(0.1, 1.0)}).name());
  CHECK_THROWS_AS(StateFamily::parse("nope"), Error);
  CHECK_THROWS_AS(StateFamily::parse("r-fixed:1.5"), Error);
  CHECK_THROWS_AS(StateFamily::parse("r-fixed:0"), Error);
  CHECK_THROWS_AS(StateFamily::parse("thermal:0.5:1"), Error);
}

TEST_CASE("golden qubit states") {
  auto full = StateFamily::parse("full");
  auto rho = eval_state(full, {0.5, kPi / 2, 0});
  CHECK(max_abs(ComplexMatrix(rho.mat() - mat2(0.5, 0.25, 0.25, 0.5))) < 1e-15);

  for (double t : {0.0, 1.0, 2.5})
    for (double p : {0.0, 3.0}) {
      auto c = eval_state(full, {0.0, t, p});
      CHECK(max_abs(ComplexMatrix(c.mat() - 0.5 * ComplexMatrix::Identity(2, 2))) < 1e-15);
    }
}

TEST_CASE("domain checks") {
  auto full = StateFamily::parse("full");
  CHECK_THROWS_AS(eval_state(full, {1.2, 0, 0}), Error);
  CHECK_THROWS_AS(eval_state(full, {0.5, -0.1, 0}), Error);
  CHECK_THROWS_AS(eval_state(full, {0.5, 0.1}), Error);
  try {
    eval_state(full, {0.5, 7.0, 0});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parameter);
  }
}

TEST_CASE("qubit states match Bloch construction, are PSD with unit trace") {
  std::mt19937_64 rng(11);
  for (const char* spec : {"full", "r-fixed:0.7", "phi-zero"}) {
    auto f = StateFamily::parse(spec);
    for (int t = 0; t < 30; ++t) {
      ParamPoint p = random_qubit_point(f, rng);
      auto rho = eval_state(f, p);
      double r = 0.7, th, ph = 0;
      if (f.param_dim() == 3) r = p[0], th = p[1], ph = p[2];
      else if (spec[0] == 'r') th = p[0], ph = p[1];
      else r = p[0], th = p[1];
      CHECK(max_abs(ComplexMatrix(rho.mat() - bloch_oracle(r, th, ph))) < 1e-14);
      CHECK(std::abs(rho.trace() - 1) < 1e-14);
      CHECK(min_eigenvalue(rho) >= -1e-14);
    }
  }
}

TEST_CASE("golden derivatives") {
  for (double r0 : {0.3, 0.5, 1.0}) {
    auto f = StateFamily(QubitRFixed{r0});
    auto fp = eval_derivs(f, {kPi / 2, 0});
    CHECK(max_abs(ComplexMatrix(fp.derivs[0].mat() - (r0 / 2) * diag({-1, 1}))) < 1e-15);
    CHECK(max_abs(ComplexMatrix(fp.derivs[1].mat() - (r0 / 2) * mat2(0, I, -I, 0))) < 1e-15);
  }
  auto fp = eval_derivs(StateFamily::parse("full"), {0.5, kPi / 2, 0});
  CHECK(max_abs(ComplexMatrix(fp.derivs[0].mat() - 0.5 * mat2(0, 1, 1, 0))) < 1e-15);
}

TEST_CASE("analytic derivatives agree with central differences at 50 points") {
  std::mt19937_64 rng(17);
  const StateFamily fams[] = {StateFamily::parse("full"), StateFamily::parse("r-fixed:0.4"),
                              StateFamily::parse("phi-zero")};
  for (int t = 0; t < 50; ++t) {
    const StateFamily& f = fams[t % 3];
    ParamPoint p = random_qubit_point(f, rng);
    auto fp = eval_derivs(f, p);
    for (int i = 0; i < f.param_dim(); ++i) {
      CHECK(max_abs(ComplexMatrix(fp.derivs[i].mat() - central_diff(f, p, i))) < 1e-8);
      CHECK(std::abs(fp.derivs[i].trace()) < 1e-14);
    }
  }
}

TEST_CASE("thermal state at the origin is geometric") {
  auto f = StateFamily::parse("thermal:0.5:40");
  auto ev = eval_state_with_tail(f, {0, 0});
  double sum = 0;
  for (int k = 0; k < 40; ++k) {
    const double expect = std::pow(0.5, k) / std::pow(1.5, k + 1);
    CHECK(std::abs(ev.rho(k, k).real() - expect) < 1e-12);
    sum += expect;
  }
  CHECK(std::abs(sum - 1) < kMaxTailMass);
  CHECK(ev.tail_mass <= kMaxTailMass);
  CHECK(max_abs(ComplexMatrix(ev.rho.mat() - ComplexMatrix(ev.rho.mat().diagonal().asDiagonal()))) < 1e-12);
}

TEST_CASE("thermal tail mass shrinks with the cutoff") {
  double prev = 1.0;
  for (int dim : {20, 40, 60}) {
    auto ev = eval_state_with_tail(StateFamily(DisplacedThermal{0.5, dim}), {1.0, 0.5});
    CHECK(ev.tail_mass < prev);
    prev = ev.tail_mass;
    CHECK(std::abs(ev.rho.trace() - 1) < 1e-12);
    CHECK(min_eigenvalue(ev.rho) > -1e-12);
  }
}

TEST_CASE("thermal truncation error") {
  try {
    eval_state(StateFamily(DisplacedThermal{2.0, 4}), {0, 0});
    FAIL("expected truncation error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Truncation);
  }
}

TEST_CASE("thermal derivatives are commutators with the quadrature generators") {
  const int dim = 40;
  auto f = StateFamily(DisplacedThermal{0.5, dim});
  auto fp = eval_derivs(f, {0.5, 0.3});
  ComplexMatrix a = annihilation(dim);
  ComplexMatrix ad = a.adjoint();
  ComplexMatrix gx = ad - a;
  ComplexMatrix gy = I * (ad + a);
  ComplexMatrix cx = gx * fp.rho.mat() - fp.rho.mat() * gx;
  ComplexMatrix cy = gy * fp.rho.mat() - fp.rho.mat() * gy;
  // The truncated ladder operator is wrong in the last row; compare a block
  // well inside the cutoff.
  const int k = 25;
  CHECK(max_abs(ComplexMatrix(fp.derivs[0].mat().topLeftCorner(k, k) - cx.topLeftCorner(k, k))) < 1e-7);
  CHECK(max_abs(ComplexMatrix(fp.derivs[1].mat().topLeftCorner(k, k) - cy.topLeftCorner(k, k))) < 1e-7);
}

TEST_CASE("displacement and coherent states") {
  const int dim = 60;
  cplx beta(0.8, -0.4);
  ComplexVector c = coherent_state(dim, beta);
  CHECK(std::abs(c.norm() - 1) < 1e-12);
  ComplexVector vac = ComplexVector::Zero(dim);
  vac(0) = 1;
  ComplexVector dv = displacement(dim, beta) * vac;
  CHECK((dv - c).head(30).cwiseAbs().maxCoeff() < 1e-10);
  ComplexMatrix d = displacement(dim, beta);
  CHECK(max_abs(ComplexMatrix(d * d.adjoint() - ComplexMatrix::Identity(dim, dim))) < 1e-10);
}

TEST_CASE("extend_iid") {
  auto fp = eval_derivs(StateFamily::parse("full"), {0.6, 1.0, 0.4});
  auto one = extend_iid(fp, 1);
  CHECK(max_abs(ComplexMatrix(one.rho.mat() - fp.rho.mat())) == 0);

  FamilyAtPoint diag_fp{HermitianOperator(diag({0.3, 0.7})), {HermitianOperator(diag({0.1, -0.1}))}};
  auto two = extend_iid(diag_fp, 2);
  auto e = eig_hermitian(two.rho).eigenvalues;
  CHECK(std::abs(e(0) - 0.09) < 1e-15);
  CHECK(std::abs(e(1) - 0.21) < 1e-15);
  CHECK(std::abs(e(2) - 0.21) < 1e-15);
  CHECK(std::abs(e(3) - 0.49) < 1e-15);

  std::mt19937_64 rng(23);
  auto f = StateFamily::parse("full");
  for (int t = 0; t < 10; ++t) {
    auto x = eval_derivs(f, random_qubit_point(f, rng));
    for (int n : {2, 3}) {
      auto ext = extend_iid(x, n);
      CHECK(ext.dim() == (1 << n));
      CHECK(std::abs(ext.rho.trace() - 1) < 1e-14);
      for (const auto& d : ext.derivs) CHECK(std::abs(d.trace()) < 1e-14);
    }
  }
  CHECK_THROWS_AS(extend_iid(fp, 7), Error);
}
