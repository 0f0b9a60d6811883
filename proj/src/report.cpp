#include "qcrb/report.hpp"

#include "qcrb/error.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

namespace qcrb {

namespace {

void check(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::Parameter, "report invariant violated: " + what);
}

FisherKind fisher_kind_from_string(const std::string& s) {
  for (auto k : {FisherKind::SLD, FisherKind::RLD, FisherKind::Classical}) {
    if (s == to_string(k)) return k;
  }
  throw Error(ErrorKind::Parameter, "unknown Fisher kind '" + s + "'");
}

std::optional<double> opt_number(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

ParamPoint point_from_json(const json& j) { return j.get<std::vector<double>>(); }

}  // namespace

json to_json(const RealMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const ComplexMatrix& m) {
  return json{{"re", to_json(RealMatrix(m.real()))}, {"im", to_json(RealMatrix(m.imag()))}};
}

RealMatrix real_matrix_from_json(const json& j) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  if (rows.empty()) return RealMatrix();
  RealMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) throw Error(ErrorKind::Parameter, "ragged matrix");
    for (std::size_t k = 0; k < rows[i].size(); ++k) m(i, k) = rows[i][k];
  }
  return m;
}

ComplexMatrix complex_matrix_from_json(const json& j) {
  const RealMatrix re = real_matrix_from_json(j.at("re"));
  const RealMatrix im = real_matrix_from_json(j.at("im"));
  if (re.rows() != im.rows() || re.cols() != im.cols()) {
    throw Error(ErrorKind::Parameter, "re/im shape mismatch");
  }
  ComplexMatrix m(re.rows(), re.cols());
  m.real() = re;
  m.imag() = im;
  return m;
}

json to_json(const FisherMatrix& f) {
  json j = to_json(f.entries);
  j["kind"] = to_string(f.kind);
  return j;
}

FisherMatrix fisher_from_json(const json& j) {
  return {fisher_kind_from_string(j.at("kind").get<std::string>()), complex_matrix_from_json(j)};
}

json to_json(const BoundValue& b) {
  return json{{"value", b.value ? json(*b.value) : json(nullptr)},
              {"provenance", to_string(b.provenance)}};
}

BoundValue bound_value_from_json(const json& j) {
  return {opt_number(j.at("value")), provenance_from_string(j.at("provenance").get<std::string>())};
}

json to_json(const BoundReport& r) {
  return json{{"family", r.family.name()},
              {"theta0", r.theta0},
              {"G", to_json(r.g.mat())},
              {"J", to_json(r.sld)},
              {"J_rld", r.rld ? to_json(*r.rld) : json(nullptr)},
              {"C", to_json(r.c)},
              {"C_A", to_json(r.c_a)},
              {"C_R", to_json(r.c_r)},
              {"ordering_ok", r.ordering_ok}};
}

BoundReport bound_report_from_json(const json& j) {
  std::optional<FisherMatrix> rld;
  if (!j.at("J_rld").is_null()) rld = fisher_from_json(j.at("J_rld"));
  return BoundReport{StateFamily::parse(j.at("family").get<std::string>()),
                     point_from_json(j.at("theta0")),
                     WeightMatrix(real_matrix_from_json(j.at("G"))),
                     fisher_from_json(j.at("J")),
                     rld,
                     bound_value_from_json(j.at("C")),
                     bound_value_from_json(j.at("C_A")),
                     bound_value_from_json(j.at("C_R")),
                     j.at("ordering_ok").get<bool>()};
}

json to_json(const FrontierPoint& p) {
  json j{{"kind", to_string(p.kind)}, {"V", to_json(p.v)}};
  if (p.w) {
    j["W"] = to_json(*p.w);
  } else {
    j["y"] = p.y;
    j["z"] = p.z;
    j["x"] = p.x;
  }
  return j;
}

json to_json(const SearchResult& r) {
  json elements = json::array();
  for (const auto& m : r.best_povm.elements) elements.push_back(to_json(m.mat()));
  json values = json::array();
  for (const auto& v : r.estimator.values) values.push_back(std::vector<double>(v.data(), v.data() + v.size()));
  return json{{"best_value", r.best_value},
              {"copies", r.copies},
              {"outcomes", r.outcomes},
              {"restarts_used", r.restarts_used},
              {"feasible_restarts", r.feasible_restarts},
              {"iterations", r.iterations},
              {"best_restart", r.best_restart},
              {"seed", r.seed},
              {"step0", r.step0},
              {"step_decay", r.step_decay},
              {"povm", elements},
              {"estimator", json{{"theta0", r.estimator.theta0}, {"values", values}}}};
}

std::string csv_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

std::string csv_number(const std::optional<double>& v) { return v ? csv_number(*v) : std::string(); }

void validate_result(const std::string& command, const json& config, const json& result) {
  if (command == "bounds") {
    const BoundReport r = bound_report_from_json(result);
    check(r.ordering_ok == ordering_holds(r.c, r.c_a, r.c_r), "ordering_ok flag");
    if (r.c.value && r.c_a.value && r.c_r.value) check(r.ordering_ok, "C >= C_A >= C_R");
    check(max_abs(ComplexMatrix(r.sld.entries - r.sld.entries.adjoint())) <= 1e-12, "J symmetric");
    return;
  }
  if (command == "fisher") {
    const FisherMatrix j = fisher_from_json(result.at("J"));
    check(max_abs(RealMatrix(j.imag())) <= 1e-10, "SLD Fisher real");
    check(max_abs(ComplexMatrix(j.entries - j.entries.adjoint())) <= 1e-12, "J symmetric");
    if (!result.at("J_rld").is_null()) {
      const FisherMatrix jr = fisher_from_json(result.at("J_rld"));
      check(max_abs(ComplexMatrix(jr.entries - jr.entries.adjoint())) <= 1e-12, "J_rld Hermitian");
    }
    const StateFamily family = StateFamily::parse(config.at("family").get<std::string>());
    const FamilyAtPoint fp = eval_derivs(family, point_from_json(result.at("theta0")));
    const auto& slds = result.at("sld");
    check(slds.size() == fp.derivs.size(), "one SLD per parameter");
    for (std::size_t i = 0; i < slds.size(); ++i) {
      const ComplexMatrix l = complex_matrix_from_json(slds[i]);
      const ComplexMatrix lhs = 0.5 * (l * fp.rho.mat() + fp.rho.mat() * l);
      check(max_abs(ComplexMatrix(lhs - fp.derivs[i].mat())) <= 1e-9, "Lyapunov residual");
    }
    return;
  }
  if (command == "frontier") {
    for (const auto& p : result.at("points")) {
      const RealMatrix v = real_matrix_from_json(p.at("V"));
      check(max_abs(RealMatrix(v - v.transpose())) <= 1e-12, "V symmetric");
      if (p.contains("y")) {
        const double radius = result.at("radius").get<double>();
        static const std::map<std::string, FrontierKind> kinds{
            {"r-fixed-single", FrontierKind::RFixedSingle},
            {"r-fixed-asymptotic", FrontierKind::RFixedAsymptotic},
            {"full-asymptotic", FrontierKind::FullAsymptotic}};
        const FrontierPoint re = frontier_point(kinds.at(p.at("kind").get<std::string>()), radius,
                                                p.at("y").get<double>(), p.at("z").get<double>());
        check(std::abs(re.x - p.at("x").get<double>()) <= 1e-10, "frontier x(y, z)");
        check(max_abs(RealMatrix(re.v - v)) <= 1e-10, "frontier V");
      }
    }
    return;
  }
  if (command == "povm") {
    const StateFamily family = StateFamily::parse(config.at("family").get<std::string>());
    const ParamPoint theta = point_from_json(result.at("estimator").at("theta0"));
    const FamilyAtPoint fp =
        extend_iid(eval_derivs(family, theta), result.at("copies").get<int>());
    LocallyUnbiasedEstimator est;
    est.theta0 = theta;
    for (const auto& m : result.at("povm")) {
      est.povm.elements.push_back(HermitianOperator::project(complex_matrix_from_json(m)));
    }
    est.povm.validate();
    for (const auto& v : result.at("estimator").at("values")) {
      const auto vals = v.get<std::vector<double>>();
      est.values.push_back(Eigen::Map<const RealVector>(vals.data(), vals.size()));
    }
    const RealVector mean = est.mean(fp);
    const RealVector center = Eigen::Map<const RealVector>(theta.data(), theta.size());
    check((mean - center).cwiseAbs().maxCoeff() <= 1e-8, "estimator mean equals theta0");
    const RealMatrix jac = est.jacobian(fp);
    check(max_abs(RealMatrix(jac - RealMatrix::Identity(jac.rows(), jac.cols()))) <= 1e-8,
          "estimator locally unbiased");
    if (result.contains("C_R") && !result.at("C_R").is_null()) {
      check(result.at("best_value").get<double>() >= result.at("C_R").get<double>() - 1e-6,
            "search value above C_R");
    }
    return;
  }
  if (command == "sweep") {
    for (const auto& row : result.at("rows")) {
      const BoundValue c{opt_number(row.at("C")), Provenance::ClosedForm};
      const BoundValue ca{opt_number(row.at("C_A")), Provenance::ClosedForm};
      const BoundValue cr{opt_number(row.at("C_R")), Provenance::ClosedForm};
      check(ordering_holds(c, ca, cr), "sweep row ordering");
      if (c.value && ca.value) {
        check(std::abs(row.at("gap_C_CA").get<double>() - (*c.value - *ca.value)) <= 1e-12,
              "gap column");
      }
    }
    return;
  }
  throw Error(ErrorKind::Usage, "unknown command '" + command + "'");
}

}  // namespace qcrb
