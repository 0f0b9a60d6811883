#include "qcrb/bounds.hpp"
#include "qcrb/cli.hpp"
#include "qcrb/error.hpp"
#include "qcrb/families.hpp"
#include "qcrb/infogeo.hpp"
#include "qcrb/povmopt.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace qcrb;

namespace {

WeightMatrix weight(const RealMatrix& g) { return WeightMatrix(g); }

py::object optional_value(const BoundValue& b) {
  return b.value ? py::cast(*b.value) : py::none();
}

py::dict bounds_dict(const std::string& family, const ParamPoint& theta, const RealMatrix& g) {
  const BoundReport r = compute_bounds(StateFamily::parse(family), theta, weight(g));
  py::dict d;
  d["family"] = r.family.name();
  d["theta0"] = r.theta0;
  d["J"] = RealMatrix(r.sld.real());
  d["J_rld"] = r.rld ? py::cast(ComplexMatrix(r.rld->entries)) : py::none();
  d["C"] = optional_value(r.c);
  d["C_A"] = optional_value(r.c_a);
  d["C_R"] = optional_value(r.c_r);
  d["provenance"] = py::dict(py::arg("C") = to_string(r.c.provenance),
                             py::arg("C_A") = to_string(r.c_a.provenance),
                             py::arg("C_R") = to_string(r.c_r.provenance));
  d["ordering_ok"] = r.ordering_ok;
  return d;
}

py::tuple family_at(const std::string& family, const ParamPoint& theta, int copies) {
  const FamilyAtPoint fp = extend_iid(eval_derivs(StateFamily::parse(family), theta), copies);
  std::vector<ComplexMatrix> derivs;
  for (const auto& d : fp.derivs) derivs.push_back(d.mat());
  return py::make_tuple(ComplexMatrix(fp.rho.mat()), derivs);
}

py::dict search(const std::string& family, const ParamPoint& theta, const RealMatrix& g,
                int copies, int outcomes, int restarts, int iters, std::uint64_t seed) {
  SearchOptions o;
  o.copies = copies;
  o.outcomes = outcomes;
  o.restarts = restarts;
  o.iters = iters;
  o.seed = seed;
  const SearchResult r = optimize(eval_derivs(StateFamily::parse(family), theta), weight(g), theta, o);
  std::vector<ComplexMatrix> elements;
  for (const auto& m : r.best_povm.elements) elements.push_back(m.mat());
  std::vector<RealVector> values = r.estimator.values;
  py::dict d;
  d["best_value"] = r.best_value;
  d["povm"] = elements;
  d["estimates"] = values;
  d["copies"] = r.copies;
  d["outcomes"] = r.outcomes;
  d["best_restart"] = r.best_restart;
  d["trajectory"] = r.trajectory;
  return d;
}

}  // namespace

PYBIND11_MODULE(_qcrb, m) {
  m.doc() = "Quantum Cramer-Rao type bounds: Fisher matrices, C, C_A, C_R, frontiers, POVM search.";

  py::register_exception<Error>(m, "QcrbError", PyExc_RuntimeError);

  m.def("family_at", &family_at, py::arg("family"), py::arg("theta"), py::arg("copies") = 1,
        "(rho, [d rho / d theta_i]) for the family spec at theta, optionally n-copy extended.");
  m.def(
      "solve_sld",
      [](const ComplexMatrix& rho, const ComplexMatrix& drho) {
        return ComplexMatrix(solve_sld(HermitianOperator(rho), HermitianOperator(drho)).mat());
      },
      py::arg("rho"), py::arg("drho"));
  m.def(
      "solve_rld",
      [](const ComplexMatrix& rho, const ComplexMatrix& drho) {
        return solve_rld(HermitianOperator(rho), HermitianOperator(drho));
      },
      py::arg("rho"), py::arg("drho"));
  m.def(
      "sld_fisher",
      [](const std::string& family, const ParamPoint& theta) {
        return RealMatrix(sld_fisher(eval_derivs(StateFamily::parse(family), theta)).real());
      },
      py::arg("family"), py::arg("theta"));
  m.def(
      "rld_fisher",
      [](const std::string& family, const ParamPoint& theta) -> py::object {
        auto f = rld_fisher(eval_derivs(StateFamily::parse(family), theta));
        return f ? py::cast(ComplexMatrix(f->entries)) : py::none();
      },
      py::arg("family"), py::arg("theta"));
  m.def("bounds", &bounds_dict, py::arg("family"), py::arg("theta"), py::arg("G"),
        "C, C_A and C_R with the Fisher matrices used.");
  m.def(
      "qubit_attainable_C",
      [](const RealMatrix& j, const RealMatrix& g) {
        return qubit_attainable_C({FisherKind::SLD, j.cast<cplx>()}, weight(g)).value;
      },
      py::arg("J"), py::arg("G"));
  m.def(
      "rld_bound_closed",
      [](const ComplexMatrix& j, const RealMatrix& g) {
        return rld_bound_closed({FisherKind::RLD, j}, weight(g));
      },
      py::arg("J_rld"), py::arg("G"));
  m.def(
      "rld_bound_oracle",
      [](const ComplexMatrix& j, const RealMatrix& g) {
        return rld_bound_oracle({FisherKind::RLD, j}, weight(g)).value;
      },
      py::arg("J_rld"), py::arg("G"));
  m.def(
      "frontier_min",
      [](const std::string& kind, double radius, const RealMatrix& g) {
        const FrontierKind k = kind == "single"       ? FrontierKind::RFixedSingle
                               : kind == "asymptotic" ? FrontierKind::RFixedAsymptotic
                               : kind == "full-asymptotic"
                                   ? FrontierKind::FullAsymptotic
                                   : throw Error(ErrorKind::Usage, "unknown frontier kind " + kind);
        const FrontierMin r = frontier_min(k, radius, weight(g));
        return py::make_tuple(r.value, r.argmin.y, r.argmin.z, r.argmin.v);
      },
      py::arg("kind"), py::arg("radius"), py::arg("G"));
  m.def("optimize", &search, py::arg("family"), py::arg("theta"), py::arg("G"),
        py::arg("copies") = 1, py::arg("outcomes") = 0, py::arg("restarts") = 16,
        py::arg("iters") = 200, py::arg("seed") = 1,
        "POVM search for the smallest copies * tr(G V).");
  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::main_entry(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line front end; returns (exit_code, stdout, stderr).");
}
