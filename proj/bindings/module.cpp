// Python bindings for the main operations.  Results cross the boundary as
// plain dicts/lists with exact rationals rendered "p/q", so the Python side
// needs no wrapped classes.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "bhlab/corpus.hpp"
#include "bhlab/diophantine.hpp"
#include "bhlab/dissociation.hpp"
#include "bhlab/errors.hpp"
#include "bhlab/fourier.hpp"
#include "bhlab/group.hpp"
#include "bhlab/limitcheck.hpp"
#include "bhlab/parallel.hpp"
#include "bhlab/phase.hpp"
#include "bhlab/rational.hpp"
#include "bhlab/structure.hpp"
#include "bhlab/version.hpp"

namespace py = pybind11;

namespace {

using namespace bhlab;

std::string rat(const Rational& r) { return rational_string(r); }
std::string rat(const TorusValue& t) { return rational_string(t.fraction()); }

py::list torus_list(const std::vector<TorusValue>& vals) {
  py::list out;
  for (const TorusValue& v : vals) out.append(rat(v));
  return out;
}

DenseFunction dense(const std::string& group, std::vector<std::complex<double>> values) {
  Group g = Group::parse(group);
  if (values.size() != g.order())
    throw input_error("value list has " + std::to_string(values.size()) +
                      " entries for a group of order " + std::to_string(g.order()));
  return DenseFunction{std::move(g), std::move(values)};
}

py::dict tuple_dict(const DissociatedTuple& t) {
  py::dict d;
  d["N"] = t.N;
  d["eta"] = rat(t.eta);
  d["d"] = t.d();
  d["elements"] = t.elements;
  d["phase_values"] = torus_list(t.phase_values);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "algebra norms, rational phase approximation, and additive structure search "
            "on finite abelian groups";

  py::register_exception<input_error>(m, "InputError", PyExc_ValueError);
  py::register_exception<cap_error>(m, "CapError", PyExc_RuntimeError);

  m.def("version", [] { return std::string(kVersion); });
  m.def("set_threads", [](int n) { set_worker_count(n); }, py::arg("n"),
        "Fix the worker pool size (0 restores the hardware default).");
  m.def("threads", [] { return worker_count(); });

  m.def(
      "algebra_norm",
      [](const std::string& group, std::vector<std::complex<double>> values) {
        return algebra_norm(dense(group, std::move(values)));
      },
      py::arg("group"), py::arg("values"),
      "Sum of absolute Fourier coefficients of a dense function given in index order.");

  m.def(
      "indicator_norm",
      [](const std::string& group, const std::vector<std::uint32_t>& set) {
        return algebra_norm(indicator(Group::parse(group), set));
      },
      py::arg("group"), py::arg("set"));

  m.def(
      "norm_profile",
      [](const std::string& phase, long n, long z_max) {
        const GrowthProfile prof = norm_profile(parse_phase_spec(phase, n), z_max);
        py::list rows;
        for (const ProfileEntry& e : prof.entries) rows.append(py::make_tuple(e.z, e.norm));
        const GrowthFit fit = fit_growth(prof);
        py::dict d;
        d["entries"] = rows;
        d["fit"] = py::dict(py::arg("C") = fit.C, py::arg("c") = fit.c,
                            py::arg("residual") = fit.residual,
                            py::arg("degenerate") = fit.degenerate);
        return d;
      },
      py::arg("phase"), py::arg("N"), py::arg("z_max") = 256,
      "Norm of exp(-2 pi i z phi) for z = 1..z_max plus a log-power fit.");

  m.def(
      "dirichlet_approx",
      [](const std::vector<std::string>& values, long k) {
        std::vector<TorusValue> vals;
        for (const std::string& v : values) vals.emplace_back(parse_rational(v));
        const DirichletResult res = dirichlet_approx(vals, k);
        py::dict d;
        d["Q"] = res.Q;
        d["approximants"] = torus_list(res.approximants);
        d["max_error"] = rat(res.max_error_exact);
        d["max_error_real"] = res.max_error;
        d["K"] = res.K;
        d["d"] = res.d;
        return d;
      },
      py::arg("values"), py::arg("K"),
      "Smallest common denominator Q approximating every value within 1/(KQ).");

  m.def(
      "extract_maximal",
      [](const std::string& phase, long n, const std::string& eta) {
        return tuple_dict(extract_maximal(parse_phase_spec(phase, n), parse_rational(eta)));
      },
      py::arg("phase"), py::arg("N"), py::arg("eta"));

  m.def(
      "build_phi_star",
      [](const std::string& phase, long n) {
        const ApproxResult res = build_phi_star(parse_phase_spec(phase, n));
        py::dict d;
        d["Q"] = res.Q;
        d["d"] = res.d;
        d["eta"] = rat(res.eta);
        d["tuple"] = tuple_dict(res.tuple);
        d["approximants"] = torus_list(res.approximants);
        d["phi_star"] = torus_list(res.phi_star.values);
        d["representations"] = res.representations;
        d["achieved_error"] = rat(res.achieved_error);
        d["achieved_error_real"] = res.achieved_error.get_d();
        d["certificate_bound"] = rat(res.certificate_bound);
        d["h_measured"] = res.h_measured;
        return d;
      },
      py::arg("phase"), py::arg("N"),
      "Full rational-approximation pipeline with its exact error certificate.");

  m.def(
      "find_invariant_subgroup",
      [](const std::string& group, const std::vector<std::uint32_t>& set,
         const std::string& eta) {
        const Group g = Group::parse(group);
        const StructureReport rep = find_invariant_subgroup(g, set, parse_rational(eta));
        py::dict d;
        d["subgroup_elements"] = rep.v.elements;
        d["subgroup_generators"] = rep.v.generators;
        d["witness_coset_rep"] = rep.witness;
        d["sup_value"] = rep.sup_value;
        d["sup_exact"] = rat(rep.sup_exact);
        d["size_ratio"] = rep.size_ratio;
        return d;
      },
      py::arg("group"), py::arg("set"), py::arg("eta"),
      "Largest subgroup with a coset nearly filled by the set.");

  m.def(
      "coset_fit",
      [](const std::string& group, const std::vector<std::uint32_t>& set) {
        const CosetFitResult fit = coset_fit(Group::parse(group), set);
        py::dict d;
        d["subgroup_elements"] = fit.w.subgroup.elements;
        d["representative"] = fit.w.representative;
        d["members"] = fit.w.members();
        d["symdiff"] = fit.symdiff;
        return d;
      },
      py::arg("group"), py::arg("set"));

  m.def(
      "kappa_statistic",
      [](const std::string& phase, long n) {
        const KappaReport rep = kappa_statistic(parse_phase_spec(phase, n));
        py::dict d;
        d["kappa"] = rep.kappa;
        d["bad_triples"] = rep.bad_triples;
        d["total"] = rep.total;
        return d;
      },
      py::arg("phase"), py::arg("N"),
      "Mean second-difference defect over all triples; zero exactly for affine phases.");

  m.def(
      "detect_affine",
      [](const std::string& phase, long n, double tol) -> py::object {
        const AffineFit fit = detect_affine(parse_phase_spec(phase, n), tol);
        if (!fit.found) return py::none();
        py::dict d;
        d["w"] = fit.w;
        d["t"] = rat(fit.t);
        d["max_deviation"] = rat(fit.max_deviation);
        d["max_deviation_real"] = fit.max_deviation.get_d();
        return d;
      },
      py::arg("phase"), py::arg("N"), py::arg("tol") = 1e-9);

  m.def(
      "graph_norm_identity_check",
      [](const std::string& phase, long n, long q) {
        const GraphNormReport rep = graph_norm_identity_check(parse_phase_spec(phase, n), q);
        py::dict d;
        d["graph_norm"] = rep.graph_norm;
        d["row_average"] = rep.row_average;
        d["gap"] = rep.gap;
        return d;
      },
      py::arg("phase"), py::arg("N"), py::arg("Q"));

  m.def(
      "run_corpus",
      [](long max_group_order, double norm_perturbation) {
        CorpusOptions opts;
        opts.max_group_order = max_group_order;
        opts.norm_perturbation = norm_perturbation;
        py::list out;
        for (const CriterionResult& r : run_corpus(opts)) {
          py::dict d;
          d["id"] = r.id;
          d["name"] = r.name;
          d["status"] = r.status;
          d["detail"] = r.detail;
          d["seconds"] = r.seconds;
          out.append(d);
        }
        return out;
      },
      py::arg("max_group_order") = 0, py::arg("norm_perturbation") = 0.0,
      "Bundled verification suite; one dict per criterion.");
}
