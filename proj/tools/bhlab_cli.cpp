// Command-line driver: reproducible experiments with machine-readable output.
//
// Commands: profile, dirichlet, dissociate, approximate, structure, cosetfit,
// limit, detect-affine, corpus.  Profiles emit CSV (plus a JSON fit sidecar);
// single results emit JSON embedding the resolved config and version.  Exit
// codes: 0 success, 1 usage, 2 precondition violation, 3 cap exceeded.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

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

namespace {

using bhlab::Rational;
using bhlab::TorusValue;
using nlohmann::json;

std::string rat(const Rational& r) { return bhlab::rational_string(r); }
std::string rat(const TorusValue& t) { return bhlab::rational_string(t.fraction()); }

json torus_list(const std::vector<TorusValue>& vals) {
  json arr = json::array();
  for (const TorusValue& v : vals) arr.push_back(rat(v));
  return arr;
}

void emit(const json& config, const json& result) {
  json out;
  out["version"] = bhlab::kVersion;
  out["config"] = config;
  out["result"] = result;
  std::cout << out.dump(2) << "\n";
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(text);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  return out;
}

// Set elements are comma-separated tokens; "a:b:..." tokens are coordinates
// in the group's factor order, plain tokens are element indices.
std::vector<std::uint32_t> parse_set(const bhlab::Group& g, const std::string& text) {
  std::vector<std::uint32_t> out;
  for (const std::string& token : split(text, ',')) {
    std::string t = token;
    t.erase(std::remove_if(t.begin(), t.end(),
                           [](unsigned char c) { return std::isspace(c) != 0; }),
            t.end());
    if (t.empty()) continue;
    if (t.find(':') != std::string::npos) {
      std::vector<long> coords;
      for (const std::string& c : split(t, ':')) coords.push_back(std::stol(c));
      if (coords.size() != g.num_factors())
        throw bhlab::input_error("coordinate token '" + t + "' needs " +
                                 std::to_string(g.num_factors()) + " entries");
      out.push_back(g.index_of(coords));
    } else {
      const long idx = std::stol(t);
      if (idx < 0 || static_cast<std::uint64_t>(idx) >= g.order())
        throw bhlab::input_error("element index " + t + " outside group of order " +
                                 std::to_string(g.order()));
      out.push_back(static_cast<std::uint32_t>(idx));
    }
  }
  return out;
}

std::string sidecar_path(const std::string& out) {
  const std::string suffix = ".csv";
  if (out.size() > suffix.size() &&
      out.compare(out.size() - suffix.size(), suffix.size(), suffix) == 0)
    return out.substr(0, out.size() - suffix.size()) + ".fit.json";
  return out + ".fit.json";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"algebra-norm experiments on finite abelian groups"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "worker pool size (0 = hardware)")
      ->envname("BHLAB_THREADS");
  // Subcommand callbacks run after parsing completes, so `threads` is final
  // by the time any of them call this.
  auto apply_threads = [&] {
    if (threads > 0) bhlab::set_worker_count(threads);
  };

  // ---- profile ----------------------------------------------------------
  auto* profile = app.add_subcommand("profile", "norm growth profile of exp(-2 pi i z phi)");
  std::string pr_phase;
  long pr_n = 0, pr_zmax = 256;
  std::string pr_out = "profile.csv";
  profile->add_option("--phase", pr_phase, "phase spec")->required();
  profile->add_option("--N", pr_n, "grid size")->required();
  profile->add_option("--zmax", pr_zmax, "largest multiplier");
  profile->add_option("--out", pr_out, "CSV output path");
  profile->callback([&] {
    apply_threads();
    const bhlab::PhaseFunction phi = bhlab::parse_phase_spec(pr_phase, pr_n);
    const bhlab::GrowthProfile prof = bhlab::norm_profile(phi, pr_zmax);
    const bhlab::GrowthFit fit = bhlab::fit_growth(prof);
    std::ostringstream csv;
    csv << "# bhlab " << bhlab::kVersion << "\n";
    csv << "# command=profile phase=" << pr_phase << " N=" << pr_n << " zmax=" << pr_zmax
        << " threads=" << bhlab::worker_count() << "\n";
    csv << "z,norm\n";
    for (const bhlab::ProfileEntry& e : prof.entries)
      csv << e.z << "," << bhlab::real_string(e.norm) << "\n";
    std::ofstream f(pr_out);
    if (!f) throw bhlab::input_error("cannot open output path '" + pr_out + "'");
    f << csv.str();
    json config{{"command", "profile"}, {"phase", pr_phase},   {"N", pr_n},
                {"zmax", pr_zmax},      {"out", pr_out},       {"threads", bhlab::worker_count()}};
    json side;
    side["version"] = bhlab::kVersion;
    side["config"] = config;
    side["fit"] = {{"C", fit.C}, {"c", fit.c}, {"residual", fit.residual}};
    std::ofstream sf(sidecar_path(pr_out));
    sf << side.dump(2) << "\n";
    std::cout << csv.str();
  });

  // ---- dirichlet --------------------------------------------------------
  auto* dirichlet = app.add_subcommand("dirichlet", "simultaneous rational approximation");
  std::string di_values;
  long di_k = 0;
  dirichlet->add_option("--values", di_values, "comma-separated rationals")->required();
  dirichlet->add_option("--K", di_k, "quality parameter")->required();
  dirichlet->callback([&] {
    apply_threads();
    std::vector<TorusValue> vals;
    for (const std::string& v : split(di_values, ','))
      vals.emplace_back(bhlab::parse_rational(v));
    const bhlab::DirichletResult res = bhlab::dirichlet_approx(vals, di_k);
    json config{{"command", "dirichlet"},
                {"values", di_values},
                {"K", di_k},
                {"threads", bhlab::worker_count()}};
    json result{{"Q", res.Q},
                {"approximants", torus_list(res.approximants)},
                {"max_error", rat(res.max_error_exact)},
                {"max_error_real", res.max_error},
                {"K", res.K},
                {"d", res.d}};
    emit(config, result);
  });

  // ---- dissociate -------------------------------------------------------
  auto* dissociate = app.add_subcommand("dissociate", "greedy maximal dissociated tuple");
  std::string ds_phase, ds_eta;
  long ds_n = 0;
  dissociate->add_option("--phase", ds_phase, "phase spec")->required();
  dissociate->add_option("--N", ds_n, "grid size")->required();
  dissociate->add_option("--eta", ds_eta, "threshold, exact rational")->required();
  dissociate->callback([&] {
    apply_threads();
    const bhlab::PhaseFunction phi = bhlab::parse_phase_spec(ds_phase, ds_n);
    const bhlab::DissociatedTuple tuple =
        bhlab::extract_maximal(phi, bhlab::parse_rational(ds_eta));
    json config{{"command", "dissociate"},
                {"phase", ds_phase},
                {"N", ds_n},
                {"eta", ds_eta},
                {"threads", bhlab::worker_count()}};
    json result{{"N", tuple.N},
                {"eta", rat(tuple.eta)},
                {"d", tuple.d()},
                {"elements", tuple.elements},
                {"phase_values", torus_list(tuple.phase_values)}};
    emit(config, result);
  });

  // ---- approximate ------------------------------------------------------
  auto* approximate = app.add_subcommand("approximate", "rational phase approximation pipeline");
  std::string ap_phase;
  long ap_n = 0;
  approximate->add_option("--phase", ap_phase, "phase spec")->required();
  approximate->add_option("--N", ap_n, "grid size")->required();
  approximate->callback([&] {
    apply_threads();
    const bhlab::PhaseFunction phi = bhlab::parse_phase_spec(ap_phase, ap_n);
    const bhlab::ApproxResult res = bhlab::build_phi_star(phi);
    json config{{"command", "approximate"},
                {"phase", ap_phase},
                {"N", ap_n},
                {"threads", bhlab::worker_count()}};
    json result{{"Q", res.Q},
                {"d", res.d},
                {"eta", rat(res.eta)},
                {"tuple_elements", res.tuple.elements},
                {"approximants", torus_list(res.approximants)},
                {"phi_star", torus_list(res.phi_star.values)},
                {"representations", res.representations},
                {"achieved_error", rat(res.achieved_error)},
                {"achieved_error_real", res.achieved_error.get_d()},
                {"certificate_bound", rat(res.certificate_bound)},
                {"h_measured", res.h_measured}};
    emit(config, result);
  });

  // ---- structure --------------------------------------------------------
  auto* structure = app.add_subcommand("structure", "invariant subgroup search");
  std::string st_group, st_set, st_eta;
  structure->add_option("--group", st_group, "group spec, e.g. Z16 or Z2xZ4")->required();
  structure->add_option("--set", st_set, "element list")->required();
  structure->add_option("--eta", st_eta, "density threshold, exact rational")->required();
  structure->callback([&] {
    apply_threads();
    const bhlab::Group g = bhlab::Group::parse(st_group);
    const std::vector<std::uint32_t> a = parse_set(g, st_set);
    const bhlab::StructureReport rep =
        bhlab::find_invariant_subgroup(g, a, bhlab::parse_rational(st_eta));
    json config{{"command", "structure"},
                {"group", st_group},
                {"set", st_set},
                {"eta", st_eta},
                {"threads", bhlab::worker_count()}};
    json result{{"group", g.spec_string()},
                {"subgroup_elements", rep.v.elements},
                {"subgroup_generators", rep.v.generators},
                {"witness_coset_rep", rep.witness},
                {"sup_value", rep.sup_value},
                {"sup_exact", rat(rep.sup_exact)},
                {"size_ratio", rep.size_ratio}};
    emit(config, result);
  });

  // ---- cosetfit ---------------------------------------------------------
  auto* cosetfit = app.add_subcommand("cosetfit", "closest coset in symmetric difference");
  std::string cf_group, cf_set;
  cosetfit->add_option("--group", cf_group, "group spec")->required();
  cosetfit->add_option("--set", cf_set, "element list (indices or a:b coordinates)")->required();
  cosetfit->callback([&] {
    apply_threads();
    const bhlab::Group g = bhlab::Group::parse(cf_group);
    const std::vector<std::uint32_t> gamma = parse_set(g, cf_set);
    const bhlab::CosetFitResult fit = bhlab::coset_fit(g, gamma);
    json config{{"command", "cosetfit"},
                {"group", cf_group},
                {"set", cf_set},
                {"threads", bhlab::worker_count()}};
    json result{{"group", g.spec_string()},
                {"subgroup_elements", fit.w.subgroup.elements},
                {"representative", fit.w.representative},
                {"members", fit.w.members()},
                {"symdiff", fit.symdiff}};
    emit(config, result);
  });

  // ---- limit ------------------------------------------------------------
  auto* limit = app.add_subcommand("limit", "second-difference triple statistic");
  std::string li_phase;
  long li_n = 0;
  limit->add_option("--phase", li_phase, "phase spec")->required();
  limit->add_option("--N", li_n, "grid size")->required();
  limit->callback([&] {
    apply_threads();
    const bhlab::PhaseFunction phi = bhlab::parse_phase_spec(li_phase, li_n);
    const bhlab::KappaReport rep = bhlab::kappa_statistic(phi);
    json config{{"command", "limit"},
                {"phase", li_phase},
                {"N", li_n},
                {"threads", bhlab::worker_count()}};
    json result{{"kappa", rep.kappa}, {"bad_triples", rep.bad_triples}, {"total", rep.total}};
    emit(config, result);
  });

  // ---- detect-affine ----------------------------------------------------
  auto* detect = app.add_subcommand("detect-affine", "fit phi(x) = w x + t");
  std::string da_phase;
  long da_n = 0;
  double da_tol = 1e-9;
  detect->add_option("--phase", da_phase, "phase spec")->required();
  detect->add_option("--N", da_n, "grid size")->required();
  detect->add_option("--tol", da_tol, "max allowed deviation");
  detect->callback([&] {
    apply_threads();
    const bhlab::PhaseFunction phi = bhlab::parse_phase_spec(da_phase, da_n);
    const bhlab::AffineFit fit = bhlab::detect_affine(phi, da_tol);
    json config{{"command", "detect-affine"},
                {"phase", da_phase},
                {"N", da_n},
                {"tol", da_tol},
                {"threads", bhlab::worker_count()}};
    json result;
    if (fit.found)
      result = json{{"w", fit.w},
                    {"t", rat(fit.t)},
                    {"max_deviation", rat(fit.max_deviation)},
                    {"max_deviation_real", fit.max_deviation.get_d()}};
    else
      result = nullptr;
    emit(config, result);
  });

  // ---- corpus -----------------------------------------------------------
  auto* corpus = app.add_subcommand("corpus", "bundled verification suite");
  long co_max_order = 0;
  double co_perturb = 0.0;
  corpus->add_option("--max-group-order", co_max_order,
                     "cap on group sweeps (0 = full; capped criteria SKIP)");
  corpus->add_option("--norm-perturbation", co_perturb,
                     "fault-injection offset added to computed algebra norms");
  int corpus_exit = 0;
  corpus->callback([&] {
    apply_threads();
    bhlab::CorpusOptions opts;
    opts.max_group_order = co_max_order;
    opts.norm_perturbation = co_perturb;
    const std::vector<bhlab::CriterionResult> results = bhlab::run_corpus(opts);
    int failures = 0;
    std::printf("%-3s %-28s %-5s %9s  %s\n", "id", "criterion", "state", "seconds", "detail");
    for (const bhlab::CriterionResult& r : results) {
      if (r.status == "FAIL") ++failures;
      std::printf("%-3d %-28s %-5s %9.2f  %s\n", r.id, r.name.c_str(), r.status.c_str(),
                  r.seconds, r.detail.c_str());
    }
    std::printf("%d/%zu passed, %d failed\n",
                static_cast<int>(results.size()) - failures -
                    static_cast<int>(std::count_if(results.begin(), results.end(),
                                                   [](const bhlab::CriterionResult& r) {
                                                     return r.status == "SKIP";
                                                   })),
                results.size(), failures);
    corpus_exit = failures == 0 ? 0 : 4;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const bhlab::input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const bhlab::cap_error& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return corpus_exit;
}
