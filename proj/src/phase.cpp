#include "bhlab/phase.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "bhlab/errors.hpp"
#include "bhlab/parallel.hpp"
#include "json.hpp"

namespace bhlab {

namespace {

void check_N(long N) {
  if (N < 1) throw input_error("grid size N must be >= 1");
  if (N > (1L << 16)) throw cap_error("grid size N capped at 2^16");
}

std::complex<double> e_of(const TorusValue& t) {
  const double theta = -2.0 * std::numbers::pi * t.fraction().get_d();
  return {std::cos(theta), std::sin(theta)};
}

}  // namespace

PhaseFunction make_linear_phase(long w, const Rational& t, long N) {
  check_N(N);
  PhaseFunction phi;
  phi.N = N;
  phi.values.reserve(N);
  const TorusValue offset{t};
  for (long k = 0; k < N; ++k) {
    Rational step(w * k, N);
    step.canonicalize();
    phi.values.push_back(TorusValue(step + offset.fraction()));
  }
  return phi;
}

PhaseFunction make_piecewise_linear_phase(const std::vector<PwlSegment>& segments, long N) {
  check_N(N);
  if (segments.empty()) throw input_error("pwl phase needs at least one segment");
  if (segments.front().start != 0)
    throw input_error("pwl phase must start its first segment at 0");
  for (std::size_t i = 0; i + 1 < segments.size(); ++i)
    if (!(segments[i].start < segments[i + 1].start))
      throw input_error("pwl breakpoints must be strictly increasing");
  for (const auto& seg : segments) {
    if (seg.start < 0 || seg.start >= 1)
      throw input_error("pwl breakpoints must lie in [0, 1)");
    Rational scaled = seg.start * N;
    scaled.canonicalize();
    if (scaled.get_den() != 1)
      throw input_error("pwl breakpoints must lie on the 1/N grid");
  }

  PhaseFunction phi;
  phi.N = N;
  phi.values.reserve(N);
  Rational acc(0);
  std::size_t seg = 0;
  for (long k = 0; k < N; ++k) {
    phi.values.push_back(TorusValue(acc));
    Rational x(k, N);
    x.canonicalize();
    while (seg + 1 < segments.size() && !(x < segments[seg + 1].start)) ++seg;
    Rational step(segments[seg].slope, N);
    step.canonicalize();
    acc += step;
  }
  return phi;
}

PhaseFunction make_quadratic_phase(long N) {
  check_N(N);
  PhaseFunction phi;
  phi.N = N;
  phi.values.reserve(N);
  for (long k = 0; k < N; ++k)
    phi.values.push_back(TorusValue((k * k) % N, N));
  return phi;
}

PhaseFunction make_random_phase(std::uint64_t seed, long N) {
  check_N(N);
  std::mt19937_64 rng(seed);
  // Rejection sampling keeps the draw sequence identical on every platform,
  // unlike std::uniform_int_distribution.
  const std::uint64_t un = static_cast<std::uint64_t>(N);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
  PhaseFunction phi;
  phi.N = N;
  phi.values.reserve(N);
  for (long k = 0; k < N; ++k) {
    std::uint64_t v;
    do {
      v = rng();
    } while (v >= limit);
    phi.values.push_back(TorusValue(static_cast<long>(v % un), N));
  }
  return phi;
}

PhaseFunction parse_phase_spec(std::string_view spec, long N) {
  check_N(N);
  const auto colon = spec.find(':');
  const std::string_view head = spec.substr(0, colon);
  const std::string_view args =
      colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);

  const auto split = [](std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    while (!s.empty()) {
      const auto p = s.find(sep);
      parts.push_back(s.substr(0, p));
      if (p == std::string_view::npos) break;
      s.remove_prefix(p + 1);
    }
    return parts;
  };

  if (head == "linear") {
    const auto parts = split(args, ',');
    if (parts.size() != 2) throw input_error("linear phase spec needs 'linear:w,t'");
    const Rational w = parse_rational(parts[0]);
    if (w.get_den() != 1) throw input_error("linear winding w must be an integer");
    return make_linear_phase(w.get_num().get_si(), parse_rational(parts[1]), N);
  }
  if (head == "pwl") {
    std::vector<PwlSegment> segments;
    for (const auto part : split(args, ',')) {
      const auto eq = part.find('=');
      if (eq == std::string_view::npos)
        throw input_error("pwl phase spec needs 'pwl:x1=s1,x2=s2,...'");
      const Rational slope = parse_rational(part.substr(eq + 1));
      if (slope.get_den() != 1) throw input_error("pwl slopes must be integers");
      segments.push_back({parse_rational(part.substr(0, eq)), slope.get_num().get_si()});
    }
    return make_piecewise_linear_phase(segments, N);
  }
  if (head == "quadratic") {
    if (!args.empty()) throw input_error("quadratic phase spec takes no arguments");
    return make_quadratic_phase(N);
  }
  if (head == "random") {
    if (args.empty()) throw input_error("random phase spec needs 'random:seed'");
    return make_random_phase(std::stoull(std::string(args)), N);
  }
  if (head == "file") {
    std::ifstream in{std::string(args)};
    if (!in) throw input_error("cannot open phase file '" + std::string(args) + "'");
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw input_error("phase file parse failure: " + std::string(e.what()));
    }
    if (!doc.is_array() || static_cast<long>(doc.size()) != N)
      throw input_error("phase file must hold a JSON array of N rational strings");
    PhaseFunction phi;
    phi.N = N;
    phi.values.reserve(N);
    for (const auto& item : doc)
      phi.values.push_back(TorusValue(parse_rational(item.get<std::string>())));
    return phi;
  }
  throw input_error("unknown phase spec '" + std::string(spec) + "'");
}

DenseFunction exp_phase(const PhaseFunction& phi, const mpz_class& z) {
  if (phi.N < 1 || static_cast<long>(phi.values.size()) != phi.N)
    throw input_error("exp_phase: malformed phase function");
  DenseFunction f;
  f.group = Group({phi.N});
  f.values.resize(phi.N);
  for (long k = 0; k < phi.N; ++k) f.values[k] = e_of(phi.values[k].times(z));
  return f;
}

GrowthProfile norm_profile(const PhaseFunction& phi, long z_max) {
  if (z_max < 1) throw input_error("norm_profile: z_max must be >= 1");
  GrowthProfile profile;
  profile.entries.resize(z_max);
  parallel_for_chunks(z_max, [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const long z = static_cast<long>(i) + 1;
      profile.entries[i] = {z, algebra_norm(exp_phase(phi, mpz_class(z)))};
    }
  });
  return profile;
}

GrowthFit fit_growth(const GrowthProfile& profile) {
  const auto& es = profile.entries;
  if (es.size() < 8) throw input_error("fit_growth needs at least 8 profile entries");
  for (const auto& e : es)
    if (!(e.norm > 0)) throw input_error("fit_growth: norms must be positive");

  double lo = es[0].norm, hi = es[0].norm;
  for (const auto& e : es) {
    lo = std::min(lo, e.norm);
    hi = std::max(hi, e.norm);
  }
  GrowthFit fit;
  if (hi - lo <= 1e-12 * std::max(1.0, hi)) {
    fit.C = es[0].norm;
    fit.degenerate = true;
    return fit;
  }

  // Linear regression of log(norm) on log(log(3+z)).
  double su = 0, sy = 0, suu = 0, suy = 0;
  for (const auto& e : es) {
    const double u = std::log(std::log(3.0 + static_cast<double>(e.z)));
    const double y = std::log(e.norm);
    su += u;
    sy += y;
    suu += u * u;
    suy += u * y;
  }
  const double n = static_cast<double>(es.size());
  const double denom = n * suu - su * su;
  fit.c = (n * suy - su * sy) / denom;
  fit.C = std::exp((sy - fit.c * su) / n);

  double ss = 0;
  for (const auto& e : es) {
    const double model = fit.C * std::pow(std::log(3.0 + static_cast<double>(e.z)), fit.c);
    ss += (e.norm - model) * (e.norm - model);
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

DenseFunction graph_indicator(const PhaseFunction& phi, long Q) {
  if (Q < 1) throw input_error("graph_indicator: Q must be >= 1");
  DenseFunction f;
  f.group = Group({phi.N, Q});
  f.values.assign(f.group.order(), 0.0);
  for (long k = 0; k < phi.N; ++k) {
    Rational scaled = phi.values[k].fraction() * Q;
    scaled.canonicalize();
    if (scaled.get_den() != 1)
      throw input_error("graph_indicator: phase value " + phi.values[k].str() +
                        " is not on the 1/" + std::to_string(Q) + " grid");
    const long row = scaled.get_num().get_si() % Q;
    f.values[f.group.index_of({k, row})] = 1.0;
  }
  return f;
}

GraphNormReport graph_norm_identity_check(const PhaseFunction& phi, long Q) {
  GraphNormReport report;
  report.graph_norm = algebra_norm(graph_indicator(phi, Q));

  // Row sums, accumulated in s order for determinism.
  std::vector<double> rows(Q);
  parallel_for_chunks(Q, [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const long s = static_cast<long>(i) + 1;  // s ranges over 1..Q
      rows[i] = algebra_norm(exp_phase(phi, mpz_class(s)));
    }
  });
  double sum = 0.0, comp = 0.0;
  for (double r : rows) {
    const double y = r - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  report.row_average = sum / static_cast<double>(Q);
  report.gap = std::abs(report.graph_norm - report.row_average);
  return report;
}

}  // namespace bhlab
