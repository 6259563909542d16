#pragma once

// Batch verification suite: configuration, a worker pool over (family, check)
// tasks, and json / csv / text reports.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "symcone/flats.hpp"
#include "symcone/frobenius.hpp"

#ifndef SYMCONE_VERSION
#define SYMCONE_VERSION "0.0.0"
#endif

namespace symcone {

inline const char* version() { return SYMCONE_VERSION; }

// ---------------------------------------------------------------------------
// Family tokens: "SymR:3", "SymR(3)", "Albert", "SymR:2+Spin:3"

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace detail

inline JordanAlgebra parse_algebra(const std::string& token) {
  using detail::trim;
  std::optional<JordanAlgebra> out;
  std::stringstream ss(token);
  std::string part;
  while (std::getline(ss, part, '+')) {
    part = trim(part);
    std::string name = part;
    int n = 3;
    bool has_n = false;
    if (const auto c = part.find(':'); c != std::string::npos) {
      name = part.substr(0, c);
      const std::string num = part.substr(c + 1);
      try {
        std::size_t used = 0;
        n = std::stoi(num, &used);
        if (used != num.size()) throw std::invalid_argument(num);
      } catch (const std::exception&) {
        throw ConfigError("bad size in family token '" + part + "'");
      }
      has_n = true;
    } else if (const auto p = part.find('('); p != std::string::npos && part.back() == ')') {
      name = part.substr(0, p);
      try {
        n = std::stoi(part.substr(p + 1, part.size() - p - 2));
      } catch (const std::exception&) {
        throw ConfigError("bad size in family token '" + part + "'");
      }
      has_n = true;
    }
    const Family f = parse_family(trim(name));
    if (!has_n && f != Family::Albert) throw ConfigError("family token '" + part + "' needs a size, e.g. SymR:3");
    JordanAlgebra J;
    try {
      J = make_algebra(f, n);
    } catch (const Error& e) {
      throw ConfigError(std::string("invalid family '") + part + "': " + e.what());
    }
    out = out ? direct_sum(*out, J) : J;
  }
  if (!out) throw ConfigError("empty family token");
  return *out;
}

inline std::string algebra_token(const JordanAlgebra& J) {
  std::string s;
  for (std::size_t i = 0; i < J.parts().size(); ++i) {
    const auto& p = J.parts()[i];
    if (i) s += "+";
    s += family_name(p.family) + ":" + std::to_string(p.n);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Checks

struct CheckInfo {
  const char* name;
  double tolerance;
  const char* chart_kind;
  bool informational;
  bool lower_bound;
};

/// Every check with its default tolerance.
inline const std::vector<CheckInfo>& check_catalog() {
  static const std::vector<CheckInfo> c = {
      {"jordan_identity", 1e-9, "none", false, false},
      {"trace_assoc", 1e-10, "none", false, false},
      {"cone_membership", 1e-12, "none", false, false},
      {"self_duality", 1e-12, "none", false, false},
      {"potential_homogeneity", 1e-12, "none", false, false},
      {"derivative_oracle", 1e-8, "ambient", false, false},
      {"derivative_fd", 1e-6, "ambient", false, false},
      {"metric_pd", 1e-12, "ambient", false, false},
      {"metric_homogeneity", 1e-10, "ambient", false, false},
      {"monge_ampere", 1e-8, "ambient", false, false},
      {"flat_lie", 1e-12, "flat", false, false},
      {"flat_geodesic", 1e-9, "flat", false, false},
      {"wdvv_flat", 1e-9, "flat", false, false},
      {"compat_flat", 1e-10, "flat", false, false},
      {"pencil_flat", 1e-9, "flat", false, false},
      {"pencil_coeffs", 1e-8, "flat", false, false},
      {"unit_flat", 1e-9, "flat", false, false},
      {"unit_parallel", 1e-9, "flat", true, false},
      {"wdvv_ambient", 1e-2, "ambient", true, true},
      {"kv_integral", 2e-2, "none", false, false},
  };
  return c;
}

inline const CheckInfo& check_info(const std::string& name) {
  for (const auto& c : check_catalog())
    if (name == c.name) return c;
  throw ConfigError("unknown check '" + name + "'");
}

// ---------------------------------------------------------------------------
// Configuration

struct FamilyEntry {
  JordanAlgebra alg;
  std::optional<int> samples;
  std::map<std::string, double> tolerances;
};

struct SuiteConfig {
  std::vector<FamilyEntry> families;
  int samples = 20;
  std::uint64_t seed = 42;
  std::map<std::string, double> tolerances;  // overrides of the catalog defaults
  std::vector<std::string> checks;           // empty: all
  std::string format = "text";
  std::string out;  // empty: stdout
  Convention convention;
  bool include_mc = false;
  long mc_samples = 200000;
  int threads = 0;  // 0: hardware concurrency

  static std::vector<FamilyEntry> default_families() {
    std::vector<FamilyEntry> f;
    for (const char* t : {"SymR:2", "SymR:3", "HermC:2", "HermC:3", "HermH:2", "HermH:3", "Albert", "Spin:3", "Spin:4",
                          "Spin:5", "SymR:2+Spin:3"})
      f.push_back({parse_algebra(t), std::nullopt, {}});
    return f;
  }

  static SuiteConfig defaults() {
    SuiteConfig c;
    c.families = default_families();
    return c;
  }

  int samples_for(const FamilyEntry& f) const { return f.samples.value_or(samples); }

  double tolerance(const std::string& check, const FamilyEntry& f) const {
    if (auto it = f.tolerances.find(check); it != f.tolerances.end()) return it->second;
    if (auto it = tolerances.find(check); it != tolerances.end()) return it->second;
    return check_info(check).tolerance;
  }

  bool runs(const std::string& check) const {
    return checks.empty() || std::find(checks.begin(), checks.end(), check) != checks.end();
  }

  void validate() const {
    if (families.empty()) throw ConfigError("no families configured");
    if (samples < 1) throw ConfigError("samples must be >= 1");
    if (mc_samples < 1) throw ConfigError("mc_samples must be >= 1");
    if (threads < 0) throw ConfigError("threads must be >= 0");
    if (format != "json" && format != "csv" && format != "text") throw ConfigError("format must be json, csv or text");
    convention.validate();
    auto check_tols = [](const std::map<std::string, double>& m) {
      for (const auto& [k, v] : m) {
        check_info(k);
        if (!(v >= 0.0)) throw ConfigError("tolerance for " + k + " must be >= 0");
      }
    };
    check_tols(tolerances);
    for (const auto& c : checks) check_info(c);
    for (const auto& f : families) {
      if (f.samples && *f.samples < 1) throw ConfigError("samples must be >= 1 for " + f.alg.name());
      check_tols(f.tolerances);
    }
  }
};

namespace detail {

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("bad number for " + key + ": '" + v + "'");
  }
}

inline long long parse_integer(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long d = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("bad integer for " + key + ": '" + v + "'");
  }
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("bad boolean for " + key + ": '" + v + "'");
}

}  // namespace detail

/// key = value lines; a [Family:n] section adds a family, and samples or
/// tol.<check> inside it override the globals for that family.
inline SuiteConfig parse_config(std::istream& in, SuiteConfig base = SuiteConfig::defaults()) {
  std::vector<FamilyEntry> sections;
  bool families_set = false;
  FamilyEntry* current = nullptr;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "unterminated section");
      sections.push_back({parse_algebra(detail::trim(line.substr(1, line.size() - 2))), std::nullopt, {}});
      current = &sections.back();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.rfind("tol.", 0) == 0) {
      const std::string check = key.substr(4);
      check_info(check);
      (current ? current->tolerances : base.tolerances)[check] = detail::parse_double(key, value);
      continue;
    }
    if (key == "samples") {
      const int s = static_cast<int>(detail::parse_integer(key, value));
      if (current)
        current->samples = s;
      else
        base.samples = s;
      continue;
    }
    if (current) throw ConfigError(where + "key '" + key + "' is not allowed inside a family section");
    if (key == "seed") {
      base.seed = static_cast<std::uint64_t>(detail::parse_integer(key, value));
    } else if (key == "families") {
      base.families.clear();
      for (const auto& t : detail::split_list(value)) base.families.push_back({parse_algebra(t), std::nullopt, {}});
      families_set = true;
    } else if (key == "checks") {
      base.checks = detail::split_list(value);
    } else if (key == "format") {
      base.format = value;
    } else if (key == "out") {
      base.out = value;
    } else if (key == "include_mc") {
      base.include_mc = detail::parse_bool(key, value);
    } else if (key == "mc_samples") {
      base.mc_samples = static_cast<long>(detail::parse_integer(key, value));
    } else if (key == "sigma") {
      base.convention.sigma = static_cast<int>(detail::parse_integer(key, value));
    } else if (key == "kappa") {
      base.convention.kappa = detail::parse_double(key, value);
    } else if (key == "threads") {
      base.threads = static_cast<int>(detail::parse_integer(key, value));
    } else {
      throw ConfigError(where + "unknown key '" + key + "'");
    }
  }
  if (!sections.empty()) {
    if (!families_set) base.families.clear();
    for (auto& s : sections) base.families.push_back(std::move(s));
  }
  base.validate();
  return base;
}

inline SuiteConfig load_config(const std::string& path, SuiteConfig base = SuiteConfig::defaults()) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  return parse_config(in, std::move(base));
}

// ---------------------------------------------------------------------------
// Report

struct SuiteReport {
  nlohmann::ordered_json config;
  std::vector<ResidualReport> checks;
  bool overall_pass = true;
  std::string version = symcone::version();
  double seconds = 0.0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

using Rng = std::mt19937_64;

struct CheckContext {
  const JordanAlgebra& alg;
  int samples;
  Convention convention;
  long mc_samples;
  Rng& rng;
  std::string note;
};

inline std::vector<double> random_params(int k, Rng& rng, double spread = 1.0) {
  std::uniform_real_distribution<double> u(-spread, spread);
  std::vector<double> t(k);
  for (auto& v : t) v = u(rng);
  return t;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0}); }

inline bool lie_supported(const JordanAlgebra& J) {
  for (const auto& s : J.parts())
    if (s.family == Family::Albert) return false;
  return true;
}

inline bool mc_supported(const JordanAlgebra& J) {
  try {
    low_dim_view(identity(J));
    return true;
  } catch (const UnsupportedError&) {
    return false;
  }
}

inline void check_jordan_identity(CheckContext& c, ResidualAccumulator& acc) {
  for (int s = 0; s < c.samples * 10; ++s) {
    const auto x = random_element(c.alg, c.rng);
    const auto y = random_element(c.alg, c.rng);
    const auto xy = jordan_product(x, y);
    const auto yx = jordan_product(y, x);
    const double comm = (xy.vec() - yx.vec()).cwiseAbs().maxCoeff();
    const auto x2 = jordan_product(x, x);
    const auto lhs = jordan_product(jordan_product(x2, y), x);
    const auto rhs = jordan_product(x2, jordan_product(y, x));
    const double scale = 1.0 + std::max(lhs.vec().cwiseAbs().maxCoeff(), rhs.vec().cwiseAbs().maxCoeff());
    acc.add(std::max(comm, (lhs.vec() - rhs.vec()).cwiseAbs().maxCoeff() / scale));
  }
}

inline void check_trace_assoc(CheckContext& c, ResidualAccumulator& acc) {
  for (int s = 0; s < c.samples * 10; ++s) acc.add(trace_assoc_residual(c.alg, 1, c.rng));
}

inline void check_cone_membership(CheckContext& c, ResidualAccumulator& acc) {
  std::uniform_real_distribution<double> lam(0.01, 100.0);
  for (int s = 0; s < c.samples * 10; ++s) {
    const auto x = sample_interior(c.alg, c.rng, 0.5).element;
    const auto y = sample_interior(c.alg, c.rng, 0.5).element;
    const auto z = random_element(c.alg, c.rng);
    const bool ok = contains(x) && contains(lam(c.rng) * x) && contains(x + y) &&
                    contains(lam(c.rng) * z) == contains(z) && !contains(-1.0 * x);
    acc.add(ok ? 0.0 : 1.0);
  }
  c.note = "fraction of samples violating cone axioms";
}

inline void check_self_duality(CheckContext& c, ResidualAccumulator& acc) {
  for (int s = 0; s < c.samples * 10; ++s) acc.add(self_duality_sample(c.alg, c.rng, 1) ? 0.0 : 1.0);
  c.note = "fraction of interior pairs with <x, y> <= 0";
}

inline void check_potential_homogeneity(CheckContext& c, ResidualAccumulator& acc) {
  const PotentialSpec spec(c.alg);
  std::uniform_real_distribution<double> lam(0.1, 10.0);
  for (int s = 0; s < c.samples; ++s) {
    const auto x = sample_interior(c.alg, c.rng, 1.0).element;
    const double l = lam(c.rng);
    const double a = kv_potential(spec, l * x);
    const double b = kv_potential(spec, x) + spec.degree() * std::log(l);
    acc.add(std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b))));
  }
}

inline void check_derivative_oracle(CheckContext& c, ResidualAccumulator& acc) {
  const PotentialSpec spec(c.alg);
  const double unit = 1.0 / std::sqrt(c.alg.dim());
  for (int s = 0; s < c.samples; ++s) {
    const auto x = sample_interior(c.alg, c.rng, 1.0).element;
    std::vector<JordanElement> d;
    for (int a = 0; a < 4; ++a) d.push_back(unit * random_element(c.alg, c.rng));
    const auto jet = potential_jet(spec, x, {&d[0], &d[1], &d[2], &d[3]});
    double worst = 0.0;
    std::vector<const JordanElement*> dirs;
    for (int order = 1; order <= 4; ++order) {
      dirs.push_back(&d[order - 1]);
      worst = std::max(worst, rel(jet.partial((1u << order) - 1), logdet_oracle(spec, x, dirs)));
    }
    acc.add(worst);
  }
  c.note = "relative difference, orders 1-4";
}

inline void check_derivative_fd(CheckContext& c, ResidualAccumulator& acc) {
  const PotentialSpec spec(c.alg);
  const double unit = 1.0 / std::sqrt(c.alg.dim());
  for (int s = 0; s < c.samples; ++s) {
    const auto x = sample_interior(c.alg, c.rng, 1.0).element;
    const auto a = unit * random_element(c.alg, c.rng);
    const auto b = unit * random_element(c.alg, c.rng);
    const auto jet = potential_jet(spec, x, {&a, &b});
    acc.add(std::max(std::abs(jet.partial(1) - finite_difference(spec, x, {&a})),
                     std::abs(jet.partial(3) - finite_difference(spec, x, {&a, &b}))));
  }
  c.note = "absolute difference, unit-scale directions, orders 1-2";
}

inline void check_metric_pd(CheckContext& c, ResidualAccumulator& acc) {
  const PotentialSpec spec(c.alg);
  double margin = std::numeric_limits<double>::infinity();
  for (int s = 0; s < c.samples; ++s) {
    const auto x = sample_interior(c.alg, c.rng, 0.5);
    const auto g = metric(spec, ambient_chart(x));
    margin = std::min(margin, g.min_eigenvalue / g.g.cwiseAbs().maxCoeff());
    acc.add(g.min_eigenvalue > 0.0 ? 0.0 : 1.0);
  }
  std::ostringstream os;
  os << "fraction not positive definite; min relative eigenvalue margin " << std::setprecision(3) << margin;
  c.note = os.str();
}

inline void check_metric_homogeneity(CheckContext& c, ResidualAccumulator& acc) {
  const PotentialSpec spec(c.alg);
  std::uniform_real_distribution<double> lam(0.5, 2.0);
  const int n = std::max(1, c.samples / 4);
  for (int s = 0; s < n; ++s) {
    const auto x = sample_interior(c.alg, c.rng, 1.0);
    const double l = lam(c.rng);
    const auto g1 = metric(spec, ambient_chart(x));
    const auto g2 = metric(spec, ambient_chart(ConePoint::certify(l * x.element)));
    const double scale = g1.g.cwiseAbs().maxCoeff();
    acc.add((g2.g * (l * l) - g1.g).cwiseAbs().maxCoeff() / scale);
  }
  c.note = "max |l^2 g(l x) - g(x)| / max |g(x)|";
}

inline void check_monge_ampere(CheckContext& c, ResidualAccumulator& acc) {
  const PotentialSpec spec(c.alg);
  std::vector<double> v;
  for (int s = 0; s < c.samples; ++s) v.push_back(monge_ampere_invariant(spec, sample_interior(c.alg, c.rng, 0.5)));
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= v.size();
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  const double cv = std::sqrt(var / v.size()) / std::abs(mean);
  acc.add(cv);
  std::ostringstream os;
  os << "coefficient of variation over " << v.size() << " points; mean " << std::setprecision(12) << mean;
  c.note = os.str();
}

inline void check_flat_lie(CheckContext& c, ResidualAccumulator& acc) {
  const auto F = cartan_flat(c.alg);
  double worst = 0.0;
  for (const auto& a : F.abasis)
    for (const auto& b : F.abasis) {
      worst = std::max(worst, max_abs(lie_bracket(a, b)));
      for (const auto& z : F.abasis) worst = std::max(worst, coord_norm(curvature_triple(a, b, z)));
    }
  worst = std::max(worst, lie_triple_residual(F.abasis));
  acc.add(worst);
  c.note = "pairwise brackets, Lie triple residual and curvature on the flat basis";
}

inline void check_flat_geodesic(CheckContext& c, ResidualAccumulator& acc) {
  const PotentialSpec spec(c.alg);
  const auto F = cartan_flat(c.alg);
  const int n = c.alg.dim() > 10 ? std::max(1, c.samples / 4) : c.samples;
  for (int s = 0; s < n; ++s) acc.add(totally_geodesic_residual(spec, F, random_params(F.dim(), c.rng)));
  c.note = "C(flat, flat, g-normal) relative to the flat C entries";
}

struct FlatSample {
  MetricTensor g;
  CTensor C;
  QTensor Q;
};

inline FlatSample flat_sample(const PotentialSpec& spec, const FlatDescriptor& F, const std::vector<double>& t) {
  const auto chart = flat_chart(F, t);
  return {metric(spec, chart), c_tensor(spec, chart), q_tensor(spec, chart)};
}

template <class F>
void for_flat_points(CheckContext& c, F&& f) {
  const PotentialSpec spec(c.alg);
  const auto flat = cartan_flat(c.alg);
  for (int s = 0; s < c.samples; ++s) {
    const auto t = random_params(flat.dim(), c.rng);
    f(spec, flat, t, flat_sample(spec, flat, t));
  }
}

inline void check_wdvv_flat(CheckContext& c, ResidualAccumulator& acc) {
  for_flat_points(c, [&](auto&, auto&, auto&, const FlatSample& d) { acc.add(wdvv_residual(d.g, d.C)); });
}

inline void check_compat_flat(CheckContext& c, ResidualAccumulator& acc) {
  for_flat_points(c, [&](auto&, auto&, auto&, const FlatSample& d) {
    acc.add(frobenius_compat_residual(d.g, structure_constants(d.g, d.C, c.convention), d.C) / d.g.cond);
  });
  c.note = "normalized residual divided by cond(g)";
}

inline void check_pencil_flat(CheckContext& c, ResidualAccumulator& acc) {
  for_flat_points(c, [&](auto&, auto&, auto&, const FlatSample& d) {
    const auto t = pencil_terms(d.g, d.C, d.Q, c.convention);
    double worst = 0.0;
    for (double lambda : {-1.0, 0.5, 1.0, 2.0}) worst = std::max(worst, pencil_curvature_residual(t, lambda));
    acc.add(worst);
  });
  c.note = "max over lambda in {-1, 1/2, 1, 2}";
}

inline void check_pencil_coeffs(CheckContext& c, ResidualAccumulator& acc) {
  for_flat_points(c, [&](auto&, auto&, auto&, const FlatSample& d) {
    const auto k = pencil_coefficients(pencil_terms(d.g, d.C, d.Q, c.convention));
    acc.add(std::max(k.linear, k.quadratic));
  });
  c.note = "lambda and lambda^2 coefficients fitted over lambda in {1, 2, 3}";
}

inline void check_unit_flat(CheckContext& c, ResidualAccumulator& acc) {
  for_flat_points(c, [&](auto&, auto&, auto&, const FlatSample& d) { acc.add(solve_unit(d.g, d.C).residual); });
  c.note = "least-squares unit of e^i C_iab = g_ab";
}

inline void check_unit_parallel(CheckContext& c, ResidualAccumulator& acc) {
  // derivative of the solved unit along the chart coordinates
  const PotentialSpec spec(c.alg);
  const auto F = cartan_flat(c.alg);
  const double h = 1e-4;
  for (int s = 0; s < std::max(1, c.samples / 4); ++s) {
    const auto t = random_params(F.dim(), c.rng);
    const auto base = flat_point(F, t);
    auto unit_at = [&](const JordanElement& x) {
      const auto chart = Chart::make(ConePoint::certify(x), F.frame);
      return solve_unit(metric(spec, chart), c_tensor(spec, chart)).e;
    };
    const Eigen::VectorXd e0 = unit_at(base.element);
    double worst = 0.0;
    for (std::size_t b = 0; b < F.frame.size(); ++b) {
      const Eigen::VectorXd e1 = unit_at(base.element + h * F.frame[b]);
      worst = std::max(worst, (e1 - e0).cwiseAbs().maxCoeff() / h);
    }
    acc.add(worst);
  }
  c.note = "observable: max |d e / d y| of the solved unit in flat coordinates";
}

inline void check_wdvv_ambient(CheckContext& c, ResidualAccumulator& acc) {
  const PotentialSpec spec(c.alg);
  const auto chart = ambient_chart(ConePoint::certify(identity(c.alg)));
  acc.add(wdvv_residual(metric(spec, chart), c_tensor(spec, chart)));
  c.note = "witness at the identity; expected above the threshold";
}

inline void check_kv_integral(CheckContext& c, ResidualAccumulator& acc) {
  // fit log chi(x) = a + b log det(x) over interior points
  const PotentialSpec spec(c.alg);
  const double slope = -spec.k();
  std::vector<double> xs, ys;
  const int n = 8;
  for (int s = 0; s < n; ++s) {
    const auto x = sample_interior(c.alg, c.rng, 0.5).element;
    xs.push_back(std::log(determinant(x)));
    ys.push_back(std::log(kv_integral_mc(x, c.mc_samples, c.rng)));
  }
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) mx += xs[i] / n, my += ys[i] / n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) sxx += (xs[i] - mx) * (xs[i] - mx), sxy += (xs[i] - mx) * (ys[i] - my);
  const double b = sxy / sxx;
  double fit = 0.0;
  for (int i = 0; i < n; ++i) fit = std::max(fit, std::abs(ys[i] - (my + b * (xs[i] - mx))));
  acc.add(std::max(std::abs(b - slope) / std::abs(slope), fit));
  std::ostringstream os;
  os << "fitted slope " << std::setprecision(6) << b << " vs " << slope << ", max fit deviation " << fit;
  c.note = os.str();
}

using CheckFn = void (*)(CheckContext&, ResidualAccumulator&);

inline CheckFn check_function(const std::string& name) {
  static const std::map<std::string, CheckFn> fns = {
      {"jordan_identity", check_jordan_identity},
      {"trace_assoc", check_trace_assoc},
      {"cone_membership", check_cone_membership},
      {"self_duality", check_self_duality},
      {"potential_homogeneity", check_potential_homogeneity},
      {"derivative_oracle", check_derivative_oracle},
      {"derivative_fd", check_derivative_fd},
      {"metric_pd", check_metric_pd},
      {"metric_homogeneity", check_metric_homogeneity},
      {"monge_ampere", check_monge_ampere},
      {"flat_lie", check_flat_lie},
      {"flat_geodesic", check_flat_geodesic},
      {"wdvv_flat", check_wdvv_flat},
      {"compat_flat", check_compat_flat},
      {"pencil_flat", check_pencil_flat},
      {"pencil_coeffs", check_pencil_coeffs},
      {"unit_flat", check_unit_flat},
      {"unit_parallel", check_unit_parallel},
      {"wdvv_ambient", check_wdvv_ambient},
      {"kv_integral", check_kv_integral},
  };
  return fns.at(name);
}

struct Task {
  std::size_t family;
  std::string check;
};

}  // namespace detail

/// Checks that apply to one algebra under the configuration.
inline std::vector<std::string> applicable_checks(const SuiteConfig& cfg, const JordanAlgebra& J) {
  std::vector<std::string> out;
  for (const auto& c : check_catalog()) {
    const std::string name = c.name;
    if (!cfg.runs(name)) continue;
    if (name == "flat_lie" && !detail::lie_supported(J)) continue;
    if (name == "kv_integral" && !(cfg.include_mc && detail::mc_supported(J))) continue;
    out.push_back(name);
  }
  return out;
}

inline nlohmann::ordered_json config_echo(const SuiteConfig& cfg) {
  nlohmann::ordered_json j;
  j["families"] = nlohmann::ordered_json::array();
  for (const auto& f : cfg.families) {
    nlohmann::ordered_json e;
    e["family"] = f.alg.name();
    e["samples"] = cfg.samples_for(f);
    if (!f.tolerances.empty()) e["tolerances"] = f.tolerances;
    j["families"].push_back(e);
  }
  j["samples"] = cfg.samples;
  j["seed"] = cfg.seed;
  j["tolerances"] = nlohmann::ordered_json::object();
  for (const auto& c : check_catalog()) j["tolerances"][c.name] = cfg.tolerances.count(c.name) ? cfg.tolerances.at(c.name) : c.tolerance;
  j["checks"] = cfg.checks;
  j["sigma"] = cfg.convention.sigma;
  j["kappa"] = cfg.convention.kappa;
  j["include_mc"] = cfg.include_mc;
  j["mc_samples"] = cfg.mc_samples;
  return j;
}

/// Runs every applicable (family, check) task on a worker pool. Each task
/// draws from its own generator seeded from (seed, family, check), so the
/// report does not depend on scheduling.
inline SuiteReport run_suite(const SuiteConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  std::vector<detail::Task> tasks;
  for (std::size_t f = 0; f < cfg.families.size(); ++f)
    for (const auto& c : applicable_checks(cfg, cfg.families[f].alg)) tasks.push_back({f, c});

  std::vector<ResidualReport> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const auto& task = tasks[i];
      const auto& fam = cfg.families[task.family];
      const auto& info = check_info(task.check);
      ResidualReport base;
      base.check = task.check;
      base.family = fam.alg.name();
      base.chart_kind = info.chart_kind;
      base.tolerance = cfg.tolerance(task.check, fam);
      base.informational = info.informational;
      base.lower_bound = info.lower_bound;
      detail::Rng rng(detail::splitmix64(cfg.seed ^ detail::fnv1a(algebra_token(fam.alg) + "/" + task.check)));
      detail::CheckContext ctx{fam.alg, cfg.samples_for(fam), cfg.convention, cfg.mc_samples, rng, {}};
      ResidualAccumulator acc;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        detail::check_function(task.check)(ctx, acc);
      } catch (const std::exception& e) {
        base.error = e.what();
      }
      base.note = ctx.note;
      auto rep = acc.finish(base);
      rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      results[i] = std::move(rep);
    }
  };
  const int n_threads = std::max(
      1, std::min<int>(cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency()),
                       static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  SuiteReport report;
  report.config = config_echo(cfg);
  report.checks = std::move(results);
  for (const auto& r : report.checks)
    if (!r.informational && !r.pass) report.overall_pass = false;
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::ordered_json to_json(const ResidualReport& r, bool timing = true) {
  nlohmann::ordered_json j;
  j["family"] = r.family;
  j["check"] = r.check;
  j["chart_kind"] = r.chart_kind;
  j["samples"] = r.samples;
  j["max_residual"] = r.max_residual;
  j["mean_residual"] = r.mean_residual;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  j["informational"] = r.informational;
  j["lower_bound"] = r.lower_bound;
  j["note"] = r.note;
  j["error"] = r.error;
  if (timing) j["seconds"] = r.seconds;
  return j;
}

inline nlohmann::ordered_json to_json(const SuiteReport& r, bool timing = true) {
  nlohmann::ordered_json j;
  j["version"] = r.version;
  j["overall_pass"] = r.overall_pass;
  j["config"] = r.config.is_null() ? nlohmann::ordered_json::object() : r.config;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) j["checks"].push_back(to_json(c, timing));
  if (timing) j["seconds"] = r.seconds;
  return j;
}

inline ResidualReport residual_report_from_json(const nlohmann::ordered_json& j) {
  ResidualReport r;
  r.family = j.at("family").get<std::string>();
  r.check = j.at("check").get<std::string>();
  r.chart_kind = j.at("chart_kind").get<std::string>();
  r.samples = j.at("samples").get<int>();
  r.max_residual = j.at("max_residual").get<double>();
  r.mean_residual = j.at("mean_residual").get<double>();
  r.tolerance = j.at("tolerance").get<double>();
  r.pass = j.at("pass").get<bool>();
  r.informational = j.at("informational").get<bool>();
  r.lower_bound = j.at("lower_bound").get<bool>();
  r.note = j.at("note").get<std::string>();
  r.error = j.at("error").get<std::string>();
  r.seconds = j.value("seconds", 0.0);
  return r;
}

inline SuiteReport report_from_json(const nlohmann::ordered_json& j) {
  SuiteReport r;
  r.version = j.at("version").get<std::string>();
  r.overall_pass = j.at("overall_pass").get<bool>();
  r.config = j.at("config");
  for (const auto& c : j.at("checks")) r.checks.push_back(residual_report_from_json(c));
  r.seconds = j.value("seconds", 0.0);
  return r;
}

namespace detail {

inline std::string sci(double v, int precision = 3) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*e", precision, v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string verdict(const ResidualReport& r) {
  if (!r.error.empty()) return "ERROR";
  if (r.pass) return "PASS";
  return r.informational ? "INFO-FAIL" : "FAIL";
}

}  // namespace detail

inline void emit(const SuiteReport& r, const std::string& format, std::ostream& os, bool timing = true) {
  if (format == "json") {
    os << to_json(r, timing).dump(2) << "\n";
  } else if (format == "csv") {
    os << "family,check,chart_kind,samples,max_residual,mean_residual,tolerance,pass,informational";
    if (timing) os << ",seconds";
    os << "\n";
    for (const auto& c : r.checks) {
      os << detail::csv_field(c.family) << ',' << c.check << ',' << c.chart_kind << ',' << c.samples << ','
         << detail::sci(c.max_residual, 6) << ',' << detail::sci(c.mean_residual, 6) << ','
         << detail::sci(c.tolerance, 6) << ',' << (c.pass ? "true" : "false") << ','
         << (c.informational ? "true" : "false");
      if (timing) os << ',' << std::fixed << std::setprecision(3) << c.seconds << std::defaultfloat;
      os << "\n";
    }
  } else if (format == "text") {
    std::size_t wf = 6, wc = 5;
    for (const auto& c : r.checks) {
      wf = std::max(wf, c.family.size());
      wc = std::max(wc, c.check.size());
    }
    auto row = [&](const std::string& f, const std::string& c, const std::string& n, const std::string& mx,
                   const std::string& mean, const std::string& tol, const std::string& v, const std::string& t) {
      os << std::left << std::setw(static_cast<int>(wf) + 2) << f << std::setw(static_cast<int>(wc) + 2) << c
         << std::right << std::setw(7) << n << std::setw(12) << mx << std::setw(12) << mean << std::setw(12) << tol
         << "  " << std::left << std::setw(9) << v;
      if (timing) os << std::right << std::setw(9) << t;
      os << "\n";
    };
    os << "symcone " << r.version << "\n";
    row("family", "check", "n", "max", "mean", "tol", "verdict", "seconds");
    for (const auto& c : r.checks) {
      std::ostringstream secs;
      secs << std::fixed << std::setprecision(2) << c.seconds;
      const std::string tol = (c.lower_bound ? ">" : "<") + detail::sci(c.tolerance, 1);
      row(c.family, c.check, std::to_string(c.samples), detail::sci(c.max_residual, 2),
          detail::sci(c.mean_residual, 2), tol, detail::verdict(c), secs.str());
      if (!c.error.empty()) os << "    error: " << c.error << "\n";
    }
    os << "overall: " << (r.overall_pass ? "PASS" : "FAIL");
    if (timing) os << " in " << std::fixed << std::setprecision(2) << r.seconds << " s" << std::defaultfloat;
    os << "\n";
  } else {
    throw ConfigError("unknown format '" + format + "'");
  }
}

inline void emit_to_file(const SuiteReport& r, const std::string& format, const std::string& path,
                         bool timing = true) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write report to '" + path + "'");
  emit(r, format, out, timing);
  if (!out) throw Error("failed writing report to '" + path + "'");
}

}  // namespace symcone
