// symcone: run the verification suite or inspect one flat point.
//
//   symcone verify [--config F] [--families SymR:3,Spin:4] [--seed N] ...
//   symcone scan --max-rank R [...]
//   symcone flat --family SymR --n 3 --params 0.1,0.2,-0.3
//
// Exit codes: 0 all checks pass, 1 some check failed, 2 configuration error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "symcone/report.hpp"

namespace {

using namespace symcone;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kConfig = 2;

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> families;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<std::string> format;
  std::optional<std::string> out;
  bool include_mc = false;
  std::optional<long> mc_samples;
  std::optional<int> sigma;
  std::optional<double> kappa;
  std::optional<int> threads;
  std::vector<std::string> checks;
  bool no_timing = false;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool families) {
  cmd->add_option("--config", o.config_path, "key = value config file")->check(CLI::ExistingFile);
  if (families)
    cmd->add_option("--families", o.families, "family tokens such as SymR:3, Albert, SymR:2+Spin:3")->delimiter(',');
  cmd->add_option("--seed", o.seed, "master seed (default: $SYMCONE_SEED or 42)");
  cmd->add_option("--samples", o.samples, "samples per check");
  cmd->add_option("--format", o.format, "report format")->check(CLI::IsMember({"json", "csv", "text"}));
  cmd->add_option("--out", o.out, "report path (default: stdout)");
  cmd->add_flag("--include-mc", o.include_mc, "run the Monte Carlo characteristic-function check");
  cmd->add_option("--mc-samples", o.mc_samples, "Monte Carlo samples per point");
  cmd->add_option("--sigma", o.sigma, "sign convention of the product (+1 or -1)");
  cmd->add_option("--kappa", o.kappa, "scale convention of the product (1 or 0.5)");
  cmd->add_option("--threads", o.threads, "worker threads (0: all cores)");
  cmd->add_option("--checks", o.checks, "restrict to these checks")->delimiter(',');
  cmd->add_flag("--no-timing", o.no_timing, "omit wall-clock fields from the report");
}

SuiteConfig build_config(const CommonOptions& o) {
  SuiteConfig cfg = SuiteConfig::defaults();
  if (const char* env = std::getenv("SYMCONE_SEED")) {
    try {
      std::size_t used = 0;
      cfg.seed = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw ConfigError(std::string("SYMCONE_SEED is not an integer: '") + env + "'");
    }
  }
  if (!o.config_path.empty()) cfg = load_config(o.config_path, cfg);
  if (!o.families.empty()) {
    cfg.families.clear();
    for (const auto& t : o.families) cfg.families.push_back({parse_algebra(t), std::nullopt, {}});
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.samples) cfg.samples = *o.samples;
  if (o.format) cfg.format = *o.format;
  if (o.out) cfg.out = *o.out;
  if (o.include_mc) cfg.include_mc = true;
  if (o.mc_samples) cfg.mc_samples = *o.mc_samples;
  if (o.sigma) cfg.convention.sigma = *o.sigma;
  if (o.kappa) cfg.convention.kappa = *o.kappa;
  if (o.threads) cfg.threads = *o.threads;
  if (!o.checks.empty()) cfg.checks = o.checks;
  cfg.validate();
  return cfg;
}

int run_and_emit(const SuiteConfig& cfg, bool timing) {
  std::ofstream file;
  if (!cfg.out.empty()) {
    file.open(cfg.out);
    if (!file) throw ConfigError("cannot write report to '" + cfg.out + "'");
  }
  const auto report = run_suite(cfg);
  emit(report, cfg.format, cfg.out.empty() ? std::cout : file, timing);
  if (!cfg.out.empty()) std::cerr << "overall: " << (report.overall_pass ? "PASS" : "FAIL") << "\n";
  return report.overall_pass ? kPass : kFail;
}

std::vector<FamilyEntry> scan_families(int max_rank) {
  std::vector<FamilyEntry> f;
  auto add = [&](const std::string& t) { f.push_back({parse_algebra(t), std::nullopt, {}}); };
  for (const char* fam : {"SymR", "HermC", "HermH"})
    for (int n = 2; n <= max_rank; ++n) add(std::string(fam) + ":" + std::to_string(n));
  if (max_rank >= 3) add("Albert");
  if (max_rank >= 2)
    for (int n = 3; n <= 5; ++n) add("Spin:" + std::to_string(n));
  return f;
}

// ---------------------------------------------------------------------------
// flat

struct FlatOptions {
  std::string family;
  int n = 3;
  std::vector<double> params;
  std::string format = "text";
  int sigma = -1;
  double kappa = 0.5;
};

nlohmann::ordered_json matrix_json(const Eigen::MatrixXd& m) {
  auto a = nlohmann::ordered_json::array();
  for (int i = 0; i < m.rows(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    a.push_back(row);
  }
  return a;
}

int run_flat(const FlatOptions& o) {
  const bool token = o.family.find_first_of(":+(") != std::string::npos;
  const auto J = token ? parse_algebra(o.family) : parse_algebra(o.family + ":" + std::to_string(o.n));
  const Convention conv{o.sigma, o.kappa};
  conv.validate();
  const auto F = cartan_flat(J);
  if (static_cast<int>(o.params.size()) != F.dim())
    throw ConfigError("flat of " + J.name() + " has dimension " + std::to_string(F.dim()) + ", got " +
                      std::to_string(o.params.size()) + " parameters");

  const PotentialSpec spec(J);
  const auto chart = flat_chart(F, o.params);
  const auto g = metric(spec, chart);
  const auto C = c_tensor(spec, chart);
  const auto Q = q_tensor(spec, chart);
  const auto sc = structure_constants(g, C, conv);
  const auto terms = pencil_terms(g, C, Q, conv);
  const auto coeffs = pencil_coefficients(terms);
  const auto unit = solve_unit(g, C);
  double pencil = 0.0;
  for (double lambda : {-1.0, 0.5, 1.0, 2.0}) pencil = std::max(pencil, pencil_curvature_residual(terms, lambda));

  struct Row {
    std::string name;
    double value;
    double tol;
  };
  const std::vector<Row> rows = {
      {"wdvv", wdvv_residual(g, C), check_info("wdvv_flat").tolerance},
      {"compat", frobenius_compat_residual(g, sc, C) / g.cond, check_info("compat_flat").tolerance},
      {"pencil", pencil, check_info("pencil_flat").tolerance},
      {"pencil_linear", coeffs.linear, check_info("pencil_coeffs").tolerance},
      {"pencil_quadratic", coeffs.quadratic, check_info("pencil_coeffs").tolerance},
      {"unit", unit.residual, check_info("unit_flat").tolerance},
      {"geodesic", totally_geodesic_residual(spec, F, o.params), check_info("flat_geodesic").tolerance},
  };
  bool pass = true;
  for (const auto& r : rows) pass = pass && r.value < r.tol;
  const auto eig = flat_eigenvalues(F, o.params);
  const Eigen::VectorXd e = unit.e;

  if (o.format == "json") {
    nlohmann::ordered_json j;
    j["family"] = J.name();
    j["flat"] = F.note;
    j["params"] = o.params;
    j["weyl_chamber"] = weyl_chamber_contains(o.params);
    j["point"] = chart.base.element.coords;
    j["eigenvalues"] = eig;
    j["chart"] = nlohmann::ordered_json::array();
    for (const auto& d : chart.dirs) j["chart"].push_back(d.coords);
    j["g"] = matrix_json(g.g);
    j["C"] = C.v;
    j["unit"] = std::vector<double>(e.data(), e.data() + e.size());
    for (const auto& r : rows) j["residuals"][r.name] = {{"value", r.value}, {"tolerance", r.tol}, {"pass", r.value < r.tol}};
    j["pass"] = pass;
    std::cout << j.dump(2) << "\n";
    return pass ? kPass : kFail;
  }

  auto vec = [](const std::vector<double>& v) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    return os.str() + ")";
  };
  std::cout << std::setprecision(10);
  std::cout << "family        " << J.name() << "\n"
            << "flat          " << F.note << "\n"
            << "params        " << vec(o.params) << (weyl_chamber_contains(o.params) ? "  [Weyl chamber]" : "")
            << "\n"
            << "point         " << vec(chart.base.element.coords) << "\n"
            << "eigenvalues   " << vec(eig) << "\n";
  for (std::size_t a = 0; a < chart.dirs.size(); ++a)
    std::cout << "chart dir " << a << "   " << vec(chart.dirs[a].coords) << "\n";
  std::cout << "g =\n" << g.g << "\n";
  std::cout << "C (nonzero entries, sorted indices):\n";
  const int m = C.m;
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b)
      for (int c = b; c < m; ++c)
        if (std::abs(C(a, b, c)) > 1e-12 * (1.0 + g.g.cwiseAbs().maxCoeff()))
          std::cout << "  C[" << a << b << c << "] = " << C(a, b, c) << "\n";
  std::cout << "unit          " << vec(std::vector<double>(e.data(), e.data() + e.size())) << "\n";
  for (const auto& r : rows)
    std::cout << std::left << std::setw(18) << r.name << std::right << std::setw(12) << detail::sci(r.value, 2) << "  <"
              << detail::sci(r.tol, 1) << "  " << (r.value < r.tol ? "PASS" : "FAIL") << "\n";
  std::cout << "overall: " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification suite for symmetric cones, their Hessian geometry and flat Frobenius structures"};
  app.set_version_flag("--version", std::string("symcone ") + symcone::version());
  app.require_subcommand(1);

  CommonOptions verify_opts;
  auto* verify = app.add_subcommand("verify", "run the residual suite");
  add_common(verify, verify_opts, true);

  CommonOptions scan_opts;
  int max_rank = 3;
  auto* scan = app.add_subcommand("scan", "run the suite on every family up to a rank");
  scan->add_option("--max-rank", max_rank, "largest rank")->required()->check(CLI::Range(1, 12));
  add_common(scan, scan_opts, false);

  FlatOptions flat_opts;
  auto* flat = app.add_subcommand("flat", "geometry and residuals at one flat point");
  flat->add_option("--family", flat_opts.family, "SymR, HermC, HermH, Albert, Spin or a token like SymR:2+Spin:3")
      ->required();
  flat->add_option("--n", flat_opts.n, "matrix size, or ambient dimension for Spin");
  flat->add_option("--params", flat_opts.params, "flat parameters t1,t2,...")->delimiter(',')->required();
  flat->add_option("--format", flat_opts.format, "output format")->check(CLI::IsMember({"json", "text"}));
  flat->add_option("--sigma", flat_opts.sigma, "sign convention of the product (+1 or -1)");
  flat->add_option("--kappa", flat_opts.kappa, "scale convention of the product (1 or 0.5)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfig;
  }

  try {
    if (*verify) {
      const auto cfg = build_config(verify_opts);
      return run_and_emit(cfg, !verify_opts.no_timing);
    }
    if (*scan) {
      auto cfg = build_config(scan_opts);
      cfg.families = scan_families(max_rank);
      if (cfg.families.empty()) throw ConfigError("no families up to rank " + std::to_string(max_rank));
      return run_and_emit(cfg, !scan_opts.no_timing);
    }
    if (*flat) return run_flat(flat_opts);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kConfig;
}
