// freestoch CLI: file-based workflows over the shared-library C API.
//
// Exit codes: 0 success/pass, 1 failed check or runtime error, 2 usage or
// parse error.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "freestoch/freestoch.h"

namespace {

using Json = nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct CliError {
  int exit_code;
  std::string message;
};

[[noreturn]] void die(int code, const std::string& message) { throw CliError{code, message}; }

void check(fsc_status st) {
  if (st == FSC_OK) return;
  const int code = (st == FSC_ERR_PARSE || st == FSC_ERR_INVALID_ARGUMENT || st == FSC_ERR_IO)
                       ? kExitUsage
                       : kExitFail;
  die(code, std::string(fsc_status_name(st)) + ": " + fsc_last_error());
}

std::string take_string(char* s) {
  std::string out(s ? s : "");
  fsc_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) die(kExitUsage, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

using CumulantsPtr = std::unique_ptr<fsc_cumulants, decltype(&fsc_cumulants_free)>;
using StepfnPtr = std::unique_ptr<fsc_stepfn, decltype(&fsc_stepfn_free)>;

CumulantsPtr load_cumulants(const std::string& path, bool warn_normalization = true) {
  fsc_cumulants* raw = nullptr;
  check(fsc_cumulants_from_json(read_file(path).c_str(), &raw));
  CumulantsPtr r(raw, &fsc_cumulants_free);
  if (warn_normalization) {
    char* json = nullptr;
    check(fsc_cumulants_to_json(r.get(), &json));
    const Json j = Json::parse(take_string(json));
    const auto& values = j.at("values");
    if (values.size() < 2 || values[1].get<std::string>() != "1")
      std::cerr << "note: base is not variance-normalized (r_2 != 1); formulas do not require it\n";
  }
  return r;
}

StepfnPtr load_stepfn(const std::string& path) {
  fsc_stepfn* raw = nullptr;
  check(fsc_stepfn_from_json(read_file(path).c_str(), &raw));
  return StepfnPtr(raw, &fsc_stepfn_free);
}

double rational_to_double(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return std::strtod(s.c_str(), nullptr);
  return std::strtod(s.substr(0, slash).c_str(), nullptr) /
         std::strtod(s.substr(slash + 1).c_str(), nullptr);
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
  return buf;
}

Json make_manifest(const std::string& command, const std::vector<std::string>& argv, const Json& params) {
  Json m{{"command", command},
         {"tool_version", fsc_version()},
         {"parameters", params},
         {"timestamp", timestamp_utc()}};
  Json args = Json::array();
  for (const auto& a : argv) args.push_back(a);
  m["argv"] = args;
  return m;
}

// Output files are written whole, after the computation succeeded, together
// with a sidecar manifest.
void write_output(const std::string& path, const std::string& payload, const Json& manifest) {
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) die(kExitFail, "cannot write '" + path + "'");
    out << payload;
  }
  std::ofstream mout(path + ".manifest.json", std::ios::binary | std::ios::trunc);
  mout << manifest.dump(2) << "\n";
}

void print_rational_table(const Json& values, const char* label) {
  std::printf("%4s  %-24s  %s\n", "k", (std::string(label) + " (exact)").c_str(), "decimal");
  int k = 1;
  for (const auto& v : values) {
    const std::string s = v.get<std::string>();
    std::printf("%4d  %-24s  %.12g\n", k++, s.c_str(), rational_to_double(s));
  }
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"freestoch: distributions of stochastic integrals with respect to free Levy processes"};
  app.require_subcommand(1);
  std::vector<std::string> raw_args(argv, argv + argc);

  // ---- moments ----
  auto* cmd_moments = app.add_subcommand("moments", "moments m_1..m_n of a cumulant file");
  std::string moments_base;
  int moments_n = 6;
  cmd_moments->add_option("base", moments_base, "cumulant json file")->required();
  cmd_moments->add_option("--n", moments_n, "highest moment");

  // ---- cumulants ----
  auto* cmd_cumulants = app.add_subcommand("cumulants", "free cumulants from a moment file");
  std::string cumulants_file;
  int cumulants_n = 0;
  cmd_cumulants->add_option("moments", cumulants_file, "moment json file")->required();
  cmd_cumulants->add_option("--n", cumulants_n, "order (default: all provided moments)");

  // ---- integral-dist ----
  auto* cmd_integral = app.add_subcommand("integral-dist", "law of the scalar integral int f dX");
  std::string integral_base, integral_step;
  int integral_n = 6;
  cmd_integral->add_option("base", integral_base, "cumulant json file")->required();
  cmd_integral->add_option("step", integral_step, "step-function json file")->required();
  cmd_integral->add_option("--n", integral_n, "moments to report");

  // ---- diagonal ----
  auto* cmd_diagonal = app.add_subcommand("diagonal", "cumulants of the diagonal measure Delta_k(t)");
  std::string diagonal_base, diagonal_t = "1";
  int diagonal_k = 2, diagonal_n = 6;
  cmd_diagonal->add_option("base", diagonal_base, "cumulant json file")->required();
  cmd_diagonal->add_option("--k", diagonal_k, "diagonal index");
  cmd_diagonal->add_option("--t", diagonal_t, "time (rational)");
  cmd_diagonal->add_option("--n", diagonal_n, "cumulants to report");

  // ---- norm ----
  auto* cmd_norm = app.add_subcommand("norm", "mu-norm table ||f||_{n,mu}, n = 2,4,..");
  std::string norm_base, norm_step, norm_out;
  int norm_nmax = 10;
  cmd_norm->add_option("base", norm_base, "cumulant json file")->required();
  cmd_norm->add_option("step", norm_step, "step-function json file")->required();
  cmd_norm->add_option("--n-max", norm_nmax, "largest even order");
  cmd_norm->add_option("--out", norm_out, "write CSV here instead of stdout");

  // ---- moment-flow ----
  auto* cmd_flow = app.add_subcommand("moment-flow", "time evolution of phi[M(t)^n]");
  std::string flow_base, flow_step, flow_out;
  int flow_nmax = 4, flow_steps = 2000, flow_rows = 40;
  double flow_t = 1.0;
  cmd_flow->add_option("base", flow_base, "cumulant json file")->required();
  cmd_flow->add_option("step", flow_step, "step-function json file")->required();
  cmd_flow->add_option("--n-max", flow_nmax, "highest moment");
  cmd_flow->add_option("--t", flow_t, "final time");
  cmd_flow->add_option("--steps", flow_steps, "RK4 steps for the full horizon");
  cmd_flow->add_option("--rows", flow_rows, "CSV rows (time samples)");
  cmd_flow->add_option("--out", flow_out, "write CSV here instead of stdout");

  // ---- pde-check ----
  auto* cmd_pde = app.add_subcommand("pde-check", "residual of the quasi-linear evolution of G");
  std::string pde_base, pde_out;
  double pde_zre = 0.0, pde_zim = 2.0, pde_t = 1.0, pde_h = 1e-4;
  int pde_grid = 1;
  cmd_pde->add_option("base", pde_base, "cumulant json file")->required();
  cmd_pde->add_option("--z-re", pde_zre, "Re z");
  cmd_pde->add_option("--z-im", pde_zim, "Im z (>= 0.5)");
  cmd_pde->add_option("--t", pde_t, "time");
  cmd_pde->add_option("--h-step", pde_h, "finite-difference step");
  cmd_pde->add_option("--grid", pde_grid, "grid points per axis (z real part and t)");
  cmd_pde->add_option("--out", pde_out, "write CSV here instead of stdout");

  // ---- simulate ----
  auto* cmd_sim = app.add_subcommand("simulate", "random-matrix spectrum dump of X(horizon)");
  std::string sim_config, sim_out = "spectrum.csv";
  cmd_sim->add_option("config", sim_config, "matrix model config json")->required();
  cmd_sim->add_option("--out", sim_out, "CSV output path");

  // ---- verify ----
  auto* cmd_verify = app.add_subcommand("verify", "run a named operator-level check");
  std::string verify_check, verify_config, verify_out;
  bool verify_stretch = false;
  cmd_verify->add_option("check", verify_check,
                         "one of: ito_isometry, trace_formula, product_formula, functional_ito, "
                         "moment_inequality, contraction, diagonal, pde_residual, spectrum_ks, "
                         "determinism")
      ->required();
  cmd_verify->add_option("config", verify_config, "config json file")->required();
  cmd_verify->add_option("--out", verify_out, "write the report json here");
  cmd_verify->add_flag("--stretch", verify_stretch, "enable stretch tests (resolvent)");

  // Common overrides applied to simulate/verify configs.
  int ov_n = 0, ov_steps = 0, ov_trials = 0;
  std::uint64_t ov_seed = 0;
  std::string ov_base, ov_model;
  for (auto* cmd : {cmd_sim, cmd_verify}) {
    cmd->add_option("--n", ov_n, "override matrix dimension");
    cmd->add_option("--steps", ov_steps, "override step count");
    cmd->add_option("--trials", ov_trials, "override trial count");
    cmd->add_option("--seed", ov_seed, "override master seed");
    cmd->add_option("--base", ov_base, "override base (cumulant json file)");
    cmd->add_option("--model", ov_model, "override model");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  auto apply_overrides = [&](Json& cfg) {
    if (ov_n > 0) cfg["n"] = ov_n;
    if (ov_steps > 0) cfg["steps"] = ov_steps;
    if (ov_trials > 0) cfg["trials"] = ov_trials;
    if (ov_seed != 0) cfg["seed"] = ov_seed;
    if (!ov_base.empty()) cfg["base"] = Json::parse(read_file(ov_base));
    if (!ov_model.empty()) cfg["model"] = ov_model;
  };

  if (cmd_moments->parsed()) {
    auto base = load_cumulants(moments_base);
    char* out = nullptr;
    check(fsc_moments(base.get(), moments_n, &out));
    print_rational_table(Json::parse(take_string(out)).at("values"), "m_k");
    return kExitPass;
  }

  if (cmd_cumulants->parsed()) {
    const std::string payload = read_file(cumulants_file);
    const Json parsed = Json::parse(payload, nullptr, false);
    if (parsed.is_discarded()) die(kExitUsage, "parse_error: '" + cumulants_file + "' is not valid json");
    const int n = cumulants_n > 0 ? cumulants_n : static_cast<int>(parsed.at("values").size());
    fsc_cumulants* raw = nullptr;
    check(fsc_cumulants_from_moments(payload.c_str(), n, &raw));
    CumulantsPtr r(raw, &fsc_cumulants_free);
    char* out = nullptr;
    check(fsc_cumulants_to_json(r.get(), &out));
    print_rational_table(Json::parse(take_string(out)).at("values"), "r_k");
    return kExitPass;
  }

  if (cmd_integral->parsed()) {
    auto base = load_cumulants(integral_base);
    auto step = load_stepfn(integral_step);
    fsc_cumulants* raw = nullptr;
    check(fsc_integral_cumulants(step.get(), base.get(), &raw));
    CumulantsPtr nu(raw, &fsc_cumulants_free);
    char* cjson = nullptr;
    check(fsc_cumulants_to_json(nu.get(), &cjson));
    std::printf("cumulants of nu = law(int f dX):\n");
    print_rational_table(Json::parse(take_string(cjson)).at("values"), "r_k");
    char* mjson = nullptr;
    check(fsc_moments(nu.get(), integral_n, &mjson));
    std::printf("moments of nu:\n");
    print_rational_table(Json::parse(take_string(mjson)).at("values"), "m_k");
    return kExitPass;
  }

  if (cmd_diagonal->parsed()) {
    auto base = load_cumulants(diagonal_base);
    fsc_cumulants* raw = nullptr;
    check(fsc_diagonal_cumulants(base.get(), diagonal_k, diagonal_t.c_str(), diagonal_n, &raw));
    CumulantsPtr d(raw, &fsc_cumulants_free);
    char* out = nullptr;
    check(fsc_cumulants_to_json(d.get(), &out));
    const Json j = Json::parse(take_string(out));
    std::printf("cumulants of Delta_%d(%s) (mean = r_1 below):\n", diagonal_k, diagonal_t.c_str());
    print_rational_table(j.at("values"), "r_n");
    return kExitPass;
  }

  if (cmd_norm->parsed()) {
    auto base = load_cumulants(norm_base);
    auto step = load_stepfn(norm_step);
    char* out = nullptr;
    check(fsc_mu_norm_table(step.get(), base.get(), norm_nmax, &out));
    const Json j = Json::parse(take_string(out));
    std::ostringstream csv;
    csv << "n,mu_norm\n";
    csv.precision(12);
    for (const auto& row : j.at("values"))
      csv << row.at("n").get<int>() << "," << row.at("norm").get<double>() << "\n";
    csv << "# extrapolated tail estimate (diagnostic): " << j.at("extrapolated").get<double>() << "\n";
    if (norm_out.empty()) {
      std::cout << csv.str();
    } else {
      write_output(norm_out, csv.str(),
                   make_manifest("norm", raw_args, Json{{"base", norm_base}, {"step", norm_step}, {"n_max", norm_nmax}}));
    }
    return kExitPass;
  }

  if (cmd_flow->parsed()) {
    auto base = load_cumulants(flow_base);
    auto step = load_stepfn(flow_step);
    std::ostringstream csv;
    csv << "t,n,moment\n";
    csv.precision(12);
    bool warned = false;
    for (int row = 1; row <= flow_rows; ++row) {
      const double tr = flow_t * row / flow_rows;
      const int sub = std::max(1, static_cast<int>(std::lround(static_cast<double>(flow_steps) * row / flow_rows)));
      char* out = nullptr;
      check(fsc_moment_flow(step.get(), base.get(), flow_nmax, tr, sub, &out));
      const Json j = Json::parse(take_string(out));
      if (j.at("accuracy_warning").get<bool>() && !warned) {
        std::cerr << "warning: step count below the advisory floor (100); accuracy may suffer\n";
        warned = true;
      }
      const auto& ms = j.at("moments");
      for (int n = 1; n <= flow_nmax; ++n) csv << tr << "," << n << "," << ms[static_cast<size_t>(n) - 1].get<double>() << "\n";
    }
    if (flow_out.empty()) {
      std::cout << csv.str();
    } else {
      write_output(flow_out, csv.str(),
                   make_manifest("moment-flow", raw_args,
                                 Json{{"base", flow_base}, {"step", flow_step}, {"n_max", flow_nmax}, {"t", flow_t}, {"steps", flow_steps}}));
    }
    return kExitPass;
  }

  if (cmd_pde->parsed()) {
    auto base = load_cumulants(pde_base);
    std::ostringstream csv;
    csv << "t,z_re,z_im,h,residual\n";
    csv.precision(12);
    double worst = 0.0;
    for (int a = 0; a < pde_grid; ++a)
      for (int b = 0; b < pde_grid; ++b) {
        const double zr = pde_grid == 1 ? pde_zre : pde_zre - 1.0 + 2.0 * a / (pde_grid - 1);
        const double tt = pde_grid == 1 ? pde_t : pde_t * (0.6 + 0.8 * b / (pde_grid - 1));
        double res = 0.0;
        check(fsc_pde_residual(base.get(), zr, pde_zim, tt, pde_h, &res));
        worst = std::max(worst, res);
        csv << tt << "," << zr << "," << pde_zim << "," << pde_h << "," << res << "\n";
      }
    if (pde_out.empty()) {
      std::cout << csv.str();
    } else {
      write_output(pde_out, csv.str(),
                   make_manifest("pde-check", raw_args, Json{{"base", pde_base}, {"h", pde_h}, {"grid", pde_grid}}));
    }
    std::fprintf(stderr, "max residual: %.3e\n", worst);
    return kExitPass;
  }

  if (cmd_sim->parsed()) {
    Json cfg = Json::parse(read_file(sim_config), nullptr, false);
    if (cfg.is_discarded()) die(kExitUsage, "parse_error: bad config json");
    apply_overrides(cfg);
    char* out = nullptr;
    check(fsc_simulate_spectrum(cfg.dump().c_str(), &out));
    write_output(sim_out, take_string(out), make_manifest("simulate", raw_args, cfg));
    std::printf("wrote %s\n", sim_out.c_str());
    return kExitPass;
  }

  if (cmd_verify->parsed()) {
    Json cfg = Json::parse(read_file(verify_config), nullptr, false);
    if (cfg.is_discarded()) die(kExitUsage, "parse_error: bad config json");
    apply_overrides(cfg);
    if (verify_stretch) cfg["stretch"] = true;
    char* out = nullptr;
    int pass = 0;
    check(fsc_run_check(verify_check.c_str(), cfg.dump().c_str(), &out, &pass));
    const std::string report = take_string(out);
    std::cout << report << "\n";
    if (!verify_out.empty()) {
      Json augmented = Json::parse(report);
      augmented["manifest"] = make_manifest("verify", raw_args, cfg);
      write_output(verify_out, augmented.dump(2) + "\n", make_manifest("verify", raw_args, cfg));
    }
    return pass ? kExitPass : kExitFail;
  }

  return kExitUsage;
}

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}
