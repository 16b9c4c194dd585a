#include "freestoch/freestoch.h"

#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>

#include "core/json_io.hpp"
#include "core/nc_partitions.hpp"
#include "core/scalar_integrals.hpp"
#include "core/series.hpp"
#include "core/transforms.hpp"

struct fsc_cumulants {
  fsc::CumulantSequence value;
};

struct fsc_stepfn {
  fsc::StepFunction value;
};

namespace {

thread_local std::string tl_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

fsc_status map_code(fsc::ErrorCode code) {
  switch (code) {
    case fsc::ErrorCode::invalid_argument: return FSC_ERR_INVALID_ARGUMENT;
    case fsc::ErrorCode::parse: return FSC_ERR_PARSE;
    case fsc::ErrorCode::truncation: return FSC_ERR_TRUNCATION;
    case fsc::ErrorCode::regime: return FSC_ERR_REGIME;
    case fsc::ErrorCode::numeric: return FSC_ERR_NUMERIC;
    case fsc::ErrorCode::size: return FSC_ERR_SIZE;
    case fsc::ErrorCode::io: return FSC_ERR_IO;
    case fsc::ErrorCode::contract: return FSC_ERR_CONTRACT;
  }
  return FSC_ERR_INTERNAL;
}

template <typename Fn>
fsc_status guarded(Fn&& fn) {
  try {
    fn();
    return FSC_OK;
  } catch (const fsc::Error& e) {
    tl_error = e.what();
    return map_code(e.code());
  } catch (const nlohmann::json::exception& e) {
    tl_error = e.what();
    return FSC_ERR_PARSE;
  } catch (const std::exception& e) {
    tl_error = e.what();
    return FSC_ERR_INTERNAL;
  }
}

fsc_status require(bool ok, const char* message) {
  if (ok) return FSC_OK;
  tl_error = message;
  return FSC_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* fsc_version(void) { return "0.1.0"; }

const char* fsc_status_name(fsc_status status) {
  switch (status) {
    case FSC_OK: return "ok";
    case FSC_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case FSC_ERR_PARSE: return "parse_error";
    case FSC_ERR_TRUNCATION: return "truncation_error";
    case FSC_ERR_REGIME: return "regime_error";
    case FSC_ERR_NUMERIC: return "numeric_error";
    case FSC_ERR_SIZE: return "size_error";
    case FSC_ERR_IO: return "io_error";
    case FSC_ERR_INTERNAL: return "internal_error";
    case FSC_ERR_CONTRACT: return "contract_error";
  }
  return "unknown";
}

const char* fsc_last_error(void) { return tl_error.c_str(); }

void fsc_string_free(char* s) { std::free(s); }

fsc_status fsc_cumulants_from_json(const char* json, fsc_cumulants** out) {
  if (auto st = require(json && out, "null pointer argument")) return st;
  return guarded([&] { *out = new fsc_cumulants{fsc::base_from_json(fsc::Json::parse(json))}; });
}

fsc_status fsc_cumulants_to_json(const fsc_cumulants* r, char** out_json) {
  if (auto st = require(r && out_json, "null pointer argument")) return st;
  return guarded([&] { *out_json = dup_string(fsc::cumulants_to_json(r->value).dump()); });
}

void fsc_cumulants_free(fsc_cumulants* r) { delete r; }

fsc_status fsc_cumulants_order(const fsc_cumulants* r, int* out_order) {
  if (auto st = require(r && out_order, "null pointer argument")) return st;
  *out_order = r->value.order();
  return FSC_OK;
}

fsc_status fsc_moments(const fsc_cumulants* r, int n, char** out_json) {
  if (auto st = require(r && out_json, "null pointer argument")) return st;
  return guarded([&] {
    *out_json = dup_string(fsc::moments_to_json(fsc::moments_from_cumulants(r->value, n)).dump());
  });
}

fsc_status fsc_cumulants_from_moments(const char* moments_json, int n, fsc_cumulants** out) {
  if (auto st = require(moments_json && out, "null pointer argument")) return st;
  return guarded([&] {
    const fsc::MomentSequence m = fsc::moments_from_json(fsc::Json::parse(moments_json));
    *out = new fsc_cumulants{fsc::cumulants_from_moments(m, n)};
  });
}

fsc_status fsc_semigroup(const fsc_cumulants* r, const char* t, fsc_cumulants** out) {
  if (auto st = require(r && t && out, "null pointer argument")) return st;
  return guarded([&] {
    *out = new fsc_cumulants{fsc::semigroup_cumulants(r->value, fsc::parse_rational(t))};
  });
}

fsc_status fsc_small_time_ratio(const fsc_cumulants* r, int p, const char* t, char** out) {
  if (auto st = require(r && t && out, "null pointer argument")) return st;
  return guarded([&] {
    *out = dup_string(fsc::format_rational(fsc::small_time_ratio(r->value, p, fsc::parse_rational(t))));
  });
}

fsc_status fsc_nc_count(int n, char** out_decimal) {
  if (auto st = require(out_decimal != nullptr, "null pointer argument")) return st;
  return guarded([&] { *out_decimal = dup_string(fsc::count_noncrossing(n).str()); });
}

fsc_status fsc_verify_functional_relation(const fsc_cumulants* r, int order, int* out_ok) {
  if (auto st = require(r && out_ok, "null pointer argument")) return st;
  return guarded([&] { *out_ok = fsc::verify_functional_relation(r->value, order) ? 1 : 0; });
}

fsc_status fsc_stepfn_from_json(const char* json, fsc_stepfn** out) {
  if (auto st = require(json && out, "null pointer argument")) return st;
  return guarded([&] { *out = new fsc_stepfn{fsc::stepfn_from_json(fsc::Json::parse(json))}; });
}

fsc_status fsc_stepfn_to_json(const fsc_stepfn* f, char** out_json) {
  if (auto st = require(f && out_json, "null pointer argument")) return st;
  return guarded([&] { *out_json = dup_string(fsc::stepfn_to_json(f->value).dump()); });
}

void fsc_stepfn_free(fsc_stepfn* f) { delete f; }

fsc_status fsc_lp_power(const fsc_stepfn* f, int p, char** out) {
  if (auto st = require(f && out, "null pointer argument")) return st;
  return guarded([&] { *out = dup_string(fsc::format_rational(f->value.lp_power(p))); });
}

fsc_status fsc_integral_cumulants(const fsc_stepfn* f, const fsc_cumulants* r, fsc_cumulants** out) {
  if (auto st = require(f && r && out, "null pointer argument")) return st;
  return guarded([&] { *out = new fsc_cumulants{fsc::integral_cumulants(f->value, r->value)}; });
}

fsc_status fsc_diagonal_cumulants(const fsc_cumulants* r, int k, const char* t, int n_max,
                                  fsc_cumulants** out) {
  if (auto st = require(r && t && out, "null pointer argument")) return st;
  return guarded([&] {
    *out = new fsc_cumulants{fsc::diagonal_cumulants(r->value, k, fsc::parse_rational(t), n_max)};
  });
}

fsc_status fsc_mu_norm_table(const fsc_stepfn* f, const fsc_cumulants* r, int n_max, char** out_json) {
  if (auto st = require(f && r && out_json, "null pointer argument")) return st;
  return guarded([&] {
    const fsc::MuNormTail tail = fsc::mu_norm_tail(f->value, r->value, n_max);
    fsc::Json values = fsc::Json::array();
    for (const auto& [n, norm] : tail.values) values.push_back({{"n", n}, {"norm", norm}});
    *out_json = dup_string(fsc::Json{{"values", values}, {"extrapolated", tail.extrapolated}}.dump());
  });
}

fsc_status fsc_mu_norm(const fsc_stepfn* f, const fsc_cumulants* r, int n, double* out) {
  if (auto st = require(f && r && out, "null pointer argument")) return st;
  return guarded([&] { *out = fsc::mu_norm(f->value, r->value, n); });
}

fsc_status fsc_moment_flow(const fsc_stepfn* f, const fsc_cumulants* r, int n_max, double t, int steps,
                           char** out_json) {
  if (auto st = require(f && r && out_json, "null pointer argument")) return st;
  return guarded([&] {
    const fsc::MomentFlowResult res = fsc::moment_flow(f->value, r->value, n_max, t, steps);
    *out_json = dup_string(
        fsc::Json{{"moments", res.moments}, {"accuracy_warning", res.accuracy_warning}}.dump());
  });
}

fsc_status fsc_bdg_check(const fsc_stepfn* f, const fsc_cumulants* r, int k, int n, char** out_json) {
  if (auto st = require(f && r && out_json, "null pointer argument")) return st;
  return guarded([&] {
    const fsc::BdgReport rep = fsc::bdg_check(f->value, r->value, k, n);
    *out_json = dup_string(fsc::Json{{"lhs", rep.lhs}, {"rhs", rep.rhs}, {"holds", rep.holds}}.dump());
  });
}

fsc_status fsc_cauchy_numeric(const fsc_cumulants* r, double z_re, double z_im, double* out_re,
                              double* out_im) {
  if (auto st = require(r && out_re && out_im, "null pointer argument")) return st;
  return guarded([&] {
    const fsc::Complex g = fsc::cauchy_numeric(r->value, fsc::Complex(z_re, z_im));
    *out_re = g.real();
    *out_im = g.imag();
  });
}

fsc_status fsc_density(const fsc_cumulants* r, double x, double eps, double* out) {
  if (auto st = require(r && out, "null pointer argument")) return st;
  return guarded([&] { *out = fsc::density(r->value, x, eps); });
}

fsc_status fsc_density_table(const fsc_cumulants* r, double x0, double x1, int n_points, double eps,
                             char** out_csv) {
  if (auto st = require(r && out_csv, "null pointer argument")) return st;
  if (auto st = require(n_points >= 2 && x1 > x0, "need n_points >= 2 and x1 > x0")) return st;
  return guarded([&] {
    std::ostringstream csv;
    csv << "x,density\n";
    csv.precision(12);
    for (int i = 0; i < n_points; ++i) {
      const double x = x0 + (x1 - x0) * i / (n_points - 1);
      csv << x << "," << fsc::density(r->value, x, eps) << "\n";
    }
    *out_csv = dup_string(csv.str());
  });
}

fsc_status fsc_quantiles(const fsc_cumulants* r, int count, double eps, double* out) {
  if (auto st = require(r && out, "null pointer argument")) return st;
  return guarded([&] {
    const std::vector<double> q = fsc::quantiles(r->value, count, eps);
    std::memcpy(out, q.data(), q.size() * sizeof(double));
  });
}

fsc_status fsc_pde_residual(const fsc_cumulants* r, double z_re, double z_im, double t, double h,
                            double* out) {
  if (auto st = require(r && out, "null pointer argument")) return st;
  return guarded([&] { *out = fsc::pde_residual(r->value, fsc::Complex(z_re, z_im), t, h); });
}

fsc_status fsc_run_check(const char* check_name, const char* config_json, char** out_report_json,
                         int* out_pass) {
  if (auto st = require(check_name && config_json && out_report_json && out_pass, "null pointer argument"))
    return st;
  return guarded([&] {
    const fsc::Json report = fsc::run_check(check_name, fsc::Json::parse(config_json));
    *out_report_json = dup_string(report.dump(2));
    *out_pass = report.at("pass").get<bool>() ? 1 : 0;
  });
}

fsc_status fsc_simulate_spectrum(const char* config_json, char** out_csv) {
  if (auto st = require(config_json && out_csv, "null pointer argument")) return st;
  return guarded([&] {
    const fsc::MatrixModelConfig cfg = fsc::config_from_json(fsc::Json::parse(config_json));
    std::ostringstream csv;
    csv << "trial,eigenvalue\n";
    csv.precision(12);
    for (int trial = 0; trial < cfg.trials; ++trial)
      for (double ev : fsc::simulate_spectrum(cfg, trial)) csv << trial << "," << ev << "\n";
    *out_csv = dup_string(csv.str());
  });
}

} /* extern "C" */
