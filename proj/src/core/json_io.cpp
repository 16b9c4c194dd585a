#include "core/json_io.hpp"

#include <algorithm>

#include "core/transforms.hpp"

namespace fsc {

namespace {

std::vector<Rational> rational_list(const Json& values, const char* what) {
  if (!values.is_array() || values.empty())
    fail(ErrorCode::parse, std::string(what) + " must be a nonempty array of rational strings");
  std::vector<Rational> out;
  out.reserve(values.size());
  for (const auto& v : values) {
    if (v.is_string())
      out.push_back(parse_rational(v.get<std::string>()));
    else if (v.is_number_integer())
      out.push_back(Rational(v.get<long long>()));
    else
      fail(ErrorCode::parse, std::string(what) + " entries must be rational strings");
  }
  return out;
}

Json rational_strings(const std::vector<Rational>& values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(format_rational(v));
  return out;
}

}  // namespace

Json cumulants_to_json(const CumulantSequence& r) {
  Json j{{"kind", r.finitely_supported() ? "finitely_supported" : "truncated"},
         {"values", rational_strings(r.values())}};
  const AnalyticR& a = r.analytic();
  if (a.kind == AnalyticRKind::free_poisson)
    j["model"] = Json{{"kind", "free_poisson"}, {"rate", format_rational(a.rate)}};
  else if (a.kind == AnalyticRKind::compound_point)
    j["model"] = Json{{"kind", "compound_point"},
                      {"rate", format_rational(a.rate)},
                      {"atom", format_rational(a.atom)}};
  return j;
}

CumulantSequence cumulants_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("values")) fail(ErrorCode::parse, "cumulant json needs a 'values' field");
  Support support = Support::truncated;
  if (j.contains("kind")) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "finitely_supported")
      support = Support::finitely_supported;
    else if (kind == "truncated")
      support = Support::truncated;
    else
      fail(ErrorCode::parse, "cumulant kind must be 'finitely_supported' or 'truncated', got '" + kind + "'");
  }
  AnalyticR analytic;
  if (j.contains("model")) {
    const Json& m = j.at("model");
    const std::string kind = m.value("kind", std::string("none"));
    if (kind == "free_poisson") {
      analytic.kind = AnalyticRKind::free_poisson;
      analytic.rate = parse_rational(m.value("rate", std::string("1")));
    } else if (kind == "compound_point") {
      analytic.kind = AnalyticRKind::compound_point;
      analytic.rate = parse_rational(m.value("rate", std::string("1")));
      analytic.atom = parse_rational(m.value("atom", std::string("1")));
    } else if (kind != "none") {
      fail(ErrorCode::parse, "unknown analytic model kind '" + kind + "'");
    }
  }
  return CumulantSequence(rational_list(j.at("values"), "cumulant values"), support, analytic);
}

Json moments_to_json(const MomentSequence& m) { return Json{{"values", rational_strings(m.values)}}; }

MomentSequence moments_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("values")) fail(ErrorCode::parse, "moment json needs a 'values' field");
  return MomentSequence{rational_list(j.at("values"), "moment values")};
}

Json stepfn_to_json(const StepFunction& f) {
  return Json{{"breakpoints", rational_strings(f.breakpoints())}, {"values", rational_strings(f.values())}};
}

StepFunction stepfn_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("breakpoints") || !j.contains("values"))
    fail(ErrorCode::parse, "step function json needs 'breakpoints' and 'values'");
  return StepFunction(rational_list(j.at("breakpoints"), "breakpoints"),
                      rational_list(j.at("values"), "step values"));
}

CumulantSequence base_from_json(const Json& j) {
  if (j.is_object() && j.contains("name")) {
    const std::string name = j.at("name").get<std::string>();
    if (name == "semicircular") return semicircular();
    const int order = j.value("order", 16);
    if (name == "free_poisson") {
      const Rational rate = parse_rational(j.value("rate", std::string("1")));
      return free_poisson(rate, order);
    }
    if (name == "free_compound_poisson") {
      const Rational rate = parse_rational(j.value("rate", std::string("1")));
      if (j.contains("jump_atom"))
        return free_compound_poisson_point(rate, parse_rational(j.at("jump_atom").get<std::string>()),
                                           order);
      if (!j.contains("jump_moments")) fail(ErrorCode::parse, "free_compound_poisson needs 'jump_moments' or 'jump_atom'");
      return free_compound_poisson(rate, rational_list(j.at("jump_moments"), "jump moments"));
    }
    fail(ErrorCode::parse, "unknown base distribution '" + name + "'");
  }
  return cumulants_from_json(j);
}

MatrixModelConfig config_from_json(const Json& j) {
  MatrixModelConfig cfg;
  if (!j.is_object()) fail(ErrorCode::parse, "config must be a json object");
  cfg.dim = j.value("n", cfg.dim);
  cfg.steps = j.value("steps", cfg.steps);
  cfg.horizon = j.value("horizon", cfg.horizon);
  cfg.trials = j.value("trials", cfg.trials);
  cfg.master_seed = j.value("seed", cfg.master_seed);
  cfg.threads = j.value("threads", cfg.threads);
  cfg.quantile_eps = j.value("quantile_eps", cfg.quantile_eps);
  cfg.tolerance = j.value("tolerance", cfg.tolerance);
  cfg.operator_norm = j.value("operator_norm", cfg.operator_norm);
  if (j.contains("model")) {
    const std::string model = j.at("model").get<std::string>();
    if (model == "gaussian_hermitian")
      cfg.model = MatrixModel::gaussian_hermitian;
    else if (model == "haar_quantile")
      cfg.model = MatrixModel::haar_quantile;
    else
      fail(ErrorCode::parse, "unknown model '" + model + "'");
  }
  if (j.contains("base")) cfg.base = base_from_json(j.at("base"));
  return cfg;
}

Json config_to_json(const MatrixModelConfig& cfg) {
  return Json{{"n", cfg.dim},
              {"steps", cfg.steps},
              {"horizon", cfg.horizon},
              {"trials", cfg.trials},
              {"seed", cfg.master_seed},
              {"threads", cfg.threads},
              {"quantile_eps", cfg.quantile_eps},
              {"tolerance", cfg.tolerance},
              {"operator_norm", cfg.operator_norm},
              {"model", cfg.model == MatrixModel::gaussian_hermitian ? "gaussian_hermitian" : "haar_quantile"},
              {"base", cumulants_to_json(cfg.base)}};
}

Json report_to_json(const CheckReport& report, const Json& config_echo) {
  Json details = Json::object();
  for (const auto& [k, v] : report.details) details[k] = v;
  return Json{{"check", report.check},   {"config", config_echo},       {"predicted", report.predicted},
              {"estimate", report.estimate}, {"stderr", report.std_error}, {"pass", report.pass},
              {"details", details}};
}

ConstantBiprocess biprocess_from_json(const Json& j, int dim) {
  const std::string kind = j.is_object() ? j.value("kind", std::string("unit")) : std::string("unit");
  const double scale = j.is_object() ? j.value("scale", 1.0) : 1.0;
  const double start = j.is_object() ? j.value("start", 0.0) : 0.0;
  const double end = j.is_object() ? j.value("end", 1.0) : 1.0;
  const std::uint64_t tseed = j.is_object() ? j.value("tseed", std::uint64_t{7}) : std::uint64_t{7};

  Matrix a = Matrix::Identity(dim, dim);
  Matrix b = Matrix::Identity(dim, dim);
  if (kind == "unit") {
    // identities
  } else if (kind == "random_hermitian" || kind == "random_diagonal") {
    std::mt19937_64 rng(splitmix64(tseed));
    std::normal_distribution<double> nd;
    auto draw = [&](Matrix& m) {
      if (kind == "random_diagonal") {
        m.setZero();
        for (int i = 0; i < dim; ++i) m(i, i) = Scalar(nd(rng), 0.0);
      } else {
        for (int c = 0; c < dim; ++c)
          for (int r = 0; r < dim; ++r) m(r, c) = Scalar(nd(rng), nd(rng));
        m = ((m + m.adjoint()) * 0.5).eval();
      }
    };
    draw(a);
    draw(b);
  } else {
    fail(ErrorCode::parse, "unknown tensor kind '" + kind + "'");
  }
  OperatorTensor value = OperatorTensor::elementary({a, b});
  if (scale != 1.0) value = value.scaled(Scalar(scale, 0.0));
  return ConstantBiprocess{std::move(value), start, end};
}

namespace {

Polynomial polynomial_from_json(const Json& j) {
  Polynomial p;
  if (!j.is_array() || j.empty()) fail(ErrorCode::parse, "polynomial must be a coefficient array");
  for (const auto& c : j) {
    if (c.is_string())
      p.push_back(parse_rational(c.get<std::string>()));
    else if (c.is_number_integer())
      p.push_back(Rational(c.get<long long>()));
    else
      fail(ErrorCode::parse, "polynomial coefficients must be rational strings");
  }
  return p;
}

}  // namespace

Json run_check(const std::string& name, const Json& config) {
  const Json params = config.value("params", Json::object());

  if (name == "determinism") {
    const std::string inner = params.value("check", std::string("ito_isometry"));
    if (inner == "determinism") fail(ErrorCode::invalid_argument, "determinism cannot nest itself");
    Json sub = config;
    sub.erase("params");
    if (params.contains("params")) sub["params"] = params.at("params");
    const std::string first = run_check(inner, sub).dump();
    const std::string second = run_check(inner, sub).dump();
    CheckReport rep;
    rep.check = "determinism";
    rep.pass = first == second;
    rep.estimate = rep.pass ? 0.0 : 1.0;
    rep.details["payload_bytes"] = static_cast<double>(first.size());
    return report_to_json(rep, config);
  }

  if (name == "pde_residual") {
    const CumulantSequence base =
        config.contains("base") ? base_from_json(config.at("base")) : semicircular();
    const double zr = params.value("z_re", 0.0);
    const double zi = params.value("z_im", 2.0);
    const double t = params.value("t", 1.0);
    const double h = params.value("h", 1e-4);
    const double tol = config.value("tolerance", 1e-6);
    const double res = pde_residual(base, Complex(zr, zi), t, h);
    CheckReport rep;
    rep.check = "pde_residual";
    rep.estimate = res;
    rep.pass = res <= tol;
    rep.details["h"] = h;
    rep.details["t"] = t;
    return report_to_json(rep, config);
  }

  MatrixModelConfig cfg = config_from_json(config);
  CheckReport rep;
  if (name == "ito_isometry") {
    rep = verify_ito_isometry(cfg, biprocess_from_json(params.value("v", Json::object()), cfg.dim),
                              biprocess_from_json(params.value("u", Json::object()), cfg.dim));
  } else if (name == "trace_formula") {
    rep = verify_trace_formula(cfg, biprocess_from_json(params.value("u", Json::object()), cfg.dim));
  } else if (name == "product_formula") {
    rep = verify_product_formula(cfg, params.value("i", 1), params.value("j", 1),
                                 biprocess_from_json(params.value("v", Json::object()), cfg.dim),
                                 biprocess_from_json(params.value("u", Json::object()), cfg.dim));
  } else if (name == "functional_ito") {
    const Polynomial p = params.contains("p") ? polynomial_from_json(params.at("p"))
                                              : Polynomial{Rational(0), Rational(0), Rational(0), Rational(1)};
    rep = verify_functional_ito(cfg, p, biprocess_from_json(params.value("u", Json::object()), cfg.dim));
  } else if (name == "moment_inequality") {
    std::vector<ConstantBiprocess> vs;
    if (params.contains("tensors"))
      for (const auto& t : params.at("tensors")) vs.push_back(biprocess_from_json(t, cfg.dim));
    else
      vs = {biprocess_from_json(Json::object(), cfg.dim), biprocess_from_json(Json::object(), cfg.dim)};
    rep = verify_moment_inequality(cfg, vs);
  } else if (name == "contraction") {
    const StepFunction f = params.contains("f")
                               ? stepfn_from_json(params.at("f"))
                               : StepFunction({Rational(0), Rational(1)}, {Rational(1)});
    rep = verify_contraction(cfg, f, params.value("moment", 4));
  } else if (name == "diagonal") {
    rep = verify_diagonal(cfg, params.value("k", 2));
  } else if (name == "spectrum_ks") {
    rep = verify_spectrum_ks(cfg);
  } else if (name == "resolvent") {
    if (!config.value("stretch", false))
      fail(ErrorCode::invalid_argument, "the resolvent check is a stretch test; set \"stretch\": true");
    rep = verify_resolvent(cfg, Complex(params.value("z_re", 0.0), params.value("z_im", 6.0)),
                           params.value("k_max", 4));
  } else {
    fail(ErrorCode::invalid_argument, "unknown check '" + name + "'");
  }
  return report_to_json(rep, config);
}

}  // namespace fsc
