#ifndef ALBUM_TOOLS_EXPERIMENT_HPP_
#define ALBUM_TOOLS_EXPERIMENT_HPP_

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "album/album.hpp"

namespace album::cli {

using Json = nlohmann::json;

enum ExitCode : int { kExitConverged = 0, kExitError = 1, kExitMaxIterations = 2, kExitDivergence = 3 };

struct ExperimentConfig {
  std::string problem_name;
  Json problem_params = Json::object();
  std::string map_kind = "album2";
  std::optional<double> mu;
  bool mu_auto = false;
  std::optional<double> sigma;
  AlgoParams params;
  unsigned seed = 42;
  std::optional<double> fixed_rho;
  std::optional<double> threshold_factor;
  std::optional<Vector> x0;
  std::optional<double> x0_norm;
  std::string trace_path;
  std::string summary_path;
};

/// Problem, map and run options resolved from a config.
struct Experiment {
  CompositeProblem problem;
  MapKind kind;
  AlgoParams params;
  RunOptions options;
};

namespace detail {

inline void collect_unknown(const Json& obj, const std::set<std::string>& allowed, const std::string& section,
                            std::vector<std::string>& unknown) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) unknown.push_back(section.empty() ? it.key() : section + "." + it.key());
  }
}

inline const Json& section(const Json& root, const char* key) {
  static const Json empty = Json::object();
  if (!root.contains(key)) return empty;
  const Json& s = root.at(key);
  album::detail::require(s.is_object(), ErrorCode::kConfig, std::string("section '") + key + "' must be an object");
  return s;
}

inline double number(const Json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  album::detail::require(obj.at(key).is_number(), ErrorCode::kConfig, std::string("'") + key + "' must be a number");
  return obj.at(key).get<double>();
}

inline std::optional<double> optional_number(const Json& obj, const char* key) {
  if (!obj.contains(key)) return std::nullopt;
  return number(obj, key, 0.0);
}

inline int integer(const Json& obj, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  album::detail::require(obj.at(key).is_number_integer(), ErrorCode::kConfig,
                         std::string("'") + key + "' must be an integer");
  return obj.at(key).get<int>();
}

inline Vector vector(const Json& v, const std::string& what) {
  album::detail::require(v.is_array() && !v.empty(), ErrorCode::kConfig, "'" + what + "' must be a nonempty array");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    album::detail::require(v[i].is_number(), ErrorCode::kConfig, "'" + what + "' must contain numbers");
    out(static_cast<Eigen::Index>(i)) = v[i].get<double>();
  }
  return out;
}

inline Matrix matrix(const Json& v, const std::string& what) {
  album::detail::require(v.is_array() && !v.empty() && v[0].is_array(), ErrorCode::kConfig,
                         "'" + what + "' must be a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(v.size());
  const auto cols = static_cast<Eigen::Index>(v[0].size());
  Matrix out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Vector row = vector(v[static_cast<std::size_t>(i)], what);
    album::detail::require(row.size() == cols, ErrorCode::kConfig, "'" + what + "' rows differ in length");
    out.row(i) = row.transpose();
  }
  return out;
}

inline prox::ProjectableSet projectable_set(const Json& s) {
  album::detail::require(s.is_object(), ErrorCode::kConfig, "each set must be an object");
  std::vector<std::string> unknown;
  collect_unknown(s, {"type", "center", "radius"}, "set", unknown);
  album::detail::require(unknown.empty(), ErrorCode::kConfig, "unknown set key: " + (unknown.empty() ? "" : unknown[0]));
  album::detail::require(s.contains("type") && s.at("type").is_string(), ErrorCode::kConfig, "set needs a type");
  album::detail::require(s.contains("center"), ErrorCode::kConfig, "set needs a center");
  const std::string type = s.at("type").get<std::string>();
  const Vector center = vector(s.at("center"), "center");
  if (type == "point") return prox::point_set(center);
  const double radius = number(s, "radius", 1.0);
  if (type == "ball") return prox::ball_set(center, radius);
  if (type == "sphere") return prox::sphere_set(center, radius);
  throw AlbumError(ErrorCode::kConfig, "unknown set type '" + type + "' (ball, sphere, point)");
}

}  // namespace detail

/// Problem builder addressed by name. Random data is drawn from seed.
inline CompositeProblem build_problem(const std::string& name, const Json& params, unsigned seed) {
  using detail::integer;
  using detail::number;
  std::vector<std::string> unknown;
  if (name == "sphere") {
    detail::collect_unknown(params, {"n", "r1", "c"}, "problem.params", unknown);
  } else if (name == "feasibility") {
    detail::collect_unknown(params, {"sets"}, "problem.params", unknown);
  } else if (name == "sparsity") {
    detail::collect_unknown(params, {"n", "rows", "s", "A", "b"}, "problem.params", unknown);
  } else if (name == "l1_equality" || name == "linear_composite") {
    detail::collect_unknown(params, {"Q", "q", "F", "h", "weights", "s"}, "problem.params", unknown);
  } else {
    throw AlbumError(ErrorCode::kConfig, "unknown problem '" + name +
                                             "' (sphere, feasibility, sparsity, l1_equality, linear_composite)");
  }
  if (!unknown.empty()) {
    std::string list;
    for (const auto& k : unknown) list += (list.empty() ? "" : ", ") + k;
    throw AlbumError(ErrorCode::kConfig, "unknown keys: " + list);
  }

  if (name == "sphere") {
    const Vector c = params.contains("c") ? detail::vector(params.at("c"), "c")
                                          : gallery::seeded_gaussian_vector(integer(params, "n", 5), seed);
    return gallery::sphere_problem(c, number(params, "r1", 0.5));
  }
  if (name == "feasibility") {
    album::detail::require(params.contains("sets") && params.at("sets").is_array(), ErrorCode::kConfig,
                           "feasibility needs an array 'sets'");
    std::vector<prox::ProjectableSet> sets;
    Eigen::Index dim = -1;
    for (const Json& s : params.at("sets")) {
      const Eigen::Index d = static_cast<Eigen::Index>(s.at("center").size());
      album::detail::require(dim < 0 || d == dim, ErrorCode::kConfig, "sets live in different dimensions");
      dim = d;
      sets.push_back(detail::projectable_set(s));
    }
    return gallery::feasibility_problem(std::move(sets), std::max<Eigen::Index>(dim, 0));
  }
  if (name == "sparsity") {
    const int n = integer(params, "n", 8);
    const int rows = integer(params, "rows", n);
    const Matrix a = params.contains("A") ? detail::matrix(params.at("A"), "A")
                                          : gallery::seeded_gaussian_matrix(rows, n, seed);
    const Vector b = params.contains("b") ? detail::vector(params.at("b"), "b")
                                          : gallery::seeded_gaussian_vector(a.rows(), seed + 1);
    return gallery::sparsity_problem(a, b, integer(params, "s", 2));
  }

  album::detail::require(params.contains("Q") && params.contains("F"), ErrorCode::kConfig,
                         name + " needs matrices 'Q' and 'F'");
  const Matrix q_mat = detail::matrix(params.at("Q"), "Q");
  const Vector q_vec = params.contains("q") ? detail::vector(params.at("q"), "q") : Vector::Zero(q_mat.rows());
  const Matrix f = detail::matrix(params.at("F"), "F");
  const Vector weights = params.contains("weights") ? detail::vector(params.at("weights"), "weights")
                                                    : Vector::Ones(f.rows());
  if (name == "l1_equality") {
    return gallery::l1_equality_problem(gallery::quadratic_function(q_mat, q_vec), gallery::linear_map(f), weights);
  }
  gallery::HSpec h;
  const std::string h_name = params.contains("h") ? params.at("h").get<std::string>() : "zero";
  if (h_name == "zero") {
    h.kind = gallery::HKind::kZero;
  } else if (h_name == "l1") {
    h.kind = gallery::HKind::kL1;
    h.weights = weights;
  } else if (h_name == "l0") {
    h.kind = gallery::HKind::kL0;
    h.s = integer(params, "s", 1);
  } else {
    throw AlbumError(ErrorCode::kConfig, "unknown h '" + h_name + "' (zero, l1, l0)");
  }
  return gallery::linear_composite_problem(q_mat, q_vec, f, h);
}

inline MapKind parse_map_kind(const std::string& kind, double sigma) {
  if (kind == "album1") return MapKind::album1();
  if (kind == "album2") return MapKind::album2();
  if (kind == "album3") return MapKind::album3();
  if (kind == "adm") return MapKind::adm(sigma);
  throw AlbumError(ErrorCode::kConfig, "unknown map kind '" + kind + "' (album1, album2, album3, adm)");
}

/// Resolves map parameters that depend on the problem: automatic mu for
/// album3, sigma for adm, and a fixed penalty from the threshold factor.
inline Experiment build_experiment(const ExperimentConfig& cfg) {
  Experiment e;
  e.problem = build_problem(cfg.problem_name, cfg.problem_params, cfg.seed);
  e.params = cfg.params;
  e.options.seed = cfg.seed;
  const CompositeProblem& p = e.problem;

  const bool album3 = cfg.map_kind == "album3";
  const bool adm = cfg.map_kind == "adm";
  if (album3) {
    album::detail::require(p.is_linear_F(), ErrorCode::kConfig, "map album3 requires a problem with linear F");
  }
  if (adm) {
    album::detail::require(p.is_linear_F() && p.quadratic_f0.has_value(), ErrorCode::kConfig,
                           "map adm requires quadratic f0 and linear F");
  }

  std::optional<double> rho = cfg.fixed_rho;
  if (cfg.threshold_factor) {
    album::detail::require(p.is_linear_F(), ErrorCode::kConfig, "threshold_factor requires a problem with linear F");
    album::detail::require(*cfg.threshold_factor > 1.0, ErrorCode::kConfig, "threshold_factor must exceed 1");
    double threshold = 0.0;
    if (album3) {
      const double norm_f = std::sqrt(lambda_max_symmetric(*p.linear_F * p.linear_F->transpose()));
      threshold = album3_thresholds(p.lipschitz_f0, p.gamma, norm_f).rho_bar;
    } else if (adm) {
      threshold = cfg.sigma ? adm_threshold_rho(p.lipschitz_f0, *cfg.sigma, p.gamma * p.gamma)
                            : gallery::adm_threshold_fixed_point(p);
    } else {
      const double mu = cfg.mu.value_or(cfg.params.mu);
      const MapConstants c{mu, mu, 0.0, std::nullopt, std::nullopt};
      const DualBound d = linear_dual_bound(p, c);
      threshold = linear_threshold_rho(c.a, d.d1, d.d2);
    }
    rho = *cfg.threshold_factor * threshold;
  }
  const double rho_ref = rho.value_or(cfg.params.rho0);

  e.params.mu = cfg.mu.value_or(cfg.params.mu);
  if (album3 && cfg.mu_auto) {
    const double norm_f = std::sqrt(lambda_max_symmetric(*p.linear_F * p.linear_F->transpose()));
    const ThresholdBundle t = album3_thresholds(p.lipschitz_f0, p.gamma, norm_f);
    const auto [mu1, mu2] = t.mu_interval(rho_ref);
    e.params.mu = 0.5 * (mu1 + mu2);
  }
  const double sigma = adm ? cfg.sigma.value_or(gallery::strong_convexity_modulus(p, rho_ref)) : 0.0;
  e.kind = parse_map_kind(cfg.map_kind, sigma);

  if (rho) {
    e.options.fixed_rho = rho;
    if (p.is_linear_F()) {
      const MapConstants c = map_constants(p, e.kind, e.params.mu, *rho);
      e.options.descent_margin = linear_descent_margin(c, linear_dual_bound(p, c), *rho);
    }
  }

  if (cfg.x0) {
    e.options.x0 = cfg.x0;
  } else if (cfg.x0_norm) {
    e.options.x0 = *cfg.x0_norm * random_unit_vector(p.n, cfg.seed);
  }
  return e;
}

/// Parses and validates a JSON experiment config; unknown keys are an error
/// listing all of them.
inline ExperimentConfig parse_config(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw AlbumError(ErrorCode::kConfig, std::string("malformed config: ") + e.what());
  }
  album::detail::require(root.is_object(), ErrorCode::kConfig, "config must be an object");

  std::vector<std::string> unknown;
  detail::collect_unknown(root, {"problem", "map", "algo", "output"}, "", unknown);
  const Json& problem = detail::section(root, "problem");
  const Json& map = detail::section(root, "map");
  const Json& algo = detail::section(root, "algo");
  const Json& output = detail::section(root, "output");
  const Json& tol = detail::section(algo, "tolerances");
  const Json& iters = detail::section(algo, "max_iters");
  detail::collect_unknown(problem, {"name", "params"}, "problem", unknown);
  detail::collect_unknown(map, {"kind", "mu", "sigma"}, "map", unknown);
  detail::collect_unknown(algo,
                          {"rho0", "delta", "tau_fraction", "tolerances", "max_iters", "seed", "fixed_rho",
                           "threshold_factor", "x0", "x0_norm", "multiplier_guard", "rho_guard"},
                          "algo", unknown);
  detail::collect_unknown(tol, {"inner", "stop"}, "algo.tolerances", unknown);
  detail::collect_unknown(iters, {"inner", "outer"}, "algo.max_iters", unknown);
  detail::collect_unknown(output, {"trace_path", "summary_path"}, "output", unknown);
  if (!unknown.empty()) {
    std::string list;
    for (const auto& k : unknown) list += (list.empty() ? "" : ", ") + k;
    throw AlbumError(ErrorCode::kConfig, "unknown keys: " + list);
  }

  ExperimentConfig cfg;
  album::detail::require(problem.contains("name") && problem.at("name").is_string(), ErrorCode::kConfig,
                         "missing required key problem.name");
  cfg.problem_name = problem.at("name").get<std::string>();
  if (problem.contains("params")) cfg.problem_params = detail::section(problem, "params");

  album::detail::require(map.contains("kind") && map.at("kind").is_string(), ErrorCode::kConfig,
                         "missing required key map.kind");
  cfg.map_kind = map.at("kind").get<std::string>();
  if (map.contains("mu")) {
    if (map.at("mu").is_string()) {
      album::detail::require(map.at("mu").get<std::string>() == "auto" && cfg.map_kind == "album3",
                             ErrorCode::kConfig, "map.mu must be a number (\"auto\" only for album3)");
      cfg.mu_auto = true;
    } else {
      cfg.mu = detail::number(map, "mu", 1.0);
    }
  }
  cfg.sigma = detail::optional_number(map, "sigma");

  AlgoParams& a = cfg.params;
  a.rho0 = detail::number(algo, "rho0", a.rho0);
  a.delta = detail::number(algo, "delta", a.rho0);
  a.tau_fraction = detail::number(algo, "tau_fraction", a.tau_fraction);
  a.inner_tol = detail::number(tol, "inner", a.inner_tol);
  a.stop_tol = detail::number(tol, "stop", a.stop_tol);
  a.inner_max_iters = detail::integer(iters, "inner", a.inner_max_iters);
  a.outer_max_iters = detail::integer(iters, "outer", a.outer_max_iters);
  a.multiplier_guard = detail::number(algo, "multiplier_guard", a.multiplier_guard);
  a.rho_guard = detail::number(algo, "rho_guard", a.rho_guard);
  if (cfg.mu) a.mu = *cfg.mu;
  try {
    a.validate();
  } catch (const AlbumError& e) {
    throw AlbumError(ErrorCode::kConfig, e.what());
  }
  if (algo.contains("seed")) {
    album::detail::require(algo.at("seed").is_number_unsigned(), ErrorCode::kConfig,
                           "algo.seed must be a nonnegative integer");
    cfg.seed = algo.at("seed").get<unsigned>();
  }
  cfg.fixed_rho = detail::optional_number(algo, "fixed_rho");
  cfg.threshold_factor = detail::optional_number(algo, "threshold_factor");
  album::detail::require(!(cfg.fixed_rho && cfg.threshold_factor), ErrorCode::kConfig,
                         "fixed_rho and threshold_factor are mutually exclusive");
  if (cfg.fixed_rho) {
    album::detail::require(*cfg.fixed_rho > 0.0, ErrorCode::kConfig, "algo.fixed_rho must be positive");
  }
  if (algo.contains("x0")) cfg.x0 = detail::vector(algo.at("x0"), "algo.x0");
  cfg.x0_norm = detail::optional_number(algo, "x0_norm");
  if (cfg.x0_norm) album::detail::require(*cfg.x0_norm > 0.0, ErrorCode::kConfig, "algo.x0_norm must be positive");

  if (output.contains("trace_path")) cfg.trace_path = output.at("trace_path").get<std::string>();
  if (output.contains("summary_path")) cfg.summary_path = output.at("summary_path").get<std::string>();

  // Semantic checks that need the problem (e.g. album3 on a nonlinear F).
  const Experiment e = build_experiment(cfg);
  if (cfg.x0) album::detail::require_size(cfg.x0->size(), e.problem.n, "algo.x0");
  return cfg;
}

/// Shortest decimal form that reads back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline void write_trace(std::ostream& out, const RunReport& report) {
  out << "k,rho,beta,step_x,step_y,laug,lyapunov,in_zone,lyap_pass,kkt_stat,kkt_feas,kkt_dual\n";
  for (const auto& r : report.records) {
    out << r.k << ',' << format_double(r.rho) << ',' << format_double(r.beta) << ',' << format_double(r.step_x)
        << ',' << format_double(r.step_y) << ',' << format_double(r.laug) << ','
        << format_double(r.lyapunov_next) << ',' << (r.in_zone ? 1 : 0) << ',' << (r.lyap_test_pass ? 1 : 0)
        << ',' << format_double(r.kkt.stationarity) << ',' << format_double(r.kkt.feasibility) << ','
        << format_double(r.kkt.dual) << '\n';
  }
}

inline void emit_trace(const RunReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw AlbumError(ErrorCode::kIo, "cannot open trace file '" + path + "'");
  write_trace(out, report);
  if (!out) throw AlbumError(ErrorCode::kIo, "failed writing trace file '" + path + "'");
}

inline Json check_json(const CheckResult& c) {
  Json j;
  j["verdict"] = to_string(c.verdict);
  j["worst"] = c.worst;
  j["worst_k"] = c.worst_k;
  j["checked"] = c.checked;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

inline Json summary_json(const ExperimentConfig& cfg, const Experiment& e, const RunReport& report,
                         const DiagnosticsReport& d, const std::string& status) {
  Json s;
  s["problem"] = cfg.problem_name;
  s["map"] = to_string(e.kind.tag);
  s["status"] = status;
  s["iterations"] = report.records.size();
  s["k_statio"] = report.k_statio ? Json(*report.k_statio) : Json(nullptr);
  s["k_info"] = report.k_info ? Json(*report.k_info) : Json(nullptr);
  s["final_rho"] = report.final_state.rho;
  s["fixed_penalty"] = report.fixed_penalty;
  s["mu"] = e.params.mu;
  s["running_lambda"] = report.running_lambda;
  s["running_jac_bound"] = report.running_jac_bound;
  const FirstOrder f = eval_f0(e.problem, report.final_state.x);
  s["objective"] = f.value + e.problem.h.value(report.final_state.u);
  if (!report.records.empty()) {
    const auto& last = report.records.back().kkt;
    s["kkt"] = {{"stationarity", last.stationarity}, {"feasibility", last.feasibility}, {"dual", last.dual}};
  }
  s["x"] = std::vector<double>(report.final_state.x.data(), report.final_state.x.data() + report.final_state.x.size());
  Json checks = Json::object();
  for (const CheckResult* c : d.all()) checks[c->name] = check_json(*c);
  s["diagnostics"] = checks;
  s["warnings"] = report.warnings;
  return s;
}

inline void require_parent_dir(const std::string& path, const char* what) {
  if (path.empty()) return;
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  if (!parent.empty() && !std::filesystem::is_directory(parent)) {
    throw AlbumError(ErrorCode::kIo, std::string(what) + " directory does not exist: " + parent.string());
  }
}

/// Runs one experiment, writes its outputs and returns the exit code.
/// Messages go to err unless quiet.
inline int run_experiment(const ExperimentConfig& cfg, std::ostream& err, bool quiet = false) {
  try {
    require_parent_dir(cfg.trace_path, "trace_path");
    require_parent_dir(cfg.summary_path, "summary_path");
    const Experiment e = build_experiment(cfg);
    RunReport report;
    int code = kExitConverged;
    std::string status;
    try {
      report = run(e.problem, e.kind, e.params, e.options);
      code = report.converged ? kExitConverged : kExitMaxIterations;
      status = report.converged ? "converged" : "max_iterations";
    } catch (const AlbumError& ex) {
      if (ex.code() != ErrorCode::kDivergence) throw;
      if (!quiet) err << "divergence guard: " << ex.what() << '\n';
      return kExitDivergence;
    }
    const DiagnosticsReport d = run_diagnostics(e.problem, report, e.params.inner_tol);
    if (!cfg.trace_path.empty()) emit_trace(report, cfg.trace_path);
    if (!cfg.summary_path.empty()) {
      std::ofstream out(cfg.summary_path, std::ios::binary);
      if (!out) throw AlbumError(ErrorCode::kIo, "cannot open summary file '" + cfg.summary_path + "'");
      out << summary_json(cfg, e, report, d, status).dump(2) << '\n';
    }
    if (!quiet) {
      err << cfg.problem_name << '/' << to_string(e.kind.tag) << ": " << status << " after "
          << report.records.size() << " iterations, rho = " << format_double(report.final_state.rho) << '\n';
      for (const auto& w : report.warnings) err << "warning: " << w << '\n';
    }
    return code;
  } catch (const std::exception& ex) {
    if (!quiet) err << "error: " << ex.what() << '\n';
    return kExitError;
  }
}

inline int run_config_file(const std::string& path, std::ostream& err, bool quiet) {
  std::ifstream in(path);
  if (!in) {
    if (!quiet) err << "error: cannot read config '" << path << "'\n";
    return kExitError;
  }
  std::stringstream text;
  text << in.rdbuf();
  try {
    return run_experiment(parse_config(text.str()), err, quiet);
  } catch (const std::exception& ex) {
    if (!quiet) err << "error: " << path << ": " << ex.what() << '\n';
    return kExitError;
  }
}

}  // namespace album::cli

#endif  // ALBUM_TOOLS_EXPERIMENT_HPP_
