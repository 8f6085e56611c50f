#include "nlpot/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "nlpot/capacity.hpp"
#include "nlpot/inequalities.hpp"
#include "nlpot/io.hpp"
#include "nlpot/potential_theory.hpp"

namespace nlpot {

namespace fs = std::filesystem;

void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                         const std::string& path) {
  if (!obj.is_object()) throw std::invalid_argument(path + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw std::invalid_argument("unknown key '" + it.key() + "' at " + path);
  }
}

namespace {

const json& require(const json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw std::invalid_argument("missing key '" + key + "' at " + path);
  return *it;
}

double num(const json& j, const std::string& path) {
  if (!j.is_number()) throw std::invalid_argument(path + ": expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw std::invalid_argument(path + ": expected an integer");
  return j.get<int>();
}

} // namespace

Params parse_params(const json& j, const std::string& path) {
  reject_unknown_keys(j, {"n", "s", "p", "lambda"}, path);
  Params pr;
  pr.n = integer(require(j, "n", path), path + ".n");
  pr.s = num(require(j, "s", path), path + ".s");
  pr.p = num(require(j, "p", path), path + ".p");
  if (j.contains("lambda")) pr.lambda = num(j["lambda"], path + ".lambda");
  pr.validate();
  return pr;
}

KernelSpec parse_kernel(const json& j, const std::string& path) {
  reject_unknown_keys(j, {"variant", "coefficient"}, path);
  std::string variant = require(j, "variant", path).get<std::string>();
  if (variant == "standard") return KernelSpec::standard();
  if (variant != "coefficient")
    throw std::invalid_argument(path + ".variant: expected 'standard' or 'coefficient'");
  const json& cj = require(j, "coefficient", path);
  reject_unknown_keys(cj, {"kind", "value", "amplitude", "freq", "log_amp"},
                      path + ".coefficient");
  std::string kind = require(cj, "kind", path + ".coefficient").get<std::string>();
  CoefficientField f;
  if (kind == "constant") {
    f = CoefficientField::constant(num(require(cj, "value", path), path + ".value"));
  } else if (kind == "cosine_sum") {
    f = CoefficientField::cosine_sum(num(require(cj, "amplitude", path), path + ".amplitude"),
                                     num(require(cj, "freq", path), path + ".freq"));
  } else if (kind == "product_phase") {
    f = CoefficientField::product_phase(num(require(cj, "log_amp", path), path + ".log_amp"),
                                        num(require(cj, "freq", path), path + ".freq"));
  } else {
    throw std::invalid_argument(path + ".coefficient.kind: unknown kind '" + kind + "'");
  }
  return KernelSpec::coefficient(f);
}

SolverConfig parse_solver(const json& j, const std::string& path) {
  reject_unknown_keys(j, {"residual_tol", "max_iters", "irls_iters"}, path);
  SolverConfig cfg;
  if (j.contains("residual_tol")) cfg.residual_tol = num(j["residual_tol"], path);
  if (j.contains("max_iters")) cfg.max_iters = integer(j["max_iters"], path);
  if (j.contains("irls_iters")) cfg.irls_iters = integer(j["irls_iters"], path);
  cfg.validate();
  return cfg;
}

Point parse_point(const json& j, int dim, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw std::invalid_argument(path + ": expected an array of " + std::to_string(dim) +
                                " coordinates");
  Point x{0.0, 0.0};
  for (int k = 0; k < dim; ++k) x[k] = num(j[k], path);
  return x;
}

Region parse_region(const json& j, int dim, const std::string& path) {
  std::string type = require(j, "type", path).get<std::string>();
  if (type == "ball") {
    reject_unknown_keys(j, {"type", "center", "radius", "closed"}, path);
    bool closed = j.contains("closed") ? j["closed"].get<bool>() : true;
    return Region::ball(parse_point(require(j, "center", path), dim, path + ".center"),
                        num(require(j, "radius", path), path + ".radius"), closed);
  }
  if (type == "box") {
    reject_unknown_keys(j, {"type", "lo", "hi"}, path);
    return Region::box(parse_point(require(j, "lo", path), dim, path + ".lo"),
                       parse_point(require(j, "hi", path), dim, path + ".hi"));
  }
  if (type == "halfspace") {
    reject_unknown_keys(j, {"type", "normal", "offset"}, path);
    return Region::halfspace(parse_point(require(j, "normal", path), dim, path + ".normal"),
                             num(require(j, "offset", path), path + ".offset"));
  }
  if (type == "cone") {
    reject_unknown_keys(j, {"type", "vertex", "axis", "aperture"}, path);
    return Region::cone(parse_point(require(j, "vertex", path), dim, path + ".vertex"),
                        parse_point(require(j, "axis", path), dim, path + ".axis"),
                        num(require(j, "aperture", path), path + ".aperture"));
  }
  if (type == "cusp") {
    reject_unknown_keys(j, {"type", "vertex", "axis", "kappa"}, path);
    return Region::cusp(parse_point(require(j, "vertex", path), dim, path + ".vertex"),
                        parse_point(require(j, "axis", path), dim, path + ".axis"),
                        num(require(j, "kappa", path), path + ".kappa"));
  }
  if (type == "all") return Region::all();
  if (type == "empty") return Region::empty();
  if (type == "complement") {
    reject_unknown_keys(j, {"type", "of"}, path);
    return Region::complement(parse_region(require(j, "of", path), dim, path + ".of"));
  }
  if (type == "union" || type == "intersection") {
    reject_unknown_keys(j, {"type", "of"}, path);
    const json& parts = require(j, "of", path);
    std::vector<Region> rs;
    for (std::size_t k = 0; k < parts.size(); ++k)
      rs.push_back(parse_region(parts[k], dim, path + ".of[" + std::to_string(k) + "]"));
    return type == "union" ? Region::unite(std::move(rs)) : Region::intersect(std::move(rs));
  }
  if (type == "difference") {
    reject_unknown_keys(j, {"type", "a", "b"}, path);
    return Region::difference(parse_region(require(j, "a", path), dim, path + ".a"),
                              parse_region(require(j, "b", path), dim, path + ".b"));
  }
  throw std::invalid_argument(path + ".type: unknown region type '" + type + "'");
}

BoundaryDataSpec parse_boundary_data(const json& j, int dim, const std::string& path) {
  std::string kind = require(j, "kind", path).get<std::string>();
  BoundaryDataSpec g;
  if (kind == "constant") {
    reject_unknown_keys(j, {"kind", "value"}, path);
    g.kind = BoundaryDataSpec::Kind::Constant;
    g.value = num(require(j, "value", path), path + ".value");
  } else if (kind == "clamped_linear") {
    reject_unknown_keys(j, {"kind", "value", "direction", "lo", "hi"}, path);
    g.kind = BoundaryDataSpec::Kind::ClampedLinear;
    g.value = num(require(j, "value", path), path + ".value");
    g.direction = parse_point(require(j, "direction", path), dim, path + ".direction");
    if (j.contains("lo")) g.clamp_lo = num(j["lo"], path);
    if (j.contains("hi")) g.clamp_hi = num(j["hi"], path);
  } else if (kind == "bump" || kind == "indicator_ball") {
    reject_unknown_keys(j, {"kind", "center", "radius", "height"}, path);
    g.kind = kind == "bump" ? BoundaryDataSpec::Kind::Bump : BoundaryDataSpec::Kind::IndicatorBall;
    g.center = parse_point(require(j, "center", path), dim, path + ".center");
    g.radius = num(require(j, "radius", path), path + ".radius");
    if (j.contains("height")) g.height = num(j["height"], path);
  } else {
    throw std::invalid_argument(path + ".kind: unknown boundary data kind '" + kind + "'");
  }
  return g;
}

DomainFamily parse_family(const json& j, const std::string& path) {
  reject_unknown_keys(j, {"kind", "aperture", "kappa", "fraction", "family_seed"}, path);
  std::string kind = require(j, "kind", path).get<std::string>();
  DomainFamily f;
  if (kind == "half_space")
    f.kind = DomainFamily::Kind::HalfSpaceComplement;
  else if (kind == "cone")
    f.kind = DomainFamily::Kind::Cone;
  else if (kind == "power_cusp")
    f.kind = DomainFamily::Kind::PowerCusp;
  else if (kind == "punctured_ball")
    f.kind = DomainFamily::Kind::PuncturedBall;
  else if (kind == "measure_dense")
    f.kind = DomainFamily::Kind::MeasureDenseComplement;
  else
    throw std::invalid_argument(path + ".kind: unknown family '" + kind + "'");
  if (j.contains("aperture")) f.aperture = num(j["aperture"], path);
  if (j.contains("kappa")) f.kappa = num(j["kappa"], path);
  if (j.contains("fraction")) f.fraction = num(j["fraction"], path);
  if (j.contains("family_seed")) f.seed = j["family_seed"].get<std::uint64_t>();
  return f;
}

std::shared_ptr<const Grid> parse_grid(const json& j, int dim, const std::string& path) {
  reject_unknown_keys(j, {"box", "cells"}, path);
  const json& box = require(j, "box", path);
  if (!box.is_array() || box.size() != 2)
    throw std::invalid_argument(path + ".box: expected [lo, hi]");
  Point lo = parse_point(box[0], dim, path + ".box[0]");
  Point hi = parse_point(box[1], dim, path + ".box[1]");
  const json& cj = require(j, "cells", path);
  if (!cj.is_array() || static_cast<int>(cj.size()) != dim)
    throw std::invalid_argument(path + ".cells: expected " + std::to_string(dim) + " counts");
  std::array<int, 2> cells{1, 1};
  for (int k = 0; k < dim; ++k) cells[k] = integer(cj[k], path + ".cells");
  return build_grid(lo, hi, cells, dim);
}

std::string config_hash(const json& config) {
  std::string dump = config.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Subcommand runners
// ---------------------------------------------------------------------------

namespace {

struct RunContext {
  Params params;
  KernelSpec kernel;
  SolverConfig solver;
  std::uint64_t seed = 0;
  fs::path out;
  std::vector<std::string> outputs;
};

std::string region_desc(const json& j) { return j.dump(); }

int run_solve(const json& sub, RunContext& ctx) {
  reject_unknown_keys(sub, {"grid", "free", "boundary", "dump_weights"}, "solve");
  auto grid = parse_grid(require(sub, "grid", "solve"), ctx.params.n, "solve.grid");
  Region free_rg = parse_region(require(sub, "free", "solve"), ctx.params.n, "solve.free");
  BoundaryDataSpec g =
      parse_boundary_data(require(sub, "boundary", "solve"), ctx.params.n, "solve.boundary");

  DirichletProblem pb;
  pb.weights =
      std::make_shared<PairWeightMatrix>(assemble_weights(grid, ctx.kernel, ctx.params));
  pb.free = node_set(grid, free_rg);
  pb.boundary_values.assign(grid->size(), 0.0);
  for (std::size_t i = 0; i < grid->size(); ++i)
    if (!pb.free.contains(i)) pb.boundary_values[i] = g.eval(grid->center(i), ctx.params.n);

  Solution sol = solve(pb, ctx.solver);
  write_solution_csv(sol, ctx.params, (ctx.out / "solution.csv").string());
  ctx.outputs.push_back("solution.csv");
  if (sub.contains("dump_weights") && sub["dump_weights"].get<bool>()) {
    write_nodes_csv(*grid, (ctx.out / "nodes.csv").string());
    write_weights_csv(*pb.weights, (ctx.out / "weights.csv").string());
    ctx.outputs.push_back("nodes.csv");
    ctx.outputs.push_back("weights.csv");
  }
  return sol.converged ? 0 : 2;
}

int run_capacity(const json& sub, RunContext& ctx) {
  reject_unknown_keys(sub, {"grid", "K", "omega"}, "capacity");
  auto grid = parse_grid(require(sub, "grid", "capacity"), ctx.params.n, "capacity.grid");
  NodeSet K = node_set(grid, parse_region(require(sub, "K", "capacity"), ctx.params.n,
                                          "capacity.K"));
  NodeSet omega = node_set(grid, parse_region(require(sub, "omega", "capacity"), ctx.params.n,
                                              "capacity.omega"));
  CapacityResult res = capacity(K, omega, ctx.kernel, ctx.params, ctx.solver);
  write_capacity_csv((ctx.out / "capacity.csv").string(), region_desc(sub["K"]),
                     region_desc(sub["omega"]), ctx.params, res);
  ctx.outputs.push_back("capacity.csv");
  if (!K.empty()) {
    write_solution_csv(res.solution, ctx.params, (ctx.out / "potential.csv").string());
    ctx.outputs.push_back("potential.csv");
  }
  return res.converged ? 0 : 2;
}

int run_wiener(const json& sub, RunContext& ctx) {
  reject_unknown_keys(sub, {"omega", "x0", "rho_min", "rho_max", "levels"}, "wiener");
  Region omega = parse_region(require(sub, "omega", "wiener"), ctx.params.n, "wiener.omega");
  Point x0 = parse_point(require(sub, "x0", "wiener"), ctx.params.n, "wiener.x0");
  double rho_min = num(require(sub, "rho_min", "wiener"), "wiener.rho_min");
  double rho_max = num(require(sub, "rho_max", "wiener"), "wiener.rho_max");
  int levels = integer(require(sub, "levels", "wiener"), "wiener.levels");

  WienerProfile prof =
      wiener_profile(omega, x0, rho_min, rho_max, levels, ctx.params, ctx.solver);
  WienerIntegralResult integ = wiener_integral(prof);

  CsvWriter csv((ctx.out / "wiener.csv").string());
  csv.header({"rho", "cap", "integrand", "integrand_rho"});
  for (std::size_t k = 0; k < prof.radii.size(); ++k)
    csv.row({fmt_double(prof.radii[k]), fmt_double(prof.caps[k]),
             fmt_double(prof.integrands[k]),
             fmt_double(prof.integrands[k] * prof.radii[k])});
  ctx.outputs.push_back("wiener.csv");

  json summary{{"value", integ.value},
               {"diagnostic", integ.diagnostic},
               {"spread", integ.spread},
               {"decay_rate", integ.decay_rate},
               {"all_zero", integ.all_zero},
               {"note", integ.note}};
  std::ofstream((ctx.out / "wiener_summary.json").string()) << summary.dump(2) << "\n";
  ctx.outputs.push_back("wiener_summary.json");
  return 0;
}

int run_probe(const json& sub, RunContext& ctx) {
  reject_unknown_keys(sub, {"family", "g", "resolutions", "radii"}, "probe");
  DomainFamily family = parse_family(require(sub, "family", "probe"), "probe.family");
  BoundaryDataSpec g = parse_boundary_data(require(sub, "g", "probe"), ctx.params.n, "probe.g");
  std::vector<int> resolutions;
  for (const auto& r : require(sub, "resolutions", "probe")) resolutions.push_back(r.get<int>());
  ProbeOptions opts;
  if (sub.contains("radii")) {
    opts.radii.clear();
    for (const auto& r : sub["radii"]) opts.radii.push_back(r.get<double>());
  }

  ProbeReport rep = probe_regularity(family, g, ctx.params, resolutions, ctx.solver, opts);

  CsvWriter csv((ctx.out / "oscillation.csv").string());
  csv.header({"resolution", "rho", "sup", "inf"});
  for (const auto& lv : rep.levels)
    for (const auto& rec : lv.osc)
      csv.row({std::to_string(lv.resolution), fmt_double(rec.rho), fmt_double(rec.sup),
               fmt_double(rec.inf)});
  ctx.outputs.push_back("oscillation.csv");

  json levels = json::array();
  for (const auto& lv : rep.levels) {
    json wiener = json::array();
    for (std::size_t k = 0; k < lv.wiener.radii.size(); ++k)
      wiener.push_back({{"rho", lv.wiener.radii[k]},
                        {"cap", lv.wiener.caps[k]},
                        {"integrand", lv.wiener.integrands[k]}});
    levels.push_back({{"resolution", lv.resolution},
                      {"h", lv.h},
                      {"deviation", lv.deviation},
                      {"adjacent_max", lv.adjacent_max},
                      {"diagnostic", lv.diag.diagnostic},
                      {"wiener", wiener}});
  }
  json report{{"classification", to_string(rep.cls)},
              {"g_at_anchor", rep.g_at_anchor},
              {"gap", rep.gap},
              {"levels", levels}};
  std::ofstream((ctx.out / "probe.json").string()) << report.dump(2) << "\n";
  ctx.outputs.push_back("probe.json");
  return 0;
}

int run_ineq(const json& sub, RunContext& ctx) {
  reject_unknown_keys(sub, {"samples"}, "ineq");
  std::size_t samples = 100000;
  if (sub.contains("samples")) samples = sub["samples"].get<std::size_t>();
  auto battery = run_ineq_battery(samples, ctx.seed);
  json out = json::array();
  bool all_pass = true;
  for (const auto& e : battery) {
    all_pass = all_pass && e.pass;
    out.push_back({{"lemma", e.lemma},
                   {"point", e.point},
                   {"pass", e.pass},
                   {"samples", e.report.samples},
                   {"violations", e.report.violations},
                   {"worst_margin", e.report.worst_margin},
                   {"estimated_c", e.report.estimated_c},
                   {"estimated_C", e.report.estimated_C},
                   {"stability", e.report.stability},
                   {"feasible", e.report.feasible}});
  }
  json report{{"all_pass", all_pass}, {"entries", out}};
  std::ofstream((ctx.out / "ineq.json").string()) << report.dump(2) << "\n";
  ctx.outputs.push_back("ineq.json");
  return all_pass ? 0 : 1;
}

int run_scaling(const json& sub, RunContext& ctx) {
  reject_unknown_keys(sub, {"radii", "R"}, "scaling");
  std::vector<double> radii;
  for (const auto& r : require(sub, "radii", "scaling")) radii.push_back(r.get<double>());
  double R = num(require(sub, "R", "scaling"), "scaling.R");
  ScalingReport rep = ball_capacity_scaling(ctx.params, radii, R, ctx.solver);

  CsvWriter csv((ctx.out / "scaling.csv").string());
  csv.header({"r", "cap"});
  for (std::size_t k = 0; k < rep.radii.size(); ++k)
    csv.row({fmt_double(rep.radii[k]), fmt_double(rep.caps[k])});
  ctx.outputs.push_back("scaling.csv");

  json summary{{"loglog_slope", rep.loglog_slope},
               {"scaling_exponent", rep.scaling_exponent},
               {"log_case_ratio", rep.log_case_ratio},
               {"R", rep.outer_radius}};
  std::ofstream((ctx.out / "scaling_summary.json").string()) << summary.dump(2) << "\n";
  ctx.outputs.push_back("scaling_summary.json");
  return 0;
}

} // namespace

int run_subcommand(const std::string& subcommand, const json& config, const std::string& out_dir,
                   std::uint64_t seed) {
  reject_unknown_keys(config,
                      {"params", "kernel", "solver", "seed", "solve", "capacity", "wiener",
                       "probe", "ineq", "scaling"},
                      "config");
  RunContext ctx;
  ctx.params = parse_params(require(config, "params", "config"), "config.params");
  ctx.kernel = config.contains("kernel") ? parse_kernel(config["kernel"], "config.kernel")
                                         : KernelSpec::standard();
  ctx.solver = config.contains("solver") ? parse_solver(config["solver"], "config.solver")
                                         : SolverConfig{};
  ctx.seed = seed;
  if (config.contains("seed") && seed == 0) ctx.seed = config["seed"].get<std::uint64_t>();
  ctx.out = out_dir;
  fs::create_directories(ctx.out);

  const json& sub = require(config, subcommand, "config");
  int status = 0;
  if (subcommand == "solve")
    status = run_solve(sub, ctx);
  else if (subcommand == "capacity")
    status = run_capacity(sub, ctx);
  else if (subcommand == "wiener")
    status = run_wiener(sub, ctx);
  else if (subcommand == "probe")
    status = run_probe(sub, ctx);
  else if (subcommand == "ineq")
    status = run_ineq(sub, ctx);
  else if (subcommand == "scaling")
    status = run_scaling(sub, ctx);
  else
    throw std::invalid_argument("unknown subcommand '" + subcommand + "'");

  json manifest{{"subcommand", subcommand},
                {"config_hash", config_hash(config)},
                {"seed", ctx.seed},
                {"version", kVersion},
                {"outputs", ctx.outputs},
                {"exit_status", status}};
  std::ofstream((ctx.out / "manifest.json").string()) << manifest.dump(2) << "\n";
  return status;
}

} // namespace nlpot
