#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tubehs/carleson.hpp"
#include "tubehs/config.hpp"
#include "tubehs/decomposition.hpp"
#include "tubehs/error.hpp"
#include "tubehs/fourier_laplace.hpp"
#include "tubehs/kernels.hpp"
#include "tubehs/operators.hpp"
#include "tubehs/verify.hpp"

namespace fs = std::filesystem;
using namespace tubehs;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
};

/// Everything a command produces, written only after the command succeeded.
struct Artifacts {
  std::map<std::string, std::string> files;
  std::string stdout_text;
  int status = kExitOk;
};

bool is_config_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::ConfigInvalid:
    case ErrorCode::SingularGenerators:
    case ErrorCode::UnsupportedDimension:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::NotInInterior:
    case ErrorCode::OutsideDualCone:
    case ErrorCode::OutsideSpectralSet:
    case ErrorCode::InvalidArgument:
    case ErrorCode::UnsupportedCone:
    case ErrorCode::DegreeTooHigh:
    case ErrorCode::WrongTube:
    case ErrorCode::SymbolOutsideDualCone:
    case ErrorCode::NotSelfMap:
    case ErrorCode::NotInHalfPlane:
      return true;
    default:
      return false;
  }
}

void write_atomic(const fs::path& path, const std::string& body) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << body;
    if (!out.flush()) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json point_json(const TubePoint& p) { return {{"x", vec_json(p.x)}, {"y", vec_json(p.y)}}; }

// ---------------------------------------------------------------------------
// Config context

struct Context {
  json root;
  fs::path base;
  Options opt;

  const json& block(const char* key) const {
    if (!root.contains(key)) throw Error(ErrorCode::ConfigInvalid, std::string("missing block '") + key + "'");
    return root.at(key);
  }
  fs::path resolve(const std::string& p) const {
    const fs::path path(p);
    return path.is_absolute() ? path : base / path;
  }
  double tol(double fallback) const {
    double t = fallback;
    if (opt.tol) {
      t = *opt.tol;
    } else if (root.contains("tol")) {
      if (!root.at("tol").is_number()) throw Error(ErrorCode::ConfigInvalid, "tol must be a number");
      t = root.at("tol").get<double>();
    }
    return t;
  }
  double target() const {
    const double t = tol(kDefaultTarget);
    if (!(t > 0.0)) throw Error(ErrorCode::ConfigInvalid, "tol must be positive");
    return t;
  }
};

Cone ctx_cone(const Context& c) { return parse_cone(c.block("cone")); }

Weight ctx_weight(const Context& c, const Cone& cone) {
  const Gauge g = c.root.contains("gauge") ? parse_gauge(c.root.at("gauge"), cone) : Gauge::euclidean(cone);
  int order = 0;
  if (c.root.contains("order")) {
    const json& o = c.root.at("order");
    if (!o.is_number_integer() || o.get<int>() < 0) throw Error(ErrorCode::ConfigInvalid, "order must be an integer >= 0");
    order = o.get<int>();
  }
  return Weight(order, g);
}

/// A list of points, or {"grid": {"x": [[lo, hi, count], ..], "y": [[lo, hi, count], ..]}}
/// expanded as a tensor product, last axis fastest.
std::vector<TubePoint> parse_point_set(const json& j, const Cone& cone) {
  if (j.is_array()) return parse_points(j, cone);
  if (!j.is_object() || !j.contains("grid")) throw Error(ErrorCode::ConfigInvalid, "point sets are lists or grids");
  const json& g = j.at("grid");
  const int d = cone.dim();
  std::vector<std::vector<double>> axes;
  for (const char* key : {"x", "y"}) {
    if (!g.contains(key) || !g.at(key).is_array() || static_cast<int>(g.at(key).size()) != d) {
      throw Error(ErrorCode::ConfigInvalid, std::string("grid '") + key + "' needs one [lo, hi, count] per axis");
    }
    for (const json& ax : g.at(key)) {
      if (!ax.is_array() || ax.size() != 3 || !ax[0].is_number() || !ax[1].is_number() || !ax[2].is_number_integer() ||
          ax[2].get<int>() < 1) {
        throw Error(ErrorCode::ConfigInvalid, "grid axes are [lo, hi, count] with count >= 1");
      }
      const double lo = ax[0].get<double>();
      const double hi = ax[1].get<double>();
      const int n = ax[2].get<int>();
      std::vector<double> vals;
      for (int k = 0; k < n; ++k) vals.push_back(n == 1 ? lo : lo + (hi - lo) * k / (n - 1));
      axes.push_back(std::move(vals));
    }
  }
  std::vector<TubePoint> out;
  std::vector<std::size_t> idx(axes.size(), 0);
  for (;;) {
    Vec x(d);
    Vec y(d);
    for (int i = 0; i < d; ++i) {
      x[i] = axes[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
      y[i] = axes[static_cast<std::size_t>(d + i)][idx[static_cast<std::size_t>(d + i)]];
    }
    out.push_back(make_tube_point(cone, x, y));
    std::size_t k = axes.size();
    while (k > 0) {
      --k;
      if (++idx[k] < axes[k].size()) break;
      idx[k] = 0;
      if (k == 0) return out;
    }
  }
}

json load_json(const fs::path& p) {
  try {
    return json::parse(read_text_file(p.string()));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigInvalid, p.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Commands

Artifacts cmd_kernel(const Context& c) {
  const Cone cone = ctx_cone(c);
  const KernelParams p(ctx_weight(c, cone), c.target());
  const json& k = c.block("kernel");
  if (!k.contains("z")) throw Error(ErrorCode::ConfigInvalid, "kernel block needs 'z'");
  const std::vector<TubePoint> zs = parse_point_set(k.at("z"), cone);
  const bool diagonal = !k.contains("w");
  const std::vector<TubePoint> ws = diagonal ? std::vector<TubePoint>{} : parse_point_set(k.at("w"), cone);

  std::ostringstream csv;
  const int d = cone.dim();
  auto coords = [d](const char* tag) {
    std::string h;
    for (const char* part : {"x", "y"}) {
      for (int i = 1; i <= d; ++i) h += std::string(tag) + "_" + part + std::to_string(i) + ",";
    }
    return h;
  };
  csv << coords("z") << coords("w") << "re_K,im_K\n";
  auto row = [&](const TubePoint& z, const TubePoint& w, Complex v) {
    for (const TubePoint* pt : {&z, &w}) {
      for (int i = 0; i < d; ++i) csv << num(pt->x[i]) << ",";
      for (int i = 0; i < d; ++i) csv << num(pt->y[i]) << ",";
    }
    csv << num(v.real()) << "," << num(v.imag()) << "\n";
  };
  for (const TubePoint& z : zs) {
    if (diagonal) {
      row(z, z, kernel_diag(p, z));
      continue;
    }
    for (const TubePoint& w : ws) row(z, w, kernel_eval(p, z, w));
  }
  Artifacts a;
  a.files["kernel.csv"] = csv.str();
  return a;
}

BoundaryGrid ctx_grid(const Context& c) {
  const json& g = c.block("grid");
  if (!g.contains("file")) return parse_grid(g);
  if (!g.at("file").is_string()) throw Error(ErrorCode::ConfigInvalid, "grid file must be a path");
  const fs::path path = c.resolve(g.at("file").get<std::string>());
  if (path.extension() == ".json") return parse_grid(load_json(path));
  for (const char* key : {"dim", "points_per_axis", "period"}) {
    if (!g.contains(key) || !g.at(key).is_number()) {
      throw Error(ErrorCode::ConfigInvalid, std::string("CSV grids need '") + key + "' in the grid block");
    }
  }
  return parse_grid_csv(read_text_file(path.string()), g.at("dim").get<int>(), g.at("points_per_axis").get<int>(),
                        g.at("period").get<double>());
}

Artifacts cmd_decompose(const Context& c) {
  const Cone cone = ctx_cone(c);
  const Weight w = ctx_weight(c, cone);
  const BoundaryGrid grid = ctx_grid(c);
  const double tol = c.tol(0.0);
  if (!(tol >= 0.0)) throw Error(ErrorCode::ConfigInvalid, "tol must be nonnegative");
  const NormReport r = norm_identity_report(grid, cone, w, tol);
  Artifacts a;
  a.files["decompose.json"] = dump({{"boundary_norm_sq", r.boundary_norm_sq},
                                    {"plus_norm_sq", r.plus_norm_sq},
                                    {"minus_norm_sq", r.minus_norm_sq},
                                    {"defect", r.defect},
                                    {"residual_mass", r.residual_mass}});
  if (c.root.contains("bins_csv") && c.root.at("bins_csv").is_boolean() && c.root.at("bins_csv").get<bool>()) {
    const SpectrumSplit split = split_spectrum(analyze_grid(grid), cone, tol);
    std::ostringstream csv;
    for (int i = 1; i <= grid.dim; ++i) csv << "k" << i << ",";
    for (int i = 1; i <= grid.dim; ++i) csv << "xi" << i << ",";
    csv << "re_b,im_b,part\n";
    auto emit = [&](const std::vector<Bin>& bins, const char* part) {
      for (const Bin& b : bins) {
        for (int k : b.k) csv << k << ",";
        for (Eigen::Index i = 0; i < b.xi.size(); ++i) csv << num(b.xi[i]) << ",";
        csv << num(b.coeff.real()) << "," << num(b.coeff.imag()) << "," << part << "\n";
      }
    };
    emit(split.plus, "plus");
    emit(split.minus, "minus");
    emit(split.residual, "residual");
    a.files["bins.csv"] = csv.str();
  }
  return a;
}

MultiIndex parse_alpha(const json& j, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) throw Error(ErrorCode::ConfigInvalid, "alpha needs d entries");
  MultiIndex a;
  for (const json& v : j) {
    if (!v.is_number_integer() || v.get<int>() < 0) throw Error(ErrorCode::ConfigInvalid, "alpha entries are >= 0");
    a.push_back(v.get<int>());
  }
  return a;
}

std::vector<MultiIndex> all_indices(int dim, int n) {
  std::vector<MultiIndex> out;
  MultiIndex a(static_cast<std::size_t>(dim), 0);
  for (;;) {
    int total = 0;
    for (int v : a) total += v;
    if (total <= n) out.push_back(a);
    int i = dim - 1;
    while (i >= 0 && ++a[static_cast<std::size_t>(i)] > n) a[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) return out;
  }
}

Artifacts cmd_norms(const Context& c) {
  const Cone cone = ctx_cone(c);
  const Weight w = ctx_weight(c, cone);
  const HSFunction f(parse_density(c.block("density"), cone), w, c.target());
  const auto rule = f.norm_rule();
  const double norm = hs_norm(f, *rule);
  std::vector<MultiIndex> alphas;
  if (c.root.contains("derivatives")) {
    const json& d = c.root.at("derivatives");
    if (!d.is_array()) throw Error(ErrorCode::ConfigInvalid, "derivatives must be a list of multi-indices");
    for (const json& a : d) alphas.push_back(parse_alpha(a, cone.dim()));
  } else {
    alphas = all_indices(cone.dim(), w.order());
  }
  json ders = json::array();
  for (const MultiIndex& alpha : alphas) {
    const MultiplierResult m = apply_poly_multiplier(f, Polynomial{{{alpha, Complex(1.0)}}});
    const double h2 = hs_norm(m.function, *rule);
    ders.push_back({{"alpha", alpha}, {"h2_norm", h2}, {"constant", m.domination}, {"bound", m.domination * norm}});
  }
  Artifacts a;
  a.files["norms.json"] = dump({{"order", w.order()},
                                {"hs_norm", norm},
                                {"h2_sup_norm", h2_sup_norm(f)},
                                {"rule_nodes", rule->weights.size()},
                                {"derivatives", ders}});
  return a;
}

DiscreteMeasure ctx_measure(const Context& c, const Cone& cone) {
  if (c.root.contains("measure")) return parse_measure(c.root.at("measure"), cone);
  if (c.root.contains("measure_file") && c.root.at("measure_file").is_string()) {
    return parse_measure(load_json(c.resolve(c.root.at("measure_file").get<std::string>())), cone);
  }
  throw Error(ErrorCode::ConfigInvalid, "carleson needs 'measure' or 'measure_file'");
}

Artifacts cmd_carleson(const Context& c) {
  const Cone cone = ctx_cone(c);
  const KernelParams p(ctx_weight(c, cone), c.target());
  const DiscreteMeasure mu = ctx_measure(c, cone);
  const std::vector<TubePoint> frame = c.root.contains("frame") ? parse_point_set(c.root.at("frame"), cone) : mu.points;
  if (frame.empty()) throw Error(ErrorCode::ConfigInvalid, "frame must not be empty");
  const EmbeddingEstimate est = embedding_estimate(p, mu, frame);
  double sup = 0.0;
  json ratios = json::array();
  for (const TubePoint& w : frame) {
    const double r = testing_ratio(p, mu, w);
    ratios.push_back(r);
    sup = std::max(sup, r);
  }
  Artifacts a;
  a.files["carleson.json"] = dump({{"kernel_test_sup", sup},
                                   {"embedding_lower_bound", est.lambda},
                                   {"frame_size", frame.size()},
                                   {"measure_size", mu.size()},
                                   {"testing_ratios", ratios},
                                   {"gram_condition", est.condition},
                                   {"regularization", est.regularization}});
  return a;
}

Artifacts cmd_operators(const Context& c) {
  const Cone cone = ctx_cone(c);
  const Weight w = ctx_weight(c, cone);
  const double target = c.target();
  const auto cache = std::make_shared<RuleCache>(cone);
  const KernelParams p(w, target, cache);
  const json& o = c.block("operator");
  if (!o.contains("family") || !o.at("family").is_string()) throw Error(ErrorCode::ConfigInvalid, "operator needs 'family'");
  const std::string family = o.at("family").get<std::string>();
  const int d = cone.dim();

  std::optional<ModulationSymbol> sym;
  Vec re = Vec::Zero(d);
  Vec im = Vec::Zero(d);
  if (family == "multiplier" || family == "weighted_composition") {
    if (!o.contains("eta0")) throw Error(ErrorCode::ConfigInvalid, family + " needs 'eta0'");
    sym.emplace(cone, parse_vec(o.at("eta0"), d, "eta0"));
  }
  if (family == "composition" || family == "weighted_composition") {
    if (!o.contains("b")) throw Error(ErrorCode::ConfigInvalid, family + " needs 'b' = {re, im}");
    const json& b = o.at("b");
    if (!b.is_object() || !b.contains("re") || !b.contains("im")) {
      throw Error(ErrorCode::ConfigInvalid, "'b' is {\"re\": [..], \"im\": [..]}");
    }
    re = parse_vec(b.at("re"), d, "b.re");
    im = parse_vec(b.at("im"), d, "b.im");
  }
  if (family != "multiplier" && family != "composition" && family != "weighted_composition") {
    throw Error(ErrorCode::ConfigInvalid, "unknown operator family '" + family + "'");
  }
  const WeightedComposition op{sym, TranslationMap(cone, re, im)};
  if (!o.contains("tests") || !o.at("tests").is_array() || o.at("tests").empty()) {
    throw Error(ErrorCode::ConfigInvalid, "operator needs a nonempty 'tests' list of densities");
  }
  std::vector<HSFunction> tests;
  for (const json& t : o.at("tests")) tests.emplace_back(parse_density(t, cone), w, target, cache);
  if (!o.contains("points")) throw Error(ErrorCode::ConfigInvalid, "operator needs 'points'");
  const std::vector<TubePoint> pts = parse_point_set(o.at("points"), cone);

  const Symbol psi = [&op](const TubePoint& z) { return op.psi(z); };
  json per_point = json::array();
  double max_adj = 0.0;
  double max_ratio = 0.0;
  for (const TubePoint& pt : pts) {
    const double adj = wco_adjoint_check(op, pt, tests);
    const double ratio = wco_necessary_ratio(p, psi, op.map, pt);
    max_adj = std::max(max_adj, adj);
    max_ratio = std::max(max_ratio, ratio);
    json e = point_json(pt);
    e["psi"] = complex_to_json(op.psi(pt));
    e["adjoint_residual"] = adj;
    e["necessary_ratio"] = ratio;
    per_point.push_back(e);
  }
  json norm_ratios = json::array();
  for (const HSFunction& f : tests) {
    const HSFunction g = op.apply(f);
    const auto rule = common_norm_rule(f, g);
    norm_ratios.push_back(hs_norm(g, *rule) / hs_norm(f, *rule));
  }
  json report{{"family", family},
              {"points", per_point},
              {"max_adjoint_residual", max_adj},
              {"max_necessary_ratio", max_ratio},
              {"norm_ratios", norm_ratios}};
  if (sym) {
    json shifts = json::array();
    for (const HSFunction& f : tests) shifts.push_back(modulation_apply(f, *sym).shift_constant);
    report["shift_constants"] = shifts;
    const Symbol mod = [&sym](const TubePoint& z) { return (*sym)(z); };
    const PointwiseReport pw = multiplier_pointwise_check(mod, 1.0, pts);
    report["pointwise"] = {{"samples", pw.samples}, {"flagged", pw.flagged}, {"max_modulus", pw.max_modulus}};
  }
  Artifacts a;
  a.files["operators.json"] = dump(report);
  return a;
}

Artifacts cmd_verify(const Context& c) {
  std::uint64_t seed = kDefaultSeed;
  if (c.opt.seed) {
    seed = *c.opt.seed;
  } else if (c.root.contains("seed")) {
    if (!c.root.at("seed").is_number_unsigned()) throw Error(ErrorCode::ConfigInvalid, "seed must be a nonnegative integer");
    seed = c.root.at("seed").get<std::uint64_t>();
  }
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<CriterionResult> results = run_acceptance(seed);
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Artifacts a;
  std::ostringstream os;
  bool all = total <= kTotalTimeLimit;
  for (const CriterionResult& r : results) {
    os << format_result(r) << "\n";
    all = all && r.passed;
  }
  a.stdout_text = os.str();
  json j = results_to_json(results, total);
  j["seed"] = seed;
  a.files["verify.json"] = dump(j);
  a.status = all ? kExitOk : kExitNumerical;
  return a;
}

int run(const std::string& command, const Options& opt) {
  Context ctx;
  ctx.opt = opt;
  try {
    if (!opt.config_path.empty()) {
      ctx.root = load_json(opt.config_path);
      if (!ctx.root.is_object()) throw Error(ErrorCode::ConfigInvalid, "config must be a JSON object");
      ctx.base = fs::path(opt.config_path).parent_path();
    } else if (command != "verify") {
      throw Error(ErrorCode::ConfigInvalid, "--config is required");
    } else {
      ctx.root = json::object();
    }
    if (fs::exists(opt.out_dir) && !fs::is_directory(opt.out_dir)) {
      throw Error(ErrorCode::ConfigInvalid, "--out is not a directory");
    }
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  Artifacts a;
  try {
    if (command == "kernel") a = cmd_kernel(ctx);
    else if (command == "decompose") a = cmd_decompose(ctx);
    else if (command == "norms") a = cmd_norms(ctx);
    else if (command == "carleson") a = cmd_carleson(ctx);
    else if (command == "operators") a = cmd_operators(ctx);
    else a = cmd_verify(ctx);
  } catch (const Error& e) {
    if (is_config_error(e.code())) {
      std::cerr << "config error: " << e.what() << "\n";
      return kExitConfig;
    }
    std::cerr << "numerical failure: " << e.what() << "\n";
    fs::create_directories(opt.out_dir);
    write_atomic(fs::path(opt.out_dir) / "error.json",
                 dump({{"command", command}, {"error", std::string(to_string(e.code()))}, {"message", e.what()}}));
    return kExitNumerical;
  }

  fs::create_directories(opt.out_dir);
  for (const auto& [name, body] : a.files) write_atomic(fs::path(opt.out_dir) / name, body);
  std::cout << a.stdout_text;
  return a.status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hardy-Sobolev spaces on tube domains over convex cones"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--config", opt.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  app.add_option("--out", opt.out_dir, "output directory");
  app.add_option("--seed", opt.seed, "seed for the randomized suite");
  app.add_option("--tol", opt.tol, "quadrature target (decompose: residual tolerance)");

  std::string command;
  const std::pair<const char*, const char*> commands[] = {
      {"kernel", "kernel values on point sets (kernel.csv)"},
      {"decompose", "boundary decomposition and norm identity (decompose.json)"},
      {"norms", "Hardy-Sobolev, H2 and derivative norms (norms.json)"},
      {"carleson", "kernel test and embedding estimate (carleson.json)"},
      {"operators", "multiplier and composition checks (operators.json)"},
      {"verify", "acceptance suite (verify.json)"},
  };
  for (const auto& [name, help] : commands) {
    app.add_subcommand(name, help)->callback([&command, name] { command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  try {
    return run(command, opt);
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}
