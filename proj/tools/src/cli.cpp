#include "qcgeom_cli/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "json_writer.hpp"
#include "qcgeom/catalog.hpp"
#include "qcgeom/errors.hpp"
#include "qcgeom/immersion.hpp"
#include "qcgeom/leaf_flow.hpp"
#include "qcgeom/qc.hpp"

#ifndef QCGEOM_VERSION
#define QCGEOM_VERSION "0.0.0"
#endif

namespace qcgeom::cli {

namespace {

constexpr int kAnisotropySamples = 32;

struct Common {
  std::string metric;
  std::uint64_t seed = 0;
  std::string json_path;
  unsigned threads = 0;
  Tolerances tol;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-m,--metric", c.metric, "metric spec (TOML)")->required();
  cmd->add_option("--seed", c.seed, "seed for sampled planes and directions");
  cmd->add_option("--json", c.json_path, "write the report to this file instead of stdout");
  cmd->add_option("--threads", c.threads, "worker threads (0 = hardware concurrency)");
  cmd->add_option("--tol-iso", c.tol.iso, "isotropy threshold")->check(CLI::PositiveNumber);
  cmd->add_option("--tol-qc", c.tol.qc, "decomposition residual threshold")->check(CLI::PositiveNumber);
  cmd->add_option("--fd-step", c.tol.fd_step, "finite-difference step")->check(CLI::PositiveNumber);
}

std::vector<double> parse_numbers(const std::string& text, char sep, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw InputError("BadArgument", what + ": cannot read '" + item + "'");
    }
  }
  return out;
}

struct GridAxis {
  double lo = 0.0, hi = 0.0;
  int count = 0;
};

std::vector<GridAxis> parse_grid(const std::string& text, int dim) {
  if (text.empty()) throw InputError("EmptyGrid", "--grid is empty");
  std::vector<GridAxis> axes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::vector<double> v = parse_numbers(item, ':', "grid axis");
    if (v.size() != 3 || v[2] < 1 || v[2] != std::floor(v[2])) {
      throw InputError("BadGrid", "grid axis '" + item + "' is not lo:hi:count");
    }
    axes.push_back({v[0], v[1], static_cast<int>(v[2])});
  }
  if (static_cast<int>(axes.size()) != dim) {
    throw InputError("BadGrid", "grid has " + std::to_string(axes.size()) + " axes for a " + std::to_string(dim) +
                                    "-dimensional metric");
  }
  return axes;
}

// Row-major: the last axis varies fastest.
std::vector<Point> expand_grid(const std::vector<GridAxis>& axes) {
  std::size_t total = 1;
  for (const GridAxis& a : axes) total *= static_cast<std::size_t>(a.count);
  std::vector<Point> pts(total, Point(axes.size()));
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    for (std::size_t k = axes.size(); k-- > 0;) {
      const GridAxis& a = axes[k];
      const std::size_t i = rem % static_cast<std::size_t>(a.count);
      rem /= static_cast<std::size_t>(a.count);
      pts[idx][k] = a.count == 1 ? a.lo : a.lo + (a.hi - a.lo) * static_cast<double>(i) / (a.count - 1);
    }
  }
  return pts;
}

unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned t = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(jobs, 1)));
}

// Evaluates f(i) for every index; results land in index order and the
// failure with the lowest index is rethrown, whatever the scheduling.
template <class F>
auto parallel_map(std::size_t count, unsigned threads, F f) -> std::vector<decltype(f(std::size_t{}))> {
  using R = decltype(f(std::size_t{}));
  std::vector<R> results(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        results[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = worker_count(threads, count);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

Json vec_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json opt_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string command_echo(const std::vector<std::string>& args) {
  std::string out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--threads" || a == "--json") {
      ++i;
      continue;
    }
    if (a.rfind("--threads=", 0) == 0 || a.rfind("--json=", 0) == 0) continue;
    if (!out.empty()) out += ' ';
    out += a;
  }
  return out;
}

Json header(const MetricSpec* spec, const std::string& echo, std::uint64_t seed) {
  Json j;
  j["schema"] = 1;
  j["tool"] = "qcgeom";
  j["version"] = QCGEOM_VERSION;
  j["spec_hash"] = spec ? Json(spec_hash(*spec)) : Json(nullptr);
  j["command"] = echo;
  j["seed"] = seed;
  return j;
}

void emit(const Json& report, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    write_json(out, report);
    out << '\n';
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("IoError", "cannot write '" + path + "'");
  write_json(f, report);
  f << '\n';
}

struct Loaded {
  MetricSpec spec;
  std::shared_ptr<const CompiledMetric> cm;
};

Loaded load(const std::string& path) {
  MetricSpec spec = load_metric_toml(path);
  auto cm = std::make_shared<const CompiledMetric>(spec);
  return {std::move(spec), std::move(cm)};
}

Point parse_point(const std::string& text, int dim) {
  Point p = parse_numbers(text, ',', "point");
  if (static_cast<int>(p.size()) != dim) {
    throw InputError("BadPoint", "point has " + std::to_string(p.size()) + " coordinates, metric needs " +
                                     std::to_string(dim));
  }
  return p;
}

// Per-point record shared by analyze and scan.
Json point_record(const CompiledMetric& cm, const Point& p, const Tolerances& tol, std::uint64_t seed,
                  std::uint64_t index) {
  const MetricJet jet = metric_jet(cm, p);
  const CurvaturePack pack = curvature_pack(jet);
  QCReport r = classify_point(jet, pack, tol);
  if (r.point_class == PointClass::QC && r.schouten_gap > 10.0 * tol.iso) {
    const LeafCurvature lc = leaf_curvature(cm, p, r, tol);
    r.lambda = lc.lambda;
    r.alpha = lc.alpha;
  }
  const int n = jet.dim();
  Json j;
  j["coords"] = p;
  j["class"] = std::string(to_string(r.point_class));
  j["H"] = r.H;
  j["N"] = r.N;
  j["lambda"] = opt_json(r.lambda);
  j["alpha"] = opt_json(r.alpha);
  j["xi"] = r.xi ? vec_json(*r.xi) : Json(nullptr);
  j["decomposition_residual"] = r.decomposition_residual;
  j["schouten_gap"] = r.schouten_gap;
  j["scalar"] = r.scalar;
  j["G_1"] = weitzenboeck_gm(jet, pack, 1);
  j["G_2"] = n >= 3 ? Json(weitzenboeck_gm(jet, pack, 2)) : Json(nullptr);
  std::vector<double> xi_span;
  if (r.xi) xi_span.assign(r.xi->data(), r.xi->data() + r.xi->size());
  j["anisotropy"] = anisotropy(jet, pack, kAnisotropySamples, mix_seed(seed, index), xi_span);
  return j;
}

int cmd_analyze(const Common& c, const std::string& point_text, const std::string& echo, std::ostream& out) {
  const Loaded m = load(c.metric);
  const Point p = parse_point(point_text, m.cm->dimension());
  Json report = header(&m.spec, echo, c.seed);
  report["point"] = point_record(*m.cm, p, c.tol, c.seed, 0);

  const MetricJet jet = metric_jet(*m.cm, p);
  const CurvaturePack pack = curvature_pack(jet);
  const int n = jet.dim();
  Json curv;
  curv["scalar"] = pack.scalar;
  const Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ric(pack.ricci, jet.g, Eigen::EigenvaluesOnly);
  curv["ricci_eigenvalues"] = vec_json(ric.eigenvalues());
  curv["schouten_eigenvalues"] = vec_json(schouten_spectrum(jet, pack).values);
  curv["weyl_norm"] = norm_g(jet, pack.weyl);
  curv["cotton_norm"] = norm_g(jet, pack.cotton);
  Json g = Json::array();
  for (int k = 1; k < n; ++k) g.push_back(weitzenboeck_gm(jet, pack, k));
  curv["G"] = g;
  report["curvature"] = curv;

  Json integ(nullptr);
  if (n == 3) {
    const QCReport r = classify_point(jet, pack, c.tol);
    if (r.point_class == PointClass::QC && r.schouten_gap > 10.0 * c.tol.iso) {
      integ = integrability_check(*m.cm, p, c.tol);
    }
  }
  report["integrability_residual"] = integ;
  emit(report, c.json_path, out);
  return kExitOk;
}

int cmd_scan(const Common& c, const std::string& grid_text, double epsilon, const std::string& echo,
             std::ostream& out) {
  const Loaded m = load(c.metric);
  const std::vector<Point> pts = expand_grid(parse_grid(grid_text, m.cm->dimension()));
  const std::vector<Json> recs = parallel_map(pts.size(), c.threads, [&](std::size_t i) {
    return point_record(*m.cm, pts[i], c.tol, c.seed, i);
  });

  std::size_t iso = 0, veps = 0, qc = 0, nonqc = 0;
  double minH = std::numeric_limits<double>::infinity(), maxH = -minH, minN = minH, maxN = -minH;
  double minL = minH, maxL = -minH;
  for (const Json& r : recs) {
    const std::string cls = r["class"];
    const double H = r["H"], N = r["N"];
    if (cls == "Isotropic") {
      ++iso;
    } else if (cls == "NonQC") {
      ++nonqc;
    } else if (std::abs(H - N) < epsilon) {
      ++veps;
    } else {
      ++qc;
    }
    minH = std::min(minH, H), maxH = std::max(maxH, H);
    minN = std::min(minN, N), maxN = std::max(maxN, N);
    if (!r["lambda"].is_null()) {
      const double l = r["lambda"];
      minL = std::min(minL, l), maxL = std::max(maxL, l);
    }
  }
  Json report = header(&m.spec, echo, c.seed);
  report["epsilon"] = epsilon;
  report["points"] = recs;
  Json s;
  s["count"] = recs.size();
  s["isotropic"] = iso;
  s["near_isotropic"] = veps;
  s["qc"] = qc;
  s["non_qc"] = nonqc;
  s["min_H"] = minH;
  s["max_H"] = maxH;
  s["min_N"] = minN;
  s["max_N"] = maxN;
  s["min_lambda"] = minL <= maxL ? Json(minL) : Json(nullptr);
  s["max_lambda"] = minL <= maxL ? Json(maxL) : Json(nullptr);
  report["summary"] = s;
  emit(report, c.json_path, out);
  return kExitOk;
}

struct LeafOptions {
  std::string point;
  int steps = 200;
  double step = 0.01;
  std::string csv;
  bool holonomy = false;
  double loop_scale = 1e-2;
  std::optional<std::uint64_t> direction;
};

Json trace_summary(const LeafTrace& t) {
  Json s;
  s["points"] = t.size();
  s["step"] = t.step;
  s["direction"] = t.direction;
  s["method"] = t.method;
  if (t.size() == 0) return s;
  double umb = 0.0, identity = 0.0;
  for (double u : t.umbilicity_residuals) umb = std::max(umb, u);
  for (std::size_t i = 0; i < t.size(); ++i) {
    identity = std::max(identity, std::abs(t.lambda_values[i] - t.H_values[i] - t.alpha_values[i] * t.alpha_values[i]));
  }
  s["start"] = t.points.front();
  s["end"] = t.points.back();
  s["H"] = t.H_values.front();
  s["lambda"] = t.lambda_values.front();
  s["H_drift"] = t.H_drift();
  s["lambda_drift"] = t.lambda_drift();
  s["max_umbilicity_residual"] = t.umbilicity_residuals.empty() ? Json(nullptr) : Json(umb);
  s["lambda_identity_residual"] = identity;
  return s;
}

void write_csv(const std::string& path, const LeafTrace& t) {
  if (path.empty()) return;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("IoError", "cannot write '" + path + "'");
  write_trace_csv(f, t);
}

int cmd_leaf(const Common& c, const LeafOptions& o, const std::string& echo, std::ostream& out, std::ostream& err) {
  const Loaded m = load(c.metric);
  const Point p0 = parse_point(o.point, m.cm->dimension());
  Json report = header(&m.spec, echo, c.seed);
  LeafTrace trace;
  int code = kExitOk;
  try {
    trace = integrate_leaf(*m.cm, p0, o.steps, o.step, o.direction.value_or(c.seed), c.tol);
    fill_umbilicity(*m.cm, trace, c.tol);
    report["status"] = "complete";
  } catch (const LeftQCRegion& e) {
    trace = e.partial();
    report["status"] = "aborted";
    report["reason"] = e.what();
    err << e.what() << '\n';
    code = kExitTrace;
  }
  report["trace"] = trace_summary(trace);
  if (o.holonomy && code == kExitOk) report["holonomy_defect"] = holonomy_defect(*m.cm, p0, o.loop_scale, c.tol);
  write_csv(o.csv, trace);
  emit(report, c.json_path, out);
  return code;
}

struct ImmerseOptions {
  std::string grid;
  std::string kappa_grid;
  std::optional<double> kappa;
};

int cmd_immerse(const Common& c, const ImmerseOptions& o, const std::string& echo, std::ostream& out) {
  const Loaded m = load(c.metric);
  const int n = m.cm->dimension();
  const std::vector<Point> pts = expand_grid(parse_grid(o.grid, n));
  Json kinfo;
  double kappa = 0.0;
  if (o.kappa) {
    if (*o.kappa < 0.0) throw InputError("NegativeKappa", "--kappa must be non-negative");
    kappa = *o.kappa;
    kinfo["source"] = "given";
  } else {
    const std::vector<Point> kpts = o.kappa_grid.empty() ? pts : expand_grid(parse_grid(o.kappa_grid, n));
    const std::vector<double> Hs = parallel_map(kpts.size(), c.threads, [&](std::size_t i) {
      return hn_fields(*m.cm, kpts[i], c.tol).H;
    });
    const auto it = std::min_element(Hs.begin(), Hs.end());
    const double minH = *it;
    kappa = minH <= 0.0 ? 1.0 - minH : 0.0;
    kinfo["source"] = o.kappa_grid.empty() ? "grid" : "kappa-grid";
    kinfo["min_H"] = minH;
    kinfo["argmin"] = kpts[static_cast<std::size_t>(it - Hs.begin())];
    kinfo["samples"] = kpts.size();
  }
  kinfo["kappa"] = kappa;

  const std::vector<Json> recs = parallel_map(pts.size(), c.threads, [&](std::size_t i) {
    const Point& p = pts[i];
    const MetricJet jet = metric_jet(*m.cm, p);
    const CurvaturePack pack = curvature_pack(jet);
    const QCReport r = classify_point(jet, pack, c.tol);
    Json j;
    j["coords"] = p;
    j["class"] = std::string(to_string(r.point_class));
    j["H"] = r.H;
    j["N"] = r.N;
    if (r.point_class == PointClass::NonQC) {
      j["gauss_residual"] = nullptr;
      j["codazzi_residual"] = nullptr;
      return j;
    }
    const Matrix h = second_fundamental_form(jet, r, kappa);
    j["gauss_residual"] = gauss_residual(jet, pack, h, kappa);
    try {
      j["codazzi_residual"] = codazzi_residual(*m.cm, p, kappa, c.tol);
    } catch (const DomainError& e) {
      if (e.kind() != "StencilClassificationChange") throw;
      j["codazzi_residual"] = nullptr;
      j["codazzi_note"] = "StencilClassificationChange";
    }
    const Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(h, jet.g, Eigen::EigenvaluesOnly);
    j["principal_curvatures"] = vec_json(es.eigenvalues());
    if (n == 3) {
      const double mu = r.H + kappa, nu = r.N + kappa;
      j["mu"] = mu;
      j["nu"] = nu;
      j["gauss_branch"] = std::string(to_string(solve_gauss_n3(mu, nu).branch));
    }
    return j;
  });

  double max_gauss = 0.0, max_codazzi = 0.0;
  std::size_t skipped = 0, stencil = 0, unique = 0, family = 0;
  for (const Json& r : recs) {
    if (r["gauss_residual"].is_null()) {
      ++skipped;
      continue;
    }
    max_gauss = std::max(max_gauss, r["gauss_residual"].get<double>());
    if (r["codazzi_residual"].is_null()) {
      ++stencil;
    } else {
      max_codazzi = std::max(max_codazzi, r["codazzi_residual"].get<double>());
    }
    if (r.contains("gauss_branch")) (r["gauss_branch"] == "Unique" ? unique : family) += 1;
  }
  Json report = header(&m.spec, echo, c.seed);
  report["kappa"] = kinfo;
  report["points"] = recs;
  Json s;
  s["count"] = recs.size();
  s["kappa"] = kappa;
  s["max_gauss_residual"] = max_gauss;
  s["max_codazzi_residual"] = max_codazzi;
  s["non_qc_skipped"] = skipped;
  s["stencil_changes"] = stencil;
  if (n == 3) {
    s["gauss_branch_unique"] = unique;
    s["gauss_branch_family"] = family;
  }
  report["summary"] = s;
  emit(report, c.json_path, out);
  return kExitOk;
}

int cmd_catalog_list(const std::string& echo, std::ostream& out) {
  Json report = header(nullptr, echo, 0);
  Json list = Json::array();
  for (const CatalogEntry& e : catalog_entries()) {
    Json j;
    j["name"] = e.name;
    j["summary"] = e.summary;
    Json d = Json::object();
    for (const auto& [k, v] : e.defaults) d[k] = v;
    j["defaults"] = d;
    Json ann = Json::array();
    for (const Annotation& a : e.annotations) {
      ann.push_back({{"quantity", a.quantity}, {"value", a.value}, {"source", std::string(to_string(a.source))}});
    }
    j["annotations"] = ann;
    list.push_back(j);
  }
  report["metrics"] = list;
  emit(report, "", out);
  return kExitOk;
}

int cmd_catalog_emit(const std::string& name, const std::vector<std::string>& params, const std::string& path,
                     std::ostream& out) {
  CatalogParams p;
  for (const std::string& kv : params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw InputError("BadParams", "expected key=value, got '" + kv + "'");
    p[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  const std::string toml = to_toml(builtin(name, p));
  if (path.empty()) {
    out << toml;
  } else {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("IoError", "cannot write '" + path + "'");
    f << toml;
  }
  return kExitOk;
}

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Input: return kExitInput;
    case ErrorCategory::Domain: return kExitDomain;
    case ErrorCategory::Trace: return kExitTrace;
    case ErrorCategory::Immersion: return kExitImmersion;
  }
  return 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quasi-constant curvature analysis of chart-defined Riemannian metrics", "qcgeom"};
  app.require_subcommand(1);
  app.set_version_flag("--version", QCGEOM_VERSION);

  Common common;
  std::string point, grid;
  double epsilon = 1e-3;
  LeafOptions leaf;
  ImmerseOptions imm;
  double kappa_value = 0.0;
  std::uint64_t direction = 0;

  CLI::App* analyze = app.add_subcommand("analyze", "classify one point and report curvature data");
  add_common(analyze, common);
  analyze->add_option("-p,--point", point, "comma-separated coordinates")->required();

  CLI::App* scan = app.add_subcommand("scan", "classify every point of a grid");
  add_common(scan, common);
  scan->add_option("--grid", grid, "lo:hi:count per axis, comma-separated")->required();
  scan->add_option("--epsilon", epsilon, "|H - N| threshold of the near-isotropic band")->check(CLI::PositiveNumber);

  CLI::App* leafc = app.add_subcommand("leaf", "trace a curvature leaf");
  add_common(leafc, common);
  leafc->add_option("-p,--point", leaf.point, "start point")->required();
  leafc->add_option("--steps", leaf.steps, "RK4 steps")->check(CLI::NonNegativeNumber);
  leafc->add_option("--step", leaf.step, "step length")->check(CLI::PositiveNumber);
  leafc->add_option("--csv", leaf.csv, "write the trace as CSV");
  leafc->add_flag("--holonomy", leaf.holonomy, "also measure the holonomy defect at the start point");
  leafc->add_option("--loop-scale", leaf.loop_scale, "side of the holonomy loop")->check(CLI::PositiveNumber);
  CLI::Option* dir_opt = leafc->add_option("--direction-seed", direction, "coordinate direction selector");

  CLI::App* immerse = app.add_subcommand("immerse", "second fundamental form and Gauss/Codazzi residuals");
  add_common(immerse, common);
  immerse->add_option("--grid", imm.grid, "evaluation grid")->required();
  immerse->add_option("--kappa-grid", imm.kappa_grid, "grid used to choose kappa (default: --grid)");
  CLI::Option* kappa_opt = immerse->add_option("--kappa", kappa_value, "use this kappa instead of choosing one");

  CLI::App* catalog = app.add_subcommand("catalog", "built-in metrics");
  catalog->require_subcommand(1);
  CLI::App* list = catalog->add_subcommand("list", "list built-in metrics");
  CLI::App* emitc = catalog->add_subcommand("emit", "write a built-in metric as TOML");
  std::string name, out_path;
  std::vector<std::string> params;
  emitc->add_option("name", name, "catalog name")->required();
  emitc->add_option("--param", params, "key=value parameter (repeatable)");
  emitc->add_option("-o,--output", out_path, "output file (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInput;
  }

  const std::string echo = command_echo(args);
  try {
    if (analyze->parsed()) return cmd_analyze(common, point, echo, out);
    if (scan->parsed()) return cmd_scan(common, grid, epsilon, echo, out);
    if (leafc->parsed()) {
      if (dir_opt->count() > 0) leaf.direction = direction;
      return cmd_leaf(common, leaf, echo, out, err);
    }
    if (immerse->parsed()) {
      if (kappa_opt->count() > 0) imm.kappa = kappa_value;
      return cmd_immerse(common, imm, echo, out);
    }
    if (list->parsed()) return cmd_catalog_list(echo, out);
    if (emitc->parsed()) return cmd_catalog_emit(name, params, out_path, out);
  } catch (const CompileError& e) {
    err << e.kind() << ":\n";
    for (const std::string& p : e.problems()) err << "  " << p << '\n';
    return kExitInput;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return exit_code(e.category());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitInput;
}

}  // namespace qcgeom::cli
