#include "qcgeom/catalog.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "qcgeom/errors.hpp"

namespace qcgeom {

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void bad_params(const std::string& msg) { throw InputError("BadParams", msg); }

double param_double(const CatalogParams& p, std::string_view key, double fallback) {
  const auto it = p.find(key);
  if (it == p.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size() || !std::isfinite(v)) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    bad_params(std::string(key) + " must be a finite number, got '" + it->second + "'");
  }
}

int param_dim(const CatalogParams& p, int fallback, int lo = kMinDim) {
  const double v = param_double(p, "n", fallback);
  if (v != std::floor(v) || v < lo || v > kMaxDim) {
    bad_params("n must be an integer in [" + std::to_string(lo) + ", " + std::to_string(kMaxDim) + "]");
  }
  return static_cast<int>(v);
}

void check_keys(const CatalogParams& p, const CatalogParams& allowed, std::string_view name) {
  for (const auto& [k, v] : p) {
    if (!allowed.contains(k)) bad_params("unknown parameter '" + k + "' for " + std::string(name));
  }
}

std::vector<std::string> angle_names(int count) {
  std::vector<std::string> out;
  for (int a = 1; a <= count; ++a) out.push_back("t" + std::to_string(a));
  return out;
}

// Polar-chart angle ranges: the last angle runs once around, the others avoid the poles.
std::vector<Interval> angle_domain(int count) {
  std::vector<Interval> out(count, Interval{0.2, kPi - 0.2});
  if (count > 0) out.back() = Interval{0.0, 2.0 * kPi};
  return out;
}

// prod_{b < a} sin^2(t_b) over the named angles, as an expression string
std::string sin_product(const std::vector<std::string>& angles, int a) {
  std::string s;
  for (int b = 0; b < a; ++b) s += "*sin(" + angles[b] + ")^2";
  return s;
}

MetricSpec euclidean(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
  MetricSpec s(n, names, std::vector<Interval>(n, Interval{-1.0, 1.0}));
  for (int i = 0; i < n; ++i) s.set_component(i, i, "1");
  return s;
}

MetricSpec sphere(int n, double k) {
  const std::vector<std::string> names = angle_names(n);
  MetricSpec s(n, names, angle_domain(n));
  for (int a = 0; a < n; ++a) s.set_component(a, a, num(1.0 / k) + sin_product(names, a));
  return s;
}

MetricSpec hyperbolic(int n, double k) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
  std::vector<Interval> dom(n, Interval{-1.0, 1.0});
  dom.back() = Interval{0.5, 2.0};
  MetricSpec s(n, names, dom);
  const std::string comp = num(1.0 / std::abs(k)) + "/" + names.back() + "^2";
  for (int i = 0; i < n; ++i) s.set_component(i, i, comp);
  return s;
}

MetricSpec heisenberg() {
  MetricSpec s(3, {"x", "y", "z"}, std::vector<Interval>(3, Interval{-1.0, 1.0}));
  s.set_component(0, 0, "1");
  s.set_component(1, 1, "1 + x^2");
  s.set_component(1, 2, "-x");
  s.set_component(2, 2, "1");
  return s;
}

}  // namespace

std::string_view to_string(AnnotationSource s) {
  switch (s) {
    case AnnotationSource::Standard: return "standard";
    case AnnotationSource::ClosedForm: return "closed-form";
    case AnnotationSource::Computed: return "computed";
    case AnnotationSource::Reported: return "reported";
  }
  return "?";
}

MetricSpec warped_metric(int n, std::string_view f, Interval r_range) {
  if (n < kMinDim || n > kMaxDim) bad_params("n out of range");
  if (!(r_range.lo < r_range.hi)) bad_params("empty r range");
  std::vector<std::string> names{"r"};
  const std::vector<std::string> angles = angle_names(n - 1);
  names.insert(names.end(), angles.begin(), angles.end());
  std::vector<Interval> dom{r_range};
  const std::vector<Interval> adom = angle_domain(n - 1);
  dom.insert(dom.end(), adom.begin(), adom.end());
  MetricSpec s(n, names, dom);
  // validate f on its own so errors point into the warp text
  const ExprNode warp = parse_expr(f, n, names);
  if (max_variable(warp) > 0) bad_params("warp must depend on r (x0) only");
  const std::string fs = to_string(warp);
  s.set_component(0, 0, "1");
  for (int a = 1; a < n; ++a) s.set_component(a, a, fs + "^2" + sin_product(angles, a - 1));
  return s;
}

const std::vector<CatalogEntry>& catalog_entries() {
  using S = AnnotationSource;
  static const std::vector<CatalogEntry> entries{
      {"euclidean", "flat R^n, identity chart on [-1,1]^n", {{"n", "3"}},
       {{"class", "Isotropic", S::Standard}, {"H = N", "0", S::Standard}}},
      {"sphere", "round sphere of curvature k in the polar chart", {{"n", "3"}, {"k", "1"}},
       {{"class", "Isotropic", S::Standard}, {"H = N", "k", S::Standard}}},
      {"hyperbolic", "hyperbolic space of curvature k < 0 in the half-space chart", {{"n", "3"}, {"k", "-1"}},
       {{"class", "Isotropic", S::Standard}, {"H = N", "k", S::Standard}}},
      {"warped", "dr^2 + f(r)^2 g_S in the polar chart",
       {{"n", "3"}, {"f", "2 + sin(r)"}, {"r_lo", "0.1"}, {"r_hi", "6"}},
       {{"class", "QC where H != N", S::ClosedForm},
        {"H", "(1 - f'^2) / f^2", S::ClosedForm},
        {"N", "-f'' / f", S::ClosedForm},
        {"xi", "d/dr", S::ClosedForm},
        {"alpha", "f' / f", S::ClosedForm},
        {"lambda", "1 / f^2", S::ClosedForm},
        {"isotropic set for f = 2 + sin r", "r = j pi", S::ClosedForm}}},
      {"heisenberg", "left-invariant metric dx^2 + dy^2 + (dz - x dy)^2", {},
       {{"class", "QC", S::Computed},
        {"H", "-0.75", S::Computed},
        {"N", "0.25", S::Computed},
        {"xi", "d/dz", S::Computed},
        {"alpha", "0", S::Computed},
        {"|d eta(X, Y)|", "1", S::ClosedForm},
        {"H, N (reported)", "-1/4, 3/4; disagrees with the computed -3/4, 1/4", S::Reported},
        {"conformally flat", "no", S::Standard}}},
      {"hopf_cylinder", "product S^{n-1}(rho) x interval", {{"n", "3"}, {"rho", "1"}},
       {{"class", "QC", S::ClosedForm}, {"H", "1 / rho^2", S::ClosedForm}, {"N", "0", S::ClosedForm}}},
      {"graph", "warped chain of caps, tubes and space-form pieces",
       {{"n", "3"}, {"segments", "cap:1,tube:1:2,cap:1"}, {"delta", "0.2"}},
       {{"cap interiors", "Isotropic, H = N = k", S::ClosedForm},
        {"tube interiors", "QC, H = 1 / rho^2, N = 0", S::ClosedForm}}},
  };
  return entries;
}

const CatalogEntry& catalog_entry(std::string_view name) {
  for (const CatalogEntry& e : catalog_entries()) {
    if (e.name == name) return e;
  }
  throw InputError("UnknownCatalogName", "no catalog metric named '" + std::string(name) + "'");
}

MetricSpec builtin(std::string_view name, const CatalogParams& params) {
  const CatalogEntry& entry = catalog_entry(name);
  check_keys(params, entry.defaults, name);
  if (name == "euclidean") return euclidean(param_dim(params, 3));
  if (name == "sphere") {
    const double k = param_double(params, "k", 1.0);
    if (!(k > 0.0)) bad_params("sphere needs k > 0");
    return sphere(param_dim(params, 3), k);
  }
  if (name == "hyperbolic") {
    const double k = param_double(params, "k", -1.0);
    if (!(k < 0.0)) bad_params("hyperbolic needs k < 0");
    return hyperbolic(param_dim(params, 3), k);
  }
  if (name == "warped") {
    const auto it = params.find("f");
    const std::string f = it == params.end() ? entry.defaults.at("f") : it->second;
    return warped_metric(param_dim(params, 3), f,
                         Interval{param_double(params, "r_lo", 0.1), param_double(params, "r_hi", 6.0)});
  }
  if (name == "heisenberg") return heisenberg();
  if (name == "hopf_cylinder") {
    const double rho = param_double(params, "rho", 1.0);
    if (!(rho > 0.0)) bad_params("hopf_cylinder needs rho > 0");
    MetricSpec s = warped_metric(param_dim(params, 3), num(rho), Interval{-1.0, 1.0});
    return s;
  }
  // graph
  const auto it = params.find("segments");
  const std::string segs = it == params.end() ? entry.defaults.at("segments") : it->second;
  return graph_build(parse_graph_segments(segs, param_dim(params, 3), param_double(params, "delta", 0.2)));
}

double flat_bump(double t, double delta) {
  if (!(delta > 0.0)) throw InputError("BadDelta", "delta must be positive");
  return flatstep_derivatives(t / delta)[0];
}

GraphBuildSpec parse_graph_segments(std::string_view text, int dimension, double delta) {
  GraphBuildSpec spec;
  spec.dimension = dimension;
  spec.delta = delta;
  std::stringstream all{std::string(text)};
  std::string item;
  while (std::getline(all, item, ',')) {
    std::vector<std::string> parts;
    std::stringstream one(item);
    std::string part;
    while (std::getline(one, part, ':')) parts.push_back(part);
    auto number = [&](std::size_t i) {
      if (i >= parts.size()) bad_params("segment '" + item + "' is missing a field");
      return param_double({{"field", parts[i]}}, "field", 0.0);
    };
    Segment s;
    if (parts.empty()) bad_params("empty segment");
    if (parts[0] == "cap") {
      s.kind = Segment::Kind::Cap;
      s.curvature = number(1);
      if (parts.size() > 2) s.length = number(2);
      if (parts.size() > 3) bad_params("segment '" + item + "' has too many fields");
    } else if (parts[0] == "tube" || parts[0] == "form") {
      s.kind = parts[0] == "tube" ? Segment::Kind::Tube : Segment::Kind::Form;
      (s.kind == Segment::Kind::Tube ? s.radius : s.curvature) = number(1);
      s.length = number(2);
      if (parts.size() > 3) bad_params("segment '" + item + "' has too many fields");
    } else {
      bad_params("unknown segment kind '" + parts[0] + "'");
    }
    spec.segments.push_back(s);
  }
  if (spec.segments.empty()) bad_params("no segments");
  return spec;
}

namespace {

// Piece profile on the whole line, as an expression in x0, plus its values.
struct Piece {
  std::string expr;
  double start = 0.0, end = 0.0;
  double f_start = 0.0, f_end = 0.0;
};

// S_k(s): sin(a s)/a, s, or sinh(a s)/a with a = sqrt|k|
std::string space_form_warp(double k, const std::string& s) {
  if (k == 0.0) return "(" + s + ")";
  const double a = std::sqrt(std::abs(k));
  return std::string(k > 0 ? "sin" : "sinh") + "(" + num(a) + "*(" + s + "))/" + num(a);
}
double space_form_value(double k, double s) {
  if (k == 0.0) return s;
  const double a = std::sqrt(std::abs(k));
  return (k > 0 ? std::sin(a * s) : std::sinh(a * s)) / a;
}
double space_form_inverse(double k, double v) {
  if (k == 0.0) return v;
  const double a = std::sqrt(std::abs(k));
  if (k > 0.0) {
    if (v * a > 1.0) throw InputError("JunctionMismatch", "warp " + num(v) + " exceeds the form radius " + num(1 / a));
    return std::asin(v * a) / a;
  }
  return std::asinh(v * a) / a;
}

void check_match(double a, double b, std::size_t junction) {
  if (std::abs(a - b) > 1e-9 * (1.0 + std::abs(a))) {
    throw InputError("JunctionMismatch", "warp values " + num(a) + " and " + num(b) + " differ at junction " +
                                             std::to_string(junction));
  }
}

}  // namespace

GraphLayout graph_layout(const GraphBuildSpec& spec) {
  if (spec.dimension < kMinDim || spec.dimension > kMaxDim) bad_params("n out of range");
  if (!(spec.delta > 0.0)) throw InputError("BadDelta", "delta must be positive");
  const auto& segs = spec.segments;
  if (segs.empty()) bad_params("no segments");
  const std::size_t m = segs.size();

  std::vector<Piece> pieces(m);
  double t = 0.0;
  double f_prev = 0.0;  // warp at the current junction
  for (std::size_t i = 0; i < m; ++i) {
    const Segment& s = segs[i];
    Piece& p = pieces[i];
    p.start = t;
    const bool first = i == 0, last = i + 1 == m;
    switch (s.kind) {
      case Segment::Kind::Cap: {
        if (!(s.curvature > 0.0)) bad_params("cap needs curvature > 0");
        const double a = std::sqrt(s.curvature);
        double len = s.length;
        if (first && last) {
          if (len != 0.0 && std::abs(len - kPi / a) > 1e-12) bad_params("a lone cap spans [0, pi / sqrt(k)]");
          len = kPi / a;
          p.expr = space_form_warp(s.curvature, "x0");
        } else if (first) {
          if (len == 0.0) {
            const Segment& next = segs[1];
            len = next.kind == Segment::Kind::Tube ? space_form_inverse(s.curvature, next.radius) : 0.5 * kPi / a;
          }
          p.expr = space_form_warp(s.curvature, "x0");
        } else if (last) {
          if (len == 0.0) len = space_form_inverse(s.curvature, f_prev);
          p.expr = space_form_warp(s.curvature, num(t + len) + " - x0");
        } else {
          throw InputError("JunctionMismatch", "a cap can only open or close the chain");
        }
        if (!(len > 0.0) || len > kPi / a + 1e-12) bad_params("cap length out of range");
        p.end = t + len;
        p.f_start = first ? 0.0 : space_form_value(s.curvature, len);
        p.f_end = last ? 0.0 : space_form_value(s.curvature, len);
        break;
      }
      case Segment::Kind::Tube:
        if (!(s.radius > 0.0)) throw InputError("NonpositiveWarp", "tube radius must be positive");
        if (!(s.length > 0.0)) bad_params("tube needs a positive length");
        p.expr = num(s.radius);
        p.end = t + s.length;
        p.f_start = p.f_end = s.radius;
        break;
      case Segment::Kind::Form: {
        if (!(s.length > 0.0)) bad_params("form piece needs a positive length");
        const double s0 = first ? 0.0 : space_form_inverse(s.curvature, f_prev);
        p.expr = space_form_warp(s.curvature, "x0 - " + num(t - s0));
        p.end = t + s.length;
        p.f_start = space_form_value(s.curvature, s0);
        p.f_end = space_form_value(s.curvature, s0 + s.length);
        break;
      }
    }
    if (i > 0) check_match(f_prev, p.f_start, i);
    f_prev = p.f_end;
    t = p.end;
  }

  GraphLayout out;
  out.length = t;
  std::string warp = pieces[0].expr;
  for (std::size_t i = 1; i < m; ++i) {
    const double j = pieces[i].start;
    if (spec.delta >= pieces[i].end - j) bad_params("delta must be shorter than every segment after a junction");
    out.junctions.push_back(j);
    warp += " + flatstep((x0 - " + num(j) + ")/" + num(spec.delta) + ")*((" + pieces[i].expr + ") - (" +
            pieces[i - 1].expr + "))";
  }
  out.warp = warp;

  // positivity strictly inside (0, L)
  const ExprNode ast = parse_expr(warp, kMinDim);
  const ExprProgram prog(ast);
  constexpr int kSamples = 4000;
  for (int i = 0; i < kSamples; ++i) {
    const double x[2] = {t * (i + 0.5) / kSamples, 0.0};
    const double f = prog.value(x);
    if (!(f > 0.0)) throw InputError("NonpositiveWarp", "warp " + num(f) + " at t = " + num(x[0]));
  }
  return out;
}

MetricSpec graph_build(const GraphBuildSpec& spec) {
  const GraphLayout layout = graph_layout(spec);
  const double eps = std::min(0.05, 0.01 * layout.length);
  return warped_metric(spec.dimension, layout.warp, Interval{eps, layout.length - eps});
}

}  // namespace qcgeom
