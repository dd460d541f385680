// karamata-kit: command-line front end.
//
//   karamata-kit apply-l EXPR [--x X | --grid-start S --ratio R --count N]
//   karamata-kit invert-l EXPR
//   karamata-kit classify EXPR [--lambdas ...] [--integer-mode] [--profile] [--class C]
//   karamata-kit uct <scan|karamata|guct|hi|condition|closure|expand-interval|asym> ...
//
// Settings resolve as flags > --config file (same key names) > defaults.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "karamata/asymptotics.hpp"
#include "karamata/operator.hpp"
#include "karamata/report.hpp"
#include "karamata/uniformity.hpp"

using namespace karamata;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

constexpr double kNoParam = std::numeric_limits<double>::quiet_NaN();

// A flag whose value may also come from the config file.
template <class T>
struct Setting {
  std::string key;
  T fallback{};
  T value{};
  CLI::Option* opt = nullptr;

  T resolve(const Json& file) const {
    if (opt != nullptr && opt->count() > 0) return value;
    if (file.contains(key)) {
      try {
        return file.at(key).get<T>();
      } catch (const Json::exception&) {
        throw PreconditionError("config key '" + key + "' has the wrong type");
      }
    }
    return fallback;
  }
};

template <class T>
void add_setting(CLI::App* app, Setting<T>& s, const std::string& help) {
  if constexpr (std::is_same_v<T, bool>)
    s.opt = app->add_flag("--" + s.key, s.value, help);
  else
    s.opt = app->add_option("--" + s.key, s.value, help);
}

double constant_of(const std::string& text) { return eval(parse(text), Env{}); }

struct GridFlags {
  Setting<double> start{"grid-start"}, ratio{"ratio"};
  Setting<std::size_t> count{"count"};
  Setting<bool> integer_mode{"integer-mode", false};

  GridFlags(double s, double r, std::size_t n) {
    start.fallback = s;
    ratio.fallback = r;
    count.fallback = n;
  }
  void add(CLI::App* app) {
    add_setting(app, start, "first grid point (> 1)");
    add_setting(app, ratio, "geometric ratio (> 1)");
    add_setting(app, count, "number of grid points (>= 8)");
    add_setting(app, integer_mode, "sample consecutive integers from ceil(grid-start)");
  }
  GeometricGrid resolve(const Json& file, Json& config) const {
    GeometricGrid g{start.resolve(file), ratio.resolve(file), count.resolve(file),
                    integer_mode.resolve(file)};
    if (g.count < 8) throw PreconditionError("count must be >= 8");
    g.validate();
    config["grid-start"] = g.start;
    config["ratio"] = g.ratio;
    config["count"] = g.count;
    config["integer-mode"] = g.integer_mode;
    return g;
  }
};

struct QuadFlags {
  Setting<double> abs_tol{"abs-tol", 1e-10}, rel_tol{"rel-tol", 1e-10};
  Setting<std::size_t> budget{"budget", QuadTolerance{}.budget};

  void add(CLI::App* app) {
    add_setting(app, abs_tol, "quadrature absolute tolerance");
    add_setting(app, rel_tol, "quadrature relative tolerance");
    add_setting(app, budget, "integrand evaluations per quadrature call");
  }
  QuadTolerance resolve(const Json& file, Json& config) const {
    QuadTolerance t{abs_tol.resolve(file), rel_tol.resolve(file), budget.resolve(file)};
    t.validate();
    config["abs-tol"] = t.abs_tol;
    config["rel-tol"] = t.rel_tol;
    config["budget"] = t.budget;
    return t;
  }
};

struct LimitFlags {
  Setting<double> tol{"tol", 1e-3}, limit_tol{"limit-tol", 0.05}, spread_tol{"spread-tol", 0.05};
  Setting<bool> richardson{"richardson", false};

  void add(CLI::App* app, bool spread) {
    add_setting(app, tol, "final step tolerance for a converges verdict");
    add_setting(app, limit_tol, "tolerance when matching a limit value");
    add_setting(app, richardson, "also extrapolate limits in 1/ln x");
    if (spread) add_setting(app, spread_tol, "allowed disagreement of index estimates across lambda");
  }
  LimitSettings resolve(const Json& file, Json& config) const {
    LimitSettings s;
    s.tol = tol.resolve(file);
    s.limit_tol = limit_tol.resolve(file);
    s.richardson = richardson.resolve(file);
    s.validate();
    config["tol"] = s.tol;
    config["limit-tol"] = s.limit_tol;
    config["richardson"] = s.richardson;
    return s;
  }
};

std::vector<double> resolve_lambdas(const Setting<std::vector<std::string>>& s, const Json& file,
                                    std::vector<double> fallback, Json& config) {
  std::vector<double> out;
  if (s.opt->count() > 0) {
    for (const auto& t : s.value) out.push_back(constant_of(t));
  } else if (file.contains(s.key)) {
    if (!file.at(s.key).is_array()) throw PreconditionError("config key 'lambdas' must be an array");
    for (const auto& v : file.at(s.key))
      out.push_back(v.is_string() ? constant_of(v.get<std::string>()) : v.get<double>());
  } else {
    out = std::move(fallback);
  }
  config["lambdas"] = out;
  return out;
}

std::size_t worker_count() {
  std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const char* env = std::getenv("KARAMATA_KIT_THREADS");
  if (env == nullptr || *env == '\0') return hw;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) throw PreconditionError("KARAMATA_KIT_THREADS must be a positive integer");
  return static_cast<std::size_t>(v);
}

Json scan_verdicts(const ScanReport& r) {
  Json v;
  v["uniformity"] = to_string(r.verdict);
  if (r.witness) {
    v["witness"] = *r.witness;
    v["floor"] = r.floor;
  }
  return v;
}

void print_scan(const ScanReport& r) {
  std::printf("%-14s %-14s %s\n", "x", "sup|R|", "argmax");
  for (std::size_t i = 0; i < r.xs.size(); ++i)
    std::printf("%-14s %-14s %s\n", fmt(r.xs[i]).c_str(), fmt(r.suprema[i]).c_str(),
                fmt(r.argmax[i]).c_str());
  std::printf("verdict: %s (%s)\n", to_string(r.verdict), r.reason.c_str());
  if (r.witness) std::printf("witness: %s, floor %s\n", fmt(*r.witness).c_str(), fmt(r.floor).c_str());
}

const char* variation_text(VariationKind k) {
  switch (k) {
    case VariationKind::yes: return "yes";
    case VariationKind::no: return "no";
    case VariationKind::inconclusive: break;
  }
  return "inconclusive";
}

Json limit_table(std::span<const LimitVerdict> vs) {
  Json a = Json::array();
  for (const auto& v : vs) a.push_back(to_json(v));
  return a;
}

constexpr const char* kEvidenceNote =
    "verdicts are numerical evidence at the stated grid resolution; thresholds are engineering "
    "choices";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical toolkit for slowly and regularly varying functions"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  Setting<std::string> format_flag{"format", "json"};
  app.add_option("--config", config_path, "JSON file with default settings");
  Setting<std::string> out_flag{"out", ""};
  add_setting(&app, out_flag, "report path (a stem when --format both)");
  add_setting(&app, format_flag, "json, csv or both");

  // apply-l
  auto* apply = app.add_subcommand("apply-l", "evaluate the averaging operator L(h)");
  std::string apply_expr;
  apply->add_option("expr", apply_expr, "h as an expression in x")->required();
  Setting<double> apply_x{"x"};
  add_setting(apply, apply_x, "single evaluation point (>= 1)");
  GridFlags apply_grid(10.0, 4.0, 10);
  apply_grid.add(apply);
  QuadFlags apply_quad;
  apply_quad.add(apply);
  LimitFlags apply_limit;
  apply_limit.add(apply, false);

  // invert-l
  auto* invert = app.add_subcommand("invert-l", "closed-form inverse g = f + x f' ln x");
  std::string invert_expr;
  invert->add_option("expr", invert_expr, "f as an expression in x")->required();

  // classify
  auto* classify = app.add_subcommand("classify", "regular/slow variation evidence");
  std::string classify_expr;
  classify->add_option("expr", classify_expr, "F as an expression in x")->required();
  GridFlags classify_grid(10.0, 10.0, 60);
  classify_grid.add(classify);
  Setting<std::vector<std::string>> classify_lambdas{"lambdas"};
  classify_lambdas.opt = classify->add_option("--lambdas", classify_lambdas.value,
                                              "comma-separated lambda values (pi allowed)")
                             ->delimiter(',');
  Setting<bool> classify_profile{"profile", false};
  add_setting(classify, classify_profile, "also report ln F(x)/ln x");
  Setting<std::string> classify_class{"class", ""};
  add_setting(classify, classify_class, "class preservation check: Z0, R0, R:<alpha>, B:<lo>:<hi>");
  LimitFlags classify_limit_flags;
  classify_limit_flags.add(classify, true);
  QuadFlags classify_quad;
  classify_quad.add(classify);

  // uct family
  auto* uct = app.add_subcommand("uct", "uniformity scans and residual diagnostics");
  uct->require_subcommand(1);
  auto add_interval = [](CLI::App* c, Setting<double>& a, Setting<double>& b,
                         Setting<std::size_t>& n) {
    add_setting(c, a, "parameter interval start");
    add_setting(c, b, "parameter interval end");
    add_setting(c, n, "parameter samples (>= 9)");
  };

  auto* scan = uct->add_subcommand("scan", "sup over u of |G(x, u)|");
  Setting<std::string> scan_g{"g"};
  add_setting(scan, scan_g, "G as an expression in x and u");
  scan_g.opt->required();
  Setting<double> scan_a{"a", 0.0}, scan_b{"b", 1.0};
  Setting<std::size_t> scan_n{"param-count", 33};
  add_interval(scan, scan_a, scan_b, scan_n);
  GridFlags scan_grid(10.0, 1.5, 50);
  scan_grid.add(scan);
  LimitFlags scan_limit;
  scan_limit.add(scan, false);

  auto* kar = uct->add_subcommand("karamata", "sup over lambda of |F(lambda x)/F(x) - 1|");
  Setting<std::string> kar_f{"f"};
  add_setting(kar, kar_f, "F as an expression in x");
  kar_f.opt->required();
  Setting<double> kar_a{"a", 1.0}, kar_b{"b", 2.0};
  Setting<std::size_t> kar_n{"param-count", 33};
  add_interval(kar, kar_a, kar_b, kar_n);
  GridFlags kar_grid(10.0, 1.5, 50);
  kar_grid.add(kar);
  LimitFlags kar_limit;
  kar_limit.add(kar, false);

  auto* guct = uct->add_subcommand("guct", "hypotheses and conclusion for G = H m");
  guct->set_help_flag("--help", "print this help and exit");  // --h names H
  Setting<std::string> guct_h{"h"}, guct_m{"m", "1"};
  add_setting(guct, guct_h, "H as an expression in x and u");
  guct_h.opt->required();
  add_setting(guct, guct_m, "m as an expression in x");
  Setting<double> guct_a{"a", 0.0}, guct_b{"b", 1.0};
  Setting<std::size_t> guct_n{"param-count", 33}, guct_samples{"hi-samples", 1000};
  add_interval(guct, guct_a, guct_b, guct_n);
  add_setting(guct, guct_samples, "low-discrepancy samples for the inequality check");
  GridFlags guct_grid(10.0, 1.5, 50);
  guct_grid.add(guct);
  LimitFlags guct_limit;
  guct_limit.add(guct, false);

  auto* hi = uct->add_subcommand("hi", "check H(x,u) <= H(x+u,v) + H(x,u+v)");
  hi->set_help_flag("--help", "print this help and exit");  // --h names H
  Setting<std::string> hi_h{"h"};
  add_setting(hi, hi_h, "H as an expression in x and u");
  hi_h.opt->required();
  Setting<std::size_t> hi_samples{"samples", 1000};
  add_setting(hi, hi_samples, "number of samples");
  Setting<double> hi_xlo{"x-lo", 1.0}, hi_xhi{"x-hi", 1e6}, hi_ulo{"u-lo", 0.0}, hi_uhi{"u-hi", 1.0},
      hi_vlo{"v-lo", 0.0}, hi_vhi{"v-hi", 1.0};
  for (auto* s : {&hi_xlo, &hi_xhi, &hi_ulo, &hi_uhi, &hi_vlo, &hi_vhi}) add_setting(hi, *s, "region bound");

  auto* cond = uct->add_subcommand("condition", "sup over lambda of |(xi(lambda x) - xi(x)) ln x|");
  Setting<std::string> cond_xi{"xi"};
  add_setting(cond, cond_xi, "xi as an expression in x");
  cond_xi.opt->required();
  Setting<double> cond_a{"a", 0.5}, cond_b{"b", 2.0};
  Setting<std::size_t> cond_n{"param-count", 33};
  add_interval(cond, cond_a, cond_b, cond_n);
  Setting<std::vector<std::string>> cond_lambdas{"lambdas"};
  cond_lambdas.opt = cond->add_option("--lambdas", cond_lambdas.value,
                                      "explicit lambda list instead of an interval")
                         ->delimiter(',');
  GridFlags cond_grid(10.0, 1.5, 50);
  cond_grid.add(cond);
  LimitFlags cond_limit;
  cond_limit.add(cond, false);

  auto* closure = uct->add_subcommand("closure", "multiplicative decomposition residuals");
  Setting<std::string> closure_f{"f"};
  add_setting(closure, closure_f, "f as an expression in x");
  closure_f.opt->required();
  Setting<double> closure_l{"lambda", 2.0}, closure_mu{"mu", 3.0};
  add_setting(closure, closure_l, "lambda > 0");
  add_setting(closure, closure_mu, "mu > 0");
  GridFlags closure_grid(10.0, 1.5, 50);
  closure_grid.add(closure);
  LimitFlags closure_limit;
  closure_limit.add(closure, false);

  auto* expand = uct->add_subcommand("expand-interval", "((a/b)^n, (b/a)^n)");
  Setting<double> expand_a{"a"}, expand_b{"b"};
  Setting<int> expand_n{"n", 1};
  add_setting(expand, expand_a, "a > 0");
  add_setting(expand, expand_b, "b > a");
  add_setting(expand, expand_n, "iterations (>= 0)");

  auto* asym = uct->add_subcommand("asym", "integral asymptotics residuals");
  asym->set_help_flag("--help", "print this help and exit");  // --h names H
  Setting<std::string> asym_h{"h"};
  add_setting(asym, asym_h, "h as an expression in x");
  asym_h.opt->required();
  Setting<double> asym_l{"lambda", std::numbers::e}, asym_m{"bound", 1.0};
  add_setting(asym, asym_l, "lambda > 1");
  add_setting(asym, asym_m, "bound M with 0 < h <= M");
  GridFlags asym_grid(10.0, 1.5, 50);
  asym_grid.add(asym);
  QuadFlags asym_quad;
  asym_quad.add(asym);
  LimitFlags asym_limit;
  asym_limit.add(asym, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const Json file = config_path.empty() ? Json::object() : load_config(config_path);
    const std::string out = out_flag.resolve(file);
    const OutputFormat out_format = parse_format(format_flag.resolve(file));
    const std::size_t workers = worker_count();
    const auto started = std::chrono::steady_clock::now();

    Report rep;
    Json& cfg = rep.config;

    if (apply->parsed()) {
      rep.command = "apply-l";
      const Expr h = parse(apply_expr);
      rep.inputs["h"] = format(h);
      const QuadTolerance tol = apply_quad.resolve(file, cfg);
      std::vector<Sample> values;
      if (apply_x.opt->count() > 0 || file.contains("x")) {
        const double x = apply_x.resolve(file);
        cfg["x"] = x;
        values.push_back({x, apply_L(h, x, tol)});
        std::printf("%s\n", fmt(values[0].value).c_str());
      } else {
        const GeometricGrid g = apply_grid.resolve(file, cfg);
        const LimitSettings ls = apply_limit.resolve(file, cfg);
        values = apply_L_grid(h, g, tol);
        for (const auto& s : values) std::printf("%-14s %s\n", fmt(s.x).c_str(), fmt(s.value).c_str());
        const LimitVerdict v = classify_limit(values, ls);
        rep.verdicts["limit"] = to_json(v);
        std::printf("limit: %s\n", v.describe().c_str());
      }
      Json vals = Json::array();
      for (const auto& s : values) {
        vals.push_back({{"x", s.x}, {"value", s.value}});
        rep.table.push_back({s.x, kNoParam, s.value});
      }
      rep.results["values"] = vals;
    } else if (invert->parsed()) {
      rep.command = "invert-l";
      const Expr f = parse(invert_expr);
      rep.inputs["f"] = format(f);
      const std::string g = format(invert_L(f));
      rep.results["inverse"] = g;
      std::printf("%s\n", g.c_str());
    } else if (classify->parsed()) {
      rep.command = "classify";
      const Expr f = parse(classify_expr);
      rep.inputs["f"] = format(f);
      GeometricGrid g = classify_grid.resolve(file, cfg);
      const std::vector<double> lambdas =
          resolve_lambdas(classify_lambdas, file, default_lambdas(), cfg);
      IndexSettings is;
      is.limit = classify_limit_flags.resolve(file, cfg);
      is.spread_tol = classify_limit_flags.spread_tol.resolve(file);
      cfg["spread-tol"] = is.spread_tol;
      is.workers = workers;
      const bool profile = classify_profile.resolve(file);
      cfg["profile"] = profile;
      const std::string claimed = classify_class.resolve(file);
      cfg["class"] = claimed;

      const IndexEstimate rv = rv_index(f, lambdas, g, is);
      Json rvj;
      rvj["rho_hat"] = rv.rho_hat;
      rvj["spread"] = rv.spread;
      rvj["lambdas"] = rv.lambdas;
      rvj["xs"] = rv.xs;
      rvj["estimates"] = rv.table;
      rvj["per_lambda"] = limit_table(rv.per_lambda);
      rvj["reason"] = rv.reason;
      rep.results["index"] = rvj;
      for (std::size_t i = 0; i < rv.lambdas.size(); ++i)
        for (std::size_t k = 0; k < rv.xs.size(); ++k)
          rep.table.push_back({rv.xs[k], rv.lambdas[i], rv.table[i][k]});
      rep.verdicts["regularly_varying"] = variation_text(rv.verdict);
      rep.verdicts["index"] = rv.rho_hat;
      rep.verdicts["spread"] = rv.spread;
      std::printf("index: %s (spread %s)\n", fmt(rv.rho_hat).c_str(), fmt(rv.spread).c_str());
      std::printf("regularly varying: %s (%s)\n", variation_text(rv.verdict), rv.reason.c_str());

      const SvReport sv = sv_test(f, lambdas, g, is);
      Json passes = Json::array();
      for (const auto& p : sv.passes) {
        Json pj;
        pj["integer_mode"] = p.grid.integer_mode;
        pj["xs"] = p.xs;
        pj["log_ratio"] = p.log_ratio;
        pj["per_lambda"] = limit_table(p.per_lambda);
        passes.push_back(pj);
      }
      rep.results["slow_variation"] = {{"passes", passes}, {"reason", sv.reason}};
      rep.verdicts["slowly_varying"] = variation_text(sv.verdict);
      if (sv.witness_lambda) {
        rep.verdicts["witness_lambda"] = *sv.witness_lambda;
        rep.verdicts["witness_kind"] = to_string(sv.witness_kind);
      }
      if (sv.index_hint) rep.verdicts["index_hint"] = *sv.index_hint;
      std::printf("slowly varying: %s (%s)\n", variation_text(sv.verdict), sv.reason.c_str());

      if (profile) {
        const ProfileReport pr = exponent_profile(f, g, is.limit);
        rep.results["profile"] = {{"xs", pr.xs}, {"xi", pr.xi}, {"verdict", to_json(pr.verdict)}};
        rep.verdicts["profile_tends_to_zero"] = pr.tends_to_zero;
        std::printf("%-14s %s\n", "x", "ln F / ln x");
        for (std::size_t k = 0; k < pr.xs.size(); ++k)
          std::printf("%-14s %s\n", fmt(pr.xs[k]).c_str(), fmt(pr.xi[k]).c_str());
        std::printf("profile: %s\n", pr.verdict.describe().c_str());
      }
      if (!claimed.empty()) {
        ClassCheckSettings cs;
        cs.index = is;
        cs.quad = classify_quad.resolve(file, cfg);
        const ClassCheckReport cr =
            class_preservation_check(f, ClaimedClass::parse(claimed), g, lambdas, cs);
        rep.results["class_check"] = {{"class", cr.claimed.describe()},
                                      {"xs", cr.xs},
                                      {"h", cr.h_values},
                                      {"operator", cr.operator_values},
                                      {"hypothesis", cr.hypothesis.detail},
                                      {"conclusion", cr.conclusion.detail}};
        rep.verdicts["class_hypothesis"] = cr.hypothesis.holds;
        rep.verdicts["class_conclusion"] = cr.conclusion.holds;
        rep.verdicts["class_conclusion_asserted"] = cr.conclusion_asserted;
        std::printf("class %s: hypothesis %s (%s)\n", cr.claimed.describe().c_str(),
                    cr.hypothesis.holds ? "holds" : "fails", cr.hypothesis.detail.c_str());
        std::printf("class %s for L(h): %s (%s)%s\n", cr.claimed.describe().c_str(),
                    cr.conclusion.holds ? "holds" : "fails", cr.conclusion.detail.c_str(),
                    cr.conclusion_asserted ? "" : " [not asserted]");
      }
      rep.results["note"] = kEvidenceNote;
    } else if (uct->parsed()) {
      ScanSettings ss;
      ss.workers = workers;
      if (scan->parsed()) {
        rep.command = "uct scan";
        const Expr gx = parse(scan_g.resolve(file));
        rep.inputs["g"] = format(gx);
        const double a = scan_a.resolve(file), b = scan_b.resolve(file);
        const std::size_t n = scan_n.resolve(file);
        cfg["a"] = a;
        cfg["b"] = b;
        cfg["param-count"] = n;
        const GeometricGrid g = scan_grid.resolve(file, cfg);
        ss.limit = scan_limit.resolve(file, cfg);
        const ScanReport r = uct_scan(gx, a, b, g, n, ss);
        rep.results["scan"] = to_json(r);
        rep.table = cells_of(r);
        rep.verdicts = scan_verdicts(r);
        print_scan(r);
      } else if (kar->parsed()) {
        rep.command = "uct karamata";
        const Expr f = parse(kar_f.resolve(file));
        rep.inputs["f"] = format(f);
        const double a = kar_a.resolve(file), b = kar_b.resolve(file);
        const std::size_t n = kar_n.resolve(file);
        cfg["a"] = a;
        cfg["b"] = b;
        cfg["param-count"] = n;
        const GeometricGrid g = kar_grid.resolve(file, cfg);
        ss.limit = kar_limit.resolve(file, cfg);
        const ScanReport r = karamata_uct_check(f, a, b, g, n, ss);
        rep.results["scan"] = to_json(r);
        rep.table = cells_of(r);
        rep.verdicts = scan_verdicts(r);
        print_scan(r);
      } else if (guct->parsed()) {
        rep.command = "uct guct";
        const Expr h = parse(guct_h.resolve(file)), m = parse(guct_m.resolve(file));
        rep.inputs["h"] = format(h);
        rep.inputs["m"] = format(m);
        const double a = guct_a.resolve(file), b = guct_b.resolve(file);
        const std::size_t n = guct_n.resolve(file);
        cfg["a"] = a;
        cfg["b"] = b;
        cfg["param-count"] = n;
        GuctSettings gs;
        gs.hi_samples = guct_samples.resolve(file);
        cfg["hi-samples"] = gs.hi_samples;
        const GeometricGrid g = guct_grid.resolve(file, cfg);
        ss.limit = guct_limit.resolve(file, cfg);
        gs.scan = ss;
        const GuctReport r = guct_diagnose(h, m, a, b, g, n, gs);
        rep.results["inequality"] = {{"samples", r.hi.samples},
                                     {"violations", r.hi.violations.size()}};
        rep.results["m"] = {{"samples", r.m_check.xs.size()}, {"detail", r.m_check.detail}};
        rep.results["pointwise"] = r.pointwise.detail;
        rep.results["scan"] = to_json(r.scan);
        rep.table = cells_of(r.scan);
        rep.verdicts["inequality"] = r.hi.passed();
        rep.verdicts["m_positive_nondecreasing"] = r.m_check.holds();
        rep.verdicts["pointwise"] = r.pointwise.holds;
        rep.verdicts["uniformity"] = to_string(r.scan.verdict);
        rep.verdicts["conclusion_asserted"] = r.conclusion_asserted;
        std::printf("inequality: %s (%zu violations in %zu samples)\n",
                    r.hi.passed() ? "holds" : "fails", r.hi.violations.size(), r.hi.samples);
        std::printf("m: %s (%s)\n", r.m_check.holds() ? "holds" : "fails", r.m_check.detail.c_str());
        std::printf("pointwise: %s (%s)\n", r.pointwise.holds ? "holds" : "fails",
                    r.pointwise.detail.c_str());
        print_scan(r.scan);
        if (!r.conclusion_asserted) std::printf("conclusion not asserted: hypotheses fail\n");
      } else if (hi->parsed()) {
        rep.command = "uct hi";
        const Expr h = parse(hi_h.resolve(file));
        rep.inputs["h"] = format(h);
        const HiRegion region{hi_xlo.resolve(file), hi_xhi.resolve(file), hi_ulo.resolve(file),
                              hi_uhi.resolve(file), hi_vlo.resolve(file), hi_vhi.resolve(file)};
        const std::size_t n = hi_samples.resolve(file);
        cfg["samples"] = n;
        cfg["x-lo"] = region.x_lo;
        cfg["x-hi"] = region.x_hi;
        cfg["u-lo"] = region.u_lo;
        cfg["u-hi"] = region.u_hi;
        cfg["v-lo"] = region.v_lo;
        cfg["v-hi"] = region.v_hi;
        const HypothesisReport r = hi_check(h, n, region);
        Json viol = Json::array();
        for (const auto& v : r.violations) {
          viol.push_back({{"x", v.x}, {"u", v.u}, {"v", v.v}, {"lhs", v.lhs}, {"rhs", v.rhs}});
          rep.table.push_back({v.x, v.u, v.lhs - v.rhs});
        }
        rep.results["samples"] = r.samples;
        rep.results["violations"] = viol;
        rep.verdicts["inequality"] = r.passed();
        std::printf("inequality: %s (%zu violations in %zu samples)\n",
                    r.passed() ? "holds" : "fails", r.violations.size(), r.samples);
        for (std::size_t i = 0; i < std::min<std::size_t>(r.violations.size(), 5); ++i) {
          const auto& v = r.violations[i];
          std::printf("  x=%s u=%s v=%s: %s > %s\n", fmt(v.x).c_str(), fmt(v.u).c_str(),
                      fmt(v.v).c_str(), fmt(v.lhs).c_str(), fmt(v.rhs).c_str());
        }
      } else if (cond->parsed()) {
        rep.command = "uct condition";
        const Expr xi = parse(cond_xi.resolve(file));
        rep.inputs["xi"] = format(xi);
        const GeometricGrid g = cond_grid.resolve(file, cfg);
        ss.limit = cond_limit.resolve(file, cfg);
        ScanReport r;
        if (cond_lambdas.opt->count() > 0 || file.contains("lambdas")) {
          const auto lambdas = resolve_lambdas(cond_lambdas, file, {}, cfg);
          r = condition_scan_310(xi, lambdas, g, ss);
        } else {
          const double a = cond_a.resolve(file), b = cond_b.resolve(file);
          const std::size_t n = cond_n.resolve(file);
          cfg["a"] = a;
          cfg["b"] = b;
          cfg["param-count"] = n;
          r = condition_scan_310(xi, a, b, g, n, ss);
        }
        rep.results["scan"] = to_json(r);
        rep.table = cells_of(r);
        rep.verdicts = scan_verdicts(r);
        if (!r.column_verdicts.empty()) {
          Json cols = Json::array();
          for (const auto& v : r.column_verdicts) cols.push_back(to_json(v));
          rep.results["columns"] = cols;
        }
        print_scan(r);
      } else if (closure->parsed()) {
        rep.command = "uct closure";
        const Expr f = parse(closure_f.resolve(file));
        rep.inputs["f"] = format(f);
        const double l = closure_l.resolve(file), mu = closure_mu.resolve(file);
        cfg["lambda"] = l;
        cfg["mu"] = mu;
        const GeometricGrid g = closure_grid.resolve(file, cfg);
        const LimitSettings ls = closure_limit.resolve(file, cfg);
        const ClosureReport r = mult_closure_residual(f, l, mu, g, ls);
        rep.results["xs"] = r.xs;
        rep.results["first"] = r.first;
        rep.results["second"] = r.second;
        rep.results["third"] = r.third;
        rep.results["max_identity_ulps"] = r.max_identity_ulps;
        for (std::size_t k = 0; k < r.xs.size(); ++k) {
          rep.table.push_back({r.xs[k], 1.0, r.first[k]});
          rep.table.push_back({r.xs[k], 2.0, r.second[k]});
          rep.table.push_back({r.xs[k], 3.0, r.third[k]});
        }
        rep.verdicts["identity"] = r.identity_holds;
        if (r.first_verdict) {
          rep.verdicts["first"] = to_json(*r.first_verdict);
          rep.verdicts["second"] = to_json(*r.second_verdict);
          rep.verdicts["third"] = to_json(*r.third_verdict);
        }
        std::printf("identity: %s (max %s ulps)\n", r.identity_holds ? "holds" : "fails",
                    fmt(r.max_identity_ulps).c_str());
        if (r.first_verdict)
          std::printf("columns: %s | %s | %s\n", r.first_verdict->describe().c_str(),
                      r.second_verdict->describe().c_str(), r.third_verdict->describe().c_str());
      } else if (expand->parsed()) {
        rep.command = "uct expand-interval";
        if (expand_a.opt->count() == 0 && !file.contains("a")) throw PreconditionError("--a is required");
        if (expand_b.opt->count() == 0 && !file.contains("b")) throw PreconditionError("--b is required");
        const double a = expand_a.resolve(file), b = expand_b.resolve(file);
        const int n = expand_n.resolve(file);
        cfg["a"] = a;
        cfg["b"] = b;
        cfg["n"] = n;
        const auto [lo, hi_] = interval_expand(a, b, n);
        rep.results["interval"] = {lo, hi_};
        std::printf("(%s, %s)\n", fmt(lo).c_str(), fmt(hi_).c_str());
      } else if (asym->parsed()) {
        rep.command = "uct asym";
        const Expr h = parse(asym_h.resolve(file));
        rep.inputs["h"] = format(h);
        const double l = asym_l.resolve(file), m = asym_m.resolve(file);
        cfg["lambda"] = l;
        cfg["bound"] = m;
        const GeometricGrid g = asym_grid.resolve(file, cfg);
        const QuadTolerance tol = asym_quad.resolve(file, cfg);
        const LimitSettings ls = asym_limit.resolve(file, cfg);
        const AsymReport r = integral_asym_residual(h, l, g, m, tol, ls);
        rep.results["xs"] = r.xs;
        rep.results["lhs"] = r.lhs;
        rep.results["rhs"] = r.rhs;
        rep.results["residual"] = r.residual;
        rep.results["i_form"] = r.i_form;
        rep.results["lcond"] = r.lcond;
        for (std::size_t k = 0; k < r.xs.size(); ++k) rep.table.push_back({r.xs[k], l, r.residual[k]});
        rep.verdicts["hypothesis"] = r.hypothesis.holds;
        rep.results["hypothesis"] = r.hypothesis.detail;
        if (r.residual_verdict) rep.verdicts["residual"] = to_json(*r.residual_verdict);
        if (r.lcond_verdict) rep.verdicts["lcond"] = to_json(*r.lcond_verdict);
        std::printf("%-14s %-14s %s\n", "x", "residual", "lcond");
        for (std::size_t k = 0; k < r.xs.size(); ++k)
          std::printf("%-14s %-14s %s\n", fmt(r.xs[k]).c_str(), fmt(r.residual[k]).c_str(),
                      fmt(r.lcond[k]).c_str());
        std::printf("hypothesis: %s (%s)\n", r.hypothesis.holds ? "holds" : "fails",
                    r.hypothesis.detail.c_str());
        if (r.residual_verdict) std::printf("residual: %s\n", r.residual_verdict->describe().c_str());
      }
      rep.results["note"] = kEvidenceNote;
    }

    rep.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                               started).count();
    if (!out.empty()) write_report(rep, out, out_format);
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e);
  }
}
