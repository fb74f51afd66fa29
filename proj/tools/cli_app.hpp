#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "cyclobox/cyclobox.hpp"

namespace cyclobox::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kGuard = 2, kCheckFailed = 3 };

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Options {
  std::uint32_t p = 0;
  std::uint64_t q = 0;
  std::uint64_t N = 1;
  std::optional<std::uint32_t> K;
  std::optional<double> T;
  std::optional<std::string> eps;
  std::optional<double> eta;
  std::optional<double> gamma;
  std::optional<std::string> alpha;
  std::string theorem = "t4";
  std::uint64_t samples = 10000;
  unsigned workers = 1;
  std::uint64_t seed = 1;
  bool exhaustive = false;
  bool pairwise = false;
  bool oracle = false;
  bool allow_sampling = false;
  bool progress = false;
  std::string format = "text";
  std::string out;
  std::uint64_t budget = kDefaultPointBudget;
  std::string config;
  std::uint64_t count = 26;
  std::string scene = "box_points";
};

namespace detail {

inline const std::vector<std::string>& boolean_flags() {
  static const std::vector<std::string> flags = {"exhaustive", "pairwise", "oracle", "allow-sampling", "progress"};
  return flags;
}

inline bool has_flag(const std::vector<std::string>& args, const std::string& name) {
  const std::string dashed = "--" + name;
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == dashed || a.rfind(dashed + "=", 0) == 0;
  });
}

inline std::optional<std::string> config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

// Config entries become flags appended after the command line, so explicit
// flags always win.
inline void merge_config(std::vector<std::string>& args) {
  const auto path = config_path(args);
  if (!path) return;
  for (const auto& [raw_key, value] : load_config(*path)) {
    std::string key = raw_key;
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "config" || has_flag(args, key)) continue;
    const auto& flags = boolean_flags();
    if (std::find(flags.begin(), flags.end(), key) != flags.end()) {
      if (value == "true" || value == "1" || value == "yes") args.push_back("--" + key);
      else if (value != "false" && value != "0" && value != "no") {
        throw UsageError("config key '" + raw_key + "' expects a boolean");
      }
      continue;
    }
    args.push_back("--" + key);
    args.push_back(value);
  }
}

inline std::uint64_t default_seed() {
  const char* env = std::getenv("CYCLOBOX_SEED");
  if (env == nullptr || *env == '\0') return 1;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (used != std::string_view(env).size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw UsageError("CYCLOBOX_SEED is not an unsigned integer");
  }
}

inline std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string join(const Coeffs& c) {
  std::string out;
  for (const auto v : c) {
    if (!out.empty()) out += ',';
    out += std::to_string(v);
  }
  return out;
}

inline BoxSpec require_box(const Options& o) {
  if (o.p == 0) throw UsageError("--p is required");
  return BoxSpec(o.p, o.N);
}

inline CyclotomicInt resolve_alpha(const std::string& spec, const BoxSpec& box, std::uint64_t seed) {
  if (spec == "origin") return CyclotomicInt::zero(box.p());
  if (spec == "north-pole") return north_pole_element(box);
  if (spec == "random") {
    SampleStream rng(seed, ~std::uint64_t{0});
    return sample_box_point(box, rng);
  }
  std::vector<Integer> coeffs;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    Integer v;
    if (item.empty() || v.set_str(item, 10) != 0) throw UsageError("--alpha: bad coefficient '" + item + "'");
    coeffs.push_back(v);
  }
  if (coeffs.size() != box.p() - 1) {
    throw UsageError("--alpha: expected " + std::to_string(box.p() - 1) + " coefficients");
  }
  return CyclotomicInt(box.p(), std::move(coeffs));
}

inline ExactRational parse_eps(const std::optional<std::string>& s, const char* fallback) {
  try {
    return ExactRational::parse(s.value_or(fallback));
  } catch (const std::exception&) {
    throw UsageError("--eps: cannot parse '" + s.value_or(fallback) + "'");
  }
}

inline SamplerConfig sampler(const Options& o, std::ostream& err) {
  SamplerConfig cfg;
  cfg.seed = o.seed;
  cfg.sample_count = o.samples;
  cfg.worker_count = o.workers;
  if (o.progress) {
    cfg.progress = [&err](std::uint64_t done, std::uint64_t total) {
      err << "progress " << done << "/" << total << "\n" << std::flush;
    };
  }
  return cfg;
}

inline std::string text(const ConcentrationReport& r) {
  std::string s = "theorem=" + std::string(to_string(r.theorem)) + " p=" + std::to_string(r.p) +
                  " N=" + std::to_string(r.N);
  if (!r.alpha.empty()) s += " alpha=" + r.alpha;
  if (r.K != 0) s += " K=" + std::to_string(r.K);
  if (r.T != 0.0) s += " T=" + num(r.T);
  s += " eps=" + r.epsilon + " eta=" + num(r.eta) + " center_sq=" + r.center_sq;
  s += std::string(r.exhaustive ? " exhaustive" : " samples=" + std::to_string(r.sample_count)) +
       " seed=" + std::to_string(r.seed);
  s += "\nempirical=" + num(r.empirical_proportion) + " bound=" + num(r.bound) + " (" + r.bound_rule + ")";
  if (r.secondary_proportion) s += "\n" + r.secondary_label + "=" + num(*r.secondary_proportion);
  for (const auto& [k, v] : r.diagnostics) s += "\n" + k + "=" + num(v);
  return s + "\nverdict=" + r.verdict() + "\n";
}

inline std::string text(const VisibilityReport& r) {
  std::string s = "visibility p=" + std::to_string(r.p) + " N=" + std::to_string(r.N) + " K=" + std::to_string(r.K) +
                  " samples=" + std::to_string(r.sample_count) + " seed=" + std::to_string(r.seed);
  s += "\nvisible_fraction=" + num(r.visible_fraction) + " attempts=" + std::to_string(r.attempts);
  s += "\nmean_dist_sq=" + num(r.mean_dist_sq) + " center=" + num(r.center) + " eps=" + num(r.epsilon);
  s += "\nproportion_near_center=" + num(r.proportion_near_center) + " target=" + num(r.target);
  if (r.regime_warning) s += "\nwarning: N/p=" + num(r.n_over_p) + " is below 10";
  return s + "\nverdict=" + r.verdict() + "\n";
}

template <class Report>
std::string render(const std::vector<Report>& reports, const Options& o) {
  if (o.format == "text") {
    std::string s;
    for (const auto& r : reports) s += text(r);
    return s;
  }
  return emit_reports(reports, parse_format(o.format));
}

struct Outcome {
  std::string document;
  int code = kOk;
};

inline Outcome cmd_moments(const Options& o) {
  const BoxSpec box = require_box(o);
  std::vector<MomentReport> reports;
  if (o.pairwise) {
    reports.push_back({MomentKind::avg_vertex_pairs, box.p(), box.N(), "", avg_vertex_pairs(box), std::nullopt});
    reports.push_back(
        {MomentKind::fourth_vertex_pairs, box.p(), box.N(), "", fourth_moment_vertex_pairs(box), std::nullopt});
    reports.push_back(
        {MomentKind::variance_vertex_pairs, box.p(), box.N(), "", variance_vertex_pairs(box), std::nullopt});
  } else {
    const auto alpha = resolve_alpha(o.alpha.value_or("origin"), box, o.seed);
    const std::string label = describe_point(alpha, box);
    reports.push_back(
        {MomentKind::avg_point_vertices, box.p(), box.N(), label, avg_point_to_vertices(alpha, box), std::nullopt});
    reports.push_back({MomentKind::second_moment_point_vertices, box.p(), box.N(), label,
                       second_moment_point_to_vertices(alpha, box), std::nullopt});
  }
  if (o.format != "text") return {emit_reports(reports, parse_format(o.format)), kOk};
  static const std::map<MomentKind, std::string> names = {
      {MomentKind::avg_point_vertices, "A"},         {MomentKind::second_moment_point_vertices, "M"},
      {MomentKind::avg_vertex_pairs, "A"},           {MomentKind::fourth_vertex_pairs, "L"},
      {MomentKind::variance_vertex_pairs, "M"},
  };
  std::string s;
  for (const auto& r : reports) s += names.at(r.kind) + "=" + r.formula_value.str() + "\n";
  return {s, kOk};
}

inline Outcome cmd_verify(const Options& o) {
  if (!o.oracle) throw UsageError("verify requires --oracle");
  const BoxSpec box = require_box(o);
  if (box.p() > kOracleMaxPrime) {
    throw GuardError("oracle refused: p=" + std::to_string(box.p()) + " exceeds " + std::to_string(kOracleMaxPrime));
  }
  const auto alpha = resolve_alpha(o.alpha.value_or("origin"), box, o.seed);
  auto reports = oracle_moments(alpha, box, o.workers);
  const std::string label = describe_point(alpha, box);
  for (auto& r : reports) r.alpha = label;
  for (auto& r : oracle_moments(std::nullopt, box, o.workers)) reports.push_back(std::move(r));
  const bool ok = std::all_of(reports.begin(), reports.end(), [](const MomentReport& r) { return r.consistent(); });
  std::string s;
  if (o.format == "text") {
    for (const auto& r : reports) {
      s += std::string(to_string(r.kind)) + " formula=" + r.formula_value.str() + " oracle=" + r.oracle_value->str() +
           (r.consistent() ? " EXACT-EQUAL" : " MISMATCH") + "\n";
    }
    s += std::string("verdict=") + (ok ? "pass" : "fail") + "\n";
  } else {
    s = emit_reports(reports, parse_format(o.format));
  }
  return {s, ok ? kOk : kCheckFailed};
}

inline int concentration_code(const ConcentrationReport& r) { return r.pass ? kOk : kCheckFailed; }

inline Outcome cmd_sample(const Options& o, std::ostream& err) {
  const BoxSpec box = require_box(o);
  const auto cfg = sampler(o, err);
  const auto eps = parse_eps(o.eps, "501/1000");
  ConcentrationReport r;
  if (o.theorem == "t5") {
    r = vertex_pair_report(box, eps, cfg, o.exhaustive);
  } else {
    const auto alpha = resolve_alpha(o.alpha.value_or("origin"), box, o.seed);
    if (o.theorem == "t4") r = theorem4_report(alpha, box, eps, cfg, o.exhaustive);
    else if (o.theorem == "isosceles") r = isosceles_report(alpha, box, eps, cfg);
    else throw UsageError("--theorem must be t4, t5 or isosceles");
  }
  return {render(std::vector{r}, o), concentration_code(r)};
}

inline Outcome cmd_angles(const Options& o, std::ostream& err) {
  const BoxSpec box = require_box(o);
  RightAngleOptions opt;
  if (o.eps) opt.eps_cos = parse_eps(o.eps, "1/10").to_double();
  if (o.eta) opt.eta = *o.eta;
  opt.gamma = o.gamma;
  const auto alpha = resolve_alpha(o.alpha.value_or("north-pole"), box, o.seed);
  const auto r = right_angle_report(alpha, box, opt, sampler(o, err));
  return {render(std::vector{r}, o), concentration_code(r)};
}

inline Outcome cmd_polytopes(const Options& o, std::ostream& err) {
  const BoxSpec box = require_box(o);
  const double T = o.T ? *o.T : std::pow(static_cast<double>(box.p()), o.eta.value_or(0.1));
  const auto r = polytope_report(box, o.K.value_or(4), T, sampler(o, err));
  return {render(std::vector{r}, o), concentration_code(r)};
}

inline Outcome cmd_pyramids(const Options& o, std::ostream& err) {
  const BoxSpec box = require_box(o);
  const auto apex = resolve_alpha(o.alpha.value_or("origin"), box, o.seed);
  const auto r = pyramid_report(apex, box, o.K.value_or(3), parse_eps(o.eps, "501/1000"), sampler(o, err));
  return {render(std::vector{r}, o), concentration_code(r)};
}

inline Outcome cmd_visibility(const Options& o, std::ostream& err) {
  const BoxSpec box = require_box(o);
  const double eps = parse_eps(o.eps, "1/20").to_double();
  const auto r = visibility_concentration_report(box, o.K.value_or(3), eps, sampler(o, err));
  return {render(std::vector{r}, o), r.pass ? kOk : kCheckFailed};
}

inline Outcome cmd_poles(const Options& o) {
  const std::uint64_t q = o.q != 0 ? o.q : o.p;
  if (q == 0) throw UsageError("--q is required");
  const auto n = static_cast<std::int64_t>(o.N);
  const auto np = north_pole(q, n);
  const auto ep = east_pole(q, n);
  const auto np_z = embed_complex(q, np);
  const auto ep_z = embed_complex(q, ep);
  if (o.format == "json") {
    Json j;
    j["report"] = "poles";
    j["q"] = q;
    j["N"] = o.N;
    j["NP"] = np;
    j["EP"] = ep;
    j["SP"] = south_pole(q, n);
    j["WP"] = west_pole(q, n);
    j["NP_complex"] = {np_z.real(), np_z.imag()};
    j["EP_complex"] = {ep_z.real(), ep_z.imag()};
    if (q % 2 == 1) j["euclidean_diameter"] = euclidean_diameter(q, n);
    else j["euclidean_diameter"] = nullptr;
    return {j.dump() + "\n", kOk};
  }
  if (o.format == "csv") throw UsageError("poles supports text or json output");
  std::string s = "q=" + std::to_string(q) + " N=" + std::to_string(o.N) + "\n";
  s += "NP " + join(np) + "\nEP " + join(ep) + "\nSP " + join(south_pole(q, n)) + "\nWP " + join(west_pole(q, n));
  s += "\nNP_complex " + num(np_z.real()) + " " + num(np_z.imag());
  s += "\nEP_complex " + num(ep_z.real()) + " " + num(ep_z.imag()) + "\n";
  if (q % 2 == 1) s += "euclidean_diameter " + num(euclidean_diameter(q, n)) + "\n";
  return {s, kOk};
}

inline Outcome cmd_render(const Options& o) {
  SceneSpec spec;
  spec.kind = parse_scene_kind(o.scene);
  spec.q = o.q != 0 ? o.q : o.p;
  if (spec.q == 0) throw UsageError("--q or --p is required");
  spec.N = static_cast<std::int64_t>(o.N);
  spec.K = o.K.value_or(3);
  spec.count = o.count;
  spec.budget = o.budget;
  spec.seed = o.seed;
  spec.allow_sampling = o.allow_sampling;
  return {render_scene(spec), kOk};
}

// Writes next to the target and renames, so an interrupted run leaves no
// partial file behind.
inline void write_atomically(const std::string& path, const std::string& doc) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".partial";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    f << doc;
    f.flush();
    if (!f) {
      f.close();
      fs::remove(tmp);
      throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
  }
  fs::rename(tmp, target);
}

}  // namespace detail

/// Parses argv (argv[0] is the program name), runs one subcommand and
/// returns its exit code. All output goes to `out` / `err`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + std::min(argc, 1), argv + argc);
  Options o;
  CLI::App app{"Exact geometry and concentration experiments on cyclotomic boxes", "cyclobox"};
  app.require_subcommand(1);

  try {
    o.seed = detail::default_seed();
    detail::merge_config(args);

    app.add_option("--p", o.p, "odd prime p");
    app.add_option("--q", o.q, "modulus q for poles and rendering");
    app.add_option("--N", o.N, "box half-width N")->check(CLI::PositiveNumber);
    app.add_option("--K", o.K, "polytope size");
    app.add_option("--T", o.T, "polytope interval parameter (half-width 1/T)");
    app.add_option("--eps", o.eps, "interval half-width as a rational a/b");
    app.add_option("--eta", o.eta, "exponent eta");
    app.add_option("--gamma", o.gamma, "right-angle exponent gamma");
    app.add_option("--alpha", o.alpha, "origin | north-pole | random | comma-separated coefficients");
    app.add_option("--theorem", o.theorem, "t4 | t5 | isosceles (sample only)")
        ->check(CLI::IsMember({"t4", "t5", "isosceles"}));
    app.add_option("--samples", o.samples, "sample count")->check(CLI::PositiveNumber);
    app.add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--seed", o.seed, "RNG seed (default from CYCLOBOX_SEED, else 1)");
    app.add_flag("--exhaustive", o.exhaustive, "enumerate instead of sampling (p <= 17)");
    app.add_flag("--pairwise", o.pairwise, "vertex-pair moments (moments only)");
    app.add_flag("--oracle", o.oracle, "compare closed forms against enumeration (verify only)");
    app.add_flag("--allow-sampling", o.allow_sampling, "sample points when a scene exceeds the budget");
    app.add_flag("--progress", o.progress, "report progress on stderr");
    app.add_option("--format", o.format, "text | json | csv")->check(CLI::IsMember({"text", "json", "csv"}));
    app.add_option("--out", o.out, "write output to PATH");
    app.add_option("--budget", o.budget, "render point budget")->check(CLI::PositiveNumber);
    app.add_option("--config", o.config, "key = value defaults file");
    app.add_option("--count", o.count, "number of polytopes or pyramids to render");
    app.add_option("--scene", o.scene, "box_points | poles_circle | random_polytopes | pyramids")
        ->check(CLI::IsMember({"box_points", "poles_circle", "random_polytopes", "pyramids"}));

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"moments", "closed-form distance moments"},
        {"verify", "closed forms against exhaustive enumeration"},
        {"sample", "vertex concentration (T4, T5, isosceles)"},
        {"angles", "right central angles"},
        {"polytopes", "super-regular K-polytopes"},
        {"pyramids", "pyramids over vertex bases"},
        {"visibility", "self-visible polytopes"},
        {"poles", "north and east poles"},
        {"render", "SVG scene"},
    };
    for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    detail::Outcome result;
    if (command == "moments") result = detail::cmd_moments(o);
    else if (command == "verify") result = detail::cmd_verify(o);
    else if (command == "sample") result = detail::cmd_sample(o, err);
    else if (command == "angles") result = detail::cmd_angles(o, err);
    else if (command == "polytopes") result = detail::cmd_polytopes(o, err);
    else if (command == "pyramids") result = detail::cmd_pyramids(o, err);
    else if (command == "visibility") result = detail::cmd_visibility(o, err);
    else if (command == "poles") result = detail::cmd_poles(o);
    else result = detail::cmd_render(o);

    if (o.out.empty()) out << result.document;
    else detail::write_atomically(o.out, result.document);
    return result.code;
  } catch (const GuardError& e) {
    err << "guard: " << e.what() << "\n";
    return kGuard;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace cyclobox::cli
