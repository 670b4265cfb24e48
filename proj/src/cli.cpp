#include "rispaces/cli.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "nlohmann/json.hpp"
#include "rispaces/equivharness.hpp"
#include "rispaces/error.hpp"
#include "rispaces/interpolation.hpp"
#include "rispaces/kfunctional.hpp"
#include "rispaces/norms.hpp"

namespace rispaces {

namespace {

bool parse_number(const std::string& s, double& v) {
  if (s == "inf" || s == "+inf" || s == "infinity") {
    v = kInf;
    return true;
  }
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  v = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && errno == 0;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::BadConfig, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Config-class errors map to 2, numerical trouble to 1.
int exit_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::NoConvergence:
    case ErrorKind::NonFiniteValue:
    case ErrorKind::InfiniteNorm:
    case ErrorKind::Divergent:
    case ErrorKind::OutOfRange:
      return kExitNumeric;
    default:
      return kExitConfig;
  }
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) fail(ErrorKind::BadConfig, "cannot write " + cfg.out);
  f << text;
}

std::string fn_json(const std::vector<std::string>& tokens) {
  if (tokens.empty()) fail(ErrorKind::BadConfig, "--fn is required");
  if (tokens.size() == 1 && tokens[0] == "zero") return R"({"kind":"constant","value":0})";
  static const std::map<std::string, std::string> bare{{"constant", "value"}, {"char", "a"}};
  auto it = bare.find(tokens[0]);
  return tokens_to_json(tokens, "kind", it == bare.end() ? "" : it->second);
}

FunctionModel load_fn(const RunConfig& cfg) {
  std::string base = ".";
  if (cfg.fn.size() == 1 && std::filesystem::is_regular_file(cfg.fn[0]))
    base = std::filesystem::path(cfg.fn[0]).parent_path().string();
  if (base.empty()) base = ".";
  return model_from_json(fn_json(cfg.fn), base);
}

HarnessConfig harness_config(const RunConfig& cfg) {
  HarnessConfig h;
  h.res = cfg.res;
  h.ceiling = cfg.ceiling;
  h.seed = resolve_seed(cfg.seed);
  h.threads = cfg.threads;
  return h;
}

std::map<std::string, double> numeric_params(const std::vector<std::string>& tokens) {
  std::map<std::string, double> out;
  for (const auto& t : tokens) {
    auto eq = t.find('=');
    double v;
    if (eq == std::string::npos || !parse_number(t.substr(eq + 1), v))
      fail(ErrorKind::BadConfig, "expected key=value, got '" + t + "'");
    out[t.substr(0, eq)] = v;
  }
  return out;
}

void validate_resolution(const Resolution& r) {
  if (!(r.u_max > 1.0) || !std::isfinite(r.u_max)) fail(ErrorKind::BadConfig, "--u-max must exceed 1");
  if (r.panels < 2) fail(ErrorKind::BadConfig, "--panels must be >= 2");
  if (r.k_nodes < 2) fail(ErrorKind::BadConfig, "--k-nodes must be >= 2");
  if (r.sup_count < 2) fail(ErrorKind::BadConfig, "--sup-count must be >= 2");
  if (!(r.rel_tol > 0.0 && r.rel_tol <= 1e-4)) fail(ErrorKind::BadConfig, "--rel-tol must lie in (0, 1e-4]");
}

int cmd_norm(const RunConfig& cfg, std::ostream& out) {
  if (cfg.space.empty()) fail(ErrorKind::BadConfig, "--space is required");
  const SpaceSpec spec = space_from_json(tokens_to_json(cfg.space, "space"));
  validate_space(spec);
  const FunctionModel model = load_fn(cfg);
  const double v = norm(discretize_model(model, cfg.res.u_max, cfg.res.panels), spec, cfg.res.rel_tol);
  nlohmann::ordered_json j;
  j["space"] = space_label(spec);
  j["function"] = model_label(model);
  j["value"] = v;
  emit(cfg, j.dump() + "\n", out);
  return kExitOk;
}

int cmd_kfunc(const RunConfig& cfg, std::ostream& out) {
  if (cfg.couple.empty()) fail(ErrorKind::BadConfig, "--couple is required");
  const CoupleSpec couple = couple_from_json(tokens_to_json(cfg.couple, "couple"));
  validate_couple(couple);
  const StepRearrangement f = discretize_model(load_fn(cfg), cfg.res.u_max, cfg.res.panels);
  const UGrid grid(cfg.res.u_max, cfg.res.k_nodes);
  const KCurve oracle = k_curve(f, couple, grid, KMethod::Oracle);
  const KCurve expl = k_curve(f, couple, grid, KMethod::Explicit);
  std::string csv = "t,K_oracle,K_explicit,ratio\n";
  for (std::size_t j = 0; j < oracle.t_nodes.size(); ++j) {
    const double a = oracle.k_values[j], b = expl.k_values[j];
    csv += num(oracle.t_nodes[j]) + "," + num(a) + "," + num(b) + ",";
    if (a != 0.0 && b != 0.0) csv += num(a / b);
    csv += "\n";
  }
  emit(cfg, csv, out);
  return kExitOk;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

// --theorem <identity>: lhs (interpolation norm) against the identified target norm,
// over --fn or, without it, over the standard family.
int cmd_identify(const RunConfig& cfg, std::ostream& out) {
  const auto id = identity_from_name(cfg.theorem);
  if (!id) fail(ErrorKind::BadConfig, "unknown identity '" + cfg.theorem + "'");
  IdentityParams ip;
  for (const auto& [k, v] : numeric_params(cfg.params)) {
    if (k == "p") ip.p = v;
    else if (k == "q") ip.q = v;
    else if (k == "theta") ip.theta = v;
    else if (k == "r") ip.r = v;
    else if (k == "alpha") ip.alpha = v;
    else fail(ErrorKind::BadConfig, "unknown parameter '" + k + "' for interp --theorem");
  }
  if (!cfg.couple.empty()) fail(ErrorKind::BadConfig, "--couple is implied by --theorem");
  identity_case(*id, ip);  // hypotheses first
  FunctionFamily fam = cfg.fn.empty() ? standard_family(ip.q, resolve_seed(cfg.seed)) : single_family(load_fn(cfg));
  const UGrid grid(cfg.res.u_max, cfg.res.k_nodes);
  std::string csv = "function_id,lhs,rhs,ratio\n";
  for (std::size_t i = 0; i < fam.members.size(); ++i) {
    const auto f = discretize_model(fam.members[i], cfg.res.u_max, cfg.res.panels);
    const TargetPair pr = identify_target(*id, f, ip, grid);
    csv += csv_field(fam.ids[i]) + "," + num(pr.lhs) + "," + num(pr.rhs) + ",";
    if (pr.lhs != 0.0 && pr.rhs != 0.0) csv += num(pr.lhs / pr.rhs);
    csv += "\n";
  }
  emit(cfg, csv, out);
  return kExitOk;
}

int cmd_interp(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.theorem.empty()) return cmd_identify(cfg, out);
  if (cfg.couple.empty()) fail(ErrorKind::BadConfig, "--couple is required");
  const CoupleSpec couple = couple_from_json(tokens_to_json(cfg.couple, "couple"));
  validate_couple(couple);
  InterpParams ip;
  bool explicit_k = false;
  for (const auto& [k, v] : numeric_params(cfg.params)) {
    if (k == "theta") ip.theta = v;
    else if (k == "r") ip.r = v;
    else if (k == "alpha") ip.alpha = v;
    else if (k == "explicit") explicit_k = v != 0.0;
    else fail(ErrorKind::BadConfig, "unknown parameter '" + k + "' for interp");
  }
  const FunctionModel model = load_fn(cfg);
  const StepRearrangement f = discretize_model(model, cfg.res.u_max, cfg.res.panels);
  const KCurve curve = k_curve(f, couple, UGrid(cfg.res.u_max, cfg.res.k_nodes),
                               explicit_k ? KMethod::Explicit : KMethod::Oracle);
  nlohmann::ordered_json j;
  j["couple"] = couple_label(couple);
  j["function"] = model_label(model);
  j["theta"] = ip.theta;
  if (std::isinf(ip.r)) j["r"] = "inf";
  else j["r"] = ip.r;
  j["alpha"] = ip.alpha;
  j["k"] = explicit_k ? "explicit" : "oracle";
  j["value"] = interp_norm(curve, ip, cfg.res.rel_tol);
  emit(cfg, j.dump() + "\n", out);
  return kExitOk;
}

int cmd_experiment(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::string name = cfg.theorem;
  std::vector<std::string> rest;
  for (const auto& t : cfg.params) {
    if (name.empty() && t.find('=') == std::string::npos) name = t;
    else rest.push_back(t);
  }
  if (name.empty()) fail(ErrorKind::BadConfig, "experiment name required (positional or --theorem)");
  Harness h(harness_config(cfg));
  const EquivReport rep = h.run(name, numeric_params(rest));
  emit(cfg, rep.to_json() + "\n", out);
  if (!rep.pass) {
    err << "experiment " << name << " failed";
    for (const auto& n : rep.notes) err << "; " << n;
    err << "\n";
    return kExitReport;
  }
  return kExitOk;
}

int cmd_list(const RunConfig& cfg, std::ostream& out) {
  std::string text;
  for (const auto& e : list_experiments()) {
    text += e.name;
    for (const auto& [k, v] : e.defaults) text += " " + k + "=" + (std::isinf(v) ? std::string("inf") : num(v));
    text += "\n    " + e.summary + "\n";
  }
  emit(cfg, text, out);
  return kExitOk;
}

}  // namespace

std::string tokens_to_json(const std::vector<std::string>& tokens, const std::string& name_key,
                           const std::string& bare_key) {
  if (tokens.empty()) fail(ErrorKind::BadConfig, "empty spec");
  if (tokens.size() == 1) {
    const std::string& t = tokens[0];
    const auto first = t.find_first_not_of(" \t\n");
    if (first != std::string::npos && t[first] == '{') return t;
    if (t.find('=') == std::string::npos && std::filesystem::is_regular_file(t)) return read_file(t);
  }
  nlohmann::ordered_json j;
  j[name_key] = tokens[0];
  bool bare_used = false;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const std::string& t = tokens[i];
    const auto eq = t.find('=');
    std::string key, val;
    if (eq == std::string::npos) {
      if (bare_key.empty() || bare_used) fail(ErrorKind::BadConfig, "expected key=value, got '" + t + "'");
      key = bare_key;
      val = t;
      bare_used = true;
    } else {
      key = t.substr(0, eq);
      val = t.substr(eq + 1);
    }
    double v;
    if (parse_number(val, v)) {
      if (std::isinf(v)) j[key] = "inf";
      else j[key] = v;
    } else {
      j[key] = val;
    }
  }
  return j.dump();
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("RISPACES_SEED")) {
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || errno != 0) fail(ErrorKind::BadConfig, "RISPACES_SEED is not an unsigned integer");
    return v;
  }
  return Defaults::seed;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"rearrangement-invariant space norms, K-functionals and equivalence experiments", "rispaces"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 0;

  app.add_option("--fn", cfg.fn, "function: JSON, file path, or kind followed by key=value")->expected(1, 64);
  app.add_option("--space", cfg.space, "space: JSON or name followed by key=value")->expected(1, 64);
  app.add_option("--couple", cfg.couple, "couple: JSON or name followed by key=value")->expected(1, 64);
  app.add_option("--theorem", cfg.theorem, "experiment name, or identity name for interp");
  app.add_option("--out", cfg.out, "output path (default stdout)");
  auto* seed_opt = app.add_option("--seed", seed, "random seed (falls back to RISPACES_SEED)");
  app.add_option("--u-max", cfg.res.u_max, "largest u = 1 - log t of the grids")->capture_default_str();
  app.add_option("--panels", cfg.res.panels, "panels of the function discretization")->capture_default_str();
  app.add_option("--k-nodes", cfg.res.k_nodes, "nodes of the K grid")->capture_default_str();
  app.add_option("--sup-count", cfg.res.sup_count, "nodes of the sup search grid")->capture_default_str();
  app.add_option("--rel-tol", cfg.res.rel_tol, "quadrature relative tolerance")->capture_default_str();
  app.add_option("--ceiling", cfg.ceiling, "ratio ceiling of experiments")->capture_default_str();
  app.add_option("--threads", cfg.threads, "worker threads for experiments (0: all cores)")->capture_default_str();

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {{"norm", "evaluate a norm, print {space, value} JSON"},
                      {"kfunc", "write the CSV t,K_oracle,K_explicit,ratio"},
                      {"interp", "interpolation norm from a K curve (theta= r= alpha=); with --theorem a function_id,lhs,rhs,ratio CSV"},
                      {"experiment", "run a harness experiment and write its JSON report"},
                      {"list-experiments", "list experiment names with default parameters"}};
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    sub->fallthrough();
    if (std::string(s.name) != "list-experiments") sub->add_option("params", cfg.params, "key=value parameters");
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (seed_opt->count() > 0) cfg.seed = seed;
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    validate_resolution(cfg.res);
    if (!(cfg.ceiling >= 1.0)) fail(ErrorKind::BadConfig, "--ceiling must be >= 1");
    if (cfg.command == "norm") return cmd_norm(cfg, out);
    if (cfg.command == "kfunc") return cmd_kfunc(cfg, out);
    if (cfg.command == "interp") return cmd_interp(cfg, out);
    if (cfg.command == "experiment") return cmd_experiment(cfg, out, err);
    return cmd_list(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace rispaces
