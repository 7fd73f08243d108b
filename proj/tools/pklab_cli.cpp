// Command-line front end: runs verification suites and exports plot data.
// Exit codes: 0 all checks pass, 1 some check failed, 2 usage or config error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pklab/suites.hpp"

namespace {

struct Options {
  std::string suite, config_file, out, format = "json", profile;
  std::optional<std::uint64_t> seed;
  std::optional<int> n, samples, grid;
  std::string model;
  std::vector<std::string> tol, params;
};

std::pair<std::string, double> key_value(const std::string& flag, const std::string& kv) {
  const auto eq = kv.rfind('=');
  if (eq == std::string::npos) throw pklab::ConfigError(flag + " expects name=value, got '" + kv + "'");
  std::size_t pos = 0;
  const std::string v = kv.substr(eq + 1);
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size()) throw pklab::ConfigError(flag + ": bad value '" + v + "'");
  return {kv.substr(0, eq), x};
}

pklab::SuiteConfig resolve(const Options& o) {
  pklab::SuiteConfig c;
  if (!o.config_file.empty()) {
    std::ifstream in(o.config_file);
    if (!in) throw pklab::ConfigError("cannot read config file '" + o.config_file + "'");
    c = pklab::parse_config(in);
  }
  // Flags take precedence over the config file.
  if (!o.suite.empty()) c.suite = o.suite;
  if (o.seed) c.seed = *o.seed;
  if (o.n) c.n = o.n;
  if (o.samples) c.samples = o.samples;
  if (o.grid) c.grid = *o.grid;
  if (!o.model.empty()) c.model = o.model;
  for (const auto& kv : o.tol) {
    const auto [k, v] = key_value("--tol", kv);
    c.tolerances[k] = v;
  }
  for (const auto& kv : o.params) {
    const auto [k, v] = key_value("--param", kv);
    c.model_params[k] = v;
  }
  if (c.suite.empty()) throw pklab::ConfigError("no suite given (use --suite or a config file)");
  return c;
}

void write(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw pklab::ConfigError("cannot write '" + path + "'");
  out << text;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--suite", o.suite, "suite name, or 'all'");
  cmd->add_option("--config", o.config_file, "config file with [suite] and [tolerances] sections");
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--n", o.n, "dimension or rank; default is the suite's sweep");
  cmd->add_option("--samples", o.samples, "samples per dimension");
  cmd->add_option("--grid", o.grid, "fiber grid points per direction");
  cmd->add_option("--tol", o.tol, "tolerance override name=value (loosening only)")->take_all();
  cmd->add_option("--model", o.model, "built-in model family for suites that accept one");
  cmd->add_option("--param", o.params, "model parameter name=value")->take_all();
  cmd->add_option("--out", o.out, "output file (default stdout)");
}

int verify(const Options& o) {
  if (o.format != "json" && o.format != "csv") throw pklab::ConfigError("unknown format '" + o.format + "'");
  const auto config = resolve(o);
  const auto start = std::chrono::steady_clock::now();
  const auto report = pklab::run_suite(config);
  const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;
  write(o.out, o.format == "json" ? pklab::emit_json(report) : pklab::emit_csv(report));
  for (const auto& c : report.checks)
    if (c.status != pklab::Status::pass) std::cerr << pklab::to_string(c.status) << ": " << c.name << " = " << c.value << "\n";
  std::cerr << report.checks.size() - report.failures() << "/" << report.checks.size() << " checks passed in " << wall.count()
            << " s\n";
  return report.passed() ? 0 : 1;
}

int plot_data(const Options& o) {
  const auto report = pklab::run_suite(resolve(o));
  if (report.profiles.empty()) {
    std::cerr << "warning: suite '" << report.suite << "' produces no profiles\n";
    write(o.out, "");
    return 0;
  }
  std::ostringstream text;
  bool found = false;
  for (const auto& p : report.profiles) {
    if (!o.profile.empty() && p.name != o.profile) continue;
    if (found) text << "\n";
    if (o.profile.empty()) text << "# " << p.name << "\n";
    text << pklab::emit_profile_csv(p);
    found = true;
  }
  if (!found) throw pklab::ConfigError("suite '" + report.suite + "' has no profile '" + o.profile + "'");
  write(o.out, text.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pklab: numerical checks for relative Kahler families, flat Higgs bundles and geodesics"};
  app.require_subcommand(1);
  Options opts;
  auto* ver = app.add_subcommand("verify", "run a suite and emit a machine-readable report");
  add_common(ver, opts);
  ver->add_option("--format", opts.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  auto* plot = app.add_subcommand("plot-data", "emit profile columns as CSV");
  add_common(plot, opts);
  plot->add_option("--profile", opts.profile, "profile name; default emits all");
  app.add_subcommand("list", "print registered suite names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (app.got_subcommand("list")) {
      for (const auto& s : pklab::suite_names()) std::cout << s << "\n";
      std::cout << "all\n";
      return 0;
    }
    return app.got_subcommand("verify") ? verify(opts) : plot_data(opts);
  } catch (const pklab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const pklab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
