#include "riesz/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "riesz/config.hpp"
#include "riesz/kernels.hpp"
#include "riesz/report.hpp"

namespace riesz {

namespace {

struct Flags {
  std::string set = "circle";
  std::string n;
  double s = 0.0;
  std::string strategy = "smoothed_ascent";
  std::uint64_t seed = 0;
  std::size_t restarts = 16;
  std::string source = "solver";
  std::string table = "polarization";
  int target_dim = 0;
  std::vector<double> epsilon;
  double exclusion = 0.0;
  std::size_t samples = 200;
  std::size_t cells = 100;
  std::size_t grid = 12;
  std::string out, csv, plot;
};

struct Bound {
  CLI::App* app;
  CLI::Option* s;
  CLI::Option* seed;
};

Bound add_command(CLI::App& root, const std::string& name, const std::string& help, Flags& f) {
  CLI::App* sub = root.add_subcommand(name, help);
  sub->add_option("--set", f.set, "set name: circle, arc, segment, ball, disk, cube, sphere, two-circles, tangent-circles");
  sub->add_option("--n", f.n, "point counts: \"64,128\" or \"64..8192\" (doubling)");
  CLI::Option* s = sub->add_option("--s", f.s, "Riesz exponent (default: the set's dimension)");
  sub->add_option("--strategy", f.strategy, "smoothed_ascent, exchange or anneal");
  CLI::Option* seed = sub->add_option("--seed", f.seed, "random seed");
  sub->add_option("--restarts", f.restarts, "solver restarts");
  sub->add_option("--source", f.source, "analytic or solver");
  sub->add_option("--table", f.table, "polarization, chebyshev or energy");
  sub->add_option("--target-dim", f.target_dim, "dimension of the limit target");
  sub->add_option("--epsilon", f.epsilon, "decreasing radius schedule")->delimiter(',');
  sub->add_option("--exclusion", f.exclusion, "distance kept from other parts of a union");
  sub->add_option("--samples", f.samples, "bound-check instances");
  sub->add_option("--cells", f.cells, "equidistribution test cells");
  sub->add_option("--grid", f.grid, "oracle grid size");
  sub->add_option("--out", f.out, "report path (default: stdout)");
  sub->add_option("--csv", f.csv, "CSV table path");
  sub->add_option("--plot", f.plot, "plot data path");
  return {sub, s, seed};
}

RunConfig from_flags(Command command, const Flags& f, const Bound& b) {
  RunConfig c;
  c.command = command;
  try {
    c.set = preset_set(f.set);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("key 'set': ") + e.what());
  }
  if (!f.n.empty()) c.n = parse_n_list(f.n);
  if (b.s->count()) c.s = f.s;
  c.strategy = f.strategy;
  if (b.seed->count()) c.seed = f.seed;
  c.restarts = f.restarts;
  c.source = f.source;
  c.table = f.table;
  c.target_dim = f.target_dim;
  c.epsilon = f.epsilon;
  c.exclusion = f.exclusion;
  c.samples = f.samples;
  c.cells = f.cells;
  c.grid = f.grid;
  c.report_path = f.out;
  c.csv_path = f.csv;
  c.plot_path = f.plot;
  validate(c);
  return c;
}

void apply_thread_env() {
  if (const char* v = std::getenv("RIESZ_THREADS")) {
    const int n = std::atoi(v);
    if (n > 0) kernels::set_thread_count(n);
  }
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Riesz polarization and energy experiments"};
  app.require_subcommand(0, 1);
  std::string config_path;
  bool omit_timing = false;
  app.add_option("--config", config_path, "YAML run configuration");
  app.add_flag("--omit-timing", omit_timing, "leave the timing section out of the report");

  Flags flags;
  const std::vector<std::pair<Command, std::string>> commands = {
      {Command::Solve, "maximize the polarization of N points"},
      {Command::Energy, "minimize the Riesz energy of N points"},
      {Command::Asymptotics, "ratio tables and their extrapolated limit"},
      {Command::Equidist, "empirical counts over closed test cells"},
      {Command::Alpha, "covering density estimates"},
      {Command::Oracle, "exhaustive grid maximin against the grid solver"},
      {Command::BoundCheck, "randomized check of the near-field integral bound"}};
  std::vector<Bound> bound;
  for (const auto& [cmd, help] : commands) {
    bound.push_back(add_command(app, to_string(cmd), help, flags));
    bound.back().app->add_flag("--omit-timing", omit_timing, "leave the timing section out of the report");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidConfig;
  }

  RunConfig config;
  try {
    if (!config_path.empty()) {
      std::ifstream file(config_path);
      if (!file) throw ConfigError("cannot read config file " + config_path);
      std::stringstream text;
      text << file.rdbuf();
      config = parse_config(text.str());
    } else {
      std::size_t chosen = commands.size();
      for (std::size_t i = 0; i < commands.size(); ++i)
        if (bound[i].app->parsed()) chosen = i;
      if (chosen == commands.size()) throw ConfigError("no command given (use --config or a subcommand)");
      config = from_flags(commands[chosen].first, flags, bound[chosen]);
    }
  } catch (const ConfigError& e) {
    err << "invalid config: " << e.what() << "\n";
    return kExitInvalidConfig;
  }

  apply_thread_env();
  RunOptions opts;
  opts.omit_timing = omit_timing;
  const RunResult result = run(config, opts);
  write_outputs(config, result);
  if (config.report_path.empty()) out << result.report;
  if (result.exit_code != kExitOk) err << "run flagged: see the status section of the report\n";
  return result.exit_code;
}

}  // namespace riesz
