#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "adelic/error.hpp"
#include "adelic_harness/harness.hpp"

using namespace adelic;
using namespace adelic::harness;

namespace {

enum class Kind { integer, number, number_list, string, json_value, flag };

struct OptionSpec {
  const char* flag;
  const char* key;
  Kind kind;
  const char* help;
  // Commands that accept the option; empty means all.
  std::vector<std::string> commands;
};

const std::vector<OptionSpec>& option_specs() {
  static const std::vector<OptionSpec> specs{
      {"--seed", "seed", Kind::integer, "Root seed for all random streams", {}},
      {"--workers", "workers", Kind::integer, "Worker threads (default: ADELIC_WORKERS or 1)", {}},
      {"--output,-o", "output", Kind::string, "Output file, '-' for stdout", {}},
      {"--format", "format", Kind::string, "csv or json (JSON lines)", {}},
      {"--n-paths,-n", "n_paths", Kind::integer, "Monte Carlo sample count", {"exit", "sample", "exit-count", "fk", "bench"}},
      {"-p,--prime", "p", Kind::integer, "Prime for single-prime commands", {"density", "exit", "bench"}},
      {"-b", "b", Kind::number, "Vladimirov exponent b > 0", {"density", "exit", "sample", "exit-count", "operator", "fk", "bench"}},
      {"--sigma", "sigma", Kind::json_value, "Number, JSON list, or {\"explicit\":[..],\"C\":c,\"s\":s}", {"density", "exit", "sample", "exit-count", "operator", "fk", "bench"}},
      {"-t", "t", Kind::number, "Time", {"density", "fk", "bench"}},
      {"-T", "T", Kind::number_list, "Horizon(s), comma separated", {"exit", "sample", "exit-count"}},
      {"-r", "r", Kind::integer, "Ball radius exponent", {"exit"}},
      {"--m-lo", "m_lo", Kind::integer, "Smallest radius exponent", {"density"}},
      {"--m-hi", "m_hi", Kind::integer, "Largest radius exponent", {"density"}},
      {"-N", "N", Kind::integer, "Number of simulated primes", {"sample", "exit-count", "operator", "fk"}},
      {"--primes-upto", "primes_upto", Kind::integer, "Simulate all primes up to this bound", {"sample", "exit-count", "operator", "fk"}},
      {"--eps", "eps", Kind::number, "Tail certificate slack for automatic N", {"sample", "exit-count", "operator", "fk"}},
      {"--epochs", "epochs", Kind::integer, "Skeleton epochs", {"exit", "sample"}},
      {"--resolution", "resolution", Kind::integer, "Event-path resolution exponent", {"sample"}},
      {"--sample-mode", "sample_mode", Kind::string, "events or skeleton", {"sample"}},
      {"--k-max", "k_max", Kind::integer, "Largest exit count reported", {"exit-count"}},
      {"--moments", "moments", Kind::integer, "Number of exit-count moments", {"exit-count"}},
      {"--observable", "observable", Kind::json_value, "Observable JSON or file path", {"operator", "fk"}},
      {"--potential", "potential", Kind::json_value, "Potential JSON or file path", {"fk"}},
      {"--points", "points", Kind::json_value, "Point list JSON or file path", {"sample", "operator", "fk"}},
      {"--pairs", "pairs", Kind::json_value, "Endpoint pair list JSON or file path", {"fk"}},
      {"--quick", "quick", Kind::flag, "Reduced sample sizes", {"validate"}},
      {"--inject-fault", "inject_fault", Kind::string, "Deliberate fault (alpha) to exercise failure reporting", {"validate"}},
  };
  return specs;
}

struct FkFlags {
  std::string tasks, s, ladder, mode, h;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

double to_number(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

long long to_integer(const std::string& s) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty()) throw ConfigError("not an integer: '" + s + "'");
  return v;
}

json flag_value(Kind kind, const std::string& s) {
  switch (kind) {
    case Kind::integer:
      return to_integer(s);
    case Kind::number:
      return to_number(s);
    case Kind::number_list: {
      json out = json::array();
      for (const auto& item : split(s)) out.push_back(to_number(item));
      return out;
    }
    case Kind::json_value: {
      const auto first = s.find_first_not_of(" \t");
      if (first != std::string::npos && (s[first] == '{' || s[first] == '[' || s[first] == '-' ||
                                         std::isdigit(static_cast<unsigned char>(s[first]))))
        return parse_json_text(s, "option value");
      return s;
    }
    case Kind::string:
    case Kind::flag:
      return s;
  }
  return s;
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
}

struct CommandState {
  std::string config_path, manifest_in, manifest_out;
  std::map<std::string, std::string> values;
  std::map<std::string, bool> flags;
  FkFlags fk;
};

int run(const std::string& command, const CommandState& st) {
  json raw = json::object();
  if (!st.config_path.empty() && !st.manifest_in.empty())
    throw ConfigError("--config and --manifest are mutually exclusive");
  if (!st.config_path.empty()) raw = parse_json_text(read_file(st.config_path), st.config_path);
  if (!st.manifest_in.empty()) {
    const json m = parse_json_text(read_file(st.manifest_in), st.manifest_in);
    if (!m.contains("command") || !m.contains("config")) throw ConfigError("manifest lacks command or config");
    if (m.at("command").get<std::string>() != command)
      throw ConfigError("manifest was written by '" + m.at("command").get<std::string>() + "', not '" + command + "'");
    raw = m.at("config");
  }
  if (!raw.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& spec : option_specs()) {
    if (auto it = st.values.find(spec.key); it != st.values.end()) raw[spec.key] = flag_value(spec.kind, it->second);
    if (auto it = st.flags.find(spec.key); it != st.flags.end() && it->second) raw[spec.key] = true;
  }
  if (command == "fk") {
    json fk = raw.value("fk", json::object());
    if (!st.fk.tasks.empty()) fk["tasks"] = split(st.fk.tasks);
    if (!st.fk.s.empty()) fk["s"] = to_number(st.fk.s);
    if (!st.fk.ladder.empty()) fk["t_ladder"] = flag_value(Kind::number_list, st.fk.ladder);
    if (!st.fk.mode.empty()) fk["mode"] = st.fk.mode;
    if (!st.fk.h.empty()) fk["h"] = to_number(st.fk.h);
    if (!fk.empty()) raw["fk"] = fk;
  }

  const ExperimentConfig cfg = parse_config(raw);
  const auto t0 = std::chrono::steady_clock::now();
  const RunResult result = run_command(command, cfg);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_text(cfg.output, render(result.table, cfg.format));
  std::string path = st.manifest_out;
  if (path.empty()) path = cfg.output == "-" ? "adelic-" + command + ".manifest.json" : cfg.output + ".manifest.json";
  write_text(path, make_manifest(command, cfg, result, wall).dump(2) + "\n");
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adelic diffusion experiments: heat kernels, path sampling, and Feynman-Kac estimates"};
  app.require_subcommand(1);
  std::map<std::string, CommandState> states;
  const std::map<std::string, std::string> descriptions{
      {"density", "Radial heat-kernel density and shell masses at one prime"},
      {"exit", "Unit-ball exit law: analytic value against event and skeleton samplers"},
      {"sample", "Sample adelic path bundles and print their events"},
      {"exit-count", "Law of the number of primes whose component leaves Z_p"},
      {"operator", "Adelic Vladimirov operator and multiplier on simple observables"},
      {"fk", "Feynman-Kac expectation, kernel, semigroup and generator checks"},
      {"validate", "Run the built-in validation suite"},
      {"bench", "Wall-clock throughput of the main samplers"},
  };
  for (const std::string& name : command_names()) {
    CommandState& st = states[name];
    CLI::App* sub = app.add_subcommand(name, descriptions.at(name));
    sub->add_option("--config,-c", st.config_path, "JSON config file");
    sub->add_option("--manifest", st.manifest_in, "Re-run the config recorded in a manifest");
    sub->add_option("--manifest-out", st.manifest_out, "Manifest path (default: <output>.manifest.json)");
    for (const auto& spec : option_specs()) {
      if (!spec.commands.empty() &&
          std::find(spec.commands.begin(), spec.commands.end(), name) == spec.commands.end())
        continue;
      if (spec.kind == Kind::flag) {
        st.flags[spec.key] = false;
        sub->add_flag(spec.flag, st.flags[spec.key], spec.help);
      } else {
        sub->add_option_function<std::string>(
            spec.flag, [&st, key = std::string(spec.key)](const std::string& v) { st.values[key] = v; }, spec.help);
      }
    }
    if (name == "fk") {
      sub->add_option("--tasks", st.fk.tasks,
                      "Comma-separated: expectation,kernel,kernel-symmetry,product,semigroup,generator");
      sub->add_option("--fk-s", st.fk.s, "Extra time s for the semigroup check");
      sub->add_option("--t-ladder", st.fk.ladder, "Generator time ladder, comma separated");
      sub->add_option("--mode", st.fk.mode, "Action integral: exact or quadrature");
      sub->add_option("--fk-h", st.fk.h, "Quadrature step (0 means t/1024)");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, states.at(command));
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumericFailure;
  } catch (const PrecisionError& e) {
    std::cerr << "precision failure: " << e.what() << "\n";
    return kNumericFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericFailure;
  }
}
