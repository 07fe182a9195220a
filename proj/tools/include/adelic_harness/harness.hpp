#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "adelic/adelic.hpp"
#include "adelic/feynman_kac.hpp"
#include "adelic/schwartz.hpp"

namespace adelic::harness {

using json = nlohmann::json;

inline constexpr const char* kArtifactVersion = "0.1.0";
inline constexpr const char* kStreamScheme =
    "philox4x32-10; path stream = RngStream(seed, 0).substream(path), prime stream = .substream(prime index)";

enum ExitCode : int { kOk = 0, kCheckFailure = 1, kConfigError = 2, kNumericFailure = 3 };

enum class Format { csv, json };

// Resolved experiment settings. `raw` is the merged JSON document
// (config file plus flag overrides); everything else is parsed from it.
struct ExperimentConfig {
  json raw = json::object();

  std::uint32_t p = 2;
  double b = 1.0;
  double t = 1.0;
  std::vector<double> T{1.0};
  int r = 0;
  int m_lo = -8;
  int m_hi = 8;
  std::optional<std::size_t> N;
  double eps = 1e-3;
  std::size_t epochs = 256;
  int resolution = 0;
  std::uint64_t seed = 1;
  std::size_t n_paths = 10000;
  unsigned workers = 1;
  std::string output = "-";
  Format format = Format::csv;
  std::size_t k_max = 10;
  int moments = 4;
  bool quick = false;
  std::string inject_fault;

  SimpleAdelicSB observable;
  SimplePotential potential;
  std::vector<AdelicPoint> points;
  std::vector<std::pair<AdelicPoint, AdelicPoint>> pairs;

  std::vector<std::string> fk_tasks{"expectation"};
  double fk_s = 0.5;
  std::vector<double> t_ladder{1e-1, 1e-2, 1e-3};
  ActionMode mode = ActionMode::exact;
  double h = 0.0;
};

// Worker count from ADELIC_WORKERS, else 1.
unsigned default_workers();

ExperimentConfig parse_config(const json& raw);
// Diffusion constant for single-prime commands.
double single_sigma(const ExperimentConfig& cfg);
SigmaSequence sigma_sequence(const ExperimentConfig& cfg);
// Truncation: explicit N, else `primes_upto`, else chosen from eps at the largest horizon.
std::size_t truncation(const ExperimentConfig& cfg, const SigmaSequence& sigma, double T,
                       std::size_t min_primes = 0);

SBFunction parse_sb(const json& j);
SimpleAdelicSB parse_observable(const json& j);
SimplePotential parse_potential(const json& j);
AdelicPoint parse_point(const json& j);
std::string format_padic(const PAdic& x);

using Cell = std::variant<std::monostate, long long, double, std::string, bool>;

struct Table {
  std::string schema;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

// CSV: a "#schema=<id>" line, the header, then RFC-4180 rows with %.17g
// doubles. JSON lines: a schema record, then one object per row.
std::string render(const Table& table, Format format);
std::string format_double(double x);

struct RunResult {
  Table table;
  json derived = json::object();
  int exit_code = kOk;
};

// Commands: density, exit, sample, exit-count, operator, fk, validate, bench.
RunResult run_command(const std::string& command, const ExperimentConfig& cfg);
const std::vector<std::string>& command_names();

json make_manifest(const std::string& command, const ExperimentConfig& cfg, const RunResult& result,
                   double wall_seconds);

struct CheckResult {
  std::string id;
  std::string name;
  double observed = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;
};

struct ValidationOptions {
  std::uint64_t seed = 20240601;
  unsigned workers = 1;
  bool quick = false;
  // "alpha" swaps in a wrong exit-rate constant for the analytic side.
  std::string inject_fault;
};

std::vector<CheckResult> run_validation(const ValidationOptions& options);

}  // namespace adelic::harness
