#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "adelic/error.hpp"
#include "adelic/primes.hpp"
#include "adelic_harness/harness.hpp"

namespace adelic::harness {

namespace {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

// A value that is either inline JSON or the path of a JSON file.
json inline_or_file(const json& j) {
  if (!j.is_string()) return j;
  std::ifstream in(j.get<std::string>());
  if (!in) throw ConfigError("cannot open " + j.get<std::string>());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("invalid JSON in " + j.get<std::string>() + ": " + e.what());
  }
}

std::vector<double> number_or_list(const json& j, const char* key, std::vector<double> fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) throw ConfigError(std::string("config key '") + key + "' must be a number or list");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(std::string("config key '") + key + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::uint32_t checked_prime(const json& j) {
  const auto p = j.get<std::int64_t>();
  if (p < 2 || p > static_cast<std::int64_t>(prime_table().back()) ||
      !prime_index(static_cast<std::uint32_t>(p)))
    throw ConfigError("not a prime in the table: " + std::to_string(p));
  return static_cast<std::uint32_t>(p);
}

}  // namespace

unsigned default_workers() {
  if (const char* env = std::getenv("ADELIC_WORKERS")) {
    char* end = nullptr;
    const long w = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && w >= 1 && w <= 1024) return static_cast<unsigned>(w);
  }
  return 1;
}

ExperimentConfig parse_config(const json& raw) {
  if (!raw.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  c.raw = raw;
  try {
    if (raw.contains("p")) c.p = checked_prime(raw.at("p"));
    c.b = get_or(raw, "b", c.b);
    c.t = get_or(raw, "t", c.t);
    c.T = number_or_list(raw, "T", c.T);
    c.r = get_or(raw, "r", c.r);
    c.m_lo = get_or(raw, "m_lo", c.m_lo);
    c.m_hi = get_or(raw, "m_hi", c.m_hi);
    if (raw.contains("N")) c.N = raw.at("N").get<std::size_t>();
    if (raw.contains("primes_upto")) {
      const auto P = raw.at("primes_upto").get<std::uint32_t>();
      std::size_t n = 0;
      while (n < prime_table().size() && prime_table()[n] <= P) ++n;
      if (n == 0) throw ConfigError("primes_upto below 2");
      if (c.N && *c.N != n) throw ConfigError("N and primes_upto disagree");
      c.N = n;
    }
    c.eps = get_or(raw, "eps", c.eps);
    c.epochs = get_or(raw, "epochs", c.epochs);
    c.resolution = get_or(raw, "resolution", c.resolution);
    c.seed = get_or(raw, "seed", c.seed);
    c.n_paths = get_or(raw, "n_paths", c.n_paths);
    c.workers = get_or(raw, "workers", default_workers());
    c.output = get_or(raw, "output", c.output);
    const std::string fmt = get_or<std::string>(raw, "format", "csv");
    if (fmt == "csv")
      c.format = Format::csv;
    else if (fmt == "json")
      c.format = Format::json;
    else
      throw ConfigError("format must be csv or json");
    c.k_max = get_or(raw, "k_max", c.k_max);
    c.moments = get_or(raw, "moments", c.moments);
    c.quick = get_or(raw, "quick", c.quick);
    c.inject_fault = get_or<std::string>(raw, "inject_fault", "");
    if (!c.inject_fault.empty() && c.inject_fault != "alpha")
      throw ConfigError("unknown fault '" + c.inject_fault + "' (supported: alpha)");

    if (raw.contains("observable")) c.observable = parse_observable(inline_or_file(raw.at("observable")));
    if (raw.contains("potential")) c.potential = parse_potential(inline_or_file(raw.at("potential")));
    if (raw.contains("x")) c.points.push_back(parse_point(raw.at("x")));
    if (raw.contains("points"))
      for (const auto& x : inline_or_file(raw.at("points"))) c.points.push_back(parse_point(x));
    if (raw.contains("pairs"))
      for (const auto& pr : inline_or_file(raw.at("pairs")))
        c.pairs.emplace_back(parse_point(pr.at("x")), parse_point(pr.at("y")));

    if (raw.contains("fk")) {
      const json& fk = raw.at("fk");
      if (fk.contains("tasks")) c.fk_tasks = fk.at("tasks").get<std::vector<std::string>>();
      c.fk_s = get_or(fk, "s", c.fk_s);
      c.t_ladder = number_or_list(fk, "t_ladder", c.t_ladder);
      const std::string mode = get_or<std::string>(fk, "mode", "exact");
      if (mode == "exact")
        c.mode = ActionMode::exact;
      else if (mode == "quadrature")
        c.mode = ActionMode::quadrature;
      else
        throw ConfigError("fk.mode must be exact or quadrature");
      c.h = get_or(fk, "h", c.h);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  if (!(c.b > 0.0) || !std::isfinite(c.b)) throw ConfigError("b must be positive");
  if (!(c.t > 0.0) || !std::isfinite(c.t)) throw ConfigError("t must be positive");
  for (double T : c.T)
    if (!(T >= 0.0) || !std::isfinite(T)) throw ConfigError("T values must be nonnegative");
  if (c.m_lo > c.m_hi) throw ConfigError("m_lo must not exceed m_hi");
  if (c.n_paths < 2) throw ConfigError("n_paths must be at least 2");
  if (c.workers < 1) throw ConfigError("workers must be at least 1");
  if (c.epochs < 1) throw ConfigError("epochs must be at least 1");
  if (!(c.eps > 0.0 && c.eps < 1.0)) throw ConfigError("eps must lie in (0, 1)");
  if (c.moments < 1) throw ConfigError("moments must be at least 1");
  if (c.N && (*c.N == 0 || *c.N > prime_table().size())) throw ConfigError("N outside the prime table");
  if (raw.contains("sigma")) sigma_sequence(c);
  return c;
}

double single_sigma(const ExperimentConfig& cfg) {
  if (!cfg.raw.contains("sigma")) return 1.0;
  const json& s = cfg.raw.at("sigma");
  if (s.is_number()) {
    const double v = s.get<double>();
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("sigma must be positive");
    return v;
  }
  const double v = sigma_sequence(cfg).sigma(*prime_index(cfg.p));
  if (!(v > 0.0)) throw ConfigError("sigma vanishes at the selected prime");
  return v;
}

SigmaSequence sigma_sequence(const ExperimentConfig& cfg) {
  if (!cfg.raw.contains("sigma")) return SigmaSequence::inverse_square();
  const json& s = cfg.raw.at("sigma");
  try {
    if (s.is_number()) return SigmaSequence::explicit_list({s.get<double>()});
    if (s.is_array()) return SigmaSequence::explicit_list(s.get<std::vector<double>>());
    if (s.is_object()) {
      std::vector<double> head;
      if (s.contains("explicit")) head = s.at("explicit").get<std::vector<double>>();
      for (double v : head)
        if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("explicit sigma values must be nonnegative");
      if (s.contains("C") || s.contains("s"))
        return SigmaSequence::power_law(get_or(s, "C", 1.0), get_or(s, "s", 2.0), head);
      return SigmaSequence::explicit_list(head);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("sigma: ") + e.what());
  }
  throw ConfigError("sigma must be a number, a list, or {explicit, C, s}");
}

std::size_t truncation(const ExperimentConfig& cfg, const SigmaSequence& sigma, double T, std::size_t min_primes) {
  if (cfg.N) {
    if (*cfg.N < min_primes) throw ConfigError("N is below the largest prime index in use");
    return *cfg.N;
  }
  return choose_truncation(sigma, cfg.b, T, cfg.eps, std::max<std::size_t>(1, min_primes));
}

SBFunction parse_sb(const json& j) {
  const std::uint32_t p = checked_prime(j.at("prime"));
  std::vector<SBTerm> terms;
  for (const auto& term : j.at("terms")) {
    const int r = term.at("radius_exp").get<int>();
    const int val = get_or(term, "valuation", 0);
    auto digits = get_or(term, "center_digits", std::vector<std::uint32_t>{});
    PAdic centre = PAdic::zero(p);
    if (!digits.empty()) {
      // Pad so that the centre is resolved at the ball's radius.
      const long need = static_cast<long>(-r) - val;
      if (need > static_cast<long>(digits.size())) digits.resize(static_cast<std::size_t>(need), 0);
      centre = PAdic::from_digits(p, val, digits);
    }
    std::complex<double> coeff = 1.0;
    if (term.contains("coeff")) {
      const json& cj = term.at("coeff");
      if (cj.is_number())
        coeff = cj.get<double>();
      else
        coeff = {cj.at(0).get<double>(), cj.at(1).get<double>()};
    }
    terms.push_back({Ball(centre, r), coeff});
  }
  return SBFunction(p, std::move(terms));
}

SimpleAdelicSB parse_observable(const json& j) {
  SimpleAdelicSB f;
  for (const auto& factor : j.at("factors")) {
    const SBFunction g = parse_sb(factor);
    f.set(*prime_index(g.prime()), g);
  }
  return f;
}

SimplePotential parse_potential(const json& j) {
  SimplePotential v;
  for (const auto& comp : j.at("components")) {
    const SBFunction g = parse_sb(comp);
    v.add(*prime_index(g.prime()), get_or(comp, "weight", 1.0), g);
  }
  return v;
}

AdelicPoint parse_point(const json& j) {
  AdelicPoint a;
  const json& comps = j.is_object() ? j.at("components") : j;
  for (const auto& c : comps) {
    const std::uint32_t p = checked_prime(c.at("prime"));
    const auto digits = get_or(c, "digits", std::vector<std::uint32_t>{});
    const int val = get_or(c, "valuation", 0);
    a.set(*prime_index(p), digits.empty() ? PAdic::zero(p) : PAdic::from_digits(p, val, digits));
  }
  return a;
}

std::string format_padic(const PAdic& x) { return x.to_string(); }

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw NumericError("table row width does not match the header");
  rows.push_back(std::move(row));
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // print negative zero as 0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string cell_text(const Cell& c) {
  struct V {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(const std::string& v) const { return v; }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  };
  return std::visit(V{}, c);
}

json cell_json(const Cell& c) {
  struct V {
    json operator()(std::monostate) const { return nullptr; }
    json operator()(long long v) const { return v; }
    json operator()(double v) const { return std::isfinite(v) ? json(v) : json(format_double(v)); }
    json operator()(const std::string& v) const { return v; }
    json operator()(bool v) const { return v; }
  };
  return std::visit(V{}, c);
}

}  // namespace

std::string render(const Table& table, Format format) {
  std::ostringstream out;
  if (format == Format::csv) {
    out << "#schema=" << table.schema << "\r\n";
    for (std::size_t k = 0; k < table.columns.size(); ++k) out << (k ? "," : "") << csv_field(table.columns[k]);
    out << "\r\n";
    for (const auto& row : table.rows) {
      for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << csv_field(cell_text(row[k]));
      out << "\r\n";
    }
  } else {
    out << json{{"schema", table.schema}, {"columns", table.columns}}.dump() << "\n";
    for (const auto& row : table.rows) {
      json obj = json::object();
      for (std::size_t k = 0; k < row.size(); ++k) obj[table.columns[k]] = cell_json(row[k]);
      out << obj.dump() << "\n";
    }
  }
  return out.str();
}

}  // namespace adelic::harness
