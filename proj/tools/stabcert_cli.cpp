// stabcert command line: thin orchestration over the C API in stabcert.h.
// Subcommands read a flat "key = value" config file (plus a few overriding
// flags), call the library, and write a JSON report (or CSV table for bound
// sweeps) with the effective config echoed inside, so any emitted file can
// be reproduced from its own contents plus the binary.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "stabcert.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitUsage = 2;    // bad invocation or config
constexpr int kExitFailure = 3;  // the library reported an error

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] void usage_fail(const std::string& msg) { throw UsageError(msg); }

[[noreturn]] void run_fail(const std::string& msg) { throw RunError(msg); }

void check(stab_status status, const std::string& what) {
  if (status != STAB_OK)
    run_fail(what + ": " + stab_status_name(status) + ": " + stab_last_error());
}

// ---- config -----------------------------------------------------------

using Config = std::map<std::string, std::string>;

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && (s[a] == ' ' || s[a] == '\t')) ++a;
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r'))
    --b;
  return s.substr(a, b - a);
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) usage_fail("cannot open config file '" + path + "'");
  Config out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      usage_fail(path + ":" + std::to_string(line_no) +
                 ": expected 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      usage_fail(path + ":" + std::to_string(line_no) + ": empty key");
    if (out.count(key))
      usage_fail(path + ":" + std::to_string(line_no) + ": duplicate key '" +
                 key + "'");
    out[key] = value;
  }
  return out;
}

class Settings {
 public:
  Settings(Config config, const std::string& command)
      : config_(std::move(config)), command_(command) {}

  bool has(const std::string& key) const { return config_.count(key) > 0; }

  const std::string& str(const std::string& key) const {
    const auto it = config_.find(key);
    if (it == config_.end())
      usage_fail("config: missing required key '" + key + "' for command '" +
                 command_ + "'");
    return it->second;
  }

  std::string str_or(const std::string& key, const std::string& fallback) const {
    const auto it = config_.find(key);
    return it == config_.end() ? fallback : it->second;
  }

  double number(const std::string& key) const { return to_number(key, str(key)); }

  double number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  std::int64_t integer(const std::string& key) const {
    const double v = number(key);
    const std::int64_t i = static_cast<std::int64_t>(v);
    if (static_cast<double>(i) != v)
      usage_fail("config: key '" + key + "' must be an integer");
    return i;
  }

  std::int64_t integer_or(const std::string& key, std::int64_t fallback) const {
    return has(key) ? integer(key) : fallback;
  }

  bool flag_or(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string& v = str(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    usage_fail("config: key '" + key + "' must be a boolean (true/false)");
  }

  std::uint64_t seed() const {
    const std::string& v = str("seed");  // no default: runs must be pinned
    std::uint64_t s = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), s);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
      usage_fail("config: key 'seed' must be an unsigned 64-bit integer");
    return s;
  }

  // JSON object of parameters under "<prefix>." keys, e.g. algorithm.k = 3.
  std::string params_json(const std::string& prefix) const {
    Json j = Json::object();
    const std::string want = prefix + ".";
    for (const auto& [key, value] : config_) {
      if (key.rfind(want, 0) != 0) continue;
      j[key.substr(want.size())] = to_number(key, value);
    }
    return j.dump();
  }

  void set(const std::string& key, const std::string& value) {
    config_[key] = value;
  }
  void erase(const std::string& key) { config_.erase(key); }

  // Echo written into every emitted file: the experiment definition only.
  // "out" and "workers" change where/how the run executes, never what it
  // computes, and are left out so outputs stay byte-identical across them.
  Json echo() const {
    Json j = Json::object();
    for (const auto& [key, value] : config_) {
      if (key == "out" || key == "workers") continue;
      j[key] = value;
    }
    return j;
  }

  const std::string& command() const { return command_; }

 private:
  static double to_number(const std::string& key, const std::string& value) {
    double v = 0.0;
    const auto res =
        std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size())
      usage_fail("config: key '" + key + "' has non-numeric value '" + value +
                 "'");
    return v;
  }

  Config config_;
  std::string command_;
};

// ---- handles with RAII ------------------------------------------------

template <class T, void (*FreeFn)(T*)>
struct Handle {
  T* ptr = nullptr;
  ~Handle() { FreeFn(ptr); }
  T** slot() { return &ptr; }
  T* get() const { return ptr; }
};

using LabeledHandle = Handle<stab_labeled, stab_labeled_free>;
using UnlabeledHandle = Handle<stab_unlabeled, stab_unlabeled_free>;
using AlgorithmHandle = Handle<stab_algorithm, stab_algorithm_free>;
using SamplerHandle = Handle<stab_sampler, stab_sampler_free>;
using ReportHandle = Handle<stab_report, stab_report_free>;

void open_algorithm(const Settings& s, AlgorithmHandle* out) {
  check(stab_algorithm_builtin(s.str("algorithm").c_str(),
                               s.params_json("algorithm").c_str(), out->slot()),
        "algorithm");
}

void open_sampler(const Settings& s, SamplerHandle* out) {
  check(stab_sampler_builtin(s.str("sampler").c_str(),
                             s.params_json("sampler").c_str(), out->slot()),
        "sampler");
}

void open_labeled(const Settings& s, LabeledHandle* out) {
  check(stab_labeled_load_csv(s.str("labeled").c_str(), out->slot()),
        "labeled data");
}

// nullptr when no unlabeled file is configured.
void open_unlabeled(const Settings& s, UnlabeledHandle* out) {
  if (!s.has("unlabeled")) return;
  check(stab_unlabeled_load_csv(s.str("unlabeled").c_str(), out->slot()),
        "unlabeled data");
}

int workers_of(const Settings& s) {
  const std::int64_t w = s.integer_or("workers", 1);
  if (w < 1) usage_fail("config: 'workers' must be >= 1");
  return static_cast<int>(w);
}

// ---- output -----------------------------------------------------------

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_output(const Settings& s, const std::string& text) {
  if (!s.has("out")) {
    std::cout << text;
    return;
  }
  const std::string path = s.str("out");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) run_fail("cannot open output file '" + path + "'");
  out << text;
  out.flush();
  if (!out) run_fail("write error on '" + path + "'");
}

// Standard path: take the library's JSON report, splice in the config echo,
// write it out.
void finish_report(const Settings& s, const ReportHandle& report) {
  Json j = Json::parse(stab_report_json(report.get()));
  j["config"] = s.echo();
  write_output(s, j.dump(2) + "\n");
}

// ---- commands ---------------------------------------------------------

void cmd_test(const Settings& s) {
  AlgorithmHandle algorithm;
  LabeledHandle labeled;
  UnlabeledHandle unlabeled;
  open_algorithm(s, &algorithm);
  open_labeled(s, &labeled);
  open_unlabeled(s, &unlabeled);
  ReportHandle report;
  check(stab_run_test(algorithm.get(), labeled.get(), unlabeled.get(),
                      s.number("epsilon"), s.number("delta"), s.number("alpha"),
                      s.integer("n"), s.seed(),
                      s.str_or("seed_mode", "same").c_str(),
                      s.flag_or("shuffle", false) ? 1 : 0, workers_of(s),
                      report.slot()),
        "test");
  finish_report(s, report);
}

void cmd_estimate(const Settings& s) {
  AlgorithmHandle algorithm;
  LabeledHandle labeled;
  UnlabeledHandle unlabeled;
  open_algorithm(s, &algorithm);
  open_labeled(s, &labeled);
  open_unlabeled(s, &unlabeled);
  const std::string target = s.str("target");
  ReportHandle report;
  if (target == "delta") {
    check(stab_run_estimate_delta(
              algorithm.get(), labeled.get(), unlabeled.get(),
              s.number("epsilon"), s.number("alpha"), s.integer("n"), s.seed(),
              s.str_or("seed_mode", "same").c_str(),
              s.str_or("method", "randomized").c_str(),
              s.flag_or("shuffle", false) ? 1 : 0, workers_of(s),
              report.slot()),
          "estimate");
  } else if (target == "eps") {
    if (s.has("method"))
      usage_fail("config: 'method' applies only to target = delta");
    check(stab_run_estimate_eps(algorithm.get(), labeled.get(),
                                unlabeled.get(), s.number("delta"),
                                s.number("alpha"), s.integer("n"), s.seed(),
                                s.str_or("seed_mode", "same").c_str(),
                                s.flag_or("shuffle", false) ? 1 : 0,
                                workers_of(s), report.slot()),
          "estimate");
  } else {
    usage_fail("config: 'target' must be delta or eps");
  }
  finish_report(s, report);
}

void cmd_oracle(const Settings& s) {
  AlgorithmHandle algorithm;
  SamplerHandle sampler;
  open_algorithm(s, &algorithm);
  open_sampler(s, &sampler);
  ReportHandle report;
  check(stab_run_oracle(algorithm.get(), sampler.get(), s.integer("n"),
                        s.number("epsilon"),
                        s.str_or("seed_mode", "same").c_str(),
                        s.integer("replicates"), s.seed(), workers_of(s),
                        report.slot()),
        "oracle");
  finish_report(s, report);
}

void cmd_power(const Settings& s) {
  AlgorithmHandle algorithm;
  SamplerHandle sampler;
  open_algorithm(s, &algorithm);
  open_sampler(s, &sampler);
  const bool have_delta_star = s.has("delta_star");
  ReportHandle report;
  check(stab_run_power(algorithm.get(), sampler.get(), s.integer("n_labeled"),
                       s.integer("n_unlabeled"), s.number("epsilon"),
                       s.number("delta"), s.number("alpha"), s.integer("n"),
                       s.str_or("seed_mode", "same").c_str(),
                       s.integer("replicates"), s.seed(), workers_of(s),
                       have_delta_star ? 1 : 0,
                       have_delta_star ? s.number("delta_star") : 0.0,
                       report.slot()),
        "power");
  finish_report(s, report);
}

// bound: one evaluation (JSON), a comparison against the achieved
// acceptance (compare = true), or a CSV sweep over n_labeled
// (sweep_from/sweep_to).
void cmd_bound(const Settings& s) {
  const std::string kind = s.str_or("kind", "full_black_box");
  const double alpha = s.number("alpha");
  const double delta = s.number("delta");
  const double delta_star = s.number("delta_star");
  const std::int64_t n = s.integer("n");

  if (s.has("sweep_from") || s.has("sweep_to")) {
    const std::int64_t from = s.integer("sweep_from");
    const std::int64_t to = s.integer("sweep_to");
    if (from < 0 || to < from) usage_fail("config: bad sweep range");
    const std::int64_t n_unlabeled = s.integer_or("n_unlabeled", 0);
    std::string text;
    {
      std::ostringstream head;
      const Json echo = s.echo();
      for (const auto& [key, value] : echo.items())
        head << "# " << key << " = " << value.get<std::string>() << "\n";
      head << "n_labeled,n_unlabeled,exponent,value,capped\n";
      text = head.str();
    }
    for (std::int64_t nl = from; nl <= to; ++nl) {
      ReportHandle report;
      check(stab_power_bound(kind.c_str(), n, nl, n_unlabeled, alpha, delta,
                             delta_star, report.slot()),
            "bound");
      const Json j = Json::parse(stab_report_json(report.get()));
      text += std::to_string(nl) + "," + std::to_string(n_unlabeled) + "," +
              j["exponent"]["rational"].get<std::string>() + "," +
              format_double(j["value"].get<double>()) + "," +
              (j["capped"].get<bool>() ? "1" : "0") + "\n";
    }
    write_output(s, text);
    return;
  }

  ReportHandle report;
  if (s.flag_or("compare", false)) {
    check(stab_bound_comparison(n, s.integer("n_labeled"),
                                s.integer("n_unlabeled"), alpha, delta,
                                delta_star, report.slot()),
          "bound");
  } else {
    check(stab_power_bound(kind.c_str(), n, s.integer("n_labeled"),
                           s.integer("n_unlabeled"), alpha, delta, delta_star,
                           report.slot()),
          "bound");
  }
  finish_report(s, report);
}

void cmd_adversary(const Settings& s) {
  const std::string demo = s.str("demo");
  SamplerHandle sampler;
  open_sampler(s, &sampler);
  ReportHandle report;
  if (demo == "instability") {
    AlgorithmHandle algorithm;
    open_algorithm(s, &algorithm);
    check(stab_run_adversary_instability(
              algorithm.get(), sampler.get(), s.str("sentinel").c_str(),
              s.integer("n"), s.number("c"), s.number("epsilon"),
              s.number_or("base_rate", 0.0), s.integer("replicates"), s.seed(),
              workers_of(s), report.slot()),
          "adversary");
  } else if (demo == "coupling") {
    check(stab_run_adversary_coupling(
              sampler.get(), s.str("sentinel").c_str(), s.integer("n_labeled"),
              s.integer("n_unlabeled"), s.number("c"), s.integer("replicates"),
              s.seed(), workers_of(s), report.slot()),
          "adversary");
  } else {
    usage_fail("config: 'demo' must be instability or coupling");
  }
  finish_report(s, report);
}

void cmd_simulate(const Settings& s) {
  // Resampling runs carry no guarantee; refuse any attempt to dress one up
  // as a certificate.
  if (s.flag_or("certify", false))
    usage_fail(
        "simulate produces a heuristic diagnostic, not a certificate; "
        "remove 'certify' from the config (use the 'test' command for "
        "certification)");
  AlgorithmHandle algorithm;
  LabeledHandle labeled;
  UnlabeledHandle unlabeled;
  open_algorithm(s, &algorithm);
  open_labeled(s, &labeled);
  open_unlabeled(s, &unlabeled);
  ReportHandle report;
  check(stab_run_heuristic(algorithm.get(), labeled.get(), unlabeled.get(),
                           s.str("method").c_str(), s.integer("n"),
                           s.integer("replicates"), s.number("epsilon"),
                           s.str_or("smoothing", "none").c_str(),
                           s.number_or("bandwidth", 0.0),
                           s.str_or("seed_mode", "same").c_str(), s.seed(),
                           workers_of(s), report.slot()),
        "simulate");
  finish_report(s, report);
}

// ---- main -------------------------------------------------------------

struct CommonFlags {
  std::string config_path;
  std::string seed;
  std::string out;
  std::string workers;
};

void add_common(CLI::App* sub, CommonFlags* flags) {
  sub->add_option("--config", flags->config_path,
                  "flat key = value config file");
  sub->add_option("--seed", flags->seed,
                  "master seed (unsigned 64-bit; overrides the config)");
  sub->add_option("--out", flags->out,
                  "output path (overrides the config; default stdout)");
  sub->add_option("--workers", flags->workers,
                  "worker threads (overrides the config)");
}

Settings make_settings(const CommonFlags& flags, const std::string& command) {
  Config config;
  if (!flags.config_path.empty()) config = load_config(flags.config_path);
  Settings s(std::move(config), command);
  if (!flags.seed.empty()) s.set("seed", flags.seed);
  if (!flags.out.empty()) s.set("out", flags.out);
  if (!flags.workers.empty()) s.set("workers", flags.workers);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certification toolkit for black-box algorithmic stability"};
  app.set_version_flag("--version", std::string("stabcert ") + stab_version());
  app.require_subcommand(1);

  struct Command {
    const char* name;
    const char* help;
    void (*run)(const Settings&);
  };
  const std::vector<Command> commands = {
      {"test", "run the exact certification test on a data file", cmd_test},
      {"estimate", "confidence bound for delta or eps from a data file",
       cmd_estimate},
      {"power", "Monte Carlo acceptance rate against a known distribution",
       cmd_power},
      {"bound", "universal acceptance ceilings (single, compare or sweep)",
       cmd_bound},
      {"oracle", "Monte Carlo estimate of the true instability rate",
       cmd_oracle},
      {"adversary", "spiked-pair demonstrations of the ceilings",
       cmd_adversary},
      {"simulate", "resampling heuristics (never a certificate)",
       cmd_simulate},
  };

  std::map<std::string, CommonFlags> flags;
  std::map<std::string, const Command*> by_name;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common(sub, &flags[c.name]);
    by_name[c.name] = &c;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version report success; anything else is a usage error.
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  const std::string chosen = app.get_subcommands().front()->get_name();
  try {
    const Settings s = make_settings(flags[chosen], chosen);
    by_name[chosen]->run(s);
  } catch (const UsageError& e) {
    std::cerr << "stabcert " << chosen << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const RunError& e) {
    std::cerr << "stabcert " << chosen << ": " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "stabcert " << chosen << ": " << e.what() << "\n";
    return kExitFailure;
  }
  return 0;
}
