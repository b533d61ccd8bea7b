#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "sigdiag/parser.hpp"
#include "sigdiag/report.hpp"
#include "sigdiag/testkit.hpp"

namespace {

using namespace sigdiag;

constexpr int kExitSatisfied = 0;
constexpr int kExitViolated = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNoCause = 3;
constexpr int kExitTimeout = 4;

struct CommonOpts {
  double timeout_s = 60.0;
  std::string interpolation = "linear";
  double epsilon = 0.0;
  std::string output = "-";
  unsigned jobs = 1;
};

double env_epsilon() {
  const char* raw = std::getenv("SIGDIAG_EPSILON");
  if (!raw) return 0.0;
  try {
    return std::stod(raw);
  } catch (...) {
    return 0.0;
  }
}

int write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write '" << path << "'\n";
    return kExitUsage;
  }
  out << text;
  return 0;
}

RunConfig make_config(const CommonOpts& opts) {
  RunConfig config;
  if (opts.timeout_s <= 0)
    throw CLI::ValidationError("--timeout", "timeout must be positive");
  config.timeout = std::chrono::duration_cast<std::chrono::nanoseconds>(
      std::chrono::duration<double>(opts.timeout_s));
  auto policy = interpolation_from_name(opts.interpolation);
  if (!policy)
    throw CLI::ValidationError("--interpolation",
                               "expected linear, previous-value or nearest");
  config.interpolation = *policy;
  config.epsilon = opts.epsilon;
  return config;
}

int cmd_check(const std::string& trace_path, const std::string& property_path,
              const CommonOpts& opts) {
  RunConfig config = make_config(opts);
  Trace raw = load_csv_file(trace_path);
  Property property = load_property_file(property_path);
  Trace prepared = prepare(raw, used_variables(property), config.interpolation);
  auto started = std::chrono::steady_clock::now();
  Verdict verdict = eval_property(prepared, property, config.eval_options());
  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - started);
  Json doc = check_document(trace_path, property_path, verdict.holds, elapsed);
  int rc = write_output(opts.output, render(doc));
  if (rc != 0) return rc;
  return verdict.holds ? kExitSatisfied : kExitViolated;
}

int cmd_diagnose(const std::string& trace_path, const std::string& property_path,
                 const CommonOpts& opts) {
  RunConfig config = make_config(opts);
  Trace raw = load_csv_file(trace_path);
  Property property = load_property_file(property_path);
  Trace prepared = prepare(raw, used_variables(property), config.interpolation);
  DiagnosisReport report = diagnose(prepared, property, config);
  Json doc = diagnose_document(trace_path, property_path, report);
  int rc = write_output(opts.output, render(doc));
  if (rc != 0) return rc;
  if (report.timed_out) return kExitTimeout;
  if (report.property_holds) return kExitSatisfied;
  bool any_diagnosis = false;
  bool any_violated = false;
  for (const auto& outcome : report.atoms) {
    if (!outcome.holds) any_violated = true;
    if (outcome.diagnosis) any_diagnosis = true;
  }
  if (any_violated && !any_diagnosis) return kExitNoCause;
  return kExitSatisfied;
}

int cmd_batch(const std::string& manifest_path, const CommonOpts& opts) {
  RunConfig config = make_config(opts);
  std::ifstream in(manifest_path);
  if (!in) {
    std::cerr << "error: cannot open manifest '" << manifest_path << "'\n";
    return kExitUsage;
  }
  std::vector<BatchItem> items;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      std::cerr << "error: manifest line is not 'trace<TAB>property': " << line
                << "\n";
      return kExitUsage;
    }
    items.push_back({line.substr(0, tab), line.substr(tab + 1)});
  }
  auto results = run_batch(items, config, opts.jobs);
  Json doc = batch_document(manifest_path, results);
  return write_output(opts.output, render(doc));
}

struct GenerateOpts {
  std::string shape = "constant";
  std::string cause;
  int records = 10;
  uint64_t seed = 0;
  int spikes = 1;
  std::string out = "-";
  std::string property_out;
};

int cmd_generate(const GenerateOpts& g) {
  GeneratorSpec spec;
  spec.n_records = g.records;
  spec.seed = g.seed;
  spec.n_spikes = g.spikes;
  std::string property_text;
  if (!g.cause.empty()) {
    auto id = cause_from_string(g.cause);
    if (!id) {
      std::cerr << "error: unknown cause id '" << g.cause << "'\n";
      return kExitUsage;
    }
    spec.shape = GeneratorSpec::Shape::cause_seeded;
    spec.cause = *id;
    property_text = cause_property_text(*id) + "\n";
  } else {
    auto shape = shape_from_name(g.shape);
    if (!shape || *shape == GeneratorSpec::Shape::cause_seeded) {
      std::cerr << "error: unknown shape '" << g.shape << "'\n";
      return kExitUsage;
    }
    spec.shape = *shape;
  }
  Trace trace = generate_trace(spec);
  int rc = write_output(g.out, serialize_csv(trace));
  if (rc != 0) return rc;
  if (!g.property_out.empty() && !property_text.empty())
    return write_output(g.property_out, property_text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Signal trace checking and violation diagnostics"};
  app.require_subcommand(1);

  CommonOpts opts;
  opts.epsilon = env_epsilon();
  std::string trace_path, property_path, manifest_path;

  auto add_common = [&](CLI::App* cmd, bool with_timeout) {
    if (with_timeout)
      cmd->add_option("--timeout", opts.timeout_s, "time budget in seconds");
    cmd->add_option("--interpolation", opts.interpolation,
                    "linear | previous-value | nearest");
    cmd->add_option("--epsilon", opts.epsilon,
                    "absolute tolerance for = and <> (env SIGDIAG_EPSILON)");
    cmd->add_option("--output", opts.output, "output path ('-' for stdout)");
  };

  CLI::App* check = app.add_subcommand("check", "evaluate a property");
  check->add_option("trace", trace_path)->required();
  check->add_option("property", property_path)->required();
  add_common(check, false);

  CLI::App* diag = app.add_subcommand("diagnose", "explain a violation");
  diag->add_option("trace", trace_path)->required();
  diag->add_option("property", property_path)->required();
  add_common(diag, true);

  CLI::App* batch = app.add_subcommand("batch", "run trace/property pairs");
  batch->add_option("manifest", manifest_path)->required();
  batch->add_option("--jobs", opts.jobs, "parallel workers");
  add_common(batch, true);

  GenerateOpts gen;
  CLI::App* generate = app.add_subcommand("generate", "emit a synthetic trace");
  generate->add_option("--shape", gen.shape,
                       "constant | increasing | decreasing | single-extremum | "
                       "two-extrema | spiky | oscillating");
  generate->add_option("--cause", gen.cause,
                       "cause id, e.g. c_spike_3 (overrides --shape)");
  generate->add_option("--records", gen.records, "number of records");
  generate->add_option("--seed", gen.seed, "generator seed");
  generate->add_option("--spikes", gen.spikes, "spike/cycle count");
  generate->add_option("--out", gen.out, "trace output path");
  generate->add_option("--property-out", gen.property_out,
                       "write the matching property file (cause mode)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (check->parsed()) return cmd_check(trace_path, property_path, opts);
    if (diag->parsed()) return cmd_diagnose(trace_path, property_path, opts);
    if (batch->parsed()) return cmd_batch(manifest_path, opts);
    if (generate->parsed()) return cmd_generate(gen);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
