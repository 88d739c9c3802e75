// bnpmle — command line front end to the boosted density estimation library.
//
// Every run that writes results also writes a JSON manifest beside its
// primary output, recording the resolved configuration, seeds, outputs, and
// FNV-1a digests of the inputs. `bnpmle replay` re-executes a recorded run
// from its manifest (after verifying the digests) with outputs redirected
// into a fresh directory, so any result in a report can be regenerated.

#include <atomic>
#include <chrono>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "boostnpmle.h"

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr int kExitUsage = 1;    // command line could not be parsed
constexpr int kExitData = 2;     // bad input data, files, or configuration
constexpr int kExitNumeric = 3;  // numerical failure during the run

[[noreturn]] void die_msg(const std::string& message, int code = kExitData) {
  std::cerr << "bnpmle: " << message << '\n';
  std::exit(code);
}

void check(bnp_status status) {
  if (status == BNP_OK) return;
  const int code = (status == BNP_ERR_NUMERIC || status == BNP_ERR_INTERNAL)
                       ? kExitNumeric
                       : kExitData;
  die_msg(std::string(bnp_status_name(status)) + ": " + bnp_last_error(), code);
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

// FNV-1a (64-bit) over a file's bytes. Recorded in manifests; replay refuses
// to run against inputs whose digest no longer matches.
std::string fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) die_msg("cannot open '" + path + "'");
  std::uint64_t h = 1469598103934665603ull;
  char buf[1 << 16];
  do {
    in.read(buf, sizeof buf);
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
  } while (in);
  char out[2 + 16 + 1];
  std::snprintf(out, sizeof out, "0x%016" PRIx64, h);
  return out;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("BNPMLE_SEED");
  if (!env) return 1;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0') {
    die_msg("BNPMLE_SEED is not an unsigned integer");
  }
  return v;
}

//! "results/foo.csv" + "-aggregate.csv" -> "results/foo-aggregate.csv".
std::string stem_plus(const std::string& path, const std::string& suffix) {
  const fs::path p(path);
  return (p.parent_path() / p.stem()).string() + suffix;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) die_msg("cannot write '" + path + "'");
  return out;
}

void write_manifest(const std::string& beside, const std::string& command,
                    ordered_json arguments,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs,
                    double duration_ms) {
  ordered_json m;
  m["tool"] = "bnpmle";
  m["version"] = bnp_version();
  m["command"] = command;
  m["arguments"] = std::move(arguments);
  ordered_json ins = ordered_json::array();
  for (const std::string& p : inputs) {
    ins.push_back({{"path", p}, {"fnv1a64", fnv1a64_file(p)}});
  }
  m["inputs"] = std::move(ins);
  m["outputs"] = outputs;
  m["duration_ms"] = duration_ms;
  auto out = open_output(beside + ".manifest.json");
  out << m.dump(2) << '\n';
}

/* ------------------------------------------------ learner option plumbing */

struct LearnerOptions {
  std::string learner = "spline";
  double df = 3.0;
  double ridge_lambda = 1e4;
  double bandwidth = 0.0;
  int minsplit = 30;
  int iterations = 200;
};

void add_learner_flags(CLI::App* cmd, LearnerOptions& opt,
                       bool with_iterations) {
  cmd->add_option("--learner", opt.learner,
                  "Weak learner family: spline, kernel, or cart")
      ->check(CLI::IsMember({"spline", "kernel", "cart"}))
      ->capture_default_str();
  cmd->add_option("--df", opt.df, "Spline: target degrees of freedom")
      ->capture_default_str();
  cmd->add_option("--lambda", opt.ridge_lambda, "Kernel: ridge penalty")
      ->capture_default_str();
  cmd->add_option("--bandwidth", opt.bandwidth,
                  "Kernel: Gaussian bandwidth (0 = Silverman's rule)")
      ->capture_default_str();
  cmd->add_option("--minsplit", opt.minsplit,
                  "Tree: minimum node size to attempt a split")
      ->capture_default_str();
  if (with_iterations) {
    cmd->add_option("--iterations", opt.iterations, "Boosting rounds")
        ->capture_default_str();
  }
}

bnp_fit_config to_config(const LearnerOptions& opt, bool record_trace) {
  bnp_fit_config c;
  bnp_fit_config_init(&c);
  c.learner = opt.learner == "kernel" ? BNP_LEARNER_KERNEL
              : opt.learner == "cart" ? BNP_LEARNER_CART
                                      : BNP_LEARNER_SPLINE;
  c.df = opt.df;
  c.ridge_lambda = opt.ridge_lambda;
  c.bandwidth = opt.bandwidth;
  c.minsplit = opt.minsplit;
  c.iterations = opt.iterations;
  c.record_trace = record_trace ? 1 : 0;
  return c;
}

ordered_json learner_to_json(const LearnerOptions& opt) {
  return {{"learner", opt.learner},
          {"df", opt.df},
          {"ridge_lambda", opt.ridge_lambda},
          {"bandwidth", opt.bandwidth},
          {"minsplit", opt.minsplit},
          {"iterations", opt.iterations}};
}

LearnerOptions learner_from_json(const ordered_json& j) {
  LearnerOptions o;
  o.learner = j.at("learner").get<std::string>();
  o.df = j.at("df").get<double>();
  o.ridge_lambda = j.at("ridge_lambda").get<double>();
  o.bandwidth = j.at("bandwidth").get<double>();
  o.minsplit = j.at("minsplit").get<int>();
  o.iterations = j.at("iterations").get<int>();
  return o;
}

std::vector<std::size_t> parse_prefix_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string field = text.substr(pos, comma - pos);
    char* end = nullptr;
    const unsigned long long v = std::strtoull(field.c_str(), &end, 10);
    if (field.empty() || end != field.c_str() + field.size() || v == 0) {
      die_msg("bad iteration list entry '" + field + "'");
    }
    out.push_back(static_cast<std::size_t>(v));
    pos = comma + 1;
  }
  return out;
}

/* -------------------------------------------------------------------- fit */

struct FitOptions {
  std::string input;
  bool header = false;
  LearnerOptions learner;
  bool trace = false;
  std::string output;
};

void run_fit(const FitOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  bnp_samples* samples = nullptr;
  check(bnp_samples_from_csv(opt.input.c_str(), opt.header ? 1 : 0, &samples));
  const bnp_fit_config config = to_config(opt.learner, opt.trace);
  bnp_model* model = nullptr;
  check(bnp_fit(samples, &config, &model));
  check(bnp_model_save(model, opt.output.c_str()));
  std::vector<std::string> outputs{opt.output};

  if (opt.trace) {
    const std::string trace_path = stem_plus(opt.output, "-trace.csv");
    auto out = open_output(trace_path);
    out << "iteration,log_likelihood,surrogate,normalizer\n";
    for (std::size_t i = 0; i < bnp_model_trace_size(model); ++i) {
      double ll = 0, sg = 0, z = 0;
      check(bnp_model_trace_entry(model, i, &ll, &sg, &z));
      out << i << ',' << fmt17(ll) << ',' << fmt17(sg) << ',' << fmt17(z)
          << '\n';
    }
    outputs.push_back(trace_path);
  }

  double ll = 0, sg = 0, lo = 0, hi = 0;
  check(bnp_model_log_likelihood(model, &ll));
  check(bnp_model_surrogate(model, &sg));
  check(bnp_model_support(model, &lo, &hi));
  std::cout << "fitted " << opt.learner.learner << " ensemble: "
            << bnp_model_knot_count(model) << " knots on [" << fmt17(lo)
            << ", " << fmt17(hi) << "], " << bnp_model_iterations(model)
            << " iterations\n"
            << "log-likelihood " << fmt17(ll) << ", surrogate " << fmt17(sg)
            << ", normalizer " << fmt17(bnp_model_normalizer(model)) << '\n';

  ordered_json args;
  args["input"] = opt.input;
  args["has_header"] = opt.header;
  args.update(learner_to_json(opt.learner));
  args["record_trace"] = opt.trace;
  args["output"] = opt.output;
  args["resolved_bandwidth"] = bnp_model_bandwidth(model);
  write_manifest(opt.output, "fit", std::move(args), {opt.input}, outputs,
                 ms_since(t0));
  bnp_model_destroy(model);
  bnp_samples_destroy(samples);
}

/* ----------------------------------------------------------- density-grid */

struct DensityGridOptions {
  std::string model;
  std::size_t points = 512;
  std::optional<double> from, to;
  std::string output;
};

void run_density_grid(const DensityGridOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  bnp_model* model = nullptr;
  check(bnp_model_load(opt.model.c_str(), &model));
  double lo = 0, hi = 0;
  check(bnp_model_support(model, &lo, &hi));
  const double from = opt.from.value_or(lo);
  const double to = opt.to.value_or(hi);
  if (!(to > from)) die_msg("--to must exceed --from");
  if (opt.points < 2) die_msg("--points must be at least 2");

  std::vector<double> xs(opt.points);
  const double step = (to - from) / static_cast<double>(opt.points - 1);
  for (std::size_t i = 0; i < opt.points; ++i) {
    xs[i] = from + static_cast<double>(i) * step;
  }
  xs.back() = to;
  std::vector<double> density(opt.points);
  check(bnp_model_eval_grid(model, xs.data(), xs.size(), density.data()));

  auto out = open_output(opt.output);
  out << "x,f,density\n";
  for (std::size_t i = 0; i < opt.points; ++i) {
    double f = 0;
    check(bnp_model_log_potential(model, xs[i], &f));
    out << fmt17(xs[i]) << ',' << fmt17(f) << ',' << fmt17(density[i]) << '\n';
  }

  ordered_json args;
  args["model"] = opt.model;
  args["points"] = opt.points;
  args["from"] = opt.from ? ordered_json(*opt.from) : ordered_json(nullptr);
  args["to"] = opt.to ? ordered_json(*opt.to) : ordered_json(nullptr);
  args["output"] = opt.output;
  write_manifest(opt.output, "density-grid", std::move(args), {opt.model},
                 {opt.output}, ms_since(t0));
  bnp_model_destroy(model);
}

/* --------------------------------------------------------------- simulate */

struct SimulateOptions {
  std::string distribution;
  std::size_t count = 0;
  std::uint64_t seed = 1;
  std::string output;
};

void run_simulate(const SimulateOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  bnp_samples* samples = nullptr;
  check(bnp_samples_simulate(opt.distribution.c_str(), opt.count, opt.seed,
                             &samples));
  std::vector<double> values(bnp_samples_count(samples));
  check(bnp_samples_copy(samples, values.data()));
  auto out = open_output(opt.output);
  for (double v : values) out << fmt17(v) << '\n';

  ordered_json args;
  args["distribution"] = opt.distribution;
  args["count"] = opt.count;
  args["seed"] = opt.seed;
  args["output"] = opt.output;
  write_manifest(opt.output, "simulate", std::move(args), {}, {opt.output},
                 ms_since(t0));
  bnp_samples_destroy(samples);
}

/* --------------------------------------------------------------- kl-sweep */

struct KlSweepOptions {
  std::string betas = "0,0.25,0.5,0.75,1";
  std::string m_values = "1,10,100,1000";
  std::size_t sample_size = 500;
  LearnerOptions learner;
  std::size_t replicates = 10;
  std::uint64_t seed = 1;
  std::size_t grid_points = 2001;
  double mu1 = 2.5;
  double mu2 = -2.5;
  double variance = 2.0;
  std::size_t workers = 1;
  std::string output;
};

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string field = text.substr(pos, comma - pos);
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size()) {
      die_msg("bad list entry '" + field + "'");
    }
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

void run_kl_sweep(const KlSweepOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> betas = parse_double_list(opt.betas);
  const std::vector<std::size_t> prefixes = parse_prefix_list(opt.m_values);
  const bnp_fit_config config = to_config(opt.learner, /*record_trace=*/true);
  if (opt.workers == 0) die_msg("--workers must be at least 1");

  // One sweep per beta; betas are independent, so they are farmed out to the
  // worker threads. Results land in a slot per beta, keeping the output
  // order (and therefore the CSV bytes) independent of scheduling.
  struct Slot {
    bnp_sweep* sweep = nullptr;
    bnp_status status = BNP_OK;
    std::string error;
  };
  std::vector<Slot> slots(betas.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= betas.size()) return;
      char dist[128];
      std::snprintf(dist, sizeof dist, "gmm(%.17g,%.17g,%.17g,%.17g)",
                    betas[b], opt.mu1, opt.mu2, opt.variance);
      Slot& slot = slots[b];
      slot.status = bnp_kl_sweep(dist, opt.sample_size, prefixes.data(),
                                 prefixes.size(), opt.replicates, opt.seed,
                                 &config, opt.grid_points, &slot.sweep);
      if (slot.status != BNP_OK) slot.error = bnp_last_error();
    }
  };
  if (opt.workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(opt.workers, betas.size()); ++t) {
      pool.emplace_back(worker);
    }
    for (std::thread& t : pool) t.join();
  }
  for (std::size_t b = 0; b < betas.size(); ++b) {
    if (slots[b].status != BNP_OK) {
      const int code = (slots[b].status == BNP_ERR_NUMERIC ||
                        slots[b].status == BNP_ERR_INTERNAL)
                           ? kExitNumeric
                           : kExitData;
      die_msg("beta=" + fmt17(betas[b]) + ": " +
                  bnp_status_name(slots[b].status) + ": " + slots[b].error,
              code);
    }
  }

  auto rows = open_output(opt.output);
  rows << "beta,M,replicate,seed,kl,truncated_mass\n";
  for (std::size_t b = 0; b < betas.size(); ++b) {
    for (std::size_t r = 0; r < opt.replicates; ++r) {
      for (std::size_t k = 0; k < prefixes.size(); ++k) {
        double kl = 0, trunc = 0;
        check(bnp_sweep_cell(slots[b].sweep, r, k, &kl, &trunc));
        rows << fmt17(betas[b]) << ',' << prefixes[k] << ',' << r << ','
             << (opt.seed + r) << ',' << fmt17(kl) << ',' << fmt17(trunc)
             << '\n';
      }
    }
  }
  const std::string agg_path = stem_plus(opt.output, "-aggregate.csv");
  auto agg = open_output(agg_path);
  agg << "beta,M,mean_kl,sd_kl\n";
  for (std::size_t b = 0; b < betas.size(); ++b) {
    for (std::size_t k = 0; k < prefixes.size(); ++k) {
      double mean = 0, sd = 0;
      check(bnp_sweep_aggregate(slots[b].sweep, k, &mean, &sd));
      agg << fmt17(betas[b]) << ',' << prefixes[k] << ',' << fmt17(mean)
          << ',' << fmt17(sd) << '\n';
    }
  }
  for (Slot& slot : slots) bnp_sweep_destroy(slot.sweep);

  ordered_json args;
  args["betas"] = opt.betas;
  args["m_values"] = opt.m_values;
  args["sample_size"] = opt.sample_size;
  args.update(learner_to_json(opt.learner));
  args["replicates"] = opt.replicates;
  args["seed"] = opt.seed;
  args["grid_points"] = opt.grid_points;
  args["mu1"] = opt.mu1;
  args["mu2"] = opt.mu2;
  args["variance"] = opt.variance;
  args["workers"] = opt.workers;
  args["output"] = opt.output;
  write_manifest(opt.output, "kl-sweep", std::move(args), {},
                 {opt.output, agg_path}, ms_since(t0));
}

/* --------------------------------------------------------------- classify */

struct ClassifyOptions {
  std::string input;
  std::string value_column = "age";
  std::string label_column = "chd";
  LearnerOptions learner;
  std::size_t splits = 100;
  double train_fraction = 0.5;
  std::uint64_t seed = 1;
  std::string output;
};

void run_classify(const ClassifyOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  bnp_labeled* data = nullptr;
  check(bnp_labeled_from_csv(opt.input.c_str(), opt.value_column.c_str(),
                             opt.label_column.c_str(), &data));
  const bnp_fit_config config = to_config(opt.learner, /*record_trace=*/false);
  bnp_split_result* result = nullptr;
  check(bnp_split_experiment(data, &config, opt.splits, opt.train_fraction,
                             opt.seed, &result));

  auto out = open_output(opt.output);
  out << "split,seed,status,error_rate,errors,test_count,note\n";
  for (std::size_t s = 0; s < bnp_split_count(result); ++s) {
    int skipped = 0;
    double rate = 0;
    std::size_t test_count = 0, errors = 0;
    check(bnp_split_outcome(result, s, &skipped, &rate, &test_count, &errors));
    out << s << ',' << (opt.seed + s) << ','
        << (skipped ? "skipped" : "ok") << ',';
    if (skipped) {
      out << ",,," << '"' << bnp_split_note(result, s) << '"' << '\n';
    } else {
      out << fmt17(rate) << ',' << errors << ',' << test_count << ",\"\"\n";
    }
  }
  std::size_t used = 0;
  double mean = 0, sd = 0;
  check(bnp_split_summary(result, &used, &mean, &sd));
  out << "mean,,summary," << fmt17(mean) << ",,,\"\"\n";
  out << "sd,,summary," << fmt17(sd) << ",,,\"\"\n";
  std::cout << "mean error rate " << fmt17(100.0 * mean) << "% over " << used
            << " of " << bnp_split_count(result)
            << " splits, sd " << fmt17(100.0 * sd) << " percentage points\n";

  ordered_json args;
  args["input"] = opt.input;
  args["value_column"] = opt.value_column;
  args["label_column"] = opt.label_column;
  args.update(learner_to_json(opt.learner));
  args["splits"] = opt.splits;
  args["train_fraction"] = opt.train_fraction;
  args["seed"] = opt.seed;
  args["output"] = opt.output;
  write_manifest(opt.output, "classify", std::move(args), {opt.input},
                 {opt.output}, ms_since(t0));
  bnp_split_result_destroy(result);
  bnp_labeled_destroy(data);
}

/* ----------------------------------------------------------------- replay */

struct ReplayOptions {
  std::string manifest;
  std::string into;
};

std::string redirect(const std::string& original, const std::string& into) {
  return (fs::path(into) / fs::path(original).filename()).string();
}

void run_replay(const ReplayOptions& opt) {
  std::ifstream in(opt.manifest, std::ios::binary);
  if (!in) die_msg("cannot open '" + opt.manifest + "'");
  ordered_json m;
  try {
    in >> m;
  } catch (const nlohmann::json::exception& e) {
    die_msg(opt.manifest + ": not a manifest (" + e.what() + ")");
  }
  try {
    if (m.at("tool").get<std::string>() != "bnpmle") {
      die_msg(opt.manifest + ": manifest written by a different tool");
    }
    if (m.at("version").get<std::string>() != bnp_version()) {
      std::cerr << "bnpmle: note: manifest was written by version "
                << m["version"].get<std::string>() << ", this is "
                << bnp_version() << '\n';
    }
    for (const ordered_json& input : m.at("inputs")) {
      const std::string path = input.at("path").get<std::string>();
      const std::string want = input.at("fnv1a64").get<std::string>();
      const std::string have = fnv1a64_file(path);
      if (want != have) {
        die_msg("input '" + path + "' changed since the recorded run (" +
                want + " -> " + have + ")");
      }
    }
    std::error_code ec;
    fs::create_directories(opt.into, ec);
    if (ec) die_msg("cannot create '" + opt.into + "': " + ec.message());

    const std::string command = m.at("command").get<std::string>();
    const ordered_json& a = m.at("arguments");
    if (command == "fit") {
      FitOptions o;
      o.input = a.at("input").get<std::string>();
      o.header = a.at("has_header").get<bool>();
      o.learner = learner_from_json(a);
      o.trace = a.at("record_trace").get<bool>();
      o.output = redirect(a.at("output").get<std::string>(), opt.into);
      run_fit(o);
    } else if (command == "density-grid") {
      DensityGridOptions o;
      o.model = a.at("model").get<std::string>();
      o.points = a.at("points").get<std::size_t>();
      if (!a.at("from").is_null()) o.from = a.at("from").get<double>();
      if (!a.at("to").is_null()) o.to = a.at("to").get<double>();
      o.output = redirect(a.at("output").get<std::string>(), opt.into);
      run_density_grid(o);
    } else if (command == "simulate") {
      SimulateOptions o;
      o.distribution = a.at("distribution").get<std::string>();
      o.count = a.at("count").get<std::size_t>();
      o.seed = a.at("seed").get<std::uint64_t>();
      o.output = redirect(a.at("output").get<std::string>(), opt.into);
      run_simulate(o);
    } else if (command == "kl-sweep") {
      KlSweepOptions o;
      o.betas = a.at("betas").get<std::string>();
      o.m_values = a.at("m_values").get<std::string>();
      o.sample_size = a.at("sample_size").get<std::size_t>();
      o.learner = learner_from_json(a);
      o.replicates = a.at("replicates").get<std::size_t>();
      o.seed = a.at("seed").get<std::uint64_t>();
      o.grid_points = a.at("grid_points").get<std::size_t>();
      o.mu1 = a.at("mu1").get<double>();
      o.mu2 = a.at("mu2").get<double>();
      o.variance = a.at("variance").get<double>();
      o.workers = a.at("workers").get<std::size_t>();
      o.output = redirect(a.at("output").get<std::string>(), opt.into);
      run_kl_sweep(o);
    } else if (command == "classify") {
      ClassifyOptions o;
      o.input = a.at("input").get<std::string>();
      o.value_column = a.at("value_column").get<std::string>();
      o.label_column = a.at("label_column").get<std::string>();
      o.learner = learner_from_json(a);
      o.splits = a.at("splits").get<std::size_t>();
      o.train_fraction = a.at("train_fraction").get<double>();
      o.seed = a.at("seed").get<std::uint64_t>();
      o.output = redirect(a.at("output").get<std::string>(), opt.into);
      run_classify(o);
    } else {
      die_msg(opt.manifest + ": unknown command '" + command + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    die_msg(opt.manifest + ": malformed manifest (" + e.what() + ")");
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"boosted nonparametric maximum likelihood density estimation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", bnp_version());

  FitOptions fit;
  CLI::App* fit_cmd =
      app.add_subcommand("fit", "Fit a density to a one-column CSV sample");
  fit_cmd->add_option("--input", fit.input, "Sample CSV (one numeric column)")
      ->required();
  fit_cmd->add_flag("--header", fit.header, "Skip the first line of the input");
  add_learner_flags(fit_cmd, fit.learner, /*with_iterations=*/true);
  fit_cmd->add_flag("--trace", fit.trace,
                    "Record per-iteration likelihood and write it beside the "
                    "model");
  fit_cmd->add_option("--output", fit.output, "Model JSON path")->required();
  fit_cmd->callback([&] { run_fit(fit); });

  DensityGridOptions grid;
  CLI::App* grid_cmd = app.add_subcommand(
      "density-grid", "Evaluate a saved model on an equally spaced grid");
  grid_cmd->add_option("--model", grid.model, "Model JSON path")->required();
  grid_cmd->add_option("--points", grid.points, "Grid size")
      ->capture_default_str();
  grid_cmd->add_option("--from", grid.from,
                       "Grid start (default: support lower end)");
  grid_cmd->add_option("--to", grid.to, "Grid end (default: support upper end)");
  grid_cmd->add_option("--output", grid.output, "CSV path (x,density)")
      ->required();
  grid_cmd->callback([&] { run_density_grid(grid); });

  SimulateOptions sim;
  sim.seed = default_seed();
  CLI::App* sim_cmd = app.add_subcommand(
      "simulate", "Draw a reproducible sample from a named distribution");
  sim_cmd
      ->add_option("--dist", sim.distribution,
                   "uniform(lo,hi) | exponential(rate) | "
                   "laplace-mixture(w,loc1,scale1,loc2,scale2) | "
                   "student-t(nu) | gmm(beta,mu1,mu2,variance)")
      ->required();
  sim_cmd->add_option("--n", sim.count, "Number of draws")->required();
  sim_cmd->add_option("--seed", sim.seed, "RNG seed (default: BNPMLE_SEED or 1)")
      ->capture_default_str();
  sim_cmd->add_option("--output", sim.output, "CSV path (one value per line)")
      ->required();
  sim_cmd->callback([&] { run_simulate(sim); });

  KlSweepOptions sweep;
  sweep.seed = default_seed();
  CLI::App* sweep_cmd = app.add_subcommand(
      "kl-sweep",
      "Two-component Gaussian mixture sweep: KL divergence against the "
      "truth across mixture weights and boosting rounds");
  sweep_cmd
      ->add_option("--betas", sweep.betas,
                   "Comma-separated mixture weights of the first component")
      ->capture_default_str();
  sweep_cmd
      ->add_option("--m-values", sweep.m_values,
                   "Comma-separated boosting-round counts to measure at")
      ->capture_default_str();
  sweep_cmd->add_option("--n", sweep.sample_size, "Sample size per replicate")
      ->capture_default_str();
  add_learner_flags(sweep_cmd, sweep.learner, /*with_iterations=*/false);
  sweep_cmd->add_option("--replicates", sweep.replicates, "Replicates per beta")
      ->capture_default_str();
  sweep_cmd
      ->add_option("--seed", sweep.seed,
                   "Base seed; replicate r uses seed + r")
      ->capture_default_str();
  sweep_cmd->add_option("--grid-points", sweep.grid_points,
                        "Quadrature grid size for the KL integral")
      ->capture_default_str();
  sweep_cmd->add_option("--mu1", sweep.mu1, "First component mean")
      ->capture_default_str();
  sweep_cmd->add_option("--mu2", sweep.mu2, "Second component mean")
      ->capture_default_str();
  sweep_cmd->add_option("--variance", sweep.variance, "Shared component variance")
      ->capture_default_str();
  sweep_cmd->add_option("--workers", sweep.workers,
                        "Threads across betas (default 1: deterministic logs)")
      ->capture_default_str();
  sweep_cmd->add_option("--output", sweep.output, "Per-replicate CSV path")
      ->required();
  sweep_cmd->callback([&] { run_kl_sweep(sweep); });

  ClassifyOptions cls;
  cls.seed = default_seed();
  CLI::App* cls_cmd = app.add_subcommand(
      "classify",
      "Repeated random-split error of the plug-in Bayes classifier");
  cls_cmd->add_option("--input", cls.input, "Labeled CSV with a header row")
      ->required();
  cls_cmd->add_option("--value-column", cls.value_column, "Feature column")
      ->capture_default_str();
  cls_cmd->add_option("--label-column", cls.label_column, "Class column")
      ->capture_default_str();
  add_learner_flags(cls_cmd, cls.learner, /*with_iterations=*/true);
  cls_cmd->add_option("--splits", cls.splits, "Number of random splits")
      ->capture_default_str();
  cls_cmd
      ->add_option("--train-fraction", cls.train_fraction,
                   "Fraction of rows used for training")
      ->capture_default_str();
  cls_cmd->add_option("--seed", cls.seed, "Base seed; split s uses seed + s")
      ->capture_default_str();
  cls_cmd->add_option("--output", cls.output, "Per-split CSV path")->required();
  cls_cmd->callback([&] { run_classify(cls); });

  ReplayOptions replay;
  CLI::App* replay_cmd = app.add_subcommand(
      "replay", "Re-execute a recorded run from its manifest");
  replay_cmd->add_option("--manifest", replay.manifest, "Manifest JSON path")
      ->required();
  replay_cmd
      ->add_option("--into", replay.into,
                   "Directory for the re-executed run's outputs")
      ->required();
  replay_cmd->callback([&] { run_replay(replay); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }
  return 0;
}
