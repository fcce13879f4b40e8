// hedgebench: command-line front end.
//
//   hedgebench run --instance fig-a --algorithms hedge,ftl --horizon 16384 --trials 50 --seed 7
//   hedgebench reproduce a --out-dir results
//   hedgebench bounds --id thm1 --M 10 --delta 0.1
//   hedgebench list
//
// Exit codes: 0 success, 1 runtime failure, 2 invalid flags or parameters.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hedgebench/hedgebench.hpp"

namespace hb = hedgebench;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

std::string join_ids() {
  std::string out = "Instances:";
  for (auto id : hb::kInstanceIds) out += " " + std::string(id);
  out += "\nLearners: ";
  for (auto id : hb::kAllLearners) out += " " + std::string(hb::to_string(id));
  out += "\nBounds:   ";
  for (auto id : hb::kBoundIds) out += " " + std::string(id);
  out += "\nEnvironment: HEDGEBENCH_THREADS caps worker threads (0 = auto).";
  return out;
}

unsigned threads_from_env() {
  const char* v = std::getenv("HEDGEBENCH_THREADS");
  if (v == nullptr || *v == '\0') return 0;
  try {
    return static_cast<unsigned>(hb::config::to_uint("HEDGEBENCH_THREADS", v));
  } catch (const hb::Error&) {
    throw hb::Error(hb::Errc::invalid_config, "HEDGEBENCH_THREADS must be a non-negative integer");
  }
}

bool is_usage_error(hb::Errc c) {
  switch (c) {
    case hb::Errc::unknown_instance:
    case hb::Errc::unknown_learner:
    case hb::Errc::invalid_config:
    case hb::Errc::invalid_horizon:
    case hb::Errc::invalid_instance:
    case hb::Errc::invalid_schedule:
    case hb::Errc::out_of_validity_domain:
    case hb::Errc::missing_parameter:
      return true;
    default:
      return false;
  }
}

struct RunFlags {
  std::string config_path;
  std::optional<std::string> instance, algorithms, format, out, experts, delta, istar, instance_c0, checkpoint_every;
  std::optional<std::string> horizon, trials, seed;
  std::vector<std::string> c0;
};

int cmd_run(const RunFlags& f) {
  hb::config::KeyValues kv;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw hb::Error(hb::Errc::invalid_config, "cannot open config file: " + f.config_path);
    kv = hb::config::parse(in);
  }
  auto set = [&](const char* key, const std::optional<std::string>& v) {
    if (v) kv[key] = *v;
  };
  set("instance", f.instance);
  set("algorithms", f.algorithms);
  set("horizon", f.horizon);
  set("trials", f.trials);
  set("seed", f.seed);
  set("experts", f.experts);
  set("delta", f.delta);
  set("istar", f.istar);
  set("instance_c0", f.instance_c0);
  set("checkpoint_every", f.checkpoint_every);
  set("format", f.format);
  set("out", f.out);
  if (!f.c0.empty()) {
    std::string joined = kv.count("c0") ? kv["c0"] : "";
    for (const auto& item : f.c0) joined += (joined.empty() ? "" : ",") + item;
    kv["c0"] = joined;
  }
  if (f.instance && kv.count("instance.kind")) {
    kv.erase("instance.kind");
    kv.erase("instance.params");
    kv.erase("instance.id");
  }

  const std::string format = kv.count("format") ? kv["format"] : "csv";
  if (format != "csv" && format != "json") {
    throw hb::Error(hb::Errc::invalid_config, "--format must be csv or json, got " + format);
  }
  hb::ExperimentConfig cfg = hb::config::to_experiment(kv);
  if (const unsigned env = threads_from_env(); env != 0 || !kv.count("threads")) cfg.threads = env;

  const hb::AggregatedResult result = hb::run_experiment(cfg);
  std::ostringstream os;
  if (format == "csv") hb::write_csv(os, result);
  else hb::write_json(os, result);

  if (kv.count("out") && !kv["out"].empty()) {
    std::ofstream out(kv["out"], std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + kv["out"]);
    out << os.str();
  } else {
    std::cout << os.str();
  }
  return 0;
}

int cmd_reproduce(const std::string& panel, std::size_t horizon, std::uint64_t seed, const std::string& out_dir) {
  if (panel.size() != 1 || panel[0] < 'a' || panel[0] > 'd') {
    throw hb::Error(hb::Errc::invalid_config, "unknown panel: " + panel + " (expected a, b, c or d)");
  }
  hb::ExperimentConfig cfg = hb::panel_config(panel[0], horizon, seed);
  cfg.threads = threads_from_env();
  const hb::AggregatedResult result = hb::run_experiment(cfg);

  std::filesystem::create_directories(out_dir);
  const auto path = std::filesystem::path(out_dir) / ("figure1_" + panel + ".csv");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  hb::write_csv(out, result);
  std::cerr << "wrote " << path.string() << '\n';
  return 0;
}

int cmd_bounds(const std::string& id, const hb::BoundParams& params) {
  const hb::BoundValue v = hb::theory_value(id, params);
  nlohmann::ordered_json j{{"id", v.id},
                           {"value", v.value},
                           {"direction", std::string(hb::to_string(v.direction))},
                           {"validity", v.validity}};
  if (!v.notes.empty()) j["notes"] = v.notes;
  std::cout << j.dump() << '\n';
  return 0;
}

int cmd_list() {
  std::cout << join_ids() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hedgebench: regret experiments for Hedge-style learners on expert-advice instances", "hedgebench"};
  app.footer(join_ids());
  app.require_subcommand(1);

  RunFlags run;
  auto* run_cmd = app.add_subcommand("run", "Run learners on an instance and print aggregated regret");
  run_cmd->add_option("--config", run.config_path, "Key-value config file; flags override its entries");
  run_cmd->add_option("--instance", run.instance, "Instance id");
  run_cmd->add_option("--algorithms", run.algorithms, "Comma-separated learner ids");
  run_cmd->add_option("--horizon", run.horizon, "Number of rounds T");
  run_cmd->add_option("--trials", run.trials, "Number of independent trials N");
  run_cmd->add_option("--seed", run.seed, "Base seed");
  run_cmd->add_option("--c0", run.c0, "Learning-rate constant override, algo=value (repeatable)");
  run_cmd->add_option("--experts", run.experts, "Expert count for prop3, t4 and prop2");
  run_cmd->add_option("--delta", run.delta, "Gap for prop2");
  run_cmd->add_option("--istar", run.istar, "Best expert for prop2 (1-based)");
  run_cmd->add_option("--instance-c0", run.instance_c0, "c0 used to size the t4 gap");
  run_cmd->add_option("--checkpoint-every", run.checkpoint_every, "Checkpoint stride (0 = powers of two)");
  run_cmd->add_option("--out", run.out, "Output path (default stdout)");
  run_cmd->add_option("--format", run.format, "csv or json");

  std::string panel;
  std::size_t horizon = std::size_t{1} << 14;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  auto* rep = app.add_subcommand("reproduce", "Write figure1_<panel>.csv for panel a, b, c or d");
  rep->add_option("panel", panel, "Panel letter")->required();
  rep->add_option("--horizon", horizon, "Number of rounds T");
  rep->add_option("--seed", seed, "Base seed");
  rep->add_option("--out-dir", out_dir, "Directory for the CSV");

  std::string bound_id;
  hb::BoundParams bp;
  auto* bnd = app.add_subcommand("bounds", "Evaluate a regret bound and print it as JSON");
  bnd->add_option("--id", bound_id, "Bound id")->required();
  bnd->add_option("--M", bp.M, "Number of experts");
  bnd->add_option("--T", bp.T, "Horizon");
  bnd->add_option("--delta", bp.delta, "Gap");
  bnd->add_option("--c0", bp.c0, "Learning-rate constant");
  bnd->add_option("--c1", bp.c1, "Worst-case regret constant (default 1)");
  bnd->add_option("--tau0", bp.tau0, "Round after which the gap holds");
  bnd->add_option("--beta", bp.beta, "Bernstein exponent");
  bnd->add_option("--B", bp.B, "Bernstein constant");
  bnd->add_option("--epsilon", bp.epsilon, "Failure probability");
  bnd->add_option("--C1", bp.C1, "Second-order bound constant (default 1)");
  bnd->add_option("--C2", bp.C2, "Second-order bound constant (default 1)");

  auto* lst = app.add_subcommand("list", "List instance, learner and bound ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run);
    if (rep->parsed()) return cmd_reproduce(panel, horizon, seed, out_dir);
    if (bnd->parsed()) return cmd_bounds(bound_id, bp);
    if (lst->parsed()) return cmd_list();
  } catch (const hb::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_usage_error(e.code()) ? kExitUsage : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
