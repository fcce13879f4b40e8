// Key-value experiment configuration.
//
//   # comment
//   instance = fig-a
//   algorithms = hedge, ftl
//   horizon = 16384
//   trials = 50
//   seed = 7
//   c0 = hedge=2, hedge_constant=2.828427
//   experts = 10            # prop3 / t4 / prop2
//   delta = 0.1             # prop2
//   istar = 1               # prop2, 1-based
//   instance_c0 = 2         # t4
//   checkpoint_every = 0    # 0: powers of two plus T
//   record_weights = false
//
// A custom instance replaces `instance` with
//   instance.id = my-instance
//   instance.kind = bernoulli | beta | constant
//   instance.params = 0.3, 0.4, 0.5          (beta: 0.5:0.5, 0.08:0.92, ...)
#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hedgebench/core.hpp"
#include "hedgebench/environments.hpp"
#include "hedgebench/harness.hpp"
#include "hedgebench/learners.hpp"

namespace hedgebench::config {

using KeyValues = std::map<std::string, std::string>;

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    std::string item = trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline KeyValues parse(std::istream& in) {
  KeyValues kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::invalid_config, "config line " + std::to_string(lineno) + ": expected key = value");
    }
    kv[trim(std::string_view(body).substr(0, eq))] = trim(std::string_view(body).substr(eq + 1));
  }
  return kv;
}

inline KeyValues parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse(in);
}

inline double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw Error(Errc::invalid_config, key + ": not a number: " + v);
}

inline std::uint64_t to_uint(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc{} || ptr != end) throw Error(Errc::invalid_config, key + ": not a non-negative integer: " + v);
  return x;
}

inline bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(Errc::invalid_config, key + ": expected true or false, got " + v);
}

/// Parses "algo=value, algo=value".
inline std::map<LearnerId, double> parse_c0_overrides(const std::string& text) {
  std::map<LearnerId, double> out;
  for (const auto& item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(Errc::invalid_config, "c0: expected algo=value, got " + item);
    out[parse_learner(trim(std::string_view(item).substr(0, eq)))] =
        to_double("c0", trim(std::string_view(item).substr(eq + 1)));
  }
  return out;
}

inline std::vector<LearnerId> parse_learners(const std::string& text) {
  std::vector<LearnerId> out;
  for (const auto& name : split(text, ',')) out.push_back(parse_learner(name));
  if (out.empty()) throw Error(Errc::invalid_config, "algorithms: empty list");
  return out;
}

inline InstanceSpec custom_instance(const KeyValues& kv) {
  const auto get = [&](const char* key) -> std::string {
    auto it = kv.find(key);
    if (it == kv.end()) throw Error(Errc::invalid_config, std::string("custom instance needs ") + key);
    return it->second;
  };
  const std::string kind = get("instance.kind");
  const auto params = split(get("instance.params"), ',');
  std::vector<ExpertLaw> laws;
  for (const auto& p : params) {
    if (kind == "bernoulli") {
      laws.emplace_back(Bernoulli{to_double("instance.params", p)});
    } else if (kind == "constant") {
      laws.emplace_back(Constant{to_double("instance.params", p)});
    } else if (kind == "beta") {
      const auto ab = split(p, ':');
      if (ab.size() != 2) throw Error(Errc::invalid_config, "instance.params: beta entries are a:b, got " + p);
      laws.emplace_back(Beta{to_double("instance.params", ab[0]), to_double("instance.params", ab[1])});
    } else {
      throw Error(Errc::invalid_config, "instance.kind must be bernoulli, beta or constant, got " + kind);
    }
  }
  auto it = kv.find("instance.id");
  InstanceSpec spec = detail::from_laws(it == kv.end() ? "custom" : it->second, InstanceKind::custom, std::move(laws));
  validate(spec);
  return spec;
}

/// Builds an experiment from key-values. Keys not listed in the header
/// comment are rejected.
inline ExperimentConfig to_experiment(const KeyValues& kv) {
  static const char* const kKnown[] = {"instance",   "algorithms", "horizon",        "trials",
                                       "seed",       "c0",         "experts",        "delta",
                                       "istar",      "instance_c0", "checkpoint_every", "record_weights",
                                       "instance.id", "instance.kind", "instance.params", "format",
                                       "out",        "threads"};
  for (const auto& [k, v] : kv) {
    bool known = false;
    for (const char* name : kKnown) known = known || k == name;
    if (!known) throw Error(Errc::invalid_config, "unknown config key: " + k);
  }
  auto opt = [&](const char* key) -> std::optional<std::string> {
    auto it = kv.find(key);
    return it == kv.end() ? std::nullopt : std::optional<std::string>(it->second);
  };

  ExperimentConfig cfg;
  if (auto v = opt("horizon")) cfg.horizon = to_uint("horizon", *v);
  if (auto v = opt("trials")) cfg.trials = to_uint("trials", *v);
  if (auto v = opt("seed")) cfg.seed = to_uint("seed", *v);
  if (auto v = opt("checkpoint_every")) cfg.checkpoint_every = to_uint("checkpoint_every", *v);
  if (auto v = opt("record_weights")) cfg.record_weights = to_bool("record_weights", *v);
  if (auto v = opt("threads")) cfg.threads = static_cast<unsigned>(to_uint("threads", *v));
  if (auto v = opt("c0")) cfg.c0 = parse_c0_overrides(*v);
  cfg.learners = parse_learners(opt("algorithms").value_or("hedge"));

  if (opt("instance.kind")) {
    if (opt("instance")) throw Error(Errc::invalid_config, "set either instance or instance.kind, not both");
    cfg.instance = custom_instance(kv);
  } else {
    auto name = opt("instance");
    if (!name) throw Error(Errc::invalid_config, "missing instance");
    InstanceOptions io;
    if (auto v = opt("experts")) io.experts = to_uint("experts", *v);
    if (auto v = opt("delta")) io.delta = to_double("delta", *v);
    if (auto v = opt("istar")) {
      const auto one_based = to_uint("istar", *v);
      if (one_based < 1) throw Error(Errc::invalid_config, "istar is 1-based");
      io.i_star = one_based - 1;
    }
    if (auto v = opt("instance_c0")) io.c0 = to_double("instance_c0", *v);
    io.horizon = cfg.horizon;
    cfg.instance = builtin_instance(*name, io);
  }
  return cfg;
}

}  // namespace hedgebench::config
