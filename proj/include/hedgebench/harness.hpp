// Runs learners against instances and aggregates regret over trials.
//
// Trial n of an experiment uses RngStream{seed, n} for n = 1..N, and every
// learner in the experiment sees the same loss sequence within a trial.
// Trials are distributed over worker threads but results are merged in
// trial order, so the output does not depend on the worker count.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hedgebench/core.hpp"
#include "hedgebench/environments.hpp"
#include "hedgebench/learners.hpp"

namespace hedgebench {

using Trace = std::vector<RoundRecord>;

/// Drives one learner for rounds 1..horizon. `source(t)` must return the
/// round-t losses; it is only called after the learner committed to its
/// round-t weights. `visit(t, weights, losses, mix)` sees every round.
template <class LossSource, class Visitor>
void simulate(Learner& learner, LossSource&& source, std::size_t horizon, Visitor&& visit) {
  if (horizon < 1) throw Error(Errc::invalid_horizon, "horizon must be >= 1");
  for (std::size_t t = 1; t <= horizon; ++t) {
    WeightVector w = learner.predict(t);
    const LossVector losses = source(t);
    const double mix = mix_loss(w, losses);
    learner.observe(losses);
    visit(t, w, losses, mix);
  }
}

inline void check_horizon(std::size_t horizon) {
  if (horizon < 1) throw Error(Errc::invalid_horizon, "horizon must be >= 1, got 0");
}

template <class LossSource>
Trace run_trial_on(Learner& learner, LossSource&& source, std::size_t horizon, bool record_weights = false) {
  check_horizon(horizon);
  Trace trace;
  trace.reserve(horizon);
  simulate(learner, source, horizon,
           [&](std::size_t t, const WeightVector& w, const LossVector& l, double mix) {
             RoundRecord rec{t, mix, l, std::nullopt};
             if (record_weights) rec.weights = w;
             trace.push_back(std::move(rec));
           });
  return trace;
}

inline Trace run_trial(LearnerId id, const InstanceSpec& spec, std::size_t horizon, const RngStream& rng,
                       std::optional<double> c0 = std::nullopt, bool record_weights = false) {
  check_horizon(horizon);
  Learner learner = make_learner(id, spec.experts, horizon, c0);
  return run_trial_on(learner, [&](std::size_t t) { return sample_losses(spec, t, rng); }, horizon,
                      record_weights);
}

/// Powers of two up to T, plus T. With a positive stride: multiples of the
/// stride, plus T.
inline std::vector<std::size_t> checkpoint_grid(std::size_t horizon, std::size_t stride = 0) {
  check_horizon(horizon);
  std::vector<std::size_t> grid;
  if (stride == 0) {
    for (std::size_t t = 1; t <= horizon; t *= 2) {
      grid.push_back(t);
      if (t > horizon / 2) break;
    }
  } else {
    for (std::size_t t = stride; t <= horizon; t += stride) grid.push_back(t);
  }
  if (grid.empty() || grid.back() != horizon) grid.push_back(horizon);
  return grid;
}

/// Regret and pseudo-regret of one trial at each checkpoint.
struct TrialSeries {
  std::vector<std::size_t> checkpoints;
  std::vector<double> regret;
  std::vector<double> pseudo_regret;  // vs the instance's i*; NaN without one
};

inline TrialSeries run_trial_series(Learner& learner, const InstanceSpec& spec, std::size_t horizon,
                                    const RngStream& rng, const std::vector<std::size_t>& grid) {
  TrialSeries out;
  out.checkpoints = grid;
  out.regret.reserve(grid.size());
  out.pseudo_regret.reserve(grid.size());
  std::vector<double> expert_totals(spec.experts, 0.0);
  double learner_total = 0.0;
  std::size_t next = 0;
  simulate(learner, [&](std::size_t t) { return sample_losses(spec, t, rng); }, horizon,
           [&](std::size_t t, const WeightVector&, const LossVector& l, double mix) {
             learner_total += mix;
             for (std::size_t i = 0; i < l.size(); ++i) expert_totals[i] += l[i];
             if (next < grid.size() && grid[next] == t) {
               const double best = *std::min_element(expert_totals.begin(), expert_totals.end());
               out.regret.push_back(learner_total - best);
               out.pseudo_regret.push_back(spec.i_star ? learner_total - expert_totals[*spec.i_star]
                                                       : std::numeric_limits<double>::quiet_NaN());
               ++next;
             }
           });
  return out;
}

struct ExperimentConfig {
  InstanceSpec instance;
  std::vector<LearnerId> learners;
  std::map<LearnerId, double> c0;  // overrides of default_c0
  std::size_t horizon = 1;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  bool record_weights = false;
  std::size_t checkpoint_every = 0;  // 0: geometric grid
  unsigned threads = 0;              // 0: hardware concurrency
};

inline void validate(const ExperimentConfig& cfg) {
  validate(cfg.instance);
  check_horizon(cfg.horizon);
  if (cfg.trials < 1) throw Error(Errc::invalid_config, "trials must be >= 1");
  if (cfg.learners.empty()) throw Error(Errc::invalid_config, "no learners selected");
}

struct LearnerAggregate {
  LearnerId learner;
  std::vector<double> mean_regret;
  std::vector<double> mean_pseudo_regret;
  std::vector<double> std_regret;  // population convention (divide by N)
  std::vector<double> std_pseudo_regret;
  std::size_t trials = 0;
};

struct AggregatedResult {
  std::string instance;
  std::vector<std::size_t> checkpoints;
  std::vector<LearnerAggregate> learners;
};

/// Pointwise mean and population standard deviation over trials, summed in
/// the order given.
inline LearnerAggregate average_series(LearnerId id, const std::vector<TrialSeries>& trials) {
  if (trials.empty()) throw Error(Errc::grid_mismatch, "no trials to average");
  const auto& grid = trials.front().checkpoints;
  for (const auto& tr : trials) {
    if (tr.checkpoints != grid || tr.regret.size() != grid.size() || tr.pseudo_regret.size() != grid.size()) {
      throw Error(Errc::grid_mismatch, "trial series use different checkpoint grids");
    }
  }
  const double n = static_cast<double>(trials.size());
  LearnerAggregate agg{id, {}, {}, {}, {}, trials.size()};
  auto moments = [&](auto member, std::vector<double>& mean_out, std::vector<double>& std_out) {
    mean_out.assign(grid.size(), 0.0);
    std_out.assign(grid.size(), 0.0);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      // Shifted by the first trial so identical trials give std exactly 0.
      const double x0 = (trials.front().*member)[k];
      double s = 0.0;
      for (const auto& tr : trials) s += (tr.*member)[k] - x0;
      const double mean = x0 + s / n;
      double ss = 0.0;
      for (const auto& tr : trials) {
        const double d = (tr.*member)[k] - mean;
        ss += d * d;
      }
      mean_out[k] = mean;
      std_out[k] = trials.size() > 1 ? std::sqrt(ss / n) : 0.0;
    }
  };
  moments(&TrialSeries::regret, agg.mean_regret, agg.std_regret);
  moments(&TrialSeries::pseudo_regret, agg.mean_pseudo_regret, agg.std_pseudo_regret);
  return agg;
}

namespace detail {

inline unsigned worker_count(unsigned requested, std::size_t tasks) {
  unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, tasks));
}

/// Calls job(k) for k in [0, count) on up to `workers` threads. The first
/// exception thrown by any job is rethrown on the caller's thread.
template <class Job>
void parallel_for(std::size_t count, unsigned workers, Job&& job) {
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) job(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < count; k = next++) {
        try {
          job(k);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

inline AggregatedResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto grid = checkpoint_grid(cfg.horizon, cfg.checkpoint_every);
  const std::size_t n_learners = cfg.learners.size();
  // results[learner][trial]
  std::vector<std::vector<TrialSeries>> results(n_learners, std::vector<TrialSeries>(cfg.trials));

  auto c0_for = [&](LearnerId id) -> std::optional<double> {
    auto it = cfg.c0.find(id);
    return it == cfg.c0.end() ? std::nullopt : std::optional<double>(it->second);
  };

  detail::parallel_for(cfg.trials, detail::worker_count(cfg.threads, cfg.trials), [&](std::size_t k) {
    const RngStream rng{cfg.seed, k + 1};
    for (std::size_t j = 0; j < n_learners; ++j) {
      Learner learner = make_learner(cfg.learners[j], cfg.instance.experts, cfg.horizon, c0_for(cfg.learners[j]));
      results[j][k] = run_trial_series(learner, cfg.instance, cfg.horizon, rng, grid);
    }
  });

  AggregatedResult out{cfg.instance.id, grid, {}};
  for (std::size_t j = 0; j < n_learners; ++j) out.learners.push_back(average_series(cfg.learners[j], results[j]));
  return out;
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

inline constexpr const char* kCsvHeader = "instance,learner,t,mean_regret,mean_pseudo_regret,std_regret,trials";

namespace detail {

inline std::string fmt_value(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace detail

/// Rows ordered by learner (as configured), then checkpoint.
inline void write_csv(std::ostream& os, const AggregatedResult& r) {
  os << kCsvHeader << '\n';
  for (const auto& agg : r.learners) {
    for (std::size_t k = 0; k < r.checkpoints.size(); ++k) {
      os << r.instance << ',' << to_string(agg.learner) << ',' << r.checkpoints[k] << ','
         << detail::fmt_value(agg.mean_regret[k]) << ',' << detail::fmt_value(agg.mean_pseudo_regret[k]) << ','
         << detail::fmt_value(agg.std_regret[k]) << ',' << agg.trials << '\n';
    }
  }
}

/// Same rows as the CSV, as {"std_convention": ..., "rows": [...]}.
inline nlohmann::ordered_json to_json(const AggregatedResult& r) {
  auto num = [](double x) -> nlohmann::ordered_json {
    if (std::isnan(x)) return nullptr;
    return x;
  };
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& agg : r.learners) {
    for (std::size_t k = 0; k < r.checkpoints.size(); ++k) {
      rows.push_back({{"instance", r.instance},
                      {"learner", std::string(to_string(agg.learner))},
                      {"t", r.checkpoints[k]},
                      {"mean_regret", num(agg.mean_regret[k])},
                      {"mean_pseudo_regret", num(agg.mean_pseudo_regret[k])},
                      {"std_regret", num(agg.std_regret[k])},
                      {"trials", agg.trials}});
    }
  }
  return {{"std_convention", "population"}, {"rows", std::move(rows)}};
}

inline void write_json(std::ostream& os, const AggregatedResult& r) { os << to_json(r).dump(2) << '\n'; }

/// Configuration of one reference panel ('a'..'d'): the five learners
/// with their default constants, 50 trials for the random panels and a
/// single trial for the deterministic one.
inline ExperimentConfig panel_config(char panel, std::size_t horizon = std::size_t{1} << 14,
                                     std::uint64_t seed = 1) {
  if (panel < 'a' || panel > 'd') {
    throw Error(Errc::invalid_config, std::string("unknown panel: ") + panel + " (expected a, b, c or d)");
  }
  ExperimentConfig cfg;
  cfg.instance = builtin_instance(std::string("fig-") + panel);
  cfg.learners.assign(kAllLearners.begin(), kAllLearners.end());
  cfg.horizon = horizon;
  cfg.trials = panel == 'd' ? 1 : 50;
  cfg.seed = seed;
  return cfg;
}

}  // namespace hedgebench
