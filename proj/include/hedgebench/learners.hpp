// Learners for the expert problem.
//
// Every learner follows the same two-step round contract:
//   predict(t)   -> weights for round t, computed from losses 1..t-1 only
//   observe(l_t) -> absorb the round-t losses
// Rounds must be presented in order t = 1, 2, ...; anything else throws
// Errc::out_of_order_round.
//
// Identifiers used on the command line and in CSV output:
//   hedge           exponential weights, eta_t = c0 sqrt(ln M / t)
//   hedge_constant  exponential weights, eta   = c0 sqrt(ln M / T)
//   hedge_doubling  constant rate restarted on epochs [2^k, 2^(k+1))
//   adahedge        eta_t = ln M / (cumulative mixability gap)
//   ftl             uniform over the current leaders
#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "hedgebench/core.hpp"

namespace hedgebench {

enum class EtaKind { decreasing, constant, doubling };

struct EtaSchedule {
  EtaKind kind = EtaKind::decreasing;
  double c0 = 2.0;
  std::size_t experts = 2;
  std::size_t horizon = 0;  // only read for EtaKind::constant
};

inline void validate(const EtaSchedule& s) {
  if (!(s.c0 > 0.0) || !std::isfinite(s.c0)) {
    throw Error(Errc::invalid_schedule, "c0 must be positive, got " + detail::fmt_double(s.c0));
  }
  if (s.experts < 2) {
    throw Error(Errc::invalid_schedule, "need at least 2 experts, got " + std::to_string(s.experts));
  }
  if (s.kind == EtaKind::constant && s.horizon < 1) {
    throw Error(Errc::invalid_schedule, "constant learning rate requires a horizon T >= 1");
  }
}

/// First round of the doubling epoch containing t, i.e. 2^floor(log2 t).
inline std::uint64_t doubling_epoch_start(std::uint64_t t) { return std::bit_floor(t); }

inline double eta_at(const EtaSchedule& s, std::int64_t t) {
  if (t <= 0) throw Error(Errc::invalid_round, "round index must be >= 1, got " + std::to_string(t));
  const double log_m = std::log(static_cast<double>(s.experts));
  switch (s.kind) {
    case EtaKind::decreasing:
      return s.c0 * std::sqrt(log_m / static_cast<double>(t));
    case EtaKind::constant:
      return s.c0 * std::sqrt(log_m / static_cast<double>(s.horizon));
    case EtaKind::doubling:
      return s.c0 *
             std::sqrt(log_m / static_cast<double>(doubling_epoch_start(static_cast<std::uint64_t>(t))));
  }
  return 0.0;
}

/// Exponential weights exp(-eta L_i) / sum_j exp(-eta L_j), evaluated after
/// subtracting min_i L_i so the leader always gets exp(0) = 1.
inline WeightVector hedge_weights(std::span<const double> totals, double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw Error(Errc::invalid_schedule, "eta must be positive and finite, got " + detail::fmt_double(eta));
  }
  if (totals.size() < 2) throw Error(Errc::dimension_mismatch, "need at least 2 experts");
  double lo = std::numeric_limits<double>::infinity();
  for (double x : totals) {
    if (!std::isfinite(x)) throw Error(Errc::invalid_loss, "cumulative loss is not finite");
    lo = std::min(lo, x);
  }
  std::vector<double> w(totals.size());
  double z = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = std::exp(-eta * (totals[i] - lo));
    z += w[i];
  }
  for (double& x : w) x /= z;
  return WeightVector(std::move(w));
}

/// Uniform distribution over argmin_i L_i.
inline WeightVector ftl_weights(std::span<const double> totals) {
  if (totals.size() < 2) throw Error(Errc::dimension_mismatch, "need at least 2 experts");
  const double lo = *std::min_element(totals.begin(), totals.end());
  std::size_t leaders = 0;
  for (double x : totals) leaders += (x == lo);
  std::vector<double> w(totals.size(), 0.0);
  const double share = 1.0 / static_cast<double>(leaders);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (totals[i] == lo) w[i] = share;
  }
  return WeightVector(std::move(w));
}

namespace detail {

/// Tracks the predict/observe alternation shared by all learners.
class RoundClock {
 public:
  void on_predict(std::size_t t) {
    if (t != observed_ + 1 || pending_) {
      throw Error(Errc::out_of_order_round, "expected round " + std::to_string(observed_ + 1) +
                                                (pending_ ? " to be observed" : "") + ", got " +
                                                std::to_string(t));
    }
    pending_ = true;
  }
  void on_observe() {
    if (!pending_) {
      throw Error(Errc::out_of_order_round,
                  "observe() called before predict() for round " + std::to_string(observed_ + 1));
    }
    pending_ = false;
    ++observed_;
  }
  std::size_t observed() const noexcept { return observed_; }

 private:
  std::size_t observed_ = 0;
  bool pending_ = false;
};

}  // namespace detail

/// Hedge with a decreasing, constant or doubling-trick learning rate.
class HedgeLearner {
 public:
  explicit HedgeLearner(EtaSchedule schedule)
      : schedule_(schedule), cum_(schedule.experts), epoch_cum_(schedule.experts) {
    validate(schedule_);
  }

  WeightVector predict(std::size_t t) {
    if (t == 0) throw Error(Errc::invalid_round, "round index must be >= 1, got 0");
    clock_.on_predict(t);
    const double eta = eta_at(schedule_, static_cast<std::int64_t>(t));
    if (schedule_.kind != EtaKind::doubling) return hedge_weights(cum_.totals(), eta);

    const std::uint64_t start = doubling_epoch_start(t);
    if (start != epoch_start_) {
      epoch_cum_.reset();
      epoch_start_ = start;
      ++epoch_index_;
    }
    return hedge_weights(epoch_cum_.totals(), eta);
  }

  void observe(const LossVector& loss) {
    clock_.on_observe();
    cum_.add(loss);
    if (schedule_.kind == EtaKind::doubling) epoch_cum_.add(loss);
  }

  const EtaSchedule& schedule() const noexcept { return schedule_; }
  const CumulativeLoss& cumulative() const noexcept { return cum_; }
  /// Losses accumulated since the current epoch started (doubling only).
  const CumulativeLoss& epoch_cumulative() const noexcept { return epoch_cum_; }
  /// k such that the current epoch is [2^k, 2^(k+1)); -1 before round 1.
  int epoch_index() const noexcept { return epoch_index_; }

 private:
  EtaSchedule schedule_;
  CumulativeLoss cum_;
  CumulativeLoss epoch_cum_;
  std::uint64_t epoch_start_ = 0;
  int epoch_index_ = -1;
  detail::RoundClock clock_;
};

/// Follow-the-Leader; ties are split evenly instead of broken at random.
class FtlLearner {
 public:
  explicit FtlLearner(std::size_t experts) : cum_(experts) {
    if (experts < 2) throw Error(Errc::invalid_schedule, "need at least 2 experts");
  }

  WeightVector predict(std::size_t t) {
    clock_.on_predict(t);
    return ftl_weights(cum_.totals());
  }

  void observe(const LossVector& loss) {
    clock_.on_observe();
    cum_.add(loss);
  }

  const CumulativeLoss& cumulative() const noexcept { return cum_; }

 private:
  CumulativeLoss cum_;
  detail::RoundClock clock_;
};

/// AdaHedge: eta_t = ln M / gap_total, where gap_total sums the mixability
/// gaps  delta_t = mix_t - m_t  and
///   m_t = (1/eta) [ LSE(-eta L_{t-1}) - LSE(-eta L_t) ].
/// With gap_total == 0 the rate is infinite and the learner plays FTL; the
/// matching limit is m_t = min(L_t) - min(L_{t-1}).
class AdaHedgeLearner {
 public:
  explicit AdaHedgeLearner(std::size_t experts)
      : cum_(experts), log_m_(std::log(static_cast<double>(experts))) {
    if (experts < 2) throw Error(Errc::invalid_schedule, "need at least 2 experts");
  }

  double eta() const noexcept {
    return gap_total_ > 0.0 ? log_m_ / gap_total_ : std::numeric_limits<double>::infinity();
  }

  WeightVector predict(std::size_t t) {
    clock_.on_predict(t);
    eta_used_ = eta();
    weights_ = std::isinf(eta_used_) ? ftl_weights(cum_.totals()) : hedge_weights(cum_.totals(), eta_used_);
    return weights_;
  }

  void observe(const LossVector& loss) {
    if (loss.size() != cum_.size()) {
      throw Error(Errc::dimension_mismatch, "loss vector has " + std::to_string(loss.size()) +
                                                " entries, expected " + std::to_string(cum_.size()));
    }
    clock_.on_observe();
    // Everything is measured from the round's smallest loss and the leader's
    // total, so equal losses give delta = 0 exactly.
    const double lmin = loss.min();
    double h = 0.0;
    for (std::size_t i = 0; i < loss.size(); ++i) h += weights_[i] * (loss[i] - lmin);

    const auto before = cum_.totals();
    const double min_before = cum_.min();
    std::vector<double> d(loss.size());
    double shift = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < loss.size(); ++i) {
      d[i] = before[i] - min_before;
      shift = std::min(shift, d[i] + loss[i]);
    }

    double m = shift - lmin;
    if (!std::isinf(eta_used_)) {
      double s_before = 0.0, s_after = 0.0;
      for (std::size_t i = 0; i < loss.size(); ++i) {
        s_before += std::exp(-eta_used_ * d[i]);
        s_after += std::exp(-eta_used_ * (d[i] + loss[i] - shift));
      }
      m += (std::log(s_before) - std::log(s_after)) / eta_used_;
    }
    last_gap_ = h - m;
    gap_total_ += std::max(0.0, last_gap_);
    cum_.add(loss);
  }

  const CumulativeLoss& cumulative() const noexcept { return cum_; }
  double gap_total() const noexcept { return gap_total_; }
  /// Raw delta_t of the most recent round, before clamping at zero.
  double last_gap() const noexcept { return last_gap_; }

 private:
  CumulativeLoss cum_;
  double log_m_;
  double gap_total_ = 0.0;
  double last_gap_ = 0.0;
  double eta_used_ = std::numeric_limits<double>::infinity();
  WeightVector weights_;
  detail::RoundClock clock_;
};

enum class LearnerId { hedge, hedge_constant, hedge_doubling, adahedge, ftl };

inline constexpr std::array<LearnerId, 5> kAllLearners{LearnerId::hedge, LearnerId::hedge_constant,
                                                       LearnerId::hedge_doubling, LearnerId::adahedge,
                                                       LearnerId::ftl};

inline std::string_view to_string(LearnerId id) {
  switch (id) {
    case LearnerId::hedge: return "hedge";
    case LearnerId::hedge_constant: return "hedge_constant";
    case LearnerId::hedge_doubling: return "hedge_doubling";
    case LearnerId::adahedge: return "adahedge";
    case LearnerId::ftl: return "ftl";
  }
  return "?";
}

inline LearnerId parse_learner(std::string_view name) {
  for (LearnerId id : kAllLearners) {
    if (to_string(id) == name) return id;
  }
  throw Error(Errc::unknown_learner, "unknown learner: " + std::string(name));
}

/// Default c0 per learner; only the Hedge variants read it.
inline double default_c0(LearnerId id) {
  switch (id) {
    case LearnerId::hedge: return 2.0;
    case LearnerId::hedge_constant:
    case LearnerId::hedge_doubling: return std::sqrt(8.0);
    default: return std::numeric_limits<double>::quiet_NaN();
  }
}

/// Any of the five learners behind one value type.
class Learner {
 public:
  using Impl = std::variant<HedgeLearner, AdaHedgeLearner, FtlLearner>;

  Learner(LearnerId id, Impl impl) : id_(id), impl_(std::move(impl)) {}

  LearnerId id() const noexcept { return id_; }

  WeightVector predict(std::size_t t) {
    return std::visit([t](auto& l) { return l.predict(t); }, impl_);
  }
  void observe(const LossVector& loss) {
    std::visit([&loss](auto& l) { l.observe(loss); }, impl_);
  }

  template <class T>
  const T* get_if() const noexcept { return std::get_if<T>(&impl_); }

 private:
  LearnerId id_;
  Impl impl_;
};

/// Builds a learner for M experts. `horizon` is required by hedge_constant;
/// `c0` falls back to default_c0(id).
inline Learner make_learner(LearnerId id, std::size_t experts, std::size_t horizon = 0,
                            std::optional<double> c0 = std::nullopt) {
  const double c = c0.value_or(default_c0(id));
  switch (id) {
    case LearnerId::hedge:
      return {id, HedgeLearner({EtaKind::decreasing, c, experts, horizon})};
    case LearnerId::hedge_constant:
      return {id, HedgeLearner({EtaKind::constant, c, experts, horizon})};
    case LearnerId::hedge_doubling:
      return {id, HedgeLearner({EtaKind::doubling, c, experts, horizon})};
    case LearnerId::adahedge:
      return {id, AdaHedgeLearner(experts)};
    case LearnerId::ftl:
      return {id, FtlLearner(experts)};
  }
  throw Error(Errc::unknown_learner, "unknown learner");
}

/// Functional form of one round: absorbs l_{t-1} (when t > 1) and returns
/// the weights for round t together with the updated state.
template <class L>
std::pair<WeightVector, L> learner_step(L state, std::size_t t, const LossVector* previous) {
  if (t > 1) {
    if (previous == nullptr) {
      throw Error(Errc::out_of_order_round, "round " + std::to_string(t) + " needs the previous loss");
    }
    state.observe(*previous);
  }
  WeightVector w = state.predict(t);
  return {std::move(w), std::move(state)};
}

}  // namespace hedgebench
