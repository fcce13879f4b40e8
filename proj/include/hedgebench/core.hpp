// Core types for prediction with expert advice: per-round loss and weight
// vectors, cumulative losses, and regret accounting.
//
//   regret R_T        = sum_t mix_t - min_i L_{i,T}
//   regret vs expert  = sum_t mix_t - L_{i,T}
//
// All values are double precision; losses live in [0,1] and are rejected
// (never clamped) when they fall outside.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hedgebench {

enum class Errc {
  invalid_loss,
  negative_weight,
  not_normalized,
  dimension_mismatch,
  empty_trace,
  invalid_round,
  out_of_order_round,
  invalid_schedule,
  unknown_learner,
  unknown_instance,
  undefined_gap,
  invalid_instance,
  invalid_horizon,
  grid_mismatch,
  out_of_validity_domain,
  missing_parameter,
  undeclared_best_expert,
  zero_gap_division,
  invalid_config,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

namespace detail {

inline std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

inline constexpr double kSimplexTolerance = 1e-12;

/// Why a vector failed to be a point on the probability simplex.
struct SimplexViolation {
  enum class Kind { negative_weight, not_normalized, not_finite, empty };
  Kind kind;
  std::size_t index = 0;  // offending entry for negative_weight / not_finite
  double sum = 0.0;       // observed total for not_normalized

  std::string message() const {
    switch (kind) {
      case Kind::negative_weight:
        return "NegativeWeight(" + std::to_string(index) + ")";
      case Kind::not_normalized:
        return "NotNormalized(" + detail::fmt_double(sum) + ")";
      case Kind::not_finite:
        return "NotFinite(" + std::to_string(index) + ")";
      case Kind::empty:
        return "EmptyWeights";
    }
    return "SimplexViolation";
  }
};

/// Returns std::nullopt when `w` is a valid probability vector. Sign
/// violations are reported before normalization ones.
inline std::optional<SimplexViolation> validate_simplex(std::span<const double> w,
                                                        double tol = kSimplexTolerance) {
  if (w.empty()) return SimplexViolation{SimplexViolation::Kind::empty};
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!std::isfinite(w[i])) return SimplexViolation{SimplexViolation::Kind::not_finite, i};
    if (w[i] < 0.0) return SimplexViolation{SimplexViolation::Kind::negative_weight, i};
  }
  double sum = 0.0;
  for (double x : w) sum += x;
  if (std::abs(sum - 1.0) > tol) {
    return SimplexViolation{SimplexViolation::Kind::not_normalized, 0, sum};
  }
  return std::nullopt;
}

/// One round of expert losses, each in [0,1].
class LossVector {
 public:
  LossVector() = default;
  explicit LossVector(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) {
      throw Error(Errc::invalid_loss, "loss vector needs at least 2 experts, got " +
                                          std::to_string(values_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      const double x = values_[i];
      if (!std::isfinite(x) || x < 0.0 || x > 1.0) {
        throw Error(Errc::invalid_loss, "loss of expert " + std::to_string(i) +
                                            " outside [0,1]: " + detail::fmt_double(x));
      }
    }
  }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  double min() const { return *std::min_element(values_.begin(), values_.end()); }
  double max() const { return *std::max_element(values_.begin(), values_.end()); }

  friend bool operator==(const LossVector&, const LossVector&) = default;

 private:
  std::vector<double> values_;
};

/// A probability vector over the experts.
class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(std::vector<double> values) : values_(std::move(values)) {
    if (auto bad = validate_simplex(values_)) {
      throw Error(bad->kind == SimplexViolation::Kind::not_normalized ? Errc::not_normalized
                                                                      : Errc::negative_weight,
                  "invalid weight vector: " + bad->message());
    }
  }

  static WeightVector uniform(std::size_t m) {
    return WeightVector(std::vector<double>(m, 1.0 / static_cast<double>(m)));
  }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const WeightVector&, const WeightVector&) = default;

 private:
  std::vector<double> values_;
};

/// Running totals L_{i,t} of expert losses.
class CumulativeLoss {
 public:
  CumulativeLoss() = default;
  explicit CumulativeLoss(std::size_t m) : totals_(m, 0.0) {}

  void add(const LossVector& loss) {
    if (loss.size() != totals_.size()) {
      throw Error(Errc::dimension_mismatch, "loss vector has " + std::to_string(loss.size()) +
                                                " entries, expected " +
                                                std::to_string(totals_.size()));
    }
    for (std::size_t i = 0; i < totals_.size(); ++i) totals_[i] += loss[i];
    ++rounds_seen_;
  }

  void reset() {
    std::fill(totals_.begin(), totals_.end(), 0.0);
    rounds_seen_ = 0;
  }

  std::size_t size() const noexcept { return totals_.size(); }
  std::size_t rounds_seen() const noexcept { return rounds_seen_; }
  std::span<const double> totals() const noexcept { return totals_; }
  double operator[](std::size_t i) const { return totals_[i]; }
  double min() const { return *std::min_element(totals_.begin(), totals_.end()); }

 private:
  std::vector<double> totals_;
  std::size_t rounds_seen_ = 0;
};

/// v^T l. The result is clamped to [min l, max l] only to absorb the last
/// ulp of rounding; the weights themselves are already validated.
inline double mix_loss(const WeightVector& w, const LossVector& l) {
  if (w.size() != l.size()) {
    throw Error(Errc::dimension_mismatch, "weights have " + std::to_string(w.size()) +
                                              " entries, losses " + std::to_string(l.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * l[i];
  return std::clamp(s, l.min(), l.max());
}

struct RoundRecord {
  std::size_t t = 0;
  double mix_loss = 0.0;
  LossVector losses;
  std::optional<WeightVector> weights;
};

struct RegretSummary {
  std::size_t horizon = 0;
  double regret = 0.0;
  std::vector<double> pseudo_regret_vs;  // R_{i,T}, indexed by expert
  std::vector<double> series;            // R_t for t = 1..T
};

inline RegretSummary regret_of_trace(std::span<const RoundRecord> records) {
  if (records.empty()) throw Error(Errc::empty_trace, "cannot compute regret of an empty trace");
  const std::size_t m = records.front().losses.size();
  std::vector<double> expert_totals(m, 0.0);
  double learner_total = 0.0;

  RegretSummary out;
  out.horizon = records.size();
  out.series.reserve(records.size());
  for (const auto& rec : records) {
    if (rec.losses.size() != m) {
      throw Error(Errc::dimension_mismatch, "trace mixes expert counts " + std::to_string(m) +
                                                " and " + std::to_string(rec.losses.size()));
    }
    learner_total += rec.mix_loss;
    for (std::size_t i = 0; i < m; ++i) expert_totals[i] += rec.losses[i];
    const double best = *std::min_element(expert_totals.begin(), expert_totals.end());
    out.series.push_back(learner_total - best);
  }
  out.pseudo_regret_vs.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.pseudo_regret_vs[i] = learner_total - expert_totals[i];
  out.regret = out.series.back();
  return out;
}

}  // namespace hedgebench
