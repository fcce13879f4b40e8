// Loss-generating instances.
//
// An InstanceSpec is an immutable description; sample_losses() is a pure
// function of (spec, round, RngStream), so any trial can be regenerated
// independently of the others.
//
// Built-in catalogue:
//   fig-a  Bernoulli 0.3, 2 x 0.4, 7 x 0.5           (gap 0.1)
//   fig-b  Bernoulli 2 x 0.5, 8 x 0.7                (gap 0, tied leaders)
//   fig-c  Beta (0.04,0.96), 4 x (0.08,0.92), 5 x (0.5,0.5)   (gap 0.04)
//   fig-d  deterministic 3-expert sequence, leader switches at t = 80
//   prop3  l_1 = 0, l_i = 1
//   t4     l_1 = 0, l_i = delta with delta = min(1, sqrt(ln M / T) / c0)
//   prop2  Bernoulli(1/2 - delta) at i*, Bernoulli(1/2) elsewhere
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "hedgebench/core.hpp"
#include "hedgebench/rng.hpp"

namespace hedgebench {

struct Bernoulli {
  double p;
};
struct Beta {
  double a;
  double b;
};
struct Constant {
  double value;
};
using ExpertLaw = std::variant<Bernoulli, Beta, Constant>;

inline double mean_of(const ExpertLaw& law) {
  return std::visit(
      [](const auto& d) -> double {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, Bernoulli>) return d.p;
        else if constexpr (std::is_same_v<D, Beta>) return d.a / (d.a + d.b);
        else return d.value;
      },
      law);
}

enum class InstanceKind {
  bernoulli_gap,
  beta_small_loss,
  adversarial_gap_d,
  constant_prop3,
  bernstein_t4,
  minimax_prop2,
  custom,
};

struct InstanceSpec {
  std::string id;
  InstanceKind kind = InstanceKind::custom;
  std::size_t experts = 0;
  std::vector<ExpertLaw> laws;      // one per expert; empty for adversarial_gap_d
  std::optional<std::size_t> i_star;  // 0-based
  std::optional<double> gap;
  std::size_t tau0 = 0;               // adversarial_gap_d only

  bool deterministic() const {
    if (kind == InstanceKind::adversarial_gap_d) return true;
    for (const auto& law : laws) {
      if (!std::holds_alternative<Constant>(law)) return false;
    }
    return true;
  }
};

inline constexpr std::array<std::string_view, 7> kInstanceIds{"fig-a", "fig-b", "fig-c", "fig-d",
                                                              "prop3", "t4",    "prop2"};

/// Parameters of the sized families (prop3, t4, prop2). Unset fields take
/// the family defaults; fixed instances ignore them.
struct InstanceOptions {
  std::optional<std::size_t> experts = std::nullopt;
  std::optional<double> delta = std::nullopt;
  std::optional<std::size_t> i_star = std::nullopt;  // 0-based
  std::optional<std::size_t> horizon = std::nullopt;
  std::optional<double> c0 = std::nullopt;
};

namespace detail {

inline void check_law(const ExpertLaw& law, std::size_t i) {
  const bool ok = std::visit(
      [](const auto& d) -> bool {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, Bernoulli>) return d.p >= 0.0 && d.p <= 1.0;
        else if constexpr (std::is_same_v<D, Beta>)
          return d.a > 0.0 && d.b > 0.0 && std::isfinite(d.a) && std::isfinite(d.b);
        else return d.value >= 0.0 && d.value <= 1.0;
      },
      law);
  if (!ok) throw Error(Errc::invalid_instance, "invalid loss distribution for expert " + std::to_string(i));
}

/// Leader by mean (lowest index on ties) and the gap to the runner-up.
inline std::pair<std::size_t, double> mean_gap(const std::vector<ExpertLaw>& laws) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < laws.size(); ++i) {
    if (mean_of(laws[i]) < mean_of(laws[best])) best = i;
  }
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < laws.size(); ++i) {
    if (i != best) gap = std::min(gap, mean_of(laws[i]) - mean_of(laws[best]));
  }
  return {best, gap};
}

inline InstanceSpec from_laws(std::string id, InstanceKind kind, std::vector<ExpertLaw> laws) {
  InstanceSpec s;
  s.id = std::move(id);
  s.kind = kind;
  s.experts = laws.size();
  s.laws = std::move(laws);
  auto [best, gap] = mean_gap(s.laws);
  s.i_star = best;
  s.gap = gap;
  return s;
}

template <class Law>
void append(std::vector<ExpertLaw>& laws, std::size_t n, Law law) {
  laws.insert(laws.end(), n, ExpertLaw{law});
}

}  // namespace detail

/// Checks supports, dimensions and that the declared gap matches the means.
inline void validate(const InstanceSpec& s) {
  if (s.experts < 2) throw Error(Errc::invalid_instance, s.id + ": need at least 2 experts");
  if (s.kind == InstanceKind::adversarial_gap_d) {
    if (s.experts != 3) throw Error(Errc::invalid_instance, s.id + ": the fig-d sequence has 3 experts");
    return;
  }
  if (s.laws.size() != s.experts) {
    throw Error(Errc::invalid_instance, s.id + ": expected " + std::to_string(s.experts) +
                                            " distributions, got " + std::to_string(s.laws.size()));
  }
  for (std::size_t i = 0; i < s.laws.size(); ++i) detail::check_law(s.laws[i], i);
  if (s.i_star && *s.i_star >= s.experts) {
    throw Error(Errc::invalid_instance, s.id + ": best expert index out of range");
  }
  if (s.i_star && s.gap) {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.experts; ++i) {
      if (i != *s.i_star) gap = std::min(gap, mean_of(s.laws[i]) - mean_of(s.laws[*s.i_star]));
    }
    if (std::abs(gap - *s.gap) > 1e-12) {
      throw Error(Errc::invalid_instance, s.id + ": declared gap " + detail::fmt_double(*s.gap) +
                                              " disagrees with the means (" + detail::fmt_double(gap) + ")");
    }
  }
}

/// Losses of the deterministic fig-d sequence at round t >= 1.
inline LossVector fig_d_losses(std::size_t t) {
  if (t == 1) return LossVector({0.5, 0.0, 0.75});
  if (t >= 80 || t % 2 == 0) return LossVector({0.0, 1.0, 0.75});
  return LossVector({1.0, 0.0, 0.75});
}

/// Result of scanning a deterministic sequence for the condition
/// L_{i,t} - L_{i*,t} >= gap * t for all t >= tau0 and i != i*.
struct AdversarialGap {
  std::size_t i_star = 0;
  std::size_t tau0 = 0;
  double gap = 0.0;
};

inline LossVector sample_losses(const InstanceSpec& spec, std::size_t t, const RngStream& rng);

/// Scans rounds 1..horizon. i* is the leader at the horizon; tau0 is the
/// first round after which it leads strictly at every checked round; the gap
/// is the smallest (L_i - L_{i*}) / t over that range. When `tau0` is given
/// the gap is taken from that round on instead.
inline AdversarialGap scan_adversarial_gap(const InstanceSpec& spec, std::size_t horizon,
                                           std::optional<std::size_t> tau0 = std::nullopt) {
  if (horizon < 1) throw Error(Errc::invalid_horizon, "scan horizon must be >= 1");
  if (!spec.deterministic()) throw Error(Errc::undefined_gap, spec.id + ": gap scan needs a deterministic instance");
  std::vector<std::vector<double>> cum;  // cum[t-1][i]
  cum.reserve(horizon);
  std::vector<double> running(spec.experts, 0.0);
  for (std::size_t t = 1; t <= horizon; ++t) {
    const LossVector l = sample_losses(spec, t, RngStream{});
    for (std::size_t i = 0; i < spec.experts; ++i) running[i] += l[i];
    cum.push_back(running);
  }
  AdversarialGap out;
  const auto& last = cum.back();
  out.i_star = static_cast<std::size_t>(std::min_element(last.begin(), last.end()) - last.begin());

  auto margin = [&](std::size_t t) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < spec.experts; ++i) {
      if (i != out.i_star) m = std::min(m, cum[t - 1][i] - cum[t - 1][out.i_star]);
    }
    return m;
  };
  if (tau0) {
    if (*tau0 < 1 || *tau0 > horizon) throw Error(Errc::invalid_horizon, "tau0 outside the scanned range");
    out.tau0 = *tau0;
  } else {
    out.tau0 = horizon;
    while (out.tau0 > 1 && margin(out.tau0 - 1) > 0.0) --out.tau0;
    if (margin(out.tau0) <= 0.0) throw Error(Errc::undefined_gap, spec.id + ": no strict leader at the horizon");
  }
  out.gap = std::numeric_limits<double>::infinity();
  for (std::size_t t = out.tau0; t <= horizon; ++t) {
    out.gap = std::min(out.gap, margin(t) / static_cast<double>(t));
  }
  return out;
}

inline constexpr std::size_t kFigDScanHorizon = 10000;

inline InstanceSpec builtin_instance(std::string_view name, const InstanceOptions& opt = {}) {
  using detail::append;
  std::vector<ExpertLaw> laws;
  if (name == "fig-a") {
    append(laws, 1, Bernoulli{0.3});
    append(laws, 2, Bernoulli{0.4});
    append(laws, 7, Bernoulli{0.5});
    return detail::from_laws("fig-a", InstanceKind::bernoulli_gap, std::move(laws));
  }
  if (name == "fig-b") {
    append(laws, 2, Bernoulli{0.5});
    append(laws, 8, Bernoulli{0.7});
    return detail::from_laws("fig-b", InstanceKind::bernoulli_gap, std::move(laws));
  }
  if (name == "fig-c") {
    append(laws, 1, Beta{0.04, 0.96});
    append(laws, 4, Beta{0.08, 0.92});
    append(laws, 5, Beta{0.5, 0.5});
    return detail::from_laws("fig-c", InstanceKind::beta_small_loss, std::move(laws));
  }
  if (name == "fig-d") {
    InstanceSpec s;
    s.id = "fig-d";
    s.kind = InstanceKind::adversarial_gap_d;
    s.experts = 3;
    const AdversarialGap g = scan_adversarial_gap(s, kFigDScanHorizon);
    s.i_star = g.i_star;
    s.tau0 = g.tau0;
    s.gap = g.gap;
    return s;
  }
  if (name == "prop3") {
    const std::size_t m = opt.experts.value_or(10);
    if (m < 2) throw Error(Errc::invalid_instance, "prop3: need at least 2 experts");
    append(laws, 1, Constant{0.0});
    append(laws, m - 1, Constant{1.0});
    return detail::from_laws("prop3", InstanceKind::constant_prop3, std::move(laws));
  }
  if (name == "t4") {
    const std::size_t m = opt.experts.value_or(10);
    const std::size_t horizon = opt.horizon.value_or(10000);
    const double c0 = opt.c0.value_or(2.0);
    if (m < 2 || horizon < 1 || !(c0 > 0.0)) {
      throw Error(Errc::invalid_instance, "t4: need M >= 2, T >= 1 and c0 > 0");
    }
    const double delta =
        std::min(1.0, std::sqrt(std::log(static_cast<double>(m)) / static_cast<double>(horizon)) / c0);
    append(laws, 1, Constant{0.0});
    append(laws, m - 1, Constant{delta});
    return detail::from_laws("t4", InstanceKind::bernstein_t4, std::move(laws));
  }
  if (name == "prop2") {
    const std::size_t m = opt.experts.value_or(16);
    const double delta = opt.delta.value_or(0.1);
    const std::size_t best = opt.i_star.value_or(0);
    if (m < 2 || best >= m || !(delta > 0.0) || delta > 0.5) {
      throw Error(Errc::invalid_instance, "prop2: need M >= 2, 0 <= i* < M and 0 < delta <= 1/2");
    }
    append(laws, m, Bernoulli{0.5});
    laws[best] = Bernoulli{0.5 - delta};
    return detail::from_laws("prop2", InstanceKind::minimax_prop2, std::move(laws));
  }
  throw Error(Errc::unknown_instance, "unknown instance: " + std::string(name));
}

inline LossVector sample_losses(const InstanceSpec& spec, std::size_t t, const RngStream& rng) {
  if (t < 1) throw Error(Errc::invalid_round, "round index must be >= 1");
  if (spec.kind == InstanceKind::adversarial_gap_d) return fig_d_losses(t);
  std::vector<double> out(spec.experts);
  for (std::size_t i = 0; i < spec.experts; ++i) {
    out[i] = std::visit(
        [&](const auto& d) -> double {
          using D = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<D, Constant>) {
            return d.value;
          } else {
            rng::CellStream cs(rng, t, i);
            if constexpr (std::is_same_v<D, Bernoulli>) return cs.uniform() < d.p ? 1.0 : 0.0;
            else return rng::beta_variate(cs, d.a, d.b);
          }
        },
        spec.laws[i]);
  }
  return LossVector(std::move(out));
}

/// Declared best expert and exact mean gap. Throws Errc::undefined_gap for
/// the adversarial sequence, whose gap only exists after a scan.
inline std::pair<std::size_t, double> gap_of(const InstanceSpec& spec) {
  if (spec.kind == InstanceKind::adversarial_gap_d || !spec.i_star || spec.laws.empty()) {
    throw Error(Errc::undefined_gap, spec.id + ": no stochastic gap (use scan_adversarial_gap)");
  }
  const std::size_t best = *spec.i_star;
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < spec.experts; ++i) {
    if (i != best) gap = std::min(gap, mean_of(spec.laws[i]) - mean_of(spec.laws[best]));
  }
  return {best, gap};
}

}  // namespace hedgebench
