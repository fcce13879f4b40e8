// Closed-form regret bounds, the exact regret of constant-rate Hedge on the
// constant-loss instance, and a plug-in Bernstein constant estimator.
//
// Bound ids (all logs natural):
//   prop1        upper  sqrt(T ln M)                     (eta_t = 2 sqrt(ln M / t))
//   thm1         upper  (4 ln M + 25) / gap
//   prop2        lower  ln M / (256 gap),  T >= ln M / (16 gap^2)
//   thm2         upper  c1 sqrt(tau0 ln M) + (c2 ln M + c3 ln(1/gap) + c4) / gap
//   cor1-exp     upper  (5 c1 + 2 c2) ln M / gap + 2 c3 ln(1/gap) / gap + 2 c4 / gap
//   cor1-prob    upper  (sqrt(8) c1 + 2 c2) ln M / gap + c1 sqrt(8 ln M ln(1/eps)) / gap
//                       + 2 c3 ln(1/gap) / gap + 2 c4 / gap
//   prop3-const  lower  min(sqrt(T ln M) / (3 c0), T / 3)
//   prop3-dbl    lower  min(sqrt(T ln M) / (6 c0), T / 12)
//   thm4         lower  min(sqrt(T ln M) / c0, T) / 3
//   prop4        upper  C3 (B ln M)^(1/(2-beta)) T^((1-beta)/(2-beta)) + C4 ln M
//   thm5         lower  1 / (450 c0^4 (ln M)^2 gap),  T >= 1 / (4 gap^2)
// with c2 = c1 + sqrt(8)/c0, c3 = sqrt(8)/c0, c4 = 16/c0^2, C3 = max(1, 4 C1^2)
// and C4 = 2 C2.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hedgebench/core.hpp"
#include "hedgebench/environments.hpp"
#include "hedgebench/rng.hpp"

namespace hedgebench {

enum class BoundDirection { upper, lower };

inline std::string_view to_string(BoundDirection d) { return d == BoundDirection::upper ? "upper" : "lower"; }

inline constexpr std::array<std::string_view, 11> kBoundIds{
    "prop1", "thm1", "prop2", "thm2", "cor1-exp", "cor1-prob", "prop3-const", "prop3-dbl", "thm4", "prop4", "thm5"};

struct BoundParams {
  std::optional<double> M;
  std::optional<double> T;
  std::optional<double> delta;
  std::optional<double> c0;
  std::optional<double> c1;
  std::optional<double> tau0;
  std::optional<double> beta;
  std::optional<double> B;
  std::optional<double> epsilon;
  std::optional<double> C1;
  std::optional<double> C2;
};

struct BoundValue {
  std::string id;
  double value = 0.0;
  BoundDirection direction = BoundDirection::upper;
  std::string validity;            // the domain condition that was checked
  std::vector<std::string> notes;  // e.g. defaulted constants
};

/// Constants derived from (c0, c1) for the adversarial-with-gap bounds.
struct GapConstants {
  double c1, c2, c3, c4;
};

inline GapConstants gap_constants(double c0, double c1) {
  const double r8 = std::sqrt(8.0);
  return {c1, c1 + r8 / c0, r8 / c0, 16.0 / (c0 * c0)};
}

namespace detail {

inline double need(const std::optional<double>& v, std::string_view bound, std::string_view name) {
  if (!v) throw Error(Errc::missing_parameter, std::string(bound) + " requires --" + std::string(name));
  if (!std::isfinite(*v)) throw Error(Errc::missing_parameter, std::string(bound) + ": " + std::string(name) + " must be finite");
  return *v;
}

inline void require(bool ok, std::string_view bound, std::string_view condition) {
  if (!ok) {
    throw Error(Errc::out_of_validity_domain,
                std::string(bound) + " outside its validity domain: requires " + std::string(condition));
  }
}

}  // namespace detail

inline BoundValue theory_value(std::string_view id, const BoundParams& p) {
  using detail::need;
  using detail::require;
  BoundValue out;
  out.id = std::string(id);

  if (id == "prop1") {
    const double m = need(p.M, id, "M"), t = need(p.T, id, "T");
    require(m >= 2 && t >= 1, id, "M >= 2, T >= 1");
    out.value = std::sqrt(t * std::log(m));
    out.validity = "M >= 2, T >= 1";
    return out;
  }
  if (id == "thm1") {
    const double m = need(p.M, id, "M"), d = need(p.delta, id, "delta");
    require(m >= 3, id, "M >= 3");
    require(d > 0 && d <= 1, id, "0 < Δ <= 1");
    out.value = (4.0 * std::log(m) + 25.0) / d;
    out.validity = "M >= 3, 0 < Δ <= 1";
    return out;
  }
  if (id == "prop2") {
    const double m = need(p.M, id, "M"), d = need(p.delta, id, "delta"), t = need(p.T, id, "T");
    require(m >= 4, id, "M >= 4");
    require(d > 0 && d < 0.25, id, "0 < Δ < 1/4");
    require(t >= std::log(m) / (16.0 * d * d), id, "T ≥ lnM/(16Δ²)");
    out.value = std::log(m) / (256.0 * d);
    out.direction = BoundDirection::lower;
    out.validity = "M >= 4, 0 < Δ < 1/4, T ≥ lnM/(16Δ²)";
    return out;
  }
  if (id == "thm2" || id == "cor1-exp" || id == "cor1-prob") {
    const double m = need(p.M, id, "M"), d = need(p.delta, id, "delta"), c0 = need(p.c0, id, "c0");
    if (!p.c1) out.notes.push_back("c1 defaulted to 1");
    const double c1 = p.c1.value_or(1.0);
    require(m >= 3, id, "M >= 3");
    require(d > 0 && d < 1, id, "0 < Δ < 1");
    require(c0 > 0 && c1 > 0, id, "c0 > 0, c1 > 0");
    const GapConstants c = gap_constants(c0, c1);
    const double lm = std::log(m), linv = std::log(1.0 / d);
    if (id == "thm2") {
      const double tau0 = need(p.tau0, id, "tau0");
      require(tau0 >= 1, id, "τ0 >= 1");
      out.value = c.c1 * std::sqrt(tau0 * lm) + (c.c2 * lm + c.c3 * linv + c.c4) / d;
      out.validity = "M >= 3, 0 < Δ < 1, τ0 >= 1";
    } else if (id == "cor1-exp") {
      out.value = (5.0 * c.c1 + 2.0 * c.c2) * lm / d + 2.0 * c.c3 * linv / d + 2.0 * c.c4 / d;
      out.validity = "M >= 3, 0 < Δ < 1";
    } else {
      const double eps = need(p.epsilon, id, "epsilon");
      require(eps > 0 && eps < 1, id, "0 < ε < 1");
      out.value = (c.c1 * std::sqrt(8.0) + 2.0 * c.c2) * lm / d +
                  c.c1 * std::sqrt(8.0 * lm * std::log(1.0 / eps)) / d + 2.0 * c.c3 * linv / d + 2.0 * c.c4 / d;
      out.validity = "M >= 3, 0 < Δ < 1, 0 < ε < 1";
    }
    return out;
  }
  if (id == "prop3-const" || id == "prop3-dbl" || id == "thm4") {
    const double m = need(p.M, id, "M"), t = need(p.T, id, "T"), c0 = need(p.c0, id, "c0");
    require(m >= 2 && t >= 1 && c0 > 0, id, "M >= 2, T >= 1, c0 > 0");
    const double s = std::sqrt(t * std::log(m));
    if (id == "prop3-const") out.value = std::min(s / (3.0 * c0), t / 3.0);
    else if (id == "prop3-dbl") out.value = std::min(s / (6.0 * c0), t / 12.0);
    else out.value = std::min(s / c0, t) / 3.0;
    out.direction = BoundDirection::lower;
    out.validity = "M >= 2, T >= 1, c0 > 0";
    return out;
  }
  if (id == "prop4") {
    const double m = need(p.M, id, "M"), t = need(p.T, id, "T"), beta = need(p.beta, id, "beta"),
                 b = need(p.B, id, "B");
    if (!p.C1) out.notes.push_back("C1 defaulted to 1");
    if (!p.C2) out.notes.push_back("C2 defaulted to 1");
    const double c1 = p.C1.value_or(1.0), c2 = p.C2.value_or(1.0);
    require(m >= 2 && t >= 1, id, "M >= 2, T >= 1");
    require(beta >= 0 && beta <= 1, id, "0 <= β <= 1");
    require(b > 0 && c1 > 0 && c2 > 0, id, "B > 0, C1 > 0, C2 > 0");
    const double c3 = std::max(1.0, 4.0 * c1 * c1), c4 = 2.0 * c2;
    const double lm = std::log(m);
    out.value = c3 * std::pow(b * lm, 1.0 / (2.0 - beta)) * std::pow(t, (1.0 - beta) / (2.0 - beta)) + c4 * lm;
    out.validity = "M >= 2, T >= 1, 0 <= β <= 1, B > 0";
    return out;
  }
  if (id == "thm5") {
    const double m = need(p.M, id, "M"), d = need(p.delta, id, "delta"), c0 = need(p.c0, id, "c0"),
                 t = need(p.T, id, "T");
    require(m >= 2, id, "M >= 2");
    require(d > 0, id, "Δ > 0");
    require(c0 >= 1, id, "c0 >= 1");
    require(t >= 1.0 / (4.0 * d * d), id, "T ≥ 1/(4Δ²)");
    const double lm = std::log(m);
    out.value = 1.0 / (450.0 * std::pow(c0, 4) * lm * lm * d);
    out.direction = BoundDirection::lower;
    out.validity = "M >= 2, Δ > 0, c0 >= 1, T ≥ 1/(4Δ²)";
    return out;
  }
  throw Error(Errc::missing_parameter, "unknown bound id: " + std::string(id));
}

/// Regret of constant-rate Hedge on the constant-loss instance
/// (l_1 = 0, l_i = 1), summed in closed form:
///   sum_{t=1..T} x_t / (1 + x_t),  x_t = (M-1) exp(-c0 sqrt(ln M) (t-1) / sqrt(T)).
inline double constant_hedge_exact_regret(std::size_t horizon, std::size_t experts, double c0) {
  if (horizon < 1) throw Error(Errc::invalid_horizon, "horizon must be >= 1");
  if (experts < 2) throw Error(Errc::invalid_instance, "need at least 2 experts");
  const double rate = c0 * std::sqrt(std::log(static_cast<double>(experts))) / std::sqrt(static_cast<double>(horizon));
  const double others = static_cast<double>(experts - 1);
  double sum = 0.0;
  for (std::size_t t = 1; t <= horizon; ++t) {
    const double x = others * std::exp(-rate * static_cast<double>(t - 1));
    sum += x / (1.0 + x);
  }
  return sum;
}

/// Plug-in estimate of the smallest B in the (beta, B)-Bernstein condition:
///   max_{i != i*}  E[(l_i - l_i*)^2] / E[l_i - l_i*]^beta.
/// Deterministic instances are evaluated exactly from a single round.
inline double bernstein_estimate(const InstanceSpec& spec, double beta, std::size_t n_samples, const RngStream& rng) {
  if (spec.kind == InstanceKind::adversarial_gap_d) {
    throw Error(Errc::undefined_gap, spec.id + ": the Bernstein estimate needs an i.i.d. instance");
  }
  if (!spec.i_star) throw Error(Errc::undeclared_best_expert, spec.id + ": no declared best expert");
  if (!(beta >= 0.0 && beta <= 1.0)) throw Error(Errc::out_of_validity_domain, "beta must lie in [0, 1]");
  const std::size_t best = *spec.i_star;
  const std::size_t n = spec.deterministic() ? 1 : n_samples;
  if (n < 1) throw Error(Errc::invalid_config, "need at least one sample");

  std::vector<double> first(spec.experts, 0.0), second(spec.experts, 0.0);
  for (std::size_t s = 1; s <= n; ++s) {
    const LossVector l = sample_losses(spec, s, rng);
    for (std::size_t i = 0; i < spec.experts; ++i) {
      const double d = l[i] - l[best];
      first[i] += d;
      second[i] += d * d;
    }
  }
  double b = 0.0;
  for (std::size_t i = 0; i < spec.experts; ++i) {
    if (i == best) continue;
    const double mean = first[i] / static_cast<double>(n);
    if (!(mean > 0.0)) {
      throw Error(Errc::zero_gap_division, spec.id + ": estimated gap of expert " + std::to_string(i) + " is not positive");
    }
    b = std::max(b, (second[i] / static_cast<double>(n)) / std::pow(mean, beta));
  }
  return b;
}

}  // namespace hedgebench
