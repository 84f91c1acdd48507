#ifndef JSCC_ASYMPTOTICS_HPP
#define JSCC_ASYMPTOTICS_HPP

#include <cmath>
#include <optional>

#include "jscc/error.hpp"
#include "jscc/info_measures.hpp"
#include "jscc/scalar_search.hpp"
#include "jscc/tilted_family.hpp"

namespace jscc {

/// Assumption 1 uses the down family, Assumption 2 the up family.
enum class AssumptionLevel { one = 1, two = 2 };

struct AsymptoticSummary {
  double capacity = 0.0;             // log|X| - H^{W_c}(X|Z)
  double entropy_rate_source = 0.0;  // H^{W_s}(M)
  double entropy_rate_channel = 0.0;
  double dispersion_source = 0.0;    // V^{W_s}(M)
  double dispersion_channel = 0.0;   // V^{W_c}(X|Z)
  double optimal_rate = 0.0;         // C / H^{W_s}(M)
  double dispersion = 0.0;           // (1/H^2)[(C/H) V_s + V_c]
  std::optional<double> critical_rate;  // when Assumption 2 holds (at the family's r)
};

struct ConverseExponent {
  double evaluation_form = 0.0;  // theta(a(R)) a(R) - U(theta(a(R)))
  double sup_form = 0.0;         // sup_theta (theta R - U(theta)) / (1 - theta)
  double theta_star = 0.0;
  double a = 0.0;
};

namespace detail {

inline TiltedFamily family_for(const TiltedFamily& f, AssumptionLevel level) {
  return f.with_variant(level == AssumptionLevel::one ? FamilyVariant::down() : FamilyVariant::up());
}

inline constexpr double kRateTolerance = 1e-12;

}  // namespace detail

/// E_{1,j}(r) = sup_{s in (0,1)} [sR - U_down(s)] or
/// E_{2,j}(r) = sup_{s in [0,1/2]} (sR - U_up(s)) / (1 - s).
inline double exponent_direct(const TiltedFamily& family, double R, AssumptionLevel level) {
  const TiltedFamily f = detail::family_for(family, level);
  if (f.u(0.0) > R + detail::kRateTolerance)
    throw RateOutOfRange("exponent_direct: r H(M) + H(X|Z) exceeds R");
  SearchPoint p;
  if (level == AssumptionLevel::one) {
    p = golden_maximize([&](double s) { return s * R - f.U(s); }, 0.0, TiltedFamily::kThetaMax, 1e-13);
  } else {
    p = golden_maximize([&](double s) { return (s * R - f.U(s)) / (1.0 - s); }, 0.0, 0.5, 1e-13);
  }
  return std::max(0.0, p.value);
}

/// Converse exponent in both of its displayed forms.
inline ConverseExponent exponent_converse(const TiltedFamily& family, double R, AssumptionLevel level) {
  const TiltedFamily f = detail::family_for(family, level);
  if (!(R > f.u(0.0))) throw RateOutOfRange("exponent_converse: R must exceed r H(M) + H(X|Z)");
  ConverseExponent out;
  try {
    out.theta_star = f.theta_of_R(R);
  } catch (const OutOfRange&) {
    throw RateOutOfRange("exponent_converse: R must be below r H_0(M) + H_0(X|Z)");
  }
  out.a = f.u(out.theta_star);
  out.evaluation_form = out.theta_star * out.a - f.U(out.theta_star);
  const double lo = level == AssumptionLevel::one ? TiltedFamily::kThetaMin : 0.0;
  const SearchPoint p = golden_maximize([&](double t) { return (t * R - f.U(t)) / (1.0 - t); }, lo,
                                        TiltedFamily::kThetaMax, 1e-14);
  out.sup_form = p.value;
  return out;
}

/// R_cr of the up family.
inline double critical_rate(const TiltedFamily& family) {
  return family.with_variant(FamilyVariant::up()).critical_rate();
}

inline AsymptoticSummary asymptotic_summary(const SourceChain& source, const JointChannelChain& channel,
                                            std::optional<double> r = std::nullopt) {
  AsymptoticSummary s;
  const double R = std::log(static_cast<double>(channel.x_size()));
  s.entropy_rate_source = entropy_rate_source(source);
  s.entropy_rate_channel = entropy_rate_tm(channel);
  s.dispersion_source = dispersion_source(source);
  s.dispersion_channel = dispersion_tm(channel);
  s.capacity = R - s.entropy_rate_channel;
  s.optimal_rate = s.capacity / s.entropy_rate_source;
  const double h = s.entropy_rate_source;
  s.dispersion = (s.optimal_rate * s.dispersion_source + s.dispersion_channel) / (h * h);
  if (r && check_assumption2(channel)) {
    s.critical_rate = TiltedFamily(source, channel, *r, FamilyVariant::up()).critical_rate();
  }
  return s;
}

/// n^{1-2t}-scale coefficient delta^2 / (2 dispersion).
inline double moderate_deviation(const AsymptoticSummary& s, double delta, double t) {
  if (!(s.dispersion > 0.0)) throw DegenerateDispersion("moderate_deviation: dispersion must be > 0");
  if (!(t > 0.0 && t < 0.5)) throw DomainError("moderate_deviation: t must lie in (0, 1/2)");
  if (!(delta >= 0.0)) throw DomainError("moderate_deviation: delta must be nonnegative");
  return 0.5 * delta * delta / s.dispersion;
}

/// n (C/H - k/n)^2 / (2 dispersion).
inline double md_approx(const AsymptoticSummary& s, long k, long n) {
  if (!(s.dispersion > 0.0)) throw DegenerateDispersion("md_approx: dispersion must be > 0");
  if (n <= 0 || k <= 0) throw DomainError("md_approx: k and n must be positive");
  const double rate = static_cast<double>(k) / static_cast<double>(n);
  if (!(rate < s.optimal_rate)) throw RateOutOfRange("md_approx: k/n must be below C/H");
  const double gap = s.optimal_rate - rate;
  return static_cast<double>(n) * gap * gap / (2.0 * s.dispersion);
}

}  // namespace jscc

#endif  // JSCC_ASYMPTOTICS_HPP
