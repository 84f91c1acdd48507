#ifndef JSCC_TILTED_FAMILY_HPP
#define JSCC_TILTED_FAMILY_HPP

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <tuple>

#include "jscc/error.hpp"
#include "jscc/info_measures.hpp"
#include "jscc/markov.hpp"
#include "jscc/scalar_search.hpp"

namespace jscc {

enum class FamilyKind { down, up, fixed };

struct FamilyVariant {
  FamilyKind kind = FamilyKind::down;
  double theta_prime = 0.0;  // only for fixed

  static FamilyVariant down() { return {FamilyKind::down, 0.0}; }
  static FamilyVariant up() { return {FamilyKind::up, 0.0}; }
  static FamilyVariant fixed(double theta_prime) { return {FamilyKind::fixed, theta_prime}; }
};

/// Memoized spectral quantities of one (source, channel) pair. Safe for
/// concurrent readers and writers.
class SpectralCache {
public:
  SpectralCache(SourceChain source, JointChannelChain channel)
      : source_(std::move(source)),
        channel_(std::move(channel)),
        source_chain_(JointChannelChain::from_source(source_)) {}

  const SourceChain& source() const noexcept { return source_; }
  const JointChannelChain& channel() const noexcept { return channel_; }

  double source_term(double theta) const {
    return value(Tag::source, theta, 0.0, [&] { return theta_h_source(source_, theta); });
  }

  double channel_term(const FamilyVariant& v, double theta) const {
    switch (v.kind) {
      case FamilyKind::down:
        return value(Tag::down, theta, 0.0, [&] { return theta_h_down_tm(channel_, theta); });
      case FamilyKind::up:
        return value(Tag::up, theta, 0.0, [&] { return theta_h_up_tm(channel_, theta); });
      case FamilyKind::fixed:
        return value(Tag::fixed, theta, v.theta_prime,
                     [&] { return theta_h_two_param_tm(channel_, theta, v.theta_prime); });
    }
    return 0.0;
  }

  CorrectionTerms source_delta(double theta) const {
    return terms(Tag::source_delta, theta, 0.0, [&] { return delta_bounds(source_chain_, theta); });
  }
  CorrectionTerms source_xi(double theta) const {
    return terms(Tag::source_xi, theta, 0.0, [&] { return xi_bounds(source_chain_, theta); });
  }
  CorrectionTerms channel_delta(double theta) const {
    return terms(Tag::delta, theta, 0.0, [&] { return delta_bounds(channel_, theta); });
  }
  CorrectionTerms channel_xi(double theta) const {
    return terms(Tag::xi, theta, 0.0, [&] { return xi_bounds(channel_, theta); });
  }
  CorrectionTerms channel_zeta(double theta, double theta_prime) const {
    return terms(Tag::zeta, theta, theta_prime,
                 [&] { return zeta_bounds(channel_, theta, theta_prime); });
  }

private:
  enum class Tag { source, down, up, fixed, source_delta, source_xi, delta, xi, zeta };
  using Key = std::tuple<Tag, double, double>;

  template <class F>
  double value(Tag tag, double a, double b, F&& compute) const {
    const Key key{tag, a, b};
    {
      std::shared_lock lock(mutex_);
      auto it = values_.find(key);
      if (it != values_.end()) return it->second;
    }
    const double v = compute();
    std::unique_lock lock(mutex_);
    values_.emplace(key, v);
    return v;
  }

  template <class F>
  CorrectionTerms terms(Tag tag, double a, double b, F&& compute) const {
    const Key key{tag, a, b};
    {
      std::shared_lock lock(mutex_);
      auto it = terms_.find(key);
      if (it != terms_.end()) return it->second;
    }
    const CorrectionTerms v = compute();
    std::unique_lock lock(mutex_);
    terms_.emplace(key, v);
    return v;
  }

  SourceChain source_;
  JointChannelChain channel_;
  JointChannelChain source_chain_;
  mutable std::shared_mutex mutex_;
  mutable std::map<Key, double> values_;
  mutable std::map<Key, CorrectionTerms> terms_;
};

/// U(theta) = r theta H^{W_s}_{1-theta}(M) + theta H^{variant}_{1-theta}(X|Z),
/// its derivative u, and the inverses theta(a), a(R).
class TiltedFamily {
public:
  static constexpr double kThetaMin = -50.0;
  static constexpr double kThetaMax = 1.0 - 1e-6;

  TiltedFamily(SourceChain source, JointChannelChain channel, double r,
               FamilyVariant variant = FamilyVariant::down())
      : TiltedFamily(std::make_shared<SpectralCache>(std::move(source), std::move(channel)), r,
                     variant) {}

  TiltedFamily(std::shared_ptr<const SpectralCache> cache, double r, FamilyVariant variant)
      : cache_(std::move(cache)), r_(r), variant_(variant) {
    if (!(r_ > 0.0) || !std::isfinite(r_)) throw DomainError("TiltedFamily: rate ratio r must be > 0");
    if (variant_.kind == FamilyKind::down) {
      if (!check_assumption1(cache_->channel()))
        throw AssumptionViolated("TiltedFamily: down variant needs Assumption 1");
    } else {
      if (!check_assumption2(cache_->channel()))
        throw AssumptionViolated("TiltedFamily: up/fixed variant needs Assumption 2");
      if (variant_.kind == FamilyKind::fixed && !(variant_.theta_prime < 1.0))
        throw DomainError("TiltedFamily: theta' must be < 1");
    }
  }

  TiltedFamily with_rate(double r) const { return TiltedFamily(cache_, r, variant_); }
  TiltedFamily with_variant(FamilyVariant v) const { return TiltedFamily(cache_, r_, v); }

  double r() const noexcept { return r_; }
  const FamilyVariant& variant() const noexcept { return variant_; }
  const SpectralCache& cache() const noexcept { return *cache_; }
  const SourceChain& source() const noexcept { return cache_->source(); }
  const JointChannelChain& channel() const noexcept { return cache_->channel(); }
  /// R = log |X|.
  double log_alphabet() const { return std::log(static_cast<double>(channel().x_size())); }

  double U(double theta) const {
    check(theta);
    return r_ * cache_->source_term(theta) + cache_->channel_term(variant_, theta);
  }

  double u(double theta) const {
    check(theta);
    const double h = std::min(1e-5 * std::max(1.0, std::abs(theta)), (1.0 - theta) / 4.0);
    auto d = [&](double step) { return (U(theta + step) - U(theta - step)) / (2.0 * step); };
    return (4.0 * d(h / 2.0) - d(h)) / 3.0;
  }

  /// (1 - theta) u(theta) + U(theta): the rate attained at slope u(theta).
  double rate_at(double theta) const { return (1.0 - theta) * u(theta) + U(theta); }

  double a_lower() const { return u(kThetaMin); }
  double a_upper() const { return u(kThetaMax); }

  double theta_of_a(double a) const {
    const double lo = a_lower(), hi = a_upper();
    if (!(a > lo && a < hi)) throw OutOfRange("theta_of_a: a outside (a_lower, a_upper)");
    return bisect_increasing([&](double t) { return u(t); }, a, kThetaMin, kThetaMax);
  }

  double R_of_a(double a) const {
    const double t = theta_of_a(a);
    return (1.0 - t) * a + U(t);
  }

  /// theta with rate_at(theta) = R.
  double theta_of_R(double R) const {
    const double lo = rate_at(kThetaMin), hi = rate_at(kThetaMax);
    if (!(R > lo && R < hi)) throw OutOfRange("a_of_R: R outside the admissible interval");
    return bisect_increasing([&](double t) { return rate_at(t); }, R, kThetaMin, kThetaMax);
  }

  double a_of_R(double R) const { return u(theta_of_R(R)); }

  /// R evaluated at slope u(1/2).
  double critical_rate() const { return rate_at(0.5); }

private:
  static void check(double theta) {
    if (!(theta < 1.0) || !std::isfinite(theta)) throw DomainError("TiltedFamily: theta must be < 1");
  }

  std::shared_ptr<const SpectralCache> cache_;
  double r_;
  FamilyVariant variant_;
};

}  // namespace jscc

#endif  // JSCC_TILTED_FAMILY_HPP
