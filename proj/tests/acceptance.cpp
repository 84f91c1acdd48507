// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "jscc/jscc.hpp"
#include "chains.hpp"
#include "reference.hpp"

using namespace jscc;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

const double kLog2 = std::log(2.0);

TiltedFamily example_family(double r = 0.75) {
  return TiltedFamily(fixtures::example_source(), fixtures::example_channel(), r, FamilyVariant::up());
}

// reference values of the numerical example
constexpr double kReferenceOptimalRate = 0.807317;
constexpr double kReferenceDispersion = 6.12809;
constexpr double kReferenceExponent = 0.0002826;
constexpr double kReferenceMd = 0.0002680;

// seeds of the random sandwich chains
constexpr unsigned long kSeed2 = 20240601;
constexpr unsigned long kSeed3 = 20240602;

Outcome optimal_rate() {
  const auto s = asymptotic_summary(fixtures::example_source(), fixtures::example_channel());
  const double d = std::abs(s.optimal_rate - kReferenceOptimalRate);
  return {d <= 1e-5, fmt("C/H = %.9f, |diff| = %.2e", s.optimal_rate, d)};
}

Outcome dispersion() {
  const auto s = asymptotic_summary(fixtures::example_source(), fixtures::example_channel());
  const double d = std::abs(s.dispersion - kReferenceDispersion);
  return {d <= 1e-3, fmt("dispersion = %.9f, |diff| = %.2e", s.dispersion, d)};
}

Outcome exponent() {
  const double e = exponent_direct(example_family(), kLog2, AssumptionLevel::two);
  const double d = std::abs(e - kReferenceExponent);
  return {d <= 1e-6, fmt("E = %.10f, |diff| = %.2e", e, d)};
}

Outcome md() {
  const auto s = asymptotic_summary(fixtures::example_source(), fixtures::example_channel());
  const double v = md_approx(s, 7500, 10000) / 10000.0;
  const double d = std::abs(v - kReferenceMd);
  return {d <= 1e-6, fmt("E_md/n = %.10f, |diff| = %.2e", v, d)};
}

Outcome convergence() {
  const auto base = example_family();
  const double e = exponent_direct(base, kLog2, AssumptionLevel::two);
  std::vector<double> per;
  for (long n : {10000L, 100000L, 1000000L}) {
    const auto r = direct_bound_a2(BoundQuery::make(base, n * 3 / 4, n));
    if (r.vacuous) return {false, "vacuous direct bound at n = " + std::to_string(n)};
    per.push_back(-r.log_prob_bound / static_cast<double>(n));
  }
  const bool monotone = per[0] < per[1] && per[1] < per[2] && std::abs(e - per[2]) <= std::abs(e - per[1]) &&
                        std::abs(e - per[1]) <= std::abs(e - per[0]);
  const double rel = std::abs(per[2] - e) / e;
  std::string d = "per-symbol " + fmt("%.8g, %.8g", per[0], per[1]) + fmt(", %.8g; rel gap %.2e", per[2], rel);
  return {monotone && rel <= 0.05, d};
}

Outcome ordering() {
  const auto base = example_family();
  const long n = 10000;
  int checked = 0, bad = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (long k = 6000; k <= 8000; k += 100) {
    const auto q = BoundQuery::make(base, k, n);
    const auto d = direct_bound_a2(q);
    const auto c = converse_bound_a2(q);
    if (d.vacuous || c.vacuous) continue;
    const double ne = static_cast<double>(n) *
                      exponent_direct(base.with_rate(static_cast<double>(k) / n), kLog2, AssumptionLevel::two);
    // -log P scale: converse above n E above direct
    const double up = -c.log_prob_bound, lo = -d.log_prob_bound;
    ++checked;
    if (!(up >= ne && ne >= lo)) ++bad;
    worst = std::min({worst, up - ne, ne - lo});
  }
  return {checked > 0 && bad == 0,
          std::to_string(checked) + " k values checked, " + std::to_string(bad) + fmt(" violations, min gap %.4g", worst)};
}

Outcome sandwich() {
  const std::vector<double> th{-0.7, -0.3, 0.3, 0.7};
  std::size_t entries = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& c : {fixtures::example_channel(), JointChannelChain::additive(fixtures::random_chain(2, kSeed2)),
                        JointChannelChain::additive(fixtures::random_chain(3, kSeed3))}) {
    const auto r = sandwich_report(c, th, th, 6);
    entries += r.entries.size();
    worst = std::min(worst, r.worst_margin());
  }
  return {worst >= -1e-9, std::to_string(entries) + fmt(" inequalities, worst margin %.3e", worst)};
}

struct Shot {
  std::vector<double> pm;
  JointTable pxz;
};

Outcome single_shot() {
  const std::vector<Shot> cases{
      {{0.9, 0.1}, JointTable::from_rows({{0.95}, {0.05}})},
      {{0.6, 0.4}, JointTable::from_rows({{0.9}, {0.1}})},
      {{0.5, 0.3, 0.2}, JointTable::from_rows({{0.8}, {0.15}, {0.05}})},
      {{0.7, 0.2, 0.1}, JointTable::from_rows({{0.45, 0.25}, {0.05, 0.25}})},
      {std::vector<double>(8, 0.125), JointTable::from_rows({{0.97}, {0.03}})},
      {{0.3, 0.25, 0.2, 0.1, 0.1, 0.05}, JointTable::from_rows({{0.6, 0.2}, {0.15, 0.05}})},
  };
  int bad = 0, conv_bites = 0;
  for (const auto& c : cases) {
    const auto w = conditional_additive_channel(c.pxz);
    const double truth = exhaustive_min_error(c.pm, w).min_error;
    const double log_truth = std::log(truth);
    const auto qz = c.pxz.y_marginal();

    double direct = std::numeric_limits<double>::infinity();
    for (int i = 1; i < 200; ++i) {
      const double s = i / 200.0;
      direct = std::min(direct, single_shot_direct(c.pm, c.pxz, s, DirectForm::down));
      if (s <= 0.5) direct = std::min(direct, single_shot_direct(c.pm, c.pxz, s, DirectForm::up));
    }
    double conv_e = 0.0;
    for (int i = 1; i <= 400; ++i) conv_e = std::max(conv_e, single_shot_converse(c.pm, c.pxz, qz, i / 400.0));
    double conv_33 = -std::numeric_limits<double>::infinity();
    for (double s = 0.02; s < 20.0; s *= 1.25)
      for (double rho = -3.0; rho < 0.99; rho += 0.04)
        for (double sigma = 0.0; sigma <= 4.0; sigma += 0.2)
          conv_33 = std::max(conv_33, single_shot_converse_renyi(c.pm, c.pxz, qz, s, rho, sigma));

    const bool lower_ok = (conv_e <= 0.0 || std::log(conv_e) <= log_truth + 1e-12) && conv_33 <= log_truth + 1e-12;
    const bool upper_ok = log_truth <= std::log(direct) + 1e-12;
    if (!lower_ok || !upper_ok) ++bad;
    if (conv_e > 0.0 || std::isfinite(conv_33)) ++conv_bites;
  }

  // two-term bound at unit threshold against a grid of thresholds
  const std::vector<double> pm{0.9, 0.1};
  const auto w = conditional_additive_channel(JointTable::from_rows({{0.95}, {0.05}}));
  const std::vector<double> px{0.5, 0.5};
  const double at1 = two_term_direct_bound(pm, px, w, 1.0);
  bool c1_min = true;
  for (double cc = 0.05; cc <= 5.0; cc += 0.05) c1_min &= at1 <= two_term_direct_bound(pm, px, w, cc) + 1e-12;

  return {bad == 0 && c1_min && conv_bites > 0,
          std::to_string(cases.size()) + " instances, " + std::to_string(bad) + " violations, " +
              std::to_string(conv_bites) + " with a non-vacuous converse, unit threshold minimal: " +
              (c1_min ? "yes" : "no")};
}

Outcome dual_forms() {
  const auto f = example_family();
  const auto up = f.with_variant(FamilyVariant::up());
  const double lo = up.u(0.0), hi = up.rate_at(0.95), rcr = critical_rate(f);
  double worst_dual = 0.0, worst_coinc = 0.0;
  int below = 0;
  for (int i = 1; i <= 20; ++i) {
    const double R = lo + (hi - lo) * i / 21.0;
    for (auto lvl : {AssumptionLevel::one, AssumptionLevel::two}) {
      const auto c = exponent_converse(f, R, lvl);
      worst_dual = std::max(worst_dual, std::abs(c.evaluation_form - c.sup_form));
    }
    if (R < rcr) {
      ++below;
      const double d = exponent_direct(f, R, AssumptionLevel::two);
      worst_coinc = std::max(worst_coinc, std::abs(d - exponent_converse(f, R, AssumptionLevel::two).sup_form));
    }
  }
  return {worst_dual <= 1e-7 && worst_coinc <= 1e-7 && below > 0,
          fmt("max dual gap %.2e, max coincidence gap %.2e", worst_dual, worst_coinc) + " over " +
              std::to_string(below) + " rates below R_cr"};
}

// golden-section maximum of a unimodal function
double golden_max(const std::function<double(double)>& f, double a, double b) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - g * (b - a), x2 = a + g * (b - a), f1 = f(x1), f2 = f(x2);
  while (b - a > 1e-12) {
    if (f1 < f2) {
      a = x1, x1 = x2, f1 = f2, x2 = a + g * (b - a), f2 = f(x2);
    } else {
      b = x2, x2 = x1, f2 = f1, x1 = b - g * (b - a), f1 = f(x1);
    }
  }
  return std::max(f1, f2);
}

Outcome source_coding() {
  const double r = 1.2, R = kLog2;
  const JointChannelChain id = JointChannelChain::additive(StochasticMatrix(SquareMatrix::identity(2)), {1.0, 0.0});
  const TiltedFamily f(fixtures::example_source(), id, r, FamilyVariant::up());
  auto U = [&](double s) { return r * ref::log_lambda(0.1, 0.2, s); };
  const double e1 = golden_max([&](double s) { return s * R - U(s); }, 0.0, 1.0 - 1e-6);
  const double e2 = golden_max([&](double s) { return (s * R - U(s)) / (1.0 - s); }, 0.0, 0.5);
  const double eb = golden_max([&](double s) { return (s * R - U(s)) / (1.0 - s); }, -50.0, 1.0 - 1e-6);
  const double d1 = std::abs(exponent_direct(f, R, AssumptionLevel::one) - e1);
  const double d2 = std::abs(exponent_direct(f, R, AssumptionLevel::two) - e2);
  const double d3 = std::abs(exponent_converse(f, R, AssumptionLevel::two).sup_form - eb);
  const double worst = std::max({d1, d2, d3});
  return {worst <= 1e-9, fmt("E1 %.10g, E2 %.10g", e1, e2) + fmt(", converse %.10g; max diff %.2e", eb, worst)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "optimal transmission rate", 1.0, optimal_rate},
      {2, "dispersion", 1.0, dispersion},
      {3, "error exponent at r = 0.75", 5.0, exponent},
      {4, "moderate-deviation approximation", 1.0, md},
      {5, "finite-length convergence", 60.0, convergence},
      {6, "bound ordering at n = 10000", 120.0, ordering},
      {7, "n-fold entropy sandwich", 60.0, sandwich},
      {8, "single-shot bound sandwich", 60.0, single_shot},
      {9, "dual-form converse exponent", 30.0, dual_forms},
      {10, "source-coding degeneration", 5.0, source_coding},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.time_limit_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("criterion %2d: %s  %s (%s; %.2f s of %.0f s)\n", c.id, pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), secs, c.time_limit_s);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
