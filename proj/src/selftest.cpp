#include "fairlens/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

#include "fairlens/error.hpp"
#include "fairlens/fairness.hpp"
#include "fairlens/forward.hpp"
#include "fairlens/group_stats.hpp"
#include "fairlens/kernels.hpp"
#include "fairlens/synthetic.hpp"

namespace fairlens {
namespace {

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Direct evaluation of every layer with plain nested loops.
std::vector<double> naive_forward(const ToyModelSpec& spec, const Tensor3& input) {
  std::vector<double> cur = input.values;
  Shape3 s = input.shape;
  for (const Layer& layer : spec.layers()) {
    if (const auto* conv = std::get_if<ConvLayer>(&layer)) {
      const std::size_t oh = (s.height + 2 * conv->padding - conv->kernel_h) / conv->stride + 1;
      const std::size_t ow = (s.width + 2 * conv->padding - conv->kernel_w) / conv->stride + 1;
      std::vector<double> out(conv->out_channels * oh * ow, 0.0);
      for (std::size_t oc = 0; oc < conv->out_channels; ++oc)
        for (std::size_t y = 0; y < oh; ++y)
          for (std::size_t x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (std::size_t ic = 0; ic < conv->in_channels; ++ic)
              for (std::size_t ky = 0; ky < conv->kernel_h; ++ky)
                for (std::size_t kx = 0; kx < conv->kernel_w; ++kx) {
                  const long iy = static_cast<long>(y * conv->stride + ky) -
                                  static_cast<long>(conv->padding);
                  const long ix = static_cast<long>(x * conv->stride + kx) -
                                  static_cast<long>(conv->padding);
                  if (iy < 0 || ix < 0 || iy >= static_cast<long>(s.height) ||
                      ix >= static_cast<long>(s.width))
                    continue;
                  acc += conv->weight(oc, ic, ky, kx) *
                         cur[(ic * s.height + static_cast<std::size_t>(iy)) * s.width +
                             static_cast<std::size_t>(ix)];
                }
            out[(oc * oh + y) * ow + x] = acc;
          }
      cur = std::move(out);
      s = {conv->out_channels, oh, ow};
    } else if (std::holds_alternative<ReluLayer>(layer)) {
      for (double& v : cur) v = std::max(v, 0.0);
    } else if (const auto* pool = std::get_if<MaxPoolLayer>(&layer)) {
      const std::size_t oh = (s.height - pool->window) / pool->stride + 1;
      const std::size_t ow = (s.width - pool->window) / pool->stride + 1;
      std::vector<double> out(s.channels * oh * ow);
      for (std::size_t c = 0; c < s.channels; ++c)
        for (std::size_t y = 0; y < oh; ++y)
          for (std::size_t x = 0; x < ow; ++x) {
            double m = -HUGE_VAL;
            for (std::size_t dy = 0; dy < pool->window; ++dy)
              for (std::size_t dx = 0; dx < pool->window; ++dx)
                m = std::max(m, cur[(c * s.height + y * pool->stride + dy) * s.width +
                                    x * pool->stride + dx]);
            out[(c * oh + y) * ow + x] = m;
          }
      cur = std::move(out);
      s = {s.channels, oh, ow};
    } else if (std::holds_alternative<GlobalAvgPoolLayer>(layer)) {
      std::vector<double> out(s.channels, 0.0);
      for (std::size_t c = 0; c < s.channels; ++c) {
        for (std::size_t p = 0; p < s.height * s.width; ++p) out[c] += cur[c * s.height * s.width + p];
        out[c] /= static_cast<double>(s.height * s.width);
      }
      cur = std::move(out);
      s = {s.channels, 1, 1};
    } else if (const auto* fc = std::get_if<FullyConnectedLayer>(&layer)) {
      std::vector<double> out(fc->out_features);
      for (std::size_t o = 0; o < fc->out_features; ++o) {
        double acc = fc->bias[o];
        for (std::size_t i = 0; i < fc->in_features; ++i) acc += fc->weights[o * fc->in_features + i] * cur[i];
        out[o] = acc;
      }
      cur = std::move(out);
      s = {fc->out_features, 1, 1};
    }
  }
  return cur;
}

SelftestResult check_rates() {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    ComparisonScoreSet set;
    const std::size_t n = 1 + rng.below(200);
    for (std::size_t k = 0; k < n; ++k) {
      set.entries.push_back({std::to_string(k), rng.uniform() < 0.5 ? "a" : "b",
                             rng.uniform() < 0.5 ? PairKind::kGenuine : PairKind::kImposter,
                             std::round(rng.uniform() * 20.0) / 20.0});
    }
    for (int t = 0; t < 20; ++t) {
      const double tau = std::round(rng.uniform(-0.1, 1.1) * 20.0) / 20.0;
      std::size_t imp = 0, acc = 0, gen = 0, rej = 0;
      for (const auto& e : set.entries) {
        if (e.kind == PairKind::kImposter) {
          ++imp;
          acc += e.score >= tau;
        } else {
          ++gen;
          rej += e.score < tau;
        }
      }
      if (imp > 0 && fmr(set, kAllGroups, tau) != static_cast<double>(acc) / imp) {
        return {"fmr-oracle", false, "FMR differs from counting at tau=" + num(tau)};
      }
      if (gen > 0 && fnmr(set, kAllGroups, tau) != static_cast<double>(rej) / gen) {
        return {"fnmr-oracle", false, "FNMR differs from counting at tau=" + num(tau)};
      }
    }
  }
  return {"fmr-fnmr-oracle", true, "50 random sets x 20 thresholds"};
}

SelftestResult check_calibration() {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    ComparisonScoreSet set;
    const std::size_t n = 10 + rng.below(300);
    for (std::size_t k = 0; k < n; ++k) {
      set.entries.push_back({std::to_string(k), "g", PairKind::kImposter,
                             std::round(rng.uniform() * 50.0) / 50.0});
    }
    const double target = rng.uniform(0.1, 1.0);
    std::vector<double> candidates;
    for (const auto& e : set.entries) candidates.push_back(e.score);
    std::sort(candidates.begin(), candidates.end());
    double best = HUGE_VAL;
    for (double c : candidates) {
      std::size_t hits = 0;
      for (double s : candidates) hits += s >= c;
      if (static_cast<double>(hits) / n <= target) {
        best = c;
        break;
      }
    }
    try {
      const auto cal = calibrate_tau(set, target);
      if (cal.tau != best) return {"calibration", false, "tau differs from enumeration"};
    } catch (const Error&) {
      if (best != HUGE_VAL) return {"calibration", false, "unexpected calibration failure"};
    }
  }
  return {"calibration-enumeration", true, "50 random imposter sets"};
}

SelftestResult check_forward() {
  Rng rng(13);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t in_c = 1 + rng.below(3);
    const std::size_t hw = 4 + rng.below(5);
    const std::size_t out_c = 1 + rng.below(4);
    const std::size_t k = 1 + rng.below(3);
    std::vector<double> w(out_c * in_c * k * k);
    for (double& v : w) v = rng.uniform(-1.0, 1.0);
    std::vector<double> fw(3 * out_c), fb(3);
    for (double& v : fw) v = rng.uniform(-1.0, 1.0);
    for (double& v : fb) v = rng.uniform(-1.0, 1.0);
    const auto spec = ToyModelSpec::create(
        Shape3{in_c, hw, hw},
        {ConvLayer{out_c, in_c, k, k, 1 + rng.below(2), rng.below(2), w}, ReluLayer{},
         GlobalAvgPoolLayer{}, FullyConnectedLayer{3, out_c, fw, fb}});
    Tensor3 x(Shape3{in_c, hw, hw});
    for (double& v : x.values) v = rng.uniform();
    const auto got = forward(spec, x).embedding;
    const auto want = naive_forward(spec, x);
    for (std::size_t i = 0; i < got.size(); ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
  }
  return {"forward-oracle", worst < 1e-12, "max |diff| = " + num(worst)};
}

SelftestResult check_cohort_hand_cases() {
  auto map_of = [](double v) { return ActivationMap{"s", Grid(1, 1, v), {}}; };
  const Cohort pair{"x", {map_of(0.2), map_of(0.6)}};
  const auto stats = compute_statistics(pair);
  const bool mam_ok = stats.mam(0, 0) == 0.4;
  const bool amv_ok = std::abs(stats.amv(0, 0) - 0.2) <= 3e-17;
  const Cohort same{"y", {map_of(0.3), map_of(0.3), map_of(0.3)}};
  const bool zero_ok = compute_statistics(same).amv(0, 0) == 0.0;
  CohortStatistics a{"a", 2, Grid::from_rows({{0.0, 0.0}}), Grid::from_rows({{0.3, 0.1}})};
  CohortStatistics b{"b", 2, Grid::from_rows({{0.0, 0.0}}), Grid::from_rows({{0.1, 0.3}})};
  const Grid ab = compute_damv(a, b);
  const bool damv_ok = ab == compute_damv(b, a) && ab == flip_horizontal(ab);
  return {"cohort-hand-cases", mam_ok && amv_ok && zero_ok && damv_ok,
          "MAM " + num(stats.mam(0, 0)) + ", AM-V " + num(stats.amv(0, 0))};
}

SelftestResult check_table_fdr() {
  const std::map<std::string, GroupRates> bfw{
      {"C", {0.007, 0.040}}, {"E", {0.026, 0.127}}, {"A", {0.017, 0.085}}, {"I", {0.022, 0.082}}};
  const double v = fdr_from_rates(bfw).fdr;
  return {"bfw-fdr", std::abs(v - 0.946) <= 0.015, "FDR = " + num(v) + " (reported 0.946)"};
}

SelftestResult check_kernels() {
  Rng rng(14);
  std::vector<double> a(1001), b(1001), m(1001);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = rng.uniform(-1, 1);
    b[i] = rng.uniform(-1, 1);
    m[i] = rng.uniform(-1, 1);
  }
  const auto& ref = kernels::scalar_table();
  for (const kernels::KernelTable* t : kernels::available_tables()) {
    std::vector<double> r1(a.size()), r2(a.size());
    ref.abs_diff(a.data(), b.data(), r1.data(), a.size());
    t->abs_diff(a.data(), b.data(), r2.data(), a.size());
    if (r1 != r2) return {"kernel-equivalence", false, std::string(t->name) + " abs_diff"};
    r1 = m;
    r2 = m;
    ref.axpy(0.37, a.data(), r1.data(), a.size());
    t->axpy(0.37, a.data(), r2.data(), a.size());
    if (r1 != r2) return {"kernel-equivalence", false, std::string(t->name) + " axpy"};
    ref.mirror_average_row(a.data(), r1.data(), a.size());
    t->mirror_average_row(a.data(), r2.data(), a.size());
    if (r1 != r2) return {"kernel-equivalence", false, std::string(t->name) + " mirror"};
    if (std::abs(ref.dot(a.data(), b.data(), a.size()) - t->dot(a.data(), b.data(), a.size())) >
        1e-12) {
      return {"kernel-equivalence", false, std::string(t->name) + " dot"};
    }
  }
  std::string names;
  for (const auto* t : kernels::available_tables()) names += (names.empty() ? "" : ",") + std::string(t->name);
  return {"kernel-equivalence", true, "backends: " + names};
}

}  // namespace

std::vector<SelftestResult> run_selftest() {
  const std::vector<std::function<SelftestResult()>> checks{
      check_rates, check_calibration, check_forward, check_cohort_hand_cases,
      check_table_fdr, check_kernels};
  std::vector<SelftestResult> results;
  for (const auto& check : checks) {
    try {
      results.push_back(check());
    } catch (const std::exception& e) {
      results.push_back({"exception", false, e.what()});
    }
  }
  return results;
}

}  // namespace fairlens
