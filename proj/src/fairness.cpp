#include "fairlens/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "fairlens/error.hpp"

namespace fairlens {
namespace {

bool in_group(const ScoreEntry& e, const std::string& group) {
  return group == kAllGroups || e.group == group;
}

std::string format_target(double target) {
  std::ostringstream os;
  os << target;
  return os.str();
}

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must lie in [0, 1]");
  }
}

}  // namespace

std::vector<std::string> ComparisonScoreSet::groups() const {
  std::vector<std::string> out;
  for (const auto& e : entries) {
    if (std::find(out.begin(), out.end(), e.group) == out.end()) out.push_back(e.group);
  }
  return out;
}

double fmr(const ComparisonScoreSet& scores, const std::string& group, double tau) {
  std::size_t total = 0;
  std::size_t accepted = 0;
  for (const auto& e : scores.entries) {
    if (e.kind != PairKind::kImposter || !in_group(e, group)) continue;
    ++total;
    if (e.score >= tau) ++accepted;
  }
  if (total == 0) {
    throw Error(ErrorCode::kEmptyPartition, "group '" + group + "' has no imposter scores");
  }
  return static_cast<double>(accepted) / static_cast<double>(total);
}

double fnmr(const ComparisonScoreSet& scores, const std::string& group, double tau) {
  std::size_t total = 0;
  std::size_t rejected = 0;
  for (const auto& e : scores.entries) {
    if (e.kind != PairKind::kGenuine || !in_group(e, group)) continue;
    ++total;
    if (e.score < tau) ++rejected;
  }
  if (total == 0) {
    throw Error(ErrorCode::kEmptyPartition, "group '" + group + "' has no genuine scores");
  }
  return static_cast<double>(rejected) / static_cast<double>(total);
}

std::size_t required_imposters(double target_fmr) {
  if (!(target_fmr > 0.0 && target_fmr <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "target FMR must lie in (0, 1]");
  }
  // 1/1e-3 evaluates to 1000.0000000000001 for some targets; round first.
  const double exact = 1.0 / target_fmr;
  const double nearest = std::round(exact);
  const double need = std::abs(exact - nearest) <= 1e-9 * nearest ? nearest : std::ceil(exact);
  return static_cast<std::size_t>(need);
}

ThresholdCalibration calibrate_tau(const ComparisonScoreSet& scores, double target_fmr) {
  const std::size_t need = required_imposters(target_fmr);
  std::vector<double> imposters;
  for (const auto& e : scores.entries) {
    if (e.kind == PairKind::kImposter) imposters.push_back(e.score);
  }
  if (imposters.size() < need) {
    throw Error(ErrorCode::kUnresolvableTarget,
                "unresolvable target FMR " + format_target(target_fmr) + ": needs at least " +
                    std::to_string(need) + " imposter scores, have " +
                    std::to_string(imposters.size()));
  }
  std::sort(imposters.begin(), imposters.end(), std::greater<>());
  const auto n = static_cast<double>(imposters.size());

  // Walk distinct scores from the top; accepted(s) = #scores >= s.
  std::size_t idx = 0;
  bool found = false;
  ThresholdCalibration cal{target_fmr, 0.0, 0.0};
  while (idx < imposters.size()) {
    const double s = imposters[idx];
    std::size_t end = idx;
    while (end < imposters.size() && imposters[end] == s) ++end;
    const double rate = static_cast<double>(end) / n;
    if (rate > target_fmr) break;
    cal.tau = s;
    cal.achieved_fmr = rate;
    found = true;
    idx = end;
  }
  if (!found) {
    throw Error(ErrorCode::kUnresolvableTarget,
                "unresolvable target FMR " + format_target(target_fmr) +
                    ": ties at the highest imposter score already exceed it");
  }
  return cal;
}

FdrPoint fdr_from_rates(const std::map<std::string, GroupRates>& rates, double alpha) {
  check_alpha(alpha);
  if (rates.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "FDR needs at least two groups");
  }
  FdrPoint p;
  p.rates = rates;
  double fmr_lo = rates.begin()->second.fmr;
  double fmr_hi = fmr_lo;
  double fnmr_lo = rates.begin()->second.fnmr;
  double fnmr_hi = fnmr_lo;
  for (const auto& [group, r] : rates) {
    fmr_lo = std::min(fmr_lo, r.fmr);
    fmr_hi = std::max(fmr_hi, r.fmr);
    fnmr_lo = std::min(fnmr_lo, r.fnmr);
    fnmr_hi = std::max(fnmr_hi, r.fnmr);
  }
  // The largest pairwise gap is the gap between the extremes.
  p.a_tau = fmr_hi - fmr_lo;
  p.b_tau = fnmr_hi - fnmr_lo;
  p.fdr = 1.0 - (alpha * p.a_tau + (1.0 - alpha) * p.b_tau);
  return p;
}

FdrPoint fdr(const ComparisonScoreSet& scores, std::span<const std::string> groups, double tau,
             double alpha) {
  std::vector<std::string> chosen(groups.begin(), groups.end());
  if (chosen.empty()) chosen = scores.groups();
  std::map<std::string, GroupRates> rates;
  for (const auto& g : chosen) rates[g] = GroupRates{fmr(scores, g, tau), fnmr(scores, g, tau)};
  FdrPoint p = fdr_from_rates(rates, alpha);
  p.tau = tau;
  p.achieved_fmr = fmr(scores, kAllGroups, tau);
  return p;
}

double fdr_auc(std::span<const double> fdr_values) {
  if (fdr_values.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "FDR AUC of an empty curve");
  }
  if (fdr_values.size() == 1) return fdr_values.front();
  const double dx = 1.0 / static_cast<double>(fdr_values.size() - 1);
  double area = 0.0;
  for (std::size_t k = 0; k + 1 < fdr_values.size(); ++k) {
    area += 0.5 * (fdr_values[k] + fdr_values[k + 1]) * dx;
  }
  return area;
}

FairnessReport fdr_curve(const ComparisonScoreSet& scores, std::span<const std::string> groups,
                         std::span<const double> targets, double alpha) {
  check_alpha(alpha);
  if (targets.empty()) throw Error(ErrorCode::kInvalidArgument, "no target FMRs given");
  std::vector<double> ordered(targets.begin(), targets.end());
  std::sort(ordered.begin(), ordered.end(), std::greater<>());

  FairnessReport report;
  report.alpha = alpha;
  std::vector<double> values;
  for (double target : ordered) {
    const ThresholdCalibration cal = calibrate_tau(scores, target);
    FdrPoint p = fdr(scores, groups, cal.tau, alpha);
    p.target_fmr = target;
    p.achieved_fmr = cal.achieved_fmr;
    values.push_back(p.fdr);
    report.curve.push_back(std::move(p));
  }
  report.fdr_auc = fdr_auc(values);
  return report;
}

}  // namespace fairlens
