#pragma once

// Verification error rates and the fairness discrepancy rate.
//
// A comparison is a match when score >= tau. The global threshold is
// calibrated on the pooled imposter scores of every group; per-group FMR and
// FNMR are then read off at that threshold, and
//   FDR(tau) = 1 - (alpha * A(tau) + (1 - alpha) * B(tau))
// with A, B the largest pairwise gaps in FMR and FNMR across groups.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace fairlens {

enum class PairKind { kGenuine, kImposter };

struct ScoreEntry {
  std::string pair_id;
  std::string group;
  PairKind kind = PairKind::kGenuine;
  double score = 0.0;
};

// Label that selects every entry regardless of group.
inline constexpr const char* kAllGroups = "all";

struct ComparisonScoreSet {
  std::vector<ScoreEntry> entries;

  // Distinct group labels in first-appearance order.
  std::vector<std::string> groups() const;
};

inline constexpr double kDefaultAlpha = 0.5;
inline constexpr double kEpsilon = 0.0;
inline const std::vector<double> kDefaultTargets{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};

// Fraction of the group's imposter scores with score >= tau.
double fmr(const ComparisonScoreSet& scores, const std::string& group, double tau);
// Fraction of the group's genuine scores with score < tau.
double fnmr(const ComparisonScoreSet& scores, const std::string& group, double tau);

struct ThresholdCalibration {
  double target_fmr = 0.0;
  double tau = 0.0;
  double achieved_fmr = 0.0;
};

// Smallest observed imposter score s (all groups pooled) with
// FMR(s) <= target. Needs at least ceil(1 / target) imposter scores.
ThresholdCalibration calibrate_tau(const ComparisonScoreSet& scores, double target_fmr);

// Minimum number of imposter comparisons needed to resolve `target_fmr`.
std::size_t required_imposters(double target_fmr);

struct GroupRates {
  double fmr = 0.0;
  double fnmr = 0.0;
};

struct FdrPoint {
  double target_fmr = 0.0;  // 0 when evaluated at an explicit tau
  double tau = 0.0;
  double achieved_fmr = 0.0;
  std::map<std::string, GroupRates> rates;
  double a_tau = 0.0;
  double b_tau = 0.0;
  double fdr = 1.0;
};

// FDR from already-measured per-group rates (at least two groups).
FdrPoint fdr_from_rates(const std::map<std::string, GroupRates>& rates,
                        double alpha = kDefaultAlpha);

// Evaluates every group in `groups` (all groups in the set when empty).
FdrPoint fdr(const ComparisonScoreSet& scores, std::span<const std::string> groups, double tau,
             double alpha = kDefaultAlpha);

struct FairnessReport {
  double alpha = kDefaultAlpha;
  double epsilon = kEpsilon;
  std::vector<FdrPoint> curve;  // ordered by target FMR, descending
  double fdr_auc = 0.0;
};

// Trapezoidal area with the points spread uniformly over [0, 1]. A single
// point yields its own value.
double fdr_auc(std::span<const double> fdr_values);

FairnessReport fdr_curve(const ComparisonScoreSet& scores, std::span<const std::string> groups,
                         std::span<const double> targets = kDefaultTargets,
                         double alpha = kDefaultAlpha);

}  // namespace fairlens
