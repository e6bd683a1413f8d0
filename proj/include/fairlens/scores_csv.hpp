#pragma once

// Comparison-score CSV: header `pair_id,group,kind,score`, one comparison per
// line, kind is `genuine` or `imposter`, score a decimal real.

#include <iosfwd>
#include <string>

#include "fairlens/fairness.hpp"

namespace fairlens {

ComparisonScoreSet read_scores_csv(std::istream& source);
ComparisonScoreSet read_scores_csv_file(const std::string& path);

// Scores are written with 17 significant digits so they read back exactly.
void write_scores_csv(const ComparisonScoreSet& scores, std::ostream& sink);
void write_scores_csv_file(const ComparisonScoreSet& scores, const std::string& path);

}  // namespace fairlens
