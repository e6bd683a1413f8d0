#pragma once

// Run manifest (JSON). Relative paths resolve against the manifest's folder.
//
//   {
//     "dataset": "bfw",                 // used in output file names
//     "model": "r100",                  // optional, default "model"
//     "cohorts": [
//       {"label": "C", "archive": "amaps.amap", "filter": {"ethnicity": "C"}},
//       {"label": "E", "archive": "amaps.amap", "filter": {"ethnicity": "E"}}
//     ],
//     "scores": "scores.csv",           // optional; needed by `fairness`
//     "reference": "C",                 // must name one of the cohorts
//     "overlay_image": "face.png",      // optional 112x112 face for overlays
//     "output_dir": "out"               // optional; see resolve_output_dir
//   }
//
// A filter may constrain "ethnicity", "gender", both, or neither.

#include <optional>
#include <string>
#include <vector>

#include "fairlens/activation_map.hpp"

namespace fairlens {

struct CohortFilter {
  std::optional<Ethnicity> ethnicity;
  std::optional<Gender> gender;

  bool matches(const Demographics& d) const {
    return (!ethnicity || d.ethnicity == *ethnicity) && (!gender || d.gender == *gender);
  }
};

struct CohortDefinition {
  std::string label;
  std::string archive;  // absolute after loading
  CohortFilter filter;
};

struct CohortManifest {
  std::string dataset;
  std::string model = "model";
  std::vector<CohortDefinition> cohorts;
  std::optional<std::string> scores;
  std::string reference;
  std::optional<std::string> overlay_image;
  std::optional<std::string> output_dir;
  std::string base_dir;

  const CohortDefinition* find(const std::string& label) const;
};

// Parses and validates: labels unique, reference among cohorts, and every
// referenced file exists.
CohortManifest parse_manifest(const std::string& json_text, const std::string& base_dir);
CohortManifest load_manifest(const std::string& path);

inline constexpr const char* kOutputDirEnv = "FAIRLENS_OUTPUT_DIR";

// Precedence: explicit override, manifest output_dir, $FAIRLENS_OUTPUT_DIR,
// then "<manifest dir>/fairlens_out".
std::string resolve_output_dir(const CohortManifest& manifest,
                               const std::optional<std::string>& override_dir);

}  // namespace fairlens
