#include "fairlens/manifest.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "fairlens/error.hpp"
#include "json.hpp"

namespace fairlens {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, "manifest: " + what);
}

std::string resolve(const std::string& base, const std::string& p) {
  const fs::path path(p);
  return (path.is_absolute() ? path : fs::path(base) / path).lexically_normal().string();
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj.at(key).is_string()) {
    invalid(where + ": missing string field '" + key + "'");
  }
  return obj.at(key).get<std::string>();
}

std::optional<std::string> optional_string(const json& obj, const char* key) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  if (!obj.at(key).is_string()) invalid(std::string("field '") + key + "' must be a string");
  return obj.at(key).get<std::string>();
}

void require_file(const std::string& path, const std::string& what) {
  if (!fs::is_regular_file(path)) {
    throw Error(ErrorCode::kIo, "manifest: " + what + " not found: " + path);
  }
}

}  // namespace

const CohortDefinition* CohortManifest::find(const std::string& label) const {
  for (const auto& c : cohorts) {
    if (c.label == label) return &c;
  }
  return nullptr;
}

CohortManifest parse_manifest(const std::string& json_text, const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kMalformedInput, std::string("manifest: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) invalid("top level must be an object");

  CohortManifest m;
  m.base_dir = base_dir;
  m.dataset = require_string(doc, "dataset", "manifest");
  if (auto model = optional_string(doc, "model")) m.model = *model;
  m.reference = require_string(doc, "reference", "manifest");
  m.scores = optional_string(doc, "scores");
  m.overlay_image = optional_string(doc, "overlay_image");
  m.output_dir = optional_string(doc, "output_dir");

  if (!doc.contains("cohorts") || !doc.at("cohorts").is_array() || doc.at("cohorts").empty()) {
    invalid("'cohorts' must be a non-empty array");
  }
  std::set<std::string> labels;
  for (std::size_t k = 0; k < doc.at("cohorts").size(); ++k) {
    const json& c = doc.at("cohorts")[k];
    const std::string where = "cohort " + std::to_string(k);
    if (!c.is_object()) invalid(where + " must be an object");
    CohortDefinition def;
    def.label = require_string(c, "label", where);
    def.archive = resolve(base_dir, require_string(c, "archive", where));
    if (c.contains("filter")) {
      const json& f = c.at("filter");
      if (!f.is_object()) invalid(where + ": 'filter' must be an object");
      if (auto e = optional_string(f, "ethnicity")) {
        def.filter.ethnicity = parse_ethnicity(*e);
        if (!def.filter.ethnicity) invalid(where + ": unknown ethnicity '" + *e + "'");
      }
      if (auto g = optional_string(f, "gender")) {
        def.filter.gender = parse_gender(*g);
        if (!def.filter.gender) invalid(where + ": unknown gender '" + *g + "'");
      }
    }
    if (!labels.insert(def.label).second) invalid("duplicate cohort label '" + def.label + "'");
    require_file(def.archive, where + " archive");
    m.cohorts.push_back(std::move(def));
  }
  if (labels.count(m.reference) == 0) {
    invalid("reference group '" + m.reference + "' is not among the cohorts");
  }
  if (m.scores) {
    m.scores = resolve(base_dir, *m.scores);
    require_file(*m.scores, "score CSV");
  }
  if (m.overlay_image) {
    m.overlay_image = resolve(base_dir, *m.overlay_image);
    require_file(*m.overlay_image, "overlay image");
  }
  if (m.output_dir) m.output_dir = resolve(base_dir, *m.output_dir);
  return m;
}

CohortManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open manifest " + path);
  std::ostringstream text;
  text << in.rdbuf();
  const std::string base = fs::absolute(fs::path(path)).parent_path().string();
  return parse_manifest(text.str(), base);
}

std::string resolve_output_dir(const CohortManifest& manifest,
                               const std::optional<std::string>& override_dir) {
  if (override_dir) return *override_dir;
  if (manifest.output_dir) return *manifest.output_dir;
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
    return env;
  }
  return (fs::path(manifest.base_dir) / "fairlens_out").string();
}

}  // namespace fairlens
