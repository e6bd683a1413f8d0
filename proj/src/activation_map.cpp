#include "fairlens/activation_map.hpp"

namespace fairlens {

std::string_view tag(Ethnicity e) {
  switch (e) {
    case Ethnicity::kCaucasian: return "C";
    case Ethnicity::kEastAsian: return "E";
    case Ethnicity::kIndian: return "I";
    case Ethnicity::kAfrican: return "A";
    case Ethnicity::kUnknown: break;
  }
  return "unknown";
}

std::string_view tag(Gender g) {
  switch (g) {
    case Gender::kMale: return "m";
    case Gender::kFemale: return "f";
    case Gender::kUnknown: break;
  }
  return "unknown";
}

std::optional<Ethnicity> parse_ethnicity(std::string_view s) {
  if (s == "C") return Ethnicity::kCaucasian;
  if (s == "E") return Ethnicity::kEastAsian;
  if (s == "I") return Ethnicity::kIndian;
  if (s == "A") return Ethnicity::kAfrican;
  if (s == "unknown" || s.empty()) return Ethnicity::kUnknown;
  return std::nullopt;
}

std::optional<Gender> parse_gender(std::string_view s) {
  if (s == "m") return Gender::kMale;
  if (s == "f") return Gender::kFemale;
  if (s == "unknown" || s.empty()) return Gender::kUnknown;
  return std::nullopt;
}

std::optional<Ethnicity> ethnicity_from_code(std::uint8_t code) {
  if (code <= 3 || code == 255) return static_cast<Ethnicity>(code);
  return std::nullopt;
}

std::optional<Gender> gender_from_code(std::uint8_t code) {
  if (code <= 1 || code == 255) return static_cast<Gender>(code);
  return std::nullopt;
}

}  // namespace fairlens
