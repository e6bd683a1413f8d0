#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "fairlens/grid.hpp"

namespace fairlens {

// Enumerator values are the on-disk AMAP codes.
enum class Ethnicity : std::uint8_t {
  kCaucasian = 0,  // C
  kEastAsian = 1,  // E
  kIndian = 2,     // I
  kAfrican = 3,    // A
  kUnknown = 255,
};

enum class Gender : std::uint8_t {
  kMale = 0,    // m
  kFemale = 1,  // f
  kUnknown = 255,
};

struct Demographics {
  Ethnicity ethnicity = Ethnicity::kUnknown;
  Gender gender = Gender::kUnknown;

  friend bool operator==(const Demographics&, const Demographics&) = default;
};

// Short tags: "C", "E", "I", "A", "m", "f"; "unknown" for the unknown code.
std::string_view tag(Ethnicity e);
std::string_view tag(Gender g);
std::optional<Ethnicity> parse_ethnicity(std::string_view s);
std::optional<Gender> parse_gender(std::string_view s);
std::optional<Ethnicity> ethnicity_from_code(std::uint8_t code);
std::optional<Gender> gender_from_code(std::uint8_t code);

// Per-sample saliency map with values in [0, 1].
struct ActivationMap {
  std::string sample_id;
  Grid grid;
  Demographics demographics;

  friend bool operator==(const ActivationMap&, const ActivationMap&) = default;
};

}  // namespace fairlens
