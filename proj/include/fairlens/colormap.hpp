#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fairlens {

using Rgb = std::array<double, 3>;

// Piecewise-linear ramp through evenly spaced anchor colours.
class Colormap {
 public:
  Colormap(std::string name, std::vector<Rgb> anchors);

  // Throws kInvalidArgument for unknown names. Known: viridis, magma, gray.
  static const Colormap& named(std::string_view name);
  static std::vector<std::string> names();

  const std::string& name() const noexcept { return name_; }

  // t is clamped to [0, 1].
  Rgb at(double t) const;

 private:
  std::string name_;
  std::vector<Rgb> anchors_;
};

inline constexpr std::string_view kDefaultColormap = "viridis";

}  // namespace fairlens
