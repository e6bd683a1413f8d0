#include "fairlens/colormap.hpp"

#include <algorithm>
#include <cmath>

#include "fairlens/error.hpp"

namespace fairlens {
namespace {

// 17 evenly spaced samples of matplotlib's viridis and magma.
const std::vector<Rgb> kViridis{
    {0.267004, 0.004874, 0.329415}, {0.282327, 0.094955, 0.417331},
    {0.278826, 0.175490, 0.483397}, {0.258965, 0.251537, 0.524736},
    {0.229739, 0.322361, 0.545706}, {0.199430, 0.387607, 0.554642},
    {0.172719, 0.448791, 0.557885}, {0.149039, 0.508051, 0.557250},
    {0.127568, 0.566949, 0.550556}, {0.120638, 0.625828, 0.533488},
    {0.157851, 0.683765, 0.501686}, {0.246070, 0.738910, 0.452024},
    {0.369214, 0.788888, 0.382914}, {0.515992, 0.831158, 0.294279},
    {0.678489, 0.863742, 0.189503}, {0.845561, 0.887322, 0.099702},
    {0.993248, 0.906157, 0.143936},
};

const std::vector<Rgb> kMagma{
    {0.001462, 0.000466, 0.013866}, {0.039608, 0.031090, 0.133515},
    {0.113094, 0.065492, 0.276784}, {0.211718, 0.061992, 0.418647},
    {0.316654, 0.071690, 0.485380}, {0.414709, 0.110431, 0.504662},
    {0.512831, 0.148179, 0.507648}, {0.613617, 0.181811, 0.498536},
    {0.716387, 0.214982, 0.475290}, {0.816914, 0.255895, 0.436461},
    {0.904281, 0.319610, 0.388137}, {0.960949, 0.418323, 0.359630},
    {0.986700, 0.535582, 0.382210}, {0.996096, 0.653659, 0.446213},
    {0.996898, 0.769591, 0.534892}, {0.992440, 0.884330, 0.640099},
    {0.987053, 0.991438, 0.749504},
};

const std::vector<Rgb> kGray{{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}};

}  // namespace

Colormap::Colormap(std::string name, std::vector<Rgb> anchors)
    : name_(std::move(name)), anchors_(std::move(anchors)) {
  if (anchors_.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "colormap needs at least two anchors");
  }
}

const Colormap& Colormap::named(std::string_view name) {
  static const Colormap viridis("viridis", kViridis);
  static const Colormap magma("magma", kMagma);
  static const Colormap gray("gray", kGray);
  if (name == "viridis") return viridis;
  if (name == "magma") return magma;
  if (name == "gray") return gray;
  throw Error(ErrorCode::kInvalidArgument, "unknown colormap '" + std::string(name) + "'");
}

std::vector<std::string> Colormap::names() { return {"viridis", "magma", "gray"}; }

Rgb Colormap::at(double t) const {
  t = std::isfinite(t) ? std::clamp(t, 0.0, 1.0) : 0.0;
  const double pos = t * static_cast<double>(anchors_.size() - 1);
  const auto lo = std::min(static_cast<std::size_t>(pos), anchors_.size() - 2);
  const double frac = pos - static_cast<double>(lo);
  Rgb out{};
  for (std::size_t c = 0; c < 3; ++c) {
    out[c] = anchors_[lo][c] + frac * (anchors_[lo + 1][c] - anchors_[lo][c]);
  }
  return out;
}

}  // namespace fairlens
