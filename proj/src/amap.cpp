#include "fairlens/amap.hpp"

#include <array>
#include <cmath>
#include <istream>
#include <iterator>
#include <ostream>

#include "byte_io.hpp"
#include "fairlens/error.hpp"

namespace fairlens {
namespace {

constexpr std::array<std::uint8_t, 4> kMagic{'A', 'M', 'A', 'P'};

std::string record_prefix(std::size_t index) {
  return "record " + std::to_string(index) + ": ";
}

}  // namespace

std::vector<std::uint8_t> encode_amap(std::span<const ActivationMap> maps) {
  if (maps.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot write an empty activation-map archive");
  }
  const std::size_t w = maps.front().grid.width();
  const std::size_t h = maps.front().grid.height();

  detail::ByteWriter out;
  out.raw(kMagic);
  out.u32(kAmapVersion);
  out.u32(static_cast<std::uint32_t>(maps.size()));
  out.u32(static_cast<std::uint32_t>(w));
  out.u32(static_cast<std::uint32_t>(h));
  for (std::size_t r = 0; r < maps.size(); ++r) {
    const ActivationMap& m = maps[r];
    if (m.grid.width() != w || m.grid.height() != h) {
      throw Error(ErrorCode::kDimensionMismatch,
                  record_prefix(r) + "grid is " + std::to_string(m.grid.width()) + "x" +
                      std::to_string(m.grid.height()) + ", archive is " + std::to_string(w) +
                      "x" + std::to_string(h));
    }
    out.u32(static_cast<std::uint32_t>(m.sample_id.size()));
    out.raw(m.sample_id);
    out.u8(static_cast<std::uint8_t>(m.demographics.ethnicity));
    out.u8(static_cast<std::uint8_t>(m.demographics.gender));
    for (double v : m.grid.values()) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw Error(ErrorCode::kInvalidArgument,
                    record_prefix(r) + "grid value outside [0,1] or not finite");
      }
      out.f32(static_cast<float>(v));
    }
  }
  return std::move(out.bytes());
}

std::vector<ActivationMap> decode_amap(std::span<const std::uint8_t> bytes) {
  detail::ByteReader in(bytes);
  for (std::uint8_t expected : kMagic) {
    if (in.u8() != expected) {
      throw Error(ErrorCode::kMalformedInput, "bad magic: not an AMAP archive");
    }
  }
  const std::uint32_t version = in.u32();
  if (version != kAmapVersion) {
    throw Error(ErrorCode::kMalformedInput,
                "version mismatch: archive version " + std::to_string(version) + ", expected " +
                    std::to_string(kAmapVersion));
  }
  const std::uint32_t count = in.u32();
  const std::uint32_t w = in.u32();
  const std::uint32_t h = in.u32();
  const std::size_t cells = static_cast<std::size_t>(w) * h;

  std::vector<ActivationMap> maps;
  for (std::uint32_t r = 0; r < count; ++r) {
    try {
      ActivationMap m;
      const std::uint32_t id_len = in.u32();
      m.sample_id = in.str(id_len);
      const std::uint8_t eth = in.u8();
      const std::uint8_t gen = in.u8();
      const auto e = ethnicity_from_code(eth);
      const auto g = gender_from_code(gen);
      if (!e) {
        throw Error(ErrorCode::kMalformedInput, "invalid ethnicity code " + std::to_string(eth));
      }
      if (!g) {
        throw Error(ErrorCode::kMalformedInput, "invalid gender code " + std::to_string(gen));
      }
      m.demographics = {*e, *g};
      if (cells * 4 > in.remaining()) {
        throw Error(ErrorCode::kUnexpectedEnd, "unexpected end of stream inside grid");
      }
      std::vector<double> values(cells);
      for (std::size_t c = 0; c < cells; ++c) {
        const float v = in.f32();
        if (!std::isfinite(v)) {
          throw Error(ErrorCode::kMalformedInput,
                      "non-finite grid value at cell " + std::to_string(c));
        }
        if (v < 0.0f || v > 1.0f) {
          throw Error(ErrorCode::kMalformedInput,
                      "grid value out of range [0,1] at cell " + std::to_string(c));
        }
        values[c] = v;
      }
      m.grid = Grid(w, h, std::move(values));
      maps.push_back(std::move(m));
    } catch (const Error& err) {
      throw Error(err.code(), record_prefix(r) + err.what());
    }
  }
  if (!in.at_end()) {
    throw Error(ErrorCode::kMalformedInput,
                "record count mismatch: " + std::to_string(in.remaining()) +
                    " bytes follow the last declared record");
  }
  return maps;
}

std::size_t write_amap_archive(std::span<const ActivationMap> maps, std::ostream& sink) {
  const auto bytes = encode_amap(maps);
  sink.write(reinterpret_cast<const char*>(bytes.data()),
             static_cast<std::streamsize>(bytes.size()));
  if (!sink) throw Error(ErrorCode::kIo, "failed writing activation-map archive");
  return bytes.size();
}

std::vector<ActivationMap> read_amap_archive(std::istream& source) {
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(source),
                                  std::istreambuf_iterator<char>()};
  return decode_amap(bytes);
}

std::size_t write_amap_file(std::span<const ActivationMap> maps, const std::string& path) {
  const auto bytes = encode_amap(maps);
  detail::write_file_bytes(path, bytes);
  return bytes.size();
}

std::vector<ActivationMap> read_amap_file(const std::string& path) {
  try {
    return decode_amap(detail::read_file_bytes(path));
  } catch (const Error& err) {
    throw Error(err.code(), path + ": " + err.what());
  }
}

}  // namespace fairlens
