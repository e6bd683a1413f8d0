#pragma once

// AMAP activation-map archive. Little-endian throughout:
//
//   header  : "AMAP" | u32 version=1 | u32 record_count | u32 width | u32 height
//   record  : u32 id_length | id bytes (UTF-8) | u8 ethnicity | u8 gender |
//             float32[height][width] grid, row-major
//
// Ethnicity codes 0=C 1=E 2=I 3=A 255=unknown; gender 0=m 1=f 255=unknown.
// Grid values are finite and inside [0, 1].

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fairlens/activation_map.hpp"

namespace fairlens {

inline constexpr std::uint32_t kAmapVersion = 1;
inline constexpr std::size_t kAmapHeaderBytes = 20;

// Grid values are narrowed to float32. Throws on an empty list, mixed sizes
// or values outside [0, 1].
std::vector<std::uint8_t> encode_amap(std::span<const ActivationMap> maps);
std::vector<ActivationMap> decode_amap(std::span<const std::uint8_t> bytes);

// Returns the number of bytes written.
std::size_t write_amap_archive(std::span<const ActivationMap> maps, std::ostream& sink);
std::vector<ActivationMap> read_amap_archive(std::istream& source);

std::size_t write_amap_file(std::span<const ActivationMap> maps, const std::string& path);
std::vector<ActivationMap> read_amap_file(const std::string& path);

}  // namespace fairlens
