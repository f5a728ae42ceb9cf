#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "types.hpp"

namespace ktr {

// A storable value plus free-form string metadata (provenance tags such as
// config_hash, method, tag). Metadata round-trips through the container
// header untouched.
struct Artifact {
  std::variant<ImageSeries, KSpaceSeries, SensitivityMaps, SamplingMask, KtKernel> value;
  std::map<std::string, std::string> meta;
};

enum class Dtype { c64, c128 };

// Serialized container: UTF-8 JSON header describing kind/shape/dtype,
// followed by a raw little-endian payload.
struct FlatBuffer {
  std::string header;
  std::vector<std::uint8_t> payload;
};

const char *kind_name(const Artifact &a);

FlatBuffer to_buffer(const Artifact &a, Dtype dt);
Artifact from_buffer(const std::string &header, const std::uint8_t *payload, std::size_t len);

void write_ktc(const std::string &path, const Artifact &a, Dtype dt = Dtype::c128);
Artifact read_ktc(const std::string &path);

// Writes one magnitude frame as a binary 8-bit PGM, mapping [0, scale_max]
// to [0, 255]. A comment line records scale_max so values stay recoverable.
void write_pgm(const std::string &path, const double *frame, int ny, int nx, double scale_max);

} // namespace ktr
