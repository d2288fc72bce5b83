/*
 * Copyright 2026 the tlrd authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "tlrd/volume_io.hpp"

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>

namespace tlrd {

std::string to_string(ElementType type) {
  switch (type) {
    case ElementType::u8: return "MET_UCHAR";
    case ElementType::i16: return "MET_SHORT";
    case ElementType::f32: return "MET_FLOAT";
  }
  return "unknown";
}

namespace {

std::size_t element_size(ElementType type) {
  switch (type) {
    case ElementType::u8: return 1;
    case ElementType::i16: return 2;
    case ElementType::f32: return 4;
  }
  throw IoError("unknown element type");
}

ElementType parse_element_type(const std::string& name) {
  if (name == "MET_UCHAR") return ElementType::u8;
  if (name == "MET_SHORT") return ElementType::i16;
  if (name == "MET_FLOAT") return ElementType::f32;
  throw IoError("unsupported element type '" + name + "'");
}

std::string trim(const std::string& s) {
  const auto from = s.find_first_not_of(" \t\r\n");
  if (from == std::string::npos) return "";
  const auto to = s.find_last_not_of(" \t\r\n");
  return s.substr(from, to - from + 1);
}

// Multi-byte values are little-endian on disk; this code assumes a
// little-endian host, as asserted by the round-trip tests.
template <class T>
void decode(const std::vector<char>& raw, Tensor3& out) {
  const auto* src = reinterpret_cast<const T*>(raw.data());
  auto dst = out.data();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = static_cast<double>(src[i]);
  }
}

template <class T>
void encode(const Tensor3& x, std::vector<char>& raw) {
  auto* dst = reinterpret_cast<T*>(raw.data());
  auto src = x.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = static_cast<T>(src[i]);
  }
}

}  // namespace

std::pair<Tensor3, VolumeMeta> read_volume(
    const std::filesystem::path& path) {
  std::ifstream header(path);
  if (!header) {
    throw IoError("cannot open volume header '" + path.string() + "'");
  }

  std::map<std::string, std::string> keys;
  std::string line;
  while (std::getline(header, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    keys[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }

  auto require = [&](const std::string& key) -> const std::string& {
    auto it = keys.find(key);
    if (it == keys.end()) {
      throw IoError("volume header is missing key '" + key + "'");
    }
    return it->second;
  };

  if (require("NDims") != "3") {
    throw IoError("only 3-dimensional volumes are supported");
  }
  if (auto it = keys.find("BinaryDataByteOrderMSB");
      it != keys.end() && it->second == "True") {
    throw IoError("big-endian volume data is not supported");
  }

  VolumeMeta meta;
  {
    std::istringstream in(require("DimSize"));
    in >> meta.dims[0] >> meta.dims[1] >> meta.dims[2];
    if (!in || meta.dims[0] < 1 || meta.dims[1] < 1 || meta.dims[2] < 1) {
      throw IoError("malformed DimSize in volume header");
    }
  }
  if (auto it = keys.find("ElementSpacing"); it != keys.end()) {
    std::istringstream in(it->second);
    in >> meta.spacing[0] >> meta.spacing[1] >> meta.spacing[2];
    if (!in || meta.spacing[0] <= 0 || meta.spacing[1] <= 0 ||
        meta.spacing[2] <= 0) {
      throw IoError("malformed ElementSpacing in volume header");
    }
  }
  meta.element_type = parse_element_type(require("ElementType"));
  if (auto it = keys.find("IntensityOffset"); it != keys.end()) {
    meta.intensity_offset = std::stod(it->second);
  }
  if (auto it = keys.find("IntensityScale"); it != keys.end()) {
    meta.intensity_scale = std::stod(it->second);
  }

  const std::filesystem::path data_path =
      path.parent_path() / require("ElementDataFile");
  std::ifstream data(data_path, std::ios::binary);
  if (!data) {
    throw IoError("cannot open volume data '" + data_path.string() + "'");
  }
  const std::size_t expected =
      static_cast<std::size_t>(meta.dims[0] * meta.dims[1] * meta.dims[2]) *
      element_size(meta.element_type);
  std::vector<char> raw((std::istreambuf_iterator<char>(data)),
                        std::istreambuf_iterator<char>());
  if (raw.size() != expected) {
    throw IoError("volume data size " + std::to_string(raw.size()) +
                  " does not match header (expected " +
                  std::to_string(expected) + " bytes)");
  }

  Tensor3 out(meta.dims[0], meta.dims[1], meta.dims[2]);
  switch (meta.element_type) {
    case ElementType::u8: decode<std::uint8_t>(raw, out); break;
    case ElementType::i16: decode<std::int16_t>(raw, out); break;
    case ElementType::f32: decode<float>(raw, out); break;
  }
  return {std::move(out), meta};
}

void write_volume(const std::filesystem::path& path, const Tensor3& x,
                  const VolumeMeta& meta) {
  if (meta.dims[0] != x.n1() || meta.dims[1] != x.n2() ||
      meta.dims[2] != x.n3()) {
    throw ShapeError("write_volume: meta dimensions do not match tensor");
  }
  if (meta.spacing[0] <= 0 || meta.spacing[1] <= 0 || meta.spacing[2] <= 0) {
    throw InvalidArgument("write_volume: spacing must be positive");
  }

  std::filesystem::path data_path = path;
  data_path.replace_extension(".raw");

  std::vector<char> raw(static_cast<std::size_t>(x.size()) *
                        element_size(meta.element_type));
  switch (meta.element_type) {
    case ElementType::u8: encode<std::uint8_t>(x, raw); break;
    case ElementType::i16: encode<std::int16_t>(x, raw); break;
    case ElementType::f32: encode<float>(x, raw); break;
  }

  {
    std::ofstream data(data_path, std::ios::binary | std::ios::trunc);
    if (!data) {
      throw IoError("cannot write volume data '" + data_path.string() + "'");
    }
    data.write(raw.data(), static_cast<std::streamsize>(raw.size()));
    if (!data) {
      throw IoError("short write to '" + data_path.string() + "'");
    }
  }

  std::ostringstream header;
  header << "ObjectType = Image\n"
         << "NDims = 3\n"
         << "BinaryData = True\n"
         << "BinaryDataByteOrderMSB = False\n"
         << "DimSize = " << meta.dims[0] << " " << meta.dims[1] << " "
         << meta.dims[2] << "\n"
         << "ElementSpacing = " << meta.spacing[0] << " " << meta.spacing[1]
         << " " << meta.spacing[2] << "\n"
         << "ElementType = " << to_string(meta.element_type) << "\n"
         << "IntensityOffset = " << meta.intensity_offset << "\n"
         << "IntensityScale = " << meta.intensity_scale << "\n"
         << "ElementDataFile = " << data_path.filename().string() << "\n";

  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot write volume header '" + path.string() + "'");
  }
  out << header.str();
  if (!out) throw IoError("short write to '" + path.string() + "'");
}

Normalized normalize(const Tensor3& x) {
  auto src = x.data();
  double lo = src[0], hi = src[0];
  for (double v : src) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }

  Normalized out;
  out.tensor = Tensor3(x.n1(), x.n2(), x.n3());
  if (hi == lo) {
    out.offset = lo;
    out.scale = 1.0;
    return out;
  }
  out.offset = lo;
  out.scale = hi - lo;
  auto dst = out.tensor.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = (src[i] - lo) / out.scale;
  }
  return out;
}

Tensor3 denormalize(const Tensor3& x, double offset, double scale) {
  Tensor3 out(x.n1(), x.n2(), x.n3());
  auto src = x.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = src[i] * scale + offset;
  }
  return out;
}

}  // namespace tlrd
