/* Copyright 2026 The Spotter Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <cstring>

#include "spotter/error.hpp"
#include "spotter/io.hpp"
#include "spotter/synthgen.hpp"

namespace spotter {
namespace {
constexpr char kMagic[8] = {'B', 'G', 'D', 'S', '0', '0', '0', '1'};
}  // namespace

std::vector<std::uint8_t> encode_dataset(const Dataset& data) {
  const std::size_t plane = static_cast<std::size_t>(data.width) * data.height;
  ByteWriter w;
  w.raw(std::span(reinterpret_cast<const std::uint8_t*>(kMagic), 8));
  w.u32(static_cast<std::uint32_t>(data.samples.size()));
  w.u32(static_cast<std::uint32_t>(data.width));
  w.u32(static_cast<std::uint32_t>(data.height));
  for (std::size_t i = 0; i < data.samples.size(); ++i) {
    const Sample& s = data.samples[i];
    if (s.width != data.width || s.height != data.height || s.pixels.size() != plane) {
      throw FormatError(FormatErrc::kDimensionMismatch,
                        "sample " + std::to_string(i) + " is " + std::to_string(s.width) + "x" +
                            std::to_string(s.height) + ", dataset is " +
                            std::to_string(data.width) + "x" + std::to_string(data.height));
    }
    w.u8(static_cast<std::uint8_t>(s.label));
    w.raw(s.pixels);
  }
  return std::move(w.bytes());
}

Dataset decode_dataset(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kMagic, 8) != 0) {
    throw FormatError(FormatErrc::kBadMagic, "not a BGDS0001 dataset");
  }
  ByteReader r(bytes.subspan(8));
  const std::uint32_t count = r.u32();
  Dataset data;
  data.width = static_cast<int>(r.u32());
  data.height = static_cast<int>(r.u32());
  if (data.width < 1 || data.height < 1) {
    throw FormatError(FormatErrc::kDimensionMismatch, "empty patch dimensions");
  }
  const std::size_t plane = static_cast<std::size_t>(data.width) * data.height;
  if (r.remaining() < static_cast<std::size_t>(count) * (plane + 1)) {
    throw FormatError(FormatErrc::kTruncated,
                      "header declares " + std::to_string(count) + " samples of " +
                          std::to_string(plane + 1) + " bytes, payload holds " +
                          std::to_string(r.remaining()));
  }
  data.samples.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    Sample s;
    s.width = data.width;
    s.height = data.height;
    const std::uint8_t label = r.u8();
    if (label > 1) {
      throw FormatError(FormatErrc::kBadValue, "sample " + std::to_string(i) + " has label " +
                                                   std::to_string(label));
    }
    s.label = static_cast<Label>(label);
    const auto px = r.raw(plane);
    s.pixels.assign(px.begin(), px.end());
    data.samples.push_back(std::move(s));
  }
  if (r.remaining() != 0) {
    throw FormatError(FormatErrc::kDimensionMismatch,
                      std::to_string(r.remaining()) + " trailing bytes after the last sample");
  }
  return data;
}

void write_dataset(const Dataset& data, const std::string& path) {
  write_file_bytes(path, encode_dataset(data));
}

Dataset read_dataset(const std::string& path) { return decode_dataset(read_file_bytes(path)); }

}  // namespace spotter
