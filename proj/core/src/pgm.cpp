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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "spotter/detector.hpp"
#include "spotter/error.hpp"
#include "spotter/io.hpp"

namespace spotter {
namespace {

class HeaderParser {
 public:
  explicit HeaderParser(std::span<const std::uint8_t> b) : b_(b) {}

  void skip_space_and_comments() {
    while (pos_ < b_.size()) {
      if (std::isspace(b_[pos_])) {
        ++pos_;
      } else if (b_[pos_] == '#') {
        while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  long number(const char* what) {
    skip_space_and_comments();
    if (pos_ >= b_.size()) throw FormatError(FormatErrc::kTruncated, std::string("PGM header ends before ") + what);
    if (!std::isdigit(b_[pos_])) {
      throw FormatError(FormatErrc::kBadValue, std::string("PGM ") + what + " is not a number");
    }
    long v = 0;
    while (pos_ < b_.size() && std::isdigit(b_[pos_])) {
      v = v * 10 + (b_[pos_++] - '0');
      if (v > 1'000'000) throw FormatError(FormatErrc::kBadValue, std::string("PGM ") + what + " too large");
    }
    return v;
  }

  std::size_t pos() const { return pos_; }
  void advance() { ++pos_; }
  bool at_space() const { return pos_ < b_.size() && std::isspace(b_[pos_]); }

 private:
  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 2;
};

}  // namespace

GreyImage decode_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw FormatError(FormatErrc::kBadMagic, "not a binary PGM (P5) image");
  }
  HeaderParser h(bytes);
  const long w = h.number("width");
  const long ht = h.number("height");
  const long maxval = h.number("maxval");
  if (w <= 0 || ht <= 0) throw FormatError(FormatErrc::kBadValue, "PGM has an empty raster");
  if (maxval != 255) {
    throw FormatError(FormatErrc::kBadValue, "PGM maxval " + std::to_string(maxval) + ", expected 255");
  }
  if (!h.at_space()) throw FormatError(FormatErrc::kTruncated, "PGM header not terminated");
  h.advance();
  const std::size_t need = static_cast<std::size_t>(w) * static_cast<std::size_t>(ht);
  const std::size_t have = bytes.size() - h.pos();
  if (have < need) {
    throw FormatError(FormatErrc::kTruncated,
                      "PGM raster has " + std::to_string(have) + " of " + std::to_string(need) + " bytes");
  }
  if (have > need) {
    throw FormatError(FormatErrc::kDimensionMismatch,
                      std::to_string(have - need) + " bytes after the PGM raster");
  }
  GreyImage img;
  img.width = static_cast<int>(w);
  img.height = static_cast<int>(ht);
  img.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(h.pos()), bytes.end());
  return img;
}

std::vector<std::uint8_t> encode_pgm(const GreyImage& image) {
  if (image.width <= 0 || image.height <= 0 ||
      image.pixels.size() != static_cast<std::size_t>(image.width) * image.height) {
    throw ShapeError("PGM image buffer does not match " + std::to_string(image.width) + "x" +
                     std::to_string(image.height));
  }
  const std::string header =
      "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), image.pixels.begin(), image.pixels.end());
  return out;
}

GreyImage read_pgm(const std::string& path) { return decode_pgm(read_file_bytes(path)); }

void write_pgm(const GreyImage& image, const std::string& path) {
  write_file_bytes(path, encode_pgm(image));
}

Tensor to_tensor(const GreyImage& image) {
  Tensor t(1, image.height, image.width);
  for (std::size_t i = 0; i < image.pixels.size(); ++i) t[i] = image.pixels[i];
  return t;
}

GreyImage to_grey(const Tensor& grey255) {
  if (grey255.channels() != 1) throw ShapeError("to_grey needs a single-channel tensor");
  GreyImage img{grey255.width(), grey255.height(), std::vector<std::uint8_t>(grey255.size())};
  for (std::size_t i = 0; i < grey255.size(); ++i) {
    img.pixels[i] = static_cast<std::uint8_t>(std::clamp(std::round(grey255[i]), 0.0f, 255.0f));
  }
  return img;
}

}  // namespace spotter
