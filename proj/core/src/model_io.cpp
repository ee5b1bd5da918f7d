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
#include "spotter/trainer.hpp"

namespace spotter {
namespace {

constexpr char kMagic[8] = {'B', 'G', 'N', 'M', '0', '0', '0', '1'};

enum LayerTag : std::uint8_t { kConv = 0, kRelu = 1, kPool = 2, kDropout = 3, kSoftmax = 4 };

}  // namespace

std::vector<std::uint8_t> encode_model(const NetworkSpec& spec, const NetworkParams& params) {
  spec.validate();
  check_params(spec.layers, params.weights);
  ByteWriter w;
  w.raw(std::span(reinterpret_cast<const std::uint8_t*>(kMagic), 8));
  w.u8(static_cast<std::uint8_t>(spec.kind));
  w.u32(static_cast<std::uint32_t>(spec.layers.size()));
  std::size_t ci = 0;
  for (const auto& layer : spec.layers) {
    if (std::holds_alternative<ConvLayer>(layer)) {
      const auto& p = params.weights.convs[ci++];
      w.u8(kConv);
      w.u32(static_cast<std::uint32_t>(p.out_channels));
      w.u32(static_cast<std::uint32_t>(p.in_channels));
      w.u32(static_cast<std::uint32_t>(p.kernel_h));
      w.u32(static_cast<std::uint32_t>(p.kernel_w));
      for (float v : p.kernels) w.f32(v);
      for (float v : p.bias) w.f32(v);
    } else if (std::holds_alternative<ReluLayer>(layer)) {
      w.u8(kRelu);
    } else if (std::holds_alternative<MaxPool2Layer>(layer)) {
      w.u8(kPool);
    } else if (const auto* d = std::get_if<DropoutLayer>(&layer)) {
      w.u8(kDropout);
      w.f32(d->p);
    } else {
      w.u8(kSoftmax);
    }
  }
  return std::move(w.bytes());
}

std::pair<NetworkSpec, NetworkParams> decode_model(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kMagic, 8) != 0) {
    throw FormatError(FormatErrc::kBadMagic, "not a BGNM0001 model");
  }
  ByteReader r(bytes.subspan(8));
  const std::uint8_t kind = r.u8();
  if (kind > 2) throw FormatError(FormatErrc::kBadValue, "network kind tag " + std::to_string(kind));
  NetworkSpec spec;
  spec.kind = static_cast<NetKind>(kind);
  spec.window = window_for(spec.kind);
  NetworkParams params;
  const std::uint32_t count = r.u32();
  if (count > 4096) throw FormatError(FormatErrc::kBadValue, "layer count " + std::to_string(count));
  for (std::uint32_t li = 0; li < count; ++li) {
    const std::uint8_t tag = r.u8();
    switch (tag) {
      case kConv: {
        const auto out_c = r.u32(), in_c = r.u32(), kh = r.u32(), kw = r.u32();
        if (out_c == 0 || in_c == 0 || kh == 0 || kw == 0 || out_c > 65536 || in_c > 65536 ||
            kh > 4096 || kw > 4096) {
          throw FormatError(FormatErrc::kBadValue, "conv layer " + std::to_string(li) +
                                                       " has implausible extents");
        }
        ConvParams<float> p(static_cast<int>(out_c), static_cast<int>(in_c), static_cast<int>(kh),
                            static_cast<int>(kw));
        for (auto& v : p.kernels) v = r.f32();
        for (auto& v : p.bias) v = r.f32();
        spec.layers.push_back(ConvLayer{p.out_channels, p.in_channels, p.kernel_h, p.kernel_w});
        params.weights.convs.push_back(std::move(p));
        break;
      }
      case kRelu: spec.layers.push_back(ReluLayer{}); break;
      case kPool: spec.layers.push_back(MaxPool2Layer{}); break;
      case kDropout: {
        const float p = r.f32();
        if (!(p >= 0.0f && p < 1.0f)) {
          throw FormatError(FormatErrc::kBadValue, "dropout probability " + std::to_string(p));
        }
        spec.layers.push_back(DropoutLayer{p});
        break;
      }
      case kSoftmax: spec.layers.push_back(SoftmaxHead{}); break;
      default:
        throw FormatError(FormatErrc::kUnknownLayerTag,
                          "tag " + std::to_string(tag) + " at layer " + std::to_string(li));
    }
  }
  if (r.remaining() != 0) {
    throw FormatError(FormatErrc::kDimensionMismatch,
                      std::to_string(r.remaining()) + " trailing bytes after the last layer");
  }
  try {
    spec.validate();
  } catch (const ShapeError& e) {
    throw FormatError(FormatErrc::kDimensionMismatch, e.what());
  }
  return {std::move(spec), std::move(params)};
}

void save_model(const NetworkSpec& spec, const NetworkParams& params, const std::string& path) {
  write_file_bytes(path, encode_model(spec, params));
}

std::pair<NetworkSpec, NetworkParams> load_model(const std::string& path) {
  return decode_model(read_file_bytes(path));
}

}  // namespace spotter
