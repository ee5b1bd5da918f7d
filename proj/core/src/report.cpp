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

#include <charconv>
#include <cstdio>
#include <sstream>

#include "spotter/error.hpp"
#include "spotter/evalkit.hpp"
#include "spotter/io.hpp"

namespace spotter {
namespace {

constexpr const char* kHeader = "threshold,tp,fp,tn,fn,tpr,fpr,precision,recall";

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

template <typename T>
T parse_field(const std::string& field, std::size_t line) {
  T v{};
  const auto* end = field.data() + field.size();
  const auto r = std::from_chars(field.data(), end, v);
  if (r.ec != std::errc{} || r.ptr != end) {
    throw FormatError(FormatErrc::kBadValue,
                      "ROC CSV line " + std::to_string(line) + ": bad field '" + field + "'");
  }
  return v;
}

}  // namespace

std::string roc_to_csv(const RocCurve& curve) {
  if (curve.empty()) throw ArgumentError("cannot report an empty ROC curve");
  std::string out = std::string(kHeader) + "\n";
  char buf[256];
  for (const auto& p : curve) {
    std::snprintf(buf, sizeof buf, "%.6f,%lld,%lld,%lld,%lld,%.6f,%.6f,%.6f,%.6f\n", p.threshold,
                  static_cast<long long>(p.tp), static_cast<long long>(p.fp),
                  static_cast<long long>(p.tn), static_cast<long long>(p.fn), p.tpr, p.fpr,
                  p.precision, p.recall);
    out += buf;
  }
  return out;
}

RocCurve roc_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kHeader) {
    throw FormatError(FormatErrc::kBadMagic, "missing ROC CSV header");
  }
  RocCurve curve;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    if (f.size() != 9) {
      throw FormatError(FormatErrc::kDimensionMismatch,
                        "ROC CSV line " + std::to_string(lineno) + " has " + std::to_string(f.size()) +
                            " fields, expected 9");
    }
    RocPoint p;
    p.threshold = parse_field<double>(f[0], lineno);
    p.tp = parse_field<std::int64_t>(f[1], lineno);
    p.fp = parse_field<std::int64_t>(f[2], lineno);
    p.tn = parse_field<std::int64_t>(f[3], lineno);
    p.fn = parse_field<std::int64_t>(f[4], lineno);
    p.tpr = parse_field<double>(f[5], lineno);
    p.fpr = parse_field<double>(f[6], lineno);
    p.precision = parse_field<double>(f[7], lineno);
    p.recall = parse_field<double>(f[8], lineno);
    curve.push_back(p);
  }
  if (curve.empty()) throw FormatError(FormatErrc::kTruncated, "ROC CSV has no rows");
  return curve;
}

std::string roc_to_svg(const RocCurve& curve, const std::string& title) {
  if (curve.empty()) throw ArgumentError("cannot plot an empty ROC curve");
  constexpr double kSize = 400.0, kMargin = 50.0;
  const auto px = [&](double fpr) { return kMargin + fpr * kSize; };
  const auto py = [&](double tpr) { return kMargin + (1.0 - tpr) * kSize; };
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(2);
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"500\" height=\"500\" viewBox=\"0 0 500 500\">\n"
    << "<rect width=\"500\" height=\"500\" fill=\"white\"/>\n"
    << "<text x=\"250\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
    << xml_escape(title) << "</text>\n"
    << "<rect x=\"50\" y=\"50\" width=\"400\" height=\"400\" fill=\"none\" stroke=\"black\"/>\n"
    << "<line x1=\"50\" y1=\"450\" x2=\"450\" y2=\"50\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 4\"/>\n";
  for (int i = 0; i <= 10; ++i) {
    const double v = i / 10.0;
    s << "<line x1=\"" << px(v) << "\" y1=\"450\" x2=\"" << px(v) << "\" y2=\"455\" stroke=\"black\"/>"
      << "<text x=\"" << px(v) << "\" y=\"470\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"10\">" << v << "</text>\n"
      << "<line x1=\"45\" y1=\"" << py(v) << "\" x2=\"50\" y2=\"" << py(v) << "\" stroke=\"black\"/>"
      << "<text x=\"40\" y=\"" << py(v) + 3 << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
         "font-size=\"10\">" << v << "</text>\n";
  }
  s << "<text x=\"250\" y=\"492\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
       "false positive rate</text>\n"
    << "<text x=\"14\" y=\"250\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
       "transform=\"rotate(-90 14 250)\">true positive rate</text>\n"
    << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
  for (const auto& p : curve) s << px(p.fpr) << ',' << py(p.tpr) << ' ';
  s << "\"/>\n</svg>\n";
  return s.str();
}

void write_roc_csv(const RocCurve& curve, const std::string& path) {
  write_file_text(path, roc_to_csv(curve));
}

RocCurve read_roc_csv(const std::string& path) { return roc_from_csv(read_file_text(path)); }

void write_roc_svg(const RocCurve& curve, const std::string& path, const std::string& title) {
  write_file_text(path, roc_to_svg(curve, title));
}

}  // namespace spotter
