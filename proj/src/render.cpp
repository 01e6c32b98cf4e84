// Copyright 2026 The Panoptic-Nav Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pnav/render.hpp"

#include <fmt/format.h>
#include <png.h>

#include <array>
#include <cmath>

#include "pnav/error.hpp"
#include "pnav/sequence.hpp"

namespace pnav {
namespace {

// 3x5 glyphs, one row per byte, bit 2 = leftmost column.
const std::array<std::uint8_t, 5>* glyph(char c) {
  static const std::array<std::uint8_t, 5> digits[10] = {
      {7, 5, 5, 5, 7}, {2, 6, 2, 2, 7}, {7, 1, 7, 4, 7}, {7, 1, 7, 1, 7}, {5, 5, 7, 1, 1},
      {7, 4, 7, 1, 7}, {7, 4, 7, 5, 7}, {7, 1, 1, 1, 1}, {7, 5, 7, 5, 7}, {7, 5, 7, 1, 7}};
  static const std::array<std::uint8_t, 5> dot = {0, 0, 0, 0, 2};
  static const std::array<std::uint8_t, 5> m = {0, 0, 7, 7, 5};
  if (c >= '0' && c <= '9') return &digits[c - '0'];
  if (c == '.') return &dot;
  if (c == 'm') return &m;
  return nullptr;
}

Rgb hsv(double h, double s, double v) {
  const double c = v * s;
  const double hp = std::fmod(h, 360.0) / 60.0;
  const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  if (hp < 1) {
    r = c, g = x;
  } else if (hp < 2) {
    r = x, g = c;
  } else if (hp < 3) {
    g = c, b = x;
  } else if (hp < 4) {
    g = x, b = c;
  } else if (hp < 5) {
    r = x, b = c;
  } else {
    r = c, b = x;
  }
  const double m = v - c;
  auto to8 = [&](double u) { return static_cast<std::uint8_t>(std::lround((u + m) * 255.0)); };
  return {to8(r), to8(g), to8(b)};
}

void put(RgbImage& img, int row, int col, Rgb c) {
  const std::size_t i = (static_cast<std::size_t>(row) * img.width + col) * 3;
  img.pixels[i] = c.r;
  img.pixels[i + 1] = c.g;
  img.pixels[i + 2] = c.b;
}

void draw_label(RgbImage& img, const std::string& text, int center_row, int center_col) {
  const int w = static_cast<int>(text.size()) * 4 + 1;
  const int h = 7;
  const int top = center_row - h / 2;
  const int left = center_col - w / 2;
  if (top < 0 || left < 0 || top + h > img.height || left + w > img.width) return;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) put(img, top + r, left + c, {0, 0, 0});
  }
  for (std::size_t k = 0; k < text.size(); ++k) {
    const auto* g = glyph(text[k]);
    if (g == nullptr) continue;
    for (int r = 0; r < 5; ++r) {
      for (int c = 0; c < 3; ++c) {
        if ((*g)[r] & (4 >> c)) put(img, top + 1 + r, left + 1 + static_cast<int>(k) * 4 + c, {255, 255, 255});
      }
    }
  }
}

}  // namespace

Rgb instance_color(InstanceId id) { return hsv(static_cast<double>(id) * 137.50776405003785, 0.9, 1.0); }

RgbImage render_overlay(const PanopticMap& map, const LabelSchema& schema, const std::vector<SegmentInfo>& segments,
                        const std::vector<std::uint8_t>* rgb) {
  const int w = map.width();
  const int h = map.height();
  const std::size_t n = static_cast<std::size_t>(w) * h;
  if (rgb != nullptr && rgb->size() != n * 3) throw DimensionError("rgb plane does not match the panoptic map");
  RgbImage img{w, h, std::vector<std::uint8_t>(n * 3)};
  const auto px = map.packed();
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * w + c;
      const ClassDef* def = schema.find(label_class(px[i]));
      Rgb color = def ? def->color : Rgb{};
      if (rgb != nullptr) {
        color = {static_cast<std::uint8_t>(((*rgb)[i * 3] + color.r + 1) / 2),
                 static_cast<std::uint8_t>(((*rgb)[i * 3 + 1] + color.g + 1) / 2),
                 static_cast<std::uint8_t>(((*rgb)[i * 3 + 2] + color.b + 1) / 2)};
      }
      const InstanceId inst = label_instance(px[i]);
      if (inst != 0) {
        const bool edge = (r > 0 && map.at(r - 1, c) != px[i]) || (r + 1 < h && map.at(r + 1, c) != px[i]) ||
                          (c > 0 && map.at(r, c - 1) != px[i]) || (c + 1 < w && map.at(r, c + 1) != px[i]);
        if (edge) color = instance_color(inst);
      }
      put(img, r, c, color);
    }
  }
  for (const SegmentInfo& s : segments) {
    if (!s.distance_mm || !schema.is_thing(s.class_id)) continue;
    draw_label(img, fmt::format("{:.1f}m", *s.distance_mm / 1000.0), static_cast<int>(std::lround(s.centroid_row)),
               static_cast<int>(std::lround(s.centroid_col)));
  }
  return img;
}

namespace {

void png_append(png_structp png, png_bytep data, png_size_t len) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + len);
}

void png_flush(png_structp) {}

}  // namespace

std::vector<std::uint8_t> encode_png(const RgbImage& image) {
  if (image.width <= 0 || image.height <= 0) throw DimensionError("cannot encode an empty image");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) throw IoError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  std::vector<std::uint8_t> out;
  if (info == nullptr || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("PNG encoding failed");
  }
  png_set_write_fn(png, &out, png_append, png_flush);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(png, 6);
  png_write_info(png, info);
  for (int r = 0; r < image.height; ++r) {
    png_write_row(png, const_cast<png_bytep>(image.pixels.data() + static_cast<std::size_t>(r) * image.width * 3));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

void write_png(const std::filesystem::path& path, const RgbImage& image) { write_file(path, encode_png(image)); }

}  // namespace pnav
