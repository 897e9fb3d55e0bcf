// Copyright 2026 the pswsynth authors
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

#include "psw/io/image_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

namespace psw::io {

namespace {

uint8_t toByte(double v) {
  double c = std::clamp(v, 0.0, 1.0);
  return uint8_t(std::lround(c * 255.0));
}

// --- PPM ---------------------------------------------------------------

int ppmToken(std::istream& in, const std::string& path) {
  // Skips whitespace and '#' comments between header fields.
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
    } else if (!std::isspace(c)) {
      in.unget();
      break;
    }
  }
  int value;
  if (!(in >> value)) throw DataError("ppm '" + path + "': bad header");
  return value;
}

Image readPpm(std::istream& in, const std::string& path) {
  char magic[2];
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || magic[1] != '6')
    throw DataError("ppm '" + path + "': expected P6 magic");
  int w = ppmToken(in, path);
  int h = ppmToken(in, path);
  int maxval = ppmToken(in, path);
  if (w <= 0 || h <= 0) throw DataError("ppm '" + path + "': bad size");
  if (maxval != 255)
    throw DataError("ppm '" + path + "': only maxval 255 supported");
  in.get();  // single whitespace after header

  std::vector<uint8_t> row(size_t(w) * 3);
  Image img(w, h);
  for (int y = 0; y < h; ++y) {
    in.read(reinterpret_cast<char*>(row.data()), std::streamsize(row.size()));
    if (!in) throw DataError("ppm '" + path + "': truncated pixel data");
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c)
        img.at(c, y, x) = row[size_t(x) * 3 + c] / 255.0;
  }
  return img;
}

// --- PNG ---------------------------------------------------------------

struct PngReadCtx {
  png_structp png = nullptr;
  png_infop info = nullptr;
  FILE* fp = nullptr;
  ~PngReadCtx() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    if (fp) std::fclose(fp);
  }
};

Image readPngFile(const std::string& path) {
  PngReadCtx ctx;
  ctx.fp = std::fopen(path.c_str(), "rb");
  if (!ctx.fp) throw DataError("cannot open image: " + path);

  ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                   nullptr);
  PSW_CHECK(ctx.png, "libpng init failed");
  ctx.info = png_create_info_struct(ctx.png);
  PSW_CHECK(ctx.info, "libpng info init failed");
  if (setjmp(png_jmpbuf(ctx.png)))
    throw DataError("png '" + path + "': decode error");

  png_init_io(ctx.png, ctx.fp);
  png_read_info(ctx.png, ctx.info);

  png_set_expand(ctx.png);
  png_set_strip_16(ctx.png);
  png_set_strip_alpha(ctx.png);
  png_set_gray_to_rgb(ctx.png);
  png_read_update_info(ctx.png, ctx.info);

  int w = int(png_get_image_width(ctx.png, ctx.info));
  int h = int(png_get_image_height(ctx.png, ctx.info));
  if (png_get_channels(ctx.png, ctx.info) != 3)
    throw DataError("png '" + path + "': unsupported channel layout");

  std::vector<uint8_t> buf(size_t(w) * h * 3);
  std::vector<png_bytep> rows(static_cast<size_t>(h));
  for (int y = 0; y < h; ++y) rows[size_t(y)] = buf.data() + size_t(y) * w * 3;
  png_read_image(ctx.png, rows.data());
  png_read_end(ctx.png, nullptr);

  Image img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c)
        img.at(c, y, x) = buf[(size_t(y) * w + x) * 3 + c] / 255.0;
  return img;
}

struct PngWriteCtx {
  png_structp png = nullptr;
  png_infop info = nullptr;
  FILE* fp = nullptr;
  ~PngWriteCtx() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    if (fp) std::fclose(fp);
  }
};

void writePngRows(const std::string& path, int w, int h, int colorType,
                  std::vector<uint8_t>& buf, int bytesPerPixel) {
  PngWriteCtx ctx;
  ctx.fp = std::fopen(path.c_str(), "wb");
  if (!ctx.fp) throw DataError("cannot open image for writing: " + path);
  ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                    nullptr);
  PSW_CHECK(ctx.png, "libpng init failed");
  ctx.info = png_create_info_struct(ctx.png);
  PSW_CHECK(ctx.info, "libpng info init failed");
  if (setjmp(png_jmpbuf(ctx.png)))
    throw DataError("png '" + path + "': encode error");

  png_init_io(ctx.png, ctx.fp);
  png_set_IHDR(ctx.png, ctx.info, png_uint_32(w), png_uint_32(h), 8, colorType,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(ctx.png, ctx.info);
  std::vector<png_bytep> rows(static_cast<size_t>(h));
  for (int y = 0; y < h; ++y)
    rows[size_t(y)] = buf.data() + size_t(y) * w * bytesPerPixel;
  png_write_image(ctx.png, rows.data());
  png_write_end(ctx.png, nullptr);
}

}  // namespace

Image readImage(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open image: " + path);
  char magic[2] = {0, 0};
  f.read(magic, 2);
  if (!f) throw DataError("image '" + path + "': empty file");
  if (magic[0] == 'P' && magic[1] == '6') {
    f.seekg(0);
    return readPpm(f, path);
  }
  if (uint8_t(magic[0]) == 0x89 && magic[1] == 'P') {
    f.close();
    return readPngFile(path);
  }
  throw DataError("image '" + path + "': unrecognized format");
}

void writePpm(const std::string& path, const Image& img) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot open image for writing: " + path);
  f << "P6\n" << img.width << ' ' << img.height << "\n255\n";
  std::vector<uint8_t> row(size_t(img.width) * 3);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < 3; ++c)
        row[size_t(x) * 3 + c] = toByte(img.at(c, y, x));
    f.write(reinterpret_cast<const char*>(row.data()),
            std::streamsize(row.size()));
  }
  if (!f) throw DataError("failed writing image: " + path);
}

void writePng(const std::string& path, const Image& img) {
  std::vector<uint8_t> buf(size_t(img.width) * img.height * 3);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < 3; ++c)
        buf[(size_t(y) * img.width + x) * 3 + c] = toByte(img.at(c, y, x));
  writePngRows(path, img.width, img.height, PNG_COLOR_TYPE_RGB, buf, 3);
}

void writeGrayPng(const std::string& path, const Grid& grid, double lo,
                  double hi) {
  PSW_CHECK(hi > lo, "writeGrayPng: bad range");
  std::vector<uint8_t> buf(size_t(grid.width) * grid.height);
  for (size_t i = 0; i < buf.size(); ++i)
    buf[i] = toByte((grid.data[i] - lo) / (hi - lo));
  writePngRows(path, grid.width, grid.height, PNG_COLOR_TYPE_GRAY, buf, 1);
}

void writeImage(const std::string& path, const Image& img) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".ppm")
    writePpm(path, img);
  else if (path.size() >= 4 && path.substr(path.size() - 4) == ".png")
    writePng(path, img);
  else
    throw ConfigError("unsupported image extension: " + path);
}

}  // namespace psw::io
