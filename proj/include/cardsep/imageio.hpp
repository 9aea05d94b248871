#pragma once

#include <cctype>
#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <png.h>

#include "cardsep/image.hpp"

namespace cardsep {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// BT.709 luma, rounded half up.
inline std::uint8_t luma709(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  const int v = (2126 * r + 7152 * g + 722 * b + 5000) / 10000;
  return static_cast<std::uint8_t>(v);
}

namespace detail {

// One whitespace-delimited header token, skipping '#' comments to end of line.
inline std::string next_pnm_token(std::istream& in) {
  std::string tok;
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  while (c != EOF && !std::isspace(c) && c != '#') {
    tok.push_back(static_cast<char>(c));
    c = in.get();
  }
  if (c == '#') in.unget();
  return tok;
}

inline int parse_pnm_int(const std::string& tok) {
  if (tok.empty()) throw FormatError("truncated PGM header");
  for (char ch : tok)
    if (!std::isdigit(static_cast<unsigned char>(ch)))
      throw FormatError("bad PGM header token: " + tok);
  try {
    return std::stoi(tok);
  } catch (const std::exception&) {
    throw FormatError("bad PGM header token: " + tok);
  }
}

}  // namespace detail

/// Binary (P5) PGM with maxval 255; comments and loose whitespace accepted.
inline GrayImage load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);

  const std::string magic = detail::next_pnm_token(in);
  if (magic != "P5") throw FormatError("unsupported image format: " + magic);

  const int width = detail::parse_pnm_int(detail::next_pnm_token(in));
  const int height = detail::parse_pnm_int(detail::next_pnm_token(in));
  const std::string maxtok = detail::next_pnm_token(in);
  if (detail::parse_pnm_int(maxtok) != 255)
    throw FormatError("unsupported PGM maxval: " + maxtok);
  if (width < 1 || height < 1)
    throw FormatError("bad PGM dimensions: " + std::to_string(width) + "x" +
                      std::to_string(height));
  // The maxval is followed by exactly one whitespace byte, already consumed
  // by the tokenizer.
  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(width) * height);
  in.read(reinterpret_cast<char*>(pixels.data()),
          static_cast<std::streamsize>(pixels.size()));
  if (static_cast<std::size_t>(in.gcount()) != pixels.size())
    throw FormatError("truncated PGM pixel data in " + path);
  return GrayImage(width, height, std::move(pixels));
}

/// Any libpng-decodable PNG; color converts through BT.709 luma.
inline GrayImage load_png_file(const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "rb");
  if (!fp) throw IoError("cannot open " + path);

  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (png) png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw IoError("libpng initialization failed");
  }

  // Declared before setjmp so their destructors run on the throw below.
  std::vector<std::uint8_t> raw;
  std::vector<png_bytep> rows;
  int width = 0, height = 0, channels = 0;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw FormatError("invalid PNG data in " + path);
  }

  png_init_io(png, fp);
  png_read_info(png, info);

  const png_byte color_type = png_get_color_type(png, info);
  const png_byte bit_depth = png_get_bit_depth(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
    png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (bit_depth == 16) png_set_strip_16(png);
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);

  width = static_cast<int>(png_get_image_width(png, info));
  height = static_cast<int>(png_get_image_height(png, info));
  channels = png_get_channels(png, info);
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  if (width < 1 || height < 1 || (channels != 1 && channels != 3)) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw FormatError("unsupported PNG layout in " + path);
  }

  raw.resize(rowbytes * static_cast<std::size_t>(height));
  rows.resize(static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) rows[y] = raw.data() + y * rowbytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  std::fclose(fp);

  GrayImage img(width, height);
  for (int y = 0; y < height; ++y) {
    const std::uint8_t* src = raw.data() + static_cast<std::size_t>(y) * rowbytes;
    std::uint8_t* dst = img.row(y);
    if (channels == 1) {
      std::copy(src, src + width, dst);
    } else {
      for (int x = 0; x < width; ++x)
        dst[x] = luma709(src[3 * x], src[3 * x + 1], src[3 * x + 2]);
    }
  }
  return img;
}

inline GrayImage load_image(const std::string& path) {
  unsigned char sig[8] = {};
  {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw IoError("cannot open " + path);
    probe.read(reinterpret_cast<char*>(sig), 8);
  }
  if (png_sig_cmp(sig, 0, 8) == 0) return load_png_file(path);
  return load_pgm(path);
}

inline void save_pgm(const GrayImage& image, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "P5\n" << image.width() << " " << image.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels().data()),
            static_cast<std::streamsize>(image.pixels().size()));
  out.flush();
  if (!out) throw IoError("write failed for " + path);
}

/// Box to draw on an overlay; text and graphics get distinct outline colors.
struct OverlayBox {
  Rect box;
  bool is_text = true;
};

inline void save_overlay(const GrayImage& image,
                         const std::vector<OverlayBox>& boxes,
                         const std::string& path) {
  for (const auto& ob : boxes) {
    const Rect& r = ob.box;
    if (r.w < 1 || r.h < 1 || r.x < 0 || r.y < 0 ||
        r.right() > image.width() || r.bottom() > image.height())
      throw std::invalid_argument("save_overlay: box outside image");
  }

  const int w = image.width(), h = image.height();
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(w) * h * 3);
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* src = image.row(y);
    std::uint8_t* dst = rgb.data() + static_cast<std::size_t>(y) * w * 3;
    for (int x = 0; x < w; ++x) {
      dst[3 * x] = dst[3 * x + 1] = dst[3 * x + 2] = src[x];
    }
  }

  auto paint = [&](int x, int y, std::uint8_t r, std::uint8_t g,
                   std::uint8_t b) {
    std::uint8_t* p = rgb.data() + (static_cast<std::size_t>(y) * w + x) * 3;
    p[0] = r;
    p[1] = g;
    p[2] = b;
  };
  for (const auto& ob : boxes) {
    const Rect& r = ob.box;
    const std::uint8_t cr = ob.is_text ? 0 : 230;
    const std::uint8_t cg = ob.is_text ? 200 : 30;
    const std::uint8_t cb = ob.is_text ? 0 : 30;
    for (int x = r.x; x < r.right(); ++x) {
      paint(x, r.y, cr, cg, cb);
      paint(x, r.bottom() - 1, cr, cg, cb);
    }
    for (int y = r.y; y < r.bottom(); ++y) {
      paint(r.x, y, cr, cg, cb);
      paint(r.right() - 1, y, cr, cg, cb);
    }
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "P6\n" << w << " " << h << "\n255\n";
  out.write(reinterpret_cast<const char*>(rgb.data()),
            static_cast<std::streamsize>(rgb.size()));
  out.flush();
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace cardsep
