#include "farf/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <memory>

#include "farf/color.hpp"
#include "farf/error.hpp"

namespace farf {
namespace fs = std::filesystem;

namespace {

std::string lower_ext(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const fs::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw IoError("cannot open " + path.string());
  return f;
}

// ---------------------------------------------------------------- PNG

[[noreturn]] void png_error_fn(png_structp png, png_const_charp msg) {
  auto* what = static_cast<std::string*>(png_get_error_ptr(png));
  *what = msg;
  png_longjmp(png, 1);
}

void png_warning_fn(png_structp, png_const_charp) {}

ColorImage read_png(const fs::path& path) {
  FilePtr file = open_file(path, "rb");
  std::string error;
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &error, png_error_fn, png_warning_fn);
  if (!png) throw IoError("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("libpng init failed");
  }

  std::vector<std::uint8_t> pixels;
  png_uint_32 width = 0, height = 0;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("bad PNG " + path.string() + ": " + error);
  }
  png_init_io(png, file.get());
  png_read_info(png, info);
  width = png_get_image_width(png, info);
  height = png_get_image_height(png, info);
  const int color_type = png_get_color_type(png, info);
  const int bit_depth = png_get_bit_depth(png, info);

  if (bit_depth == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(png);
  }
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  const std::size_t rowbytes = png_get_rowbytes(png, info);
  pixels.resize(rowbytes * height);
  std::vector<png_bytep> rows(height);
  for (png_uint_32 y = 0; y < height; ++y) rows[y] = pixels.data() + y * rowbytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  const int w = static_cast<int>(width);
  const int h = static_cast<int>(height);
  ImagePlane r(w, h), g(w, h), b(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::uint8_t* p = rows[y] + 3 * x;
      r.at(x, y) = p[0] / 255.0;
      g.at(x, y) = p[1] / 255.0;
      b.at(x, y) = p[2] / 255.0;
    }
  }
  return {std::move(r), std::move(g), std::move(b)};
}

void write_png(const fs::path& path, const std::vector<std::uint8_t>& pixels, int w, int h,
               int channels) {
  FilePtr file = open_file(path, "wb");
  std::string error;
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, &error, png_error_fn, png_warning_fn);
  if (!png) throw IoError("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng init failed");
  }
  std::vector<png_bytep> rows(h);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("writing PNG " + path.string() + " failed: " + error);
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, w, h, 8, channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < h; ++y) {
    rows[y] = const_cast<png_bytep>(pixels.data() + static_cast<std::size_t>(y) * w * channels);
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

// ---------------------------------------------------------------- PNM

// Reads the next whitespace-separated header token, skipping '#' comments.
std::string pnm_token(std::istream& in) {
  std::string tok;
  char c;
  while (in.get(c)) {
    if (c == '#') {
      std::string discard;
      std::getline(in, discard);
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      if (!tok.empty()) break;
    } else {
      tok.push_back(c);
    }
  }
  return tok;
}

ColorImage read_pnm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string magic = pnm_token(in);
  if (magic != "P5" && magic != "P6") {
    throw IoError(path.string() + ": only binary P5/P6 is supported");
  }
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(pnm_token(in));
    h = std::stoi(pnm_token(in));
    maxval = std::stoi(pnm_token(in));
  } catch (const std::exception&) {
    throw IoError(path.string() + ": malformed header");
  }
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 255) {
    throw IoError(path.string() + ": unsupported dimensions or maxval");
  }
  const int channels = magic == "P6" ? 3 : 1;
  std::vector<unsigned char> buf(static_cast<std::size_t>(w) * h * channels);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (in.gcount() != static_cast<std::streamsize>(buf.size())) {
    throw IoError(path.string() + ": truncated pixel data");
  }
  ImagePlane r(w, h), g(w, h), b(w, h);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r.data()[i] = buf[i * channels] / static_cast<double>(maxval);
    g.data()[i] = buf[i * channels + (channels - 1) / 2] / static_cast<double>(maxval);
    b.data()[i] = buf[i * channels + channels - 1] / static_cast<double>(maxval);
  }
  return {std::move(r), std::move(g), std::move(b)};
}

void write_pnm(const fs::path& path, const std::vector<std::uint8_t>& pixels, int w, int h,
               int channels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << (channels == 3 ? "P6" : "P5") << "\n" << w << " " << h << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()),
            static_cast<std::streamsize>(pixels.size()));
  if (!out) throw IoError("writing " + path.string() + " failed");
}

// ---------------------------------------------------------------- BMP

std::uint32_t le32(const unsigned char* p) {
  return p[0] | (p[1] << 8) | (p[2] << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t le16(const unsigned char* p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }

ColorImage read_bmp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 54 || bytes[0] != 'B' || bytes[1] != 'M') {
    throw IoError(path.string() + ": not a BMP file");
  }
  const std::uint32_t offset = le32(&bytes[10]);
  const auto width = static_cast<std::int32_t>(le32(&bytes[18]));
  const auto raw_height = static_cast<std::int32_t>(le32(&bytes[22]));
  const int bpp = le16(&bytes[28]);
  const std::uint32_t compression = le32(&bytes[30]);
  if ((bpp != 24 && bpp != 32) || (compression != 0 && compression != 3) || width <= 0 ||
      raw_height == 0) {
    throw IoError(path.string() + ": only uncompressed 24/32-bit BMP is supported");
  }
  const bool bottom_up = raw_height > 0;
  const int h = bottom_up ? raw_height : -raw_height;
  const int w = width;
  const std::size_t stride = ((static_cast<std::size_t>(w) * bpp / 8) + 3) & ~std::size_t{3};
  if (offset + stride * h > bytes.size()) throw IoError(path.string() + ": truncated BMP");
  ImagePlane r(w, h), g(w, h), b(w, h);
  for (int y = 0; y < h; ++y) {
    const int src_row = bottom_up ? h - 1 - y : y;
    const unsigned char* row = &bytes[offset + stride * src_row];
    for (int x = 0; x < w; ++x) {
      const unsigned char* p = row + x * (bpp / 8);
      b.at(x, y) = p[0] / 255.0;
      g.at(x, y) = p[1] / 255.0;
      r.at(x, y) = p[2] / 255.0;
    }
  }
  return {std::move(r), std::move(g), std::move(b)};
}

std::vector<std::uint8_t> interleave(const ColorImage& img) {
  std::vector<std::uint8_t> out(static_cast<std::size_t>(img.width()) * img.height() * 3);
  const auto r = img.r.data();
  const auto g = img.g.data();
  const auto b = img.b.data();
  for (std::size_t i = 0; i < r.size(); ++i) {
    out[3 * i] = static_cast<std::uint8_t>(quantize8(r[i]));
    out[3 * i + 1] = static_cast<std::uint8_t>(quantize8(g[i]));
    out[3 * i + 2] = static_cast<std::uint8_t>(quantize8(b[i]));
  }
  return out;
}

std::vector<std::uint8_t> quantize(const ImagePlane& plane) {
  std::vector<std::uint8_t> out(plane.size());
  const auto d = plane.data();
  for (std::size_t i = 0; i < d.size(); ++i) out[i] = static_cast<std::uint8_t>(quantize8(d[i]));
  return out;
}

}  // namespace

bool is_supported_image(const fs::path& path) {
  static const std::array<std::string_view, 5> kExts = {".png", ".pgm", ".ppm", ".pnm", ".bmp"};
  const std::string ext = lower_ext(path);
  return std::find(kExts.begin(), kExts.end(), ext) != kExts.end();
}

ColorImage read_image(const fs::path& path) {
  const std::string ext = lower_ext(path);
  if (ext == ".png") return read_png(path);
  if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") return read_pnm(path);
  if (ext == ".bmp") return read_bmp(path);
  throw IoError("unsupported image format: " + path.string());
}

void write_image(const fs::path& path, const ColorImage& img) {
  const std::string ext = lower_ext(path);
  if (ext == ".pgm") {
    write_pnm(path, quantize(rgb_to_ycc(img).luma), img.width(), img.height(), 1);
  } else if (ext == ".ppm" || ext == ".pnm") {
    write_pnm(path, interleave(img), img.width(), img.height(), 3);
  } else if (ext == ".png") {
    write_png(path, interleave(img), img.width(), img.height(), 3);
  } else {
    throw IoError("unsupported output format: " + path.string());
  }
}

void write_plane(const fs::path& path, const ImagePlane& plane) {
  const std::string ext = lower_ext(path);
  if (ext == ".pgm") {
    write_pnm(path, quantize(plane), plane.width(), plane.height(), 1);
  } else if (ext == ".png") {
    write_png(path, quantize(plane), plane.width(), plane.height(), 1);
  } else {
    write_image(path, ColorImage::from_gray(plane));
  }
}

std::vector<fs::path> list_images(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_supported_image(entry.path())) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return out;
}

}  // namespace farf
