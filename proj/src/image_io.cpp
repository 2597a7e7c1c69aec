#include "psx/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

namespace psx {

namespace {

constexpr std::size_t kPngSigBytes = 8;

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::vector<std::uint8_t> data{std::istreambuf_iterator<char>(in),
                                 std::istreambuf_iterator<char>()};
  if (in.bad()) throw IoError("read failed: " + path);
  return data;
}

// --- PNG ---------------------------------------------------------------

struct PngMemReader {
  const std::uint8_t* data;
  std::size_t size;
  std::size_t pos;
};

void png_mem_read(png_structp png, png_bytep out, png_size_t n) {
  auto* r = static_cast<PngMemReader*>(png_get_io_ptr(png));
  if (r->pos + n > r->size) png_error(png, "truncated PNG stream");
  std::memcpy(out, r->data + r->pos, n);
  r->pos += n;
}

void png_mem_write(png_structp png, png_bytep data, png_size_t n) {
  auto* buf = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  buf->insert(buf->end(), data, data + n);
}

void png_mem_flush(png_structp) {}

PlanarImage decode_png_impl(const std::uint8_t* data, std::size_t size) {
  if (size < kPngSigBytes || png_sig_cmp(data, 0, kPngSigBytes) != 0)
    throw FormatError("not a PNG stream");

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("png_create_info_struct failed");
  }

  std::vector<std::uint8_t> rows;     // declared before setjmp
  std::vector<png_bytep> row_ptrs;
  PngMemReader reader{data, size, 0};

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("corrupt or truncated PNG");
  }

  png_set_read_fn(png, &reader, png_mem_read);
  png_read_info(png, info);

  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);

  if (bit_depth == 16) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("16-bit PNG not supported");
  }
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);

  const int channels = png_get_channels(png, info);
  if (channels != 1 && channels != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("unsupported PNG channel layout");
  }

  const std::size_t stride = png_get_rowbytes(png, info);
  rows.resize(stride * height);
  row_ptrs.resize(height);
  for (png_uint_32 i = 0; i < height; ++i) row_ptrs[i] = rows.data() + i * stride;
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  PlanarImage img(static_cast<Index>(height), static_cast<Index>(width), channels);
  for (png_uint_32 i = 0; i < height; ++i) {
    const std::uint8_t* row = rows.data() + i * stride;
    for (png_uint_32 j = 0; j < width; ++j)
      for (int c = 0; c < channels; ++c)
        img(c, static_cast<Index>(i), static_cast<Index>(j)) =
            row[j * static_cast<png_uint_32>(channels) + static_cast<png_uint_32>(c)] / 255.0;
  }
  return img;
}

// --- PPM / PGM ----------------------------------------------------------

int ppm_next_int(const std::vector<std::uint8_t>& d, std::size_t& pos) {
  // skip whitespace and '#' comments
  while (pos < d.size()) {
    if (std::isspace(d[pos])) {
      ++pos;
    } else if (d[pos] == '#') {
      while (pos < d.size() && d[pos] != '\n') ++pos;
    } else {
      break;
    }
  }
  if (pos >= d.size() || !std::isdigit(d[pos])) throw FormatError("malformed PPM header");
  int v = 0;
  while (pos < d.size() && std::isdigit(d[pos])) {
    v = v * 10 + (d[pos] - '0');
    if (v > 1 << 20) throw FormatError("PPM header value out of range");
    ++pos;
  }
  return v;
}

PlanarImage decode_ppm(const std::vector<std::uint8_t>& d) {
  if (d.size() < 2) throw FormatError("truncated PPM");
  const int channels = d[1] == '6' ? 3 : 1;  // P6 = RGB, P5 = gray
  std::size_t pos = 2;
  const int width = ppm_next_int(d, pos);
  const int height = ppm_next_int(d, pos);
  const int maxval = ppm_next_int(d, pos);
  if (width < 1 || height < 1) throw FormatError("bad PPM dimensions");
  if (maxval < 1 || maxval > 255) throw FormatError("unsupported PPM bit depth");
  if (pos >= d.size() || !std::isspace(d[pos])) throw FormatError("malformed PPM header");
  ++pos;  // single whitespace after maxval

  const std::size_t need = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) *
                           static_cast<std::size_t>(channels);
  if (d.size() - pos < need) throw FormatError("truncated PPM pixel data");

  PlanarImage img(height, width, channels);
  const double scale = 1.0 / maxval;
  for (Index i = 0; i < height; ++i)
    for (Index j = 0; j < width; ++j)
      for (int c = 0; c < channels; ++c)
        img(c, i, j) = d[pos + static_cast<std::size_t>((i * width + j) * channels + c)] * scale;
  return img;
}

}  // namespace

PlanarImage decode_png(const std::uint8_t* data, std::size_t size) {
  return decode_png_impl(data, size);
}

PlanarImage load_image(const std::string& path) {
  const std::vector<std::uint8_t> data = read_file(path);
  if (data.size() >= 2 && data[0] == 'P' && (data[1] == '5' || data[1] == '6'))
    return decode_ppm(data);
  if (data.size() >= kPngSigBytes && png_sig_cmp(data.data(), 0, kPngSigBytes) == 0)
    return decode_png_impl(data.data(), data.size());
  throw FormatError("unsupported image format: " + path);
}

std::vector<std::uint8_t> encode_png(const PlanarImage& img) {
  img.validate();
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("png_create_info_struct failed");
  }

  const int channels = img.channels();
  const Index h = img.height(), w = img.width();
  std::vector<std::uint8_t> out;
  std::vector<std::uint8_t> rowbuf(static_cast<std::size_t>(w) * static_cast<std::size_t>(channels));

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("PNG encoding failed");
  }

  png_set_write_fn(png, &out, png_mem_write, png_mem_flush);
  png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), 8,
               channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  for (Index i = 0; i < h; ++i) {
    for (Index j = 0; j < w; ++j)
      for (int c = 0; c < channels; ++c) {
        const double v = std::clamp(img(c, i, j), 0.0, 1.0);
        rowbuf[static_cast<std::size_t>(j * channels + c)] =
            static_cast<std::uint8_t>(std::lround(v * 255.0));
      }
    png_write_row(png, rowbuf.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

void save_image(const PlanarImage& img, const std::string& path) {
  const std::vector<std::uint8_t> bytes = encode_png(img);
  std::ofstream outf(path, std::ios::binary | std::ios::trunc);
  if (!outf) throw IoError("cannot open for writing: " + path);
  outf.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!outf) throw IoError("write failed: " + path);
}

}  // namespace psx
