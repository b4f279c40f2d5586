#include "nsrag/imaging.hpp"

#include <png.h>

#include <algorithm>
#include <cstring>
#include <fstream>

#include "nsrag/errors.hpp"

namespace nsrag {

namespace {

struct ReadState {
  const std::string* bytes;
  size_t offset;
};

void read_callback(png_structp png, png_bytep out, png_size_t count) {
  auto* state = static_cast<ReadState*>(png_get_io_ptr(png));
  if (state->offset + count > state->bytes->size()) {
    png_error(png, "unexpected end of PNG stream");
  }
  std::memcpy(out, state->bytes->data() + state->offset, count);
  state->offset += count;
}

void write_callback(png_structp png, png_bytep data, png_size_t count) {
  auto* out = static_cast<std::string*>(png_get_io_ptr(png));
  out->append(reinterpret_cast<const char*>(data), count);
}

void flush_callback(png_structp) {}

}  // namespace

Image decode_png(const std::string& bytes) {
  if (bytes.size() < 8 || png_sig_cmp(reinterpret_cast<png_const_bytep>(bytes.data()), 0, 8)) {
    raise(ErrorKind::ParseError, "data is not a PNG image");
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    raise(ErrorKind::ParseError, "cannot initialize PNG reader");
  }
  Image image;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    raise(ErrorKind::ParseError, "corrupt PNG image");
  }
  ReadState state{&bytes, 0};
  png_set_read_fn(png, &state, read_callback);
  png_read_info(png, info);

  png_set_expand(png);
  png_set_strip_16(png);
  png_set_gray_to_rgb(png);
  png_set_add_alpha(png, 0xFF, PNG_FILLER_AFTER);
  png_read_update_info(png, info);

  image.width = static_cast<int>(png_get_image_width(png, info));
  image.height = static_cast<int>(png_get_image_height(png, info));
  image.pixels.resize(static_cast<size_t>(image.width) * image.height * 4);
  std::vector<png_bytep> rows(static_cast<size_t>(image.height));
  for (int y = 0; y < image.height; y++) {
    rows[static_cast<size_t>(y)] = image.pixels.data() + static_cast<size_t>(y) * image.width * 4;
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return image;
}

std::string encode_png(const Image& image) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    raise(ErrorKind::ParseError, "cannot initialize PNG writer");
  }
  std::string out;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    raise(ErrorKind::ParseError, "PNG encoding failed");
  }
  png_set_write_fn(png, &out, write_callback, flush_callback);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width),
               static_cast<png_uint_32>(image.height), 8, PNG_COLOR_TYPE_RGBA,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < image.height; y++) {
    png_write_row(png, const_cast<png_bytep>(image.pixels.data() +
                                             static_cast<size_t>(y) * image.width * 4));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

Image read_png_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorKind::NotFound, "cannot read image file " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_png(bytes);
}

void write_png_file(const std::string& path, const Image& image) {
  std::string bytes = encode_png(image);
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorKind::StorageUnavailable, "cannot write image file " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

Image crop(const Image& image, int x0, int y0, int w, int h) {
  int left = std::max(0, x0);
  int top = std::max(0, y0);
  int right = std::min(image.width, x0 + w);
  int bottom = std::min(image.height, y0 + h);
  if (right <= left || bottom <= top) {
    raise(ErrorKind::DegenerateBox,
          "bounding box [" + std::to_string(x0) + ", " + std::to_string(y0) + ", " +
              std::to_string(w) + ", " + std::to_string(h) + "] covers no pixels of the " +
              std::to_string(image.width) + "x" + std::to_string(image.height) + " page");
  }
  Image out;
  out.width = right - left;
  out.height = bottom - top;
  out.pixels.resize(static_cast<size_t>(out.width) * out.height * 4);
  for (int y = 0; y < out.height; y++) {
    const std::uint8_t* src =
        image.pixels.data() + (static_cast<size_t>(y + top) * image.width + left) * 4;
    std::memcpy(out.pixels.data() + static_cast<size_t>(y) * out.width * 4, src,
                static_cast<size_t>(out.width) * 4);
  }
  return out;
}

std::string base64_encode(const std::string& bytes) {
  static const char* kAlphabet =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  size_t i = 0;
  while (i + 3 <= bytes.size()) {
    unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                 (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                 static_cast<unsigned char>(bytes[i + 2]);
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
    i += 3;
  }
  size_t rest = bytes.size() - i;
  if (rest == 1) {
    unsigned v = static_cast<unsigned char>(bytes[i]) << 16;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += "==";
  } else if (rest == 2) {
    unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                 (static_cast<unsigned char>(bytes[i + 1]) << 8);
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += '=';
  }
  return out;
}

std::string base64_decode(const std::string& text) {
  auto value_of = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  std::string out;
  int buffer = 0, bits = 0;
  for (char c : text) {
    if (c == '=' || c == '\n' || c == '\r') continue;
    int v = value_of(c);
    if (v < 0) raise(ErrorKind::ParseError, "invalid base64 input");
    buffer = (buffer << 6) | v;
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out += static_cast<char>((buffer >> bits) & 0xFF);
    }
  }
  return out;
}

}  // namespace nsrag
