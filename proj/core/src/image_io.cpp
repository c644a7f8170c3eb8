#include "resmatch/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <png.h>

namespace resmatch {

namespace {

struct PngStream {
    const std::uint8_t* data = nullptr;
    size_t size = 0;
    size_t offset = 0;
    std::string error;
};

void png_stream_read(png_structp png, png_bytep out, png_size_t count) {
    auto* st = static_cast<PngStream*>(png_get_io_ptr(png));
    if (st->offset + count > st->size) {
        st->offset = st->size;
        png_error(png, "unexpected end of stream");
    }
    std::memcpy(out, st->data + st->offset, count);
    st->offset += count;
}

void png_error_handler(png_structp png, png_const_charp msg) {
    auto* st = static_cast<PngStream*>(png_get_error_ptr(png));
    if (st) st->error = msg;
    longjmp(png_jmpbuf(png), 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

void png_vector_write(png_structp png, png_bytep data, png_size_t count) {
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + count);
}

void png_vector_flush(png_structp) {}

GrayImage decode_png(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0)
        throw DecodeError("PNG: invalid signature at byte offset 0");

    PngStream stream{bytes.data(), bytes.size(), 0, {}};
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &stream, png_error_handler,
                                             png_warning_handler);
    if (!png) throw DecodeError("PNG: failed to allocate decoder");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw DecodeError("PNG: failed to allocate decoder state");
    }

    std::vector<std::uint8_t> buffer;
    std::vector<png_bytep> rows;

    if (setjmp(png_jmpbuf(png))) {
        const size_t offset = stream.offset;
        const std::string message = stream.error.empty() ? "decode failure" : stream.error;
        png_destroy_read_struct(&png, &info, nullptr);
        throw DecodeError("PNG: " + message + " near byte offset " + std::to_string(offset));
    }

    png_set_read_fn(png, &stream, png_stream_read);
    png_read_info(png, info);

    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    const int bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);

    const bool gray = color_type == PNG_COLOR_TYPE_GRAY;
    const bool rgb = color_type == PNG_COLOR_TYPE_RGB;
    if (!((gray && (bit_depth == 8 || bit_depth == 16)) || (rgb && bit_depth == 8))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DecodeError("PNG: unsupported format (color type " + std::to_string(color_type) +
                          ", bit depth " + std::to_string(bit_depth) +
                          "); supported: 8/16-bit grayscale, 8-bit RGB");
    }

    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    const size_t row_bytes = png_get_rowbytes(png, info);
    buffer.resize(row_bytes * height);
    rows.resize(height);
    for (png_uint_32 v = 0; v < height; ++v) rows[v] = buffer.data() + row_bytes * v;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    GrayImage img(static_cast<int>(width), static_cast<int>(height));
    for (png_uint_32 v = 0; v < height; ++v) {
        const std::uint8_t* row = buffer.data() + row_bytes * v;
        for (png_uint_32 u = 0; u < width; ++u) {
            double value;
            if (gray && bit_depth == 8) {
                value = row[u] / 255.0;
            } else if (gray) {
                const unsigned hi = row[2 * u], lo = row[2 * u + 1]; // network byte order
                value = (hi * 256.0 + lo) / 65535.0;
            } else {
                const double r = row[3 * u], g = row[3 * u + 1], b = row[3 * u + 2];
                value = (0.299 * r + 0.587 * g + 0.114 * b) / 255.0;
            }
            img.at(static_cast<int>(u), static_cast<int>(v)) = value;
        }
    }
    return img;
}

struct PgmCursor {
    std::span<const std::uint8_t> bytes;
    size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw DecodeError("PGM: " + what + " at byte offset " + std::to_string(pos));
    }
    bool eof() const { return pos >= bytes.size(); }
    std::uint8_t peek() const { return bytes[pos]; }

    void skip_space_and_comments() {
        while (!eof()) {
            const std::uint8_t c = peek();
            if (c == '#') {
                while (!eof() && peek() != '\n') ++pos;
            } else if (std::isspace(c)) {
                ++pos;
            } else {
                break;
            }
        }
    }

    long read_int(const char* name) {
        skip_space_and_comments();
        if (eof() || !std::isdigit(peek())) fail(std::string("expected integer ") + name);
        long value = 0;
        while (!eof() && std::isdigit(peek())) {
            value = value * 10 + (peek() - '0');
            if (value > 1000000000L) fail(std::string("integer overflow in ") + name);
            ++pos;
        }
        return value;
    }
};

GrayImage decode_pgm(std::span<const std::uint8_t> bytes) {
    PgmCursor cur{bytes, 0};
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5'))
        cur.fail("invalid magic, expected P2 or P5");
    const bool binary = bytes[1] == '5';
    cur.pos = 2;

    const long width = cur.read_int("width");
    const long height = cur.read_int("height");
    const long maxval = cur.read_int("maxval");
    if (width < 1 || height < 1) cur.fail("non-positive image dimensions");
    if (maxval < 1 || maxval > 65535) cur.fail("maxval out of range 1..65535");

    GrayImage img(static_cast<int>(width), static_cast<int>(height));
    const double scale = 1.0 / static_cast<double>(maxval);

    if (binary) {
        if (cur.eof() || !std::isspace(cur.peek())) cur.fail("expected whitespace before pixel data");
        ++cur.pos;
        const int bytes_per_px = maxval > 255 ? 2 : 1;
        const size_t need = static_cast<size_t>(width) * height * bytes_per_px;
        if (bytes.size() - cur.pos < need) cur.fail("truncated pixel data");
        for (long v = 0; v < height; ++v) {
            for (long u = 0; u < width; ++u) {
                long value;
                if (bytes_per_px == 1) {
                    value = bytes[cur.pos++];
                } else {
                    value = bytes[cur.pos] * 256L + bytes[cur.pos + 1];
                    cur.pos += 2;
                }
                if (value > maxval) cur.fail("pixel value exceeds maxval");
                img.at(static_cast<int>(u), static_cast<int>(v)) = value * scale;
            }
        }
    } else {
        for (long v = 0; v < height; ++v) {
            for (long u = 0; u < width; ++u) {
                const long value = cur.read_int("pixel");
                if (value > maxval) cur.fail("pixel value exceeds maxval");
                img.at(static_cast<int>(u), static_cast<int>(v)) = value * scale;
            }
        }
    }
    return img;
}

std::vector<std::uint8_t> encode_png_impl(int width, int height, int color_type,
                                          const std::vector<std::uint8_t>& pixels,
                                          size_t row_bytes) {
    std::vector<std::uint8_t> out;
    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw Error("PNG: failed to allocate encoder");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw Error("PNG: failed to allocate encoder state");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error("PNG: encode failure");
    }
    png_set_write_fn(png, &out, png_vector_write, png_vector_flush);
    png_set_IHDR(png, info, width, height, 8, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int v = 0; v < height; ++v)
        png_write_row(png, const_cast<png_bytep>(pixels.data() + row_bytes * v));
    png_write_end(png, info);
    png_destroy_write_struct(&png, &info);
    return out;
}

std::uint8_t quantize8(double x) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(x, 0.0, 1.0) * 255.0));
}

} // namespace

GrayImage decode_image(std::span<const std::uint8_t> bytes, ImageFormat format) {
    switch (format) {
        case ImageFormat::Png: return decode_png(bytes);
        case ImageFormat::Pgm: return decode_pgm(bytes);
    }
    throw ParameterError("decode_image: unknown format");
}

GrayImage decode_image(std::span<const std::uint8_t> bytes) {
    if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '2' || bytes[1] == '5'))
        return decode_pgm(bytes);
    return decode_png(bytes);
}

std::vector<std::uint8_t> encode_png(const GrayImage& img) {
    std::vector<std::uint8_t> pixels(static_cast<size_t>(img.width) * img.height);
    for (size_t i = 0; i < pixels.size(); ++i) pixels[i] = quantize8(img.data[i]);
    return encode_png_impl(img.width, img.height, PNG_COLOR_TYPE_GRAY, pixels, img.width);
}

std::vector<std::uint8_t> encode_png(const RgbImage& img) {
    return encode_png_impl(img.width, img.height, PNG_COLOR_TYPE_RGB, img.data,
                           static_cast<size_t>(img.width) * 3);
}

std::vector<std::uint8_t> read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file for reading: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failure: " + path);
    return bytes;
}

void write_bytes(const std::string& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open file for writing: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failure: " + path);
}

void write_text(const std::string& path, const std::string& text) {
    write_bytes(path, std::span<const std::uint8_t>(
                          reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

GrayImage load_image(const std::string& path) {
    const std::vector<std::uint8_t> bytes = read_bytes(path);
    try {
        return decode_image(bytes);
    } catch (const DecodeError& e) {
        throw DecodeError(path + ": " + e.what());
    }
}

} // namespace resmatch
