// SPDX-License-Identifier: Apache-2.0
#include "biokey/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>

namespace biokey {

namespace {

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("failed reading '" + path + "'");
    return bytes;
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot create '" + path + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing '" + path + "'");
}

class PgmHeaderReader {
public:
    explicit PgmHeaderReader(const std::vector<std::uint8_t>& b) : bytes_(b) {}

    long next_int() {
        skip_space_and_comments();
        long v = 0;
        int digits = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            v = v * 10 + (bytes_[pos_++] - '0');
            if (++digits > 9) throw InvalidInput("PGM header value too large");
        }
        if (digits == 0) throw InvalidInput("malformed PGM header");
        return v;
    }

    std::size_t pos() const { return pos_; }
    void advance(std::size_t n) { pos_ += n; }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    const std::vector<std::uint8_t>& bytes_;
    std::size_t pos_ = 0;
};

GrayImage decode_png(const std::vector<std::uint8_t>& bytes) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        throw InvalidInput(std::string("PNG decode failed: ") + image.message);
    }
    image.format = PNG_FORMAT_GRAY;
    std::vector<std::uint8_t> px(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, px.data(), 0, nullptr)) {
        std::string msg = image.message;
        png_image_free(&image);
        throw InvalidInput("PNG decode failed: " + msg);
    }
    return GrayImage(static_cast<int>(image.width), static_cast<int>(image.height), std::move(px));
}

}  // namespace

GrayImage decode_pgm(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
        throw InvalidInput("not a binary PGM (P5) stream");
    }
    PgmHeaderReader reader(bytes);
    reader.advance(2);
    const long width = reader.next_int();
    const long height = reader.next_int();
    const long maxval = reader.next_int();
    if (width <= 0 || height <= 0) throw InvalidInput("PGM has empty dimensions");
    if (maxval <= 0 || maxval > 255) throw InvalidInput("only 8-bit PGM is supported");
    // exactly one whitespace byte separates the header from the raster
    reader.advance(1);
    const std::size_t need = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (bytes.size() < reader.pos() + need) throw InvalidInput("truncated PGM raster");
    std::vector<std::uint8_t> px(bytes.begin() + static_cast<std::ptrdiff_t>(reader.pos()),
                                 bytes.begin() + static_cast<std::ptrdiff_t>(reader.pos() + need));
    if (maxval != 255) {
        for (auto& p : px) p = to_pixel(p * 255.0 / static_cast<double>(maxval));
    }
    return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(px));
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& img) {
    const std::string header =
        "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    auto px = img.pixels();
    out.insert(out.end(), px.begin(), px.end());
    return out;
}

GrayImage read_image(const std::string& path) {
    const auto bytes = read_file(path);
    static constexpr std::uint8_t kPngMagic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    try {
        if (bytes.size() >= 8 && std::memcmp(bytes.data(), kPngMagic, 8) == 0) return decode_png(bytes);
        return decode_pgm(bytes);
    } catch (const InvalidInput& e) {
        throw IoError("cannot decode '" + path + "': " + e.what());
    }
}

void write_pgm(const std::string& path, const GrayImage& img) { write_file(path, encode_pgm(img)); }

void write_pgm(const std::string& path, const BinaryImage& img) {
    GrayImage g(img.width(), img.height());
    auto bits = img.bits();
    auto dst = g.pixels();
    for (std::size_t i = 0; i < bits.size(); ++i) dst[i] = bits[i] ? 255 : 0;
    write_pgm(path, g);
}

}  // namespace biokey
