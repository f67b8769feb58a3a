#include "ajlef/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <png.h>

#include "ajlef/errors.hpp"

namespace ajlef {

GrayImage::GrayImage(int w, int h, double fill)
    : width(w), height(h), pixels(static_cast<size_t>(w) * h, fill) {}

LogImage::LogImage(int w, int h, double fill)
    : width(w), height(h), values(static_cast<size_t>(w) * h, fill) {}

namespace {

constexpr long kMaxDimension = 1 << 20;

bool has_suffix(const std::string& s, const std::string& suffix) {
    if (s.size() < suffix.size()) return false;
    std::string tail = s.substr(s.size() - suffix.size());
    std::transform(tail.begin(), tail.end(), tail.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return tail == suffix;
}

// Next header token, skipping whitespace and '#' comment lines.
std::string pgm_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
        } else if (!std::isspace(c)) {
            tok.push_back(static_cast<char>(c));
            while ((c = in.peek()) != EOF && !std::isspace(c) && c != '#') {
                tok.push_back(static_cast<char>(in.get()));
            }
            return tok;
        }
    }
    throw FormatError("truncated PGM header");
}

long pgm_number(std::istream& in, const char* what) {
    const std::string tok = pgm_token(in);
    try {
        size_t pos = 0;
        const long value = std::stol(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return value;
    } catch (const std::exception&) {
        throw FormatError(std::string("bad PGM ") + what + ": '" + tok + "'");
    }
}

GrayImage load_pgm(std::istream& in, const std::string& path) {
    if (pgm_token(in) != "P5") throw FormatError(path + ": not a binary PGM (P5)");
    const long w = pgm_number(in, "width");
    const long h = pgm_number(in, "height");
    const long maxval = pgm_number(in, "maxval");
    if (w <= 0 || h <= 0 || w > kMaxDimension || h > kMaxDimension || w * h > kMaxDimension * 16)
        throw FormatError(path + ": image dimensions out of range");
    if (maxval != 255)
        throw FormatError(path + ": unsupported PGM bit depth (maxval " +
                          std::to_string(maxval) + ", expected 255)");
    in.get(); // single whitespace after maxval

    GrayImage img(static_cast<int>(w), static_cast<int>(h));
    std::vector<unsigned char> raw(img.size());
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<size_t>(in.gcount()) != raw.size())
        throw FormatError(path + ": truncated PGM pixel data");
    std::copy(raw.begin(), raw.end(), img.pixels.begin());
    return img;
}

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FILE* file = nullptr;
    ~PngReader() {
        if (png) png_destroy_read_struct(&png, &info, nullptr);
        if (file) std::fclose(file);
    }
};

GrayImage load_png(const std::string& path) {
    PngReader r;
    r.file = std::fopen(path.c_str(), "rb");
    if (!r.file) throw IoError(path + ": cannot open file");
    r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    r.info = png_create_info_struct(r.png);
    if (!r.png || !r.info) throw Error("libpng initialization failed");
    if (setjmp(png_jmpbuf(r.png))) throw FormatError(path + ": malformed PNG");

    png_init_io(r.png, r.file);
    png_read_info(r.png, r.info);

    const png_uint_32 w = png_get_image_width(r.png, r.info);
    const png_uint_32 h = png_get_image_height(r.png, r.info);
    const int depth = png_get_bit_depth(r.png, r.info);
    const int color = png_get_color_type(r.png, r.info);
    if (color != PNG_COLOR_TYPE_GRAY)
        throw FormatError(path + ": unsupported PNG color type (grayscale only)");
    if (depth == 16)
        throw FormatError(path + ": unsupported PNG bit depth (16-bit, expected 8)");
    if (depth < 8) png_set_expand_gray_1_2_4_to_8(r.png);
    if (w == 0 || h == 0 || w > kMaxDimension || h > kMaxDimension)
        throw FormatError(path + ": image dimensions out of range");
    png_read_update_info(r.png, r.info);

    GrayImage img(static_cast<int>(w), static_cast<int>(h));
    std::vector<unsigned char> row(w);
    for (png_uint_32 y = 0; y < h; ++y) {
        png_read_row(r.png, row.data(), nullptr);
        for (png_uint_32 x = 0; x < w; ++x) img.at(static_cast<int>(x), static_cast<int>(y)) = row[x];
    }
    return img;
}

struct PngWriter {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FILE* file = nullptr;
    ~PngWriter() {
        if (png) png_destroy_write_struct(&png, &info);
        if (file) std::fclose(file);
    }
};

void save_png(const GrayImage& img, const std::string& path,
              const std::vector<unsigned char>& raw) {
    PngWriter w;
    w.file = std::fopen(path.c_str(), "wb");
    if (!w.file) throw IoError(path + ": cannot open file for writing");
    w.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    w.info = png_create_info_struct(w.png);
    if (!w.png || !w.info) throw Error("libpng initialization failed");
    if (setjmp(png_jmpbuf(w.png))) throw IoError(path + ": PNG write failed");

    png_init_io(w.png, w.file);
    png_set_IHDR(w.png, w.info, img.width, img.height, 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(w.png, w.info);
    for (int y = 0; y < img.height; ++y) {
        png_write_row(w.png, const_cast<unsigned char*>(
                                 raw.data() + static_cast<size_t>(y) * img.width));
    }
    png_write_end(w.png, w.info);
}

} // namespace

GrayImage load_image(const std::string& path) {
    if (has_suffix(path, ".png")) return load_png(path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": cannot open file");
    return load_pgm(in, path);
}

void save_image(const GrayImage& img, const std::string& path) {
    if (img.width <= 0 || img.height <= 0)
        throw InvalidArgument("save_image: empty image");
    std::vector<unsigned char> raw(img.size());
    for (size_t i = 0; i < img.size(); ++i) {
        const double rounded = std::round(img.pixels[i]);
        if (!(rounded >= 0.0 && rounded <= 255.0))
            throw InvalidArgument("save_image: pixel " + std::to_string(img.pixels[i]) +
                                  " outside [0, 255]");
        raw[i] = static_cast<unsigned char>(rounded);
    }
    if (has_suffix(path, ".png")) {
        save_png(img, path, raw);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path + ": cannot open file for writing");
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out) throw IoError(path + ": write failed");
}

LogImage log_transform(const GrayImage& img) {
    LogImage out(img.width, img.height);
    for (size_t i = 0; i < img.size(); ++i)
        out.values[i] = std::log(std::max(img.pixels[i], 1.0));
    return out;
}

LogImage pad_replicate(const LogImage& img, int margin) {
    if (margin < 0) throw InvalidArgument("pad_replicate: negative margin");
    if (margin == 0) return img;
    LogImage out(img.width + 2 * margin, img.height + 2 * margin);
    for (int y = 0; y < out.height; ++y) {
        const int sy = std::clamp(y - margin, 0, img.height - 1);
        for (int x = 0; x < out.width; ++x) {
            const int sx = std::clamp(x - margin, 0, img.width - 1);
            out.at(x, y) = img.at(sx, sy);
        }
    }
    return out;
}

LogImage gaussian_smooth(const LogImage& img, double sigma) {
    if (!(sigma > 0.0)) throw InvalidArgument("gaussian_smooth: sigma must be > 0");
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(static_cast<size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[static_cast<size_t>(i + radius)] = std::exp(-(i * i) / (2.0 * sigma * sigma));
        sum += kernel[static_cast<size_t>(i + radius)];
    }
    for (double& w : kernel) w /= sum;

    // Horizontal pass then vertical pass, replicate borders.
    LogImage tmp(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                const int sx = std::clamp(x + i, 0, img.width - 1);
                acc += kernel[static_cast<size_t>(i + radius)] * img.at(sx, y);
            }
            tmp.at(x, y) = acc;
        }
    }
    LogImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                const int sy = std::clamp(y + i, 0, img.height - 1);
                acc += kernel[static_cast<size_t>(i + radius)] * tmp.at(x, sy);
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

} // namespace ajlef
