#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ajlef {

/// Grayscale image with real-valued intensities. Files are 8-bit; internally
/// pixels stay unquantized so that multiplicative-scaling tests are exact.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> pixels; // row-major, size width*height

    GrayImage() = default;
    GrayImage(int w, int h, double fill = 0.0);

    double& at(int x, int y) { return pixels[static_cast<size_t>(y) * width + x]; }
    double at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
    size_t size() const { return pixels.size(); }
};

/// Log-domain image produced by log_transform. Same layout as GrayImage.
struct LogImage {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    LogImage() = default;
    LogImage(int w, int h, double fill = 0.0);

    double& at(int x, int y) { return values[static_cast<size_t>(y) * width + x]; }
    double at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }
    size_t size() const { return values.size(); }
};

/// Load a binary PGM (P5, maxval 255) or 8-bit grayscale PNG.
/// Intensities are kept as read, no rescaling.
GrayImage load_image(const std::string& path);

/// Write as PGM or PNG depending on the file extension (.pgm default).
/// Pixels must round into [0, 255]; round-trips bit-exactly through load_image.
void save_image(const GrayImage& img, const std::string& path);

/// values[i] = ln(max(pixels[i], 1)). The clamp removes the ln(0) singularity.
LogImage log_transform(const GrayImage& img);

/// Pad by `margin` pixels on every side, replicating the nearest edge value.
LogImage pad_replicate(const LogImage& img, int margin);

/// Separable Gaussian blur, kernel radius ceil(3*sigma), replicate borders,
/// weights normalized to sum 1.
LogImage gaussian_smooth(const LogImage& img, double sigma);

} // namespace ajlef
