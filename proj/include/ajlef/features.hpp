#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ajlef/illum.hpp"
#include "ajlef/image.hpp"

namespace ajlef {

enum class FeatureKind { Lef, Jlef, Ajlef, Weber, Gradient, Raw, Log };

std::string to_string(FeatureKind kind);

struct FeatureMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;
    FeatureKind kind = FeatureKind::Raw;
    int lef_scale = 0; // meaningful for kind == Lef only

    FeatureMap() = default;
    FeatureMap(int w, int h, FeatureKind k, double fill = 0.0);

    double& at(int x, int y) { return values[static_cast<size_t>(y) * width + x]; }
    double at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }
    size_t size() const { return values.size(); }
};

/// Fusion weights over scales 1..alpha: omega_normal is a softmax of the
/// per-scale performance vector, omega_g its Gaussian transform.
struct ScaleWeights {
    int alpha = 1;
    std::vector<double> omega_normal;
    std::vector<double> omega_g;
    double sigma2 = 1.0;
};

/// Log edgemap at scale k: at each pixel, the sum of differences between the
/// center and every neighbor in the filled (2k+1)x(2k+1) Chebyshev window
/// minus the center, evaluated with replicate borders.
FeatureMap lef(const LogImage& f, int k);

/// Number of neighbors in the scale-k window: (2k+1)^2 - 1.
int lef_window_size(int k);

/// Softmax over the first `alpha` entries, max-subtracted for stability.
std::vector<double> softmax_weights(const std::vector<double>& performance, int alpha);

/// omega_g(k) = exp(-omega_normal(k)^2 / (2 * sigma2)).
std::vector<double> gaussian_weights(const std::vector<double>& omega_normal, double sigma2);

/// Build full ScaleWeights from a performance vector.
ScaleWeights make_scale_weights(const std::vector<double>& performance, int alpha, double sigma2);

/// Weighted fusion of LEF_1..LEF_alpha.
FeatureMap jlef(const LogImage& f, const ScaleWeights& weights);

/// Sigmoid saturation of a JLEF map: 1 / (1 + exp(-delta * value)).
FeatureMap ajlef_face(const FeatureMap& j, double delta);

/// Full adaptive pipeline: classify the level, look up LevelParams, form
/// weights from the profile's stored performance vector for that level
/// (uniform when absent) and return the AJLEF map (or JLEF when
/// want_ajlef is false).
FeatureMap extract(const GrayImage& img, const CalibrationProfile& profile,
                   bool want_ajlef = true);

/// arctan of the summed relative 8-neighborhood differences of the
/// Gaussian-smoothed, >=1-clamped image.
FeatureMap weber_face(const GrayImage& img, double smooth_sigma);

/// arctan(dI/dy / dI/dx) on the smoothed image with central differences;
/// 0 where both gradients vanish.
FeatureMap gradient_face(const GrayImage& img, double smooth_sigma);

/// Equal-width histogram over [min, max] of the map values.
std::vector<std::pair<double, size_t>> feature_histogram(const FeatureMap& m, int bins);

/// Real-valued CSV, one row per image row.
void export_feature_csv(const FeatureMap& m, const std::string& path);

/// 8-bit PNG/PGM after affine rescale of [min, max] to [0, 255].
void export_feature_image(const FeatureMap& m, const std::string& path);

} // namespace ajlef
