#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ajlef/image.hpp"
#include "ajlef/recognition.hpp"

namespace ajlef {

enum class IllumKind { Constant, LinearRamp, HalfPlaneShadow, RadialSpot };

std::string to_string(IllumKind kind);

/// Parameters for one synthetic Lambertian scene I = R * L.
struct SceneSpec {
    uint64_t identity_seed = 0;
    IllumKind illum_kind = IllumKind::Constant;
    double illum_strength = 1.0; // base multiplier, > 0
    int width = 64;
    int height = 64;
    // Shadow / spot shaping. attenuation is the exact min/max ratio of the
    // shadow field; softness and center are in fractions of the width.
    double attenuation = 0.5;
    double softness = 0.2;
    double center = 0.5;
};

/// Strictly positive illumination field, same layout as GrayImage.
struct IlluminationField {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    double& at(int x, int y) { return values[static_cast<size_t>(y) * width + x]; }
    double at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }
};

/// Procedural reflectance pattern (blob/stripe mixture), deterministic in
/// identity_seed, values in [1, 255]. Redraws internally until the field has
/// enough contrast that distinct seeds are guaranteed to differ.
GrayImage make_reflectance(const SceneSpec& spec);

IlluminationField make_illumination(const SceneSpec& spec);

/// Elementwise product R * L, real-valued, clamped below at 1.
GrayImage render(const GrayImage& reflectance, const IlluminationField& illumination);

/// Certified local illumination-variation bound: the maximum over all
/// ordered pixel pairs within Chebyshev `radius` of |L(x,y)/L(xi,yj) - 1|.
double epsilon_bound(const IlluminationField& illumination, int radius);

/// Relative L2 distance ||a - b|| / ||b||; used by the distinctness check.
double relative_l2_difference(const GrayImage& a, const GrayImage& b);

/// Round to 8-bit, clamping into [0, 255]; for file emission.
GrayImage quantize(const GrayImage& img);

/// Deterministic multi-identity benchmark: `identities` reflectance patterns
/// rendered under `variants` different illumination fields each. Images are
/// written as PGM into `dir` and listed in the returned manifest (also saved
/// as dir/manifest.csv).
DatasetManifest write_benchmark_set(const std::string& dir, int identities, int variants,
                                    uint64_t seed, int width = 48, int height = 48);

/// The per-variant scene used by write_benchmark_set, exposed so tests can
/// regenerate individual images in memory.
SceneSpec benchmark_scene(uint64_t seed, int identity, int variant, int width, int height);

} // namespace ajlef
