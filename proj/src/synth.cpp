#include "ajlef/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "ajlef/errors.hpp"

namespace ajlef {

namespace {

// splitmix64; keeps generated scenes identical across platforms, unlike the
// distribution classes in <random>.
struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed) : state(seed) {}

    uint64_t next() {
        state += 0x9e3779b97f4a7c15ull;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int range(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<uint64_t>(hi - lo + 1)); }
};

double smoothstep(double t) {
    t = std::clamp(t, 0.0, 1.0);
    return t * t * (3.0 - 2.0 * t);
}

GrayImage draw_reflectance(const SceneSpec& spec, uint64_t attempt) {
    Rng rng(spec.identity_seed * 0x100000001b3ull + attempt);
    GrayImage img(spec.width, spec.height, 100.0);

    const int blobs = rng.range(6, 10);
    for (int b = 0; b < blobs; ++b) {
        const double cx = rng.uniform(0.0, spec.width - 1.0);
        const double cy = rng.uniform(0.0, spec.height - 1.0);
        const double radius = rng.uniform(0.05, 0.25) * spec.width;
        const double amp = rng.uniform(20.0, 80.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
        for (int y = 0; y < spec.height; ++y)
            for (int x = 0; x < spec.width; ++x) {
                const double dx = x - cx, dy = y - cy;
                img.at(x, y) += amp * std::exp(-(dx * dx + dy * dy) / (2.0 * radius * radius));
            }
    }
    const int stripes = rng.range(1, 3);
    for (int sidx = 0; sidx < stripes; ++sidx) {
        const double fx = rng.uniform(0.5, 4.0);
        const double fy = rng.uniform(0.5, 4.0);
        const double phase = rng.uniform(0.0, 2.0 * M_PI);
        const double amp = rng.uniform(10.0, 30.0);
        for (int y = 0; y < spec.height; ++y)
            for (int x = 0; x < spec.width; ++x)
                img.at(x, y) += amp * std::sin(2.0 * M_PI * (fx * x + fy * y) / spec.width + phase);
    }
    for (double& v : img.pixels) v = std::clamp(v, 1.0, 255.0);
    return img;
}

double contrast_ratio(const GrayImage& img) {
    double mean = 0.0;
    for (double v : img.pixels) mean += v;
    mean /= static_cast<double>(img.size());
    double dev = 0.0, norm = 0.0;
    for (double v : img.pixels) {
        dev += (v - mean) * (v - mean);
        norm += mean * mean;
    }
    return std::sqrt(dev) / std::sqrt(norm);
}

uint64_t mix(uint64_t a, uint64_t b) {
    Rng rng(a * 0x9e3779b97f4a7c15ull + b);
    return rng.next();
}

} // namespace

std::string to_string(IllumKind kind) {
    switch (kind) {
        case IllumKind::Constant: return "constant";
        case IllumKind::LinearRamp: return "linear_ramp";
        case IllumKind::HalfPlaneShadow: return "half_plane_shadow";
        case IllumKind::RadialSpot: return "radial_spot";
    }
    return "?";
}

GrayImage make_reflectance(const SceneSpec& spec) {
    // Redraw until the field carries at least 5% relative contrast, so that
    // independently drawn seeds cannot collapse onto near-identical fields.
    for (uint64_t attempt = 0;; ++attempt) {
        GrayImage img = draw_reflectance(spec, attempt);
        if (contrast_ratio(img) >= 0.05) return img;
    }
}

IlluminationField make_illumination(const SceneSpec& spec) {
    if (!(spec.illum_strength > 0.0))
        throw InvalidArgument("make_illumination: strength must be > 0");
    if (!(spec.attenuation > 0.0 && spec.attenuation <= 1.0))
        throw InvalidArgument("make_illumination: attenuation must be in (0, 1]");
    IlluminationField field;
    field.width = spec.width;
    field.height = spec.height;
    field.values.assign(static_cast<size_t>(spec.width) * spec.height, spec.illum_strength);

    const double s = spec.illum_strength;
    const double a = spec.attenuation;
    switch (spec.illum_kind) {
        case IllumKind::Constant:
            break;
        case IllumKind::LinearRamp:
            for (int y = 0; y < spec.height; ++y)
                for (int x = 0; x < spec.width; ++x)
                    field.at(x, y) = s * (1.0 + (spec.width > 1
                                                     ? static_cast<double>(x) / (spec.width - 1)
                                                     : 0.0));
            break;
        case IllumKind::HalfPlaneShadow: {
            const double x0 = spec.center * (spec.width - 1);
            const double soft = std::max(spec.softness * spec.width, 1e-9);
            for (int y = 0; y < spec.height; ++y)
                for (int x = 0; x < spec.width; ++x) {
                    const double t = smoothstep((x - x0) / soft + 0.5);
                    field.at(x, y) = s * (a + (1.0 - a) * t);
                }
            break;
        }
        case IllumKind::RadialSpot: {
            const double cx = spec.center * (spec.width - 1);
            const double cy = 0.5 * (spec.height - 1);
            const double sigma = std::max(spec.softness, 1e-3) * spec.width;
            for (int y = 0; y < spec.height; ++y)
                for (int x = 0; x < spec.width; ++x) {
                    const double dx = x - cx, dy = y - cy;
                    const double g = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
                    field.at(x, y) = s * (a + (1.0 - a) * g);
                }
            break;
        }
    }
    return field;
}

GrayImage render(const GrayImage& reflectance, const IlluminationField& illumination) {
    if (reflectance.width != illumination.width || reflectance.height != illumination.height)
        throw InvalidArgument("render: reflectance/illumination dimension mismatch");
    GrayImage out(reflectance.width, reflectance.height);
    for (size_t i = 0; i < out.size(); ++i)
        out.pixels[i] = std::max(reflectance.pixels[i] * illumination.values[i], 1.0);
    return out;
}

double epsilon_bound(const IlluminationField& illumination, int radius) {
    if (radius < 1) throw InvalidArgument("epsilon_bound: radius must be >= 1");
    for (double v : illumination.values)
        if (!(v > 0.0)) throw InvalidArgument("epsilon_bound: non-positive illumination value");

    double bound = 0.0;
    for (int y = 0; y < illumination.height; ++y)
        for (int x = 0; x < illumination.width; ++x) {
            const double center = illumination.at(x, y);
            for (int dy = -radius; dy <= radius; ++dy) {
                const int ny = y + dy;
                if (ny < 0 || ny >= illumination.height) continue;
                for (int dx = -radius; dx <= radius; ++dx) {
                    const int nx = x + dx;
                    if (nx < 0 || nx >= illumination.width) continue;
                    bound = std::max(bound, std::abs(center / illumination.at(nx, ny) - 1.0));
                }
            }
        }
    return bound;
}

double relative_l2_difference(const GrayImage& a, const GrayImage& b) {
    if (a.size() != b.size()) throw InvalidArgument("relative_l2_difference: size mismatch");
    double diff = 0.0, norm = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        diff += (a.pixels[i] - b.pixels[i]) * (a.pixels[i] - b.pixels[i]);
        norm += b.pixels[i] * b.pixels[i];
    }
    return std::sqrt(diff) / std::sqrt(norm);
}

GrayImage quantize(const GrayImage& img) {
    GrayImage out(img.width, img.height);
    for (size_t i = 0; i < img.size(); ++i)
        out.pixels[i] = std::clamp(std::round(img.pixels[i]), 0.0, 255.0);
    return out;
}

SceneSpec benchmark_scene(uint64_t seed, int identity, int variant, int width, int height) {
    SceneSpec spec;
    spec.identity_seed = mix(seed, static_cast<uint64_t>(identity) + 1);
    spec.width = width;
    spec.height = height;

    Rng rng(mix(seed, (static_cast<uint64_t>(identity) << 20) ^
                          (static_cast<uint64_t>(variant) + 7)));
    switch (variant % 4) {
        case 0:
            spec.illum_kind = IllumKind::Constant;
            spec.illum_strength = rng.uniform(0.3, 1.0);
            break;
        case 1:
            // Ramp doubles the strength at the right edge; keep products <= 255.
            spec.illum_kind = IllumKind::LinearRamp;
            spec.illum_strength = rng.uniform(0.25, 0.5);
            break;
        case 2:
            spec.illum_kind = IllumKind::HalfPlaneShadow;
            spec.illum_strength = rng.uniform(0.6, 1.0);
            spec.attenuation = rng.uniform(0.2, 0.6);
            spec.center = rng.uniform(0.3, 0.7);
            spec.softness = rng.uniform(0.15, 0.3);
            break;
        case 3:
            spec.illum_kind = IllumKind::RadialSpot;
            spec.illum_strength = rng.uniform(0.6, 1.0);
            spec.attenuation = rng.uniform(0.3, 0.7);
            spec.center = rng.uniform(0.3, 0.7);
            spec.softness = rng.uniform(0.25, 0.4);
            break;
    }
    return spec;
}

DatasetManifest write_benchmark_set(const std::string& dir, int identities, int variants,
                                    uint64_t seed, int width, int height) {
    if (identities < 2 || variants < 2)
        throw InvalidArgument("write_benchmark_set: need >= 2 identities and >= 2 variants");
    std::filesystem::create_directories(dir);

    DatasetManifest manifest;
    for (int i = 0; i < identities; ++i) {
        for (int j = 0; j < variants; ++j) {
            const SceneSpec spec = benchmark_scene(seed, i, j, width, height);
            const GrayImage image =
                quantize(render(make_reflectance(spec), make_illumination(spec)));
            const std::string path =
                dir + "/id" + std::to_string(i) + "_v" + std::to_string(j) + ".pgm";
            save_image(image, path);
            manifest.entries.push_back({"id" + std::to_string(i), path});
        }
    }
    save_manifest(manifest, dir + "/manifest.csv");
    return manifest;
}

} // namespace ajlef
