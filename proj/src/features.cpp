#include "ajlef/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "ajlef/errors.hpp"

namespace ajlef {

FeatureMap::FeatureMap(int w, int h, FeatureKind k, double fill)
    : width(w), height(h), values(static_cast<size_t>(w) * h, fill), kind(k) {}

std::string to_string(FeatureKind kind) {
    switch (kind) {
        case FeatureKind::Lef: return "lef";
        case FeatureKind::Jlef: return "jlef";
        case FeatureKind::Ajlef: return "ajlef";
        case FeatureKind::Weber: return "weber";
        case FeatureKind::Gradient: return "gradient";
        case FeatureKind::Raw: return "raw";
        case FeatureKind::Log: return "log";
    }
    return "?";
}

int lef_window_size(int k) { return (2 * k + 1) * (2 * k + 1) - 1; }

FeatureMap lef(const LogImage& f, int k) {
    if (k < 1) throw InvalidArgument("lef: scale k must be >= 1");
    const LogImage padded = pad_replicate(f, k);
    FeatureMap out(f.width, f.height, FeatureKind::Lef);
    out.lef_scale = k;
    for (int y = 0; y < f.height; ++y) {
        for (int x = 0; x < f.width; ++x) {
            const double center = f.at(x, y);
            double acc = 0.0;
            for (int dy = -k; dy <= k; ++dy) {
                for (int dx = -k; dx <= k; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    acc += center - padded.at(x + k + dx, y + k + dy);
                }
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

std::vector<double> softmax_weights(const std::vector<double>& performance, int alpha) {
    if (alpha < 1) throw InvalidArgument("softmax_weights: alpha must be >= 1");
    if (static_cast<int>(performance.size()) < alpha)
        throw InvalidArgument("softmax_weights: alpha exceeds available performance entries");
    const double peak = *std::max_element(performance.begin(), performance.begin() + alpha);
    std::vector<double> w(static_cast<size_t>(alpha));
    double sum = 0.0;
    for (int i = 0; i < alpha; ++i) {
        w[static_cast<size_t>(i)] = std::exp(performance[static_cast<size_t>(i)] - peak);
        sum += w[static_cast<size_t>(i)];
    }
    for (double& v : w) v /= sum;
    return w;
}

std::vector<double> gaussian_weights(const std::vector<double>& omega_normal, double sigma2) {
    if (!(sigma2 > 0.0)) throw InvalidArgument("gaussian_weights: sigma2 must be > 0");
    std::vector<double> w(omega_normal.size());
    for (size_t i = 0; i < omega_normal.size(); ++i)
        w[i] = std::exp(-(omega_normal[i] * omega_normal[i]) / (2.0 * sigma2));
    return w;
}

ScaleWeights make_scale_weights(const std::vector<double>& performance, int alpha, double sigma2) {
    ScaleWeights sw;
    sw.alpha = alpha;
    sw.sigma2 = sigma2;
    sw.omega_normal = softmax_weights(performance, alpha);
    sw.omega_g = gaussian_weights(sw.omega_normal, sigma2);
    return sw;
}

FeatureMap jlef(const LogImage& f, const ScaleWeights& weights) {
    if (weights.alpha < 1 || static_cast<int>(weights.omega_g.size()) != weights.alpha)
        throw InvalidArgument("jlef: inconsistent scale weights");
    FeatureMap out(f.width, f.height, FeatureKind::Jlef);
    for (int k = 1; k <= weights.alpha; ++k) {
        const FeatureMap layer = lef(f, k);
        const double w = weights.omega_g[static_cast<size_t>(k - 1)];
        for (size_t i = 0; i < out.size(); ++i) out.values[i] += w * layer.values[i];
    }
    return out;
}

FeatureMap ajlef_face(const FeatureMap& j, double delta) {
    if (!(delta > 0.0)) throw InvalidArgument("ajlef: delta must be > 0");
    FeatureMap out(j.width, j.height, FeatureKind::Ajlef);
    for (size_t i = 0; i < j.size(); ++i)
        out.values[i] = 1.0 / (1.0 + std::exp(-delta * j.values[i]));
    return out;
}

FeatureMap extract(const GrayImage& img, const CalibrationProfile& profile, bool want_ajlef) {
    const IlluminationLevel level = classify_image(img, profile);
    const LevelParams& params = profile.params_for(level);

    std::vector<double> performance;
    auto it = profile.lef_performance.find(level);
    if (it != profile.lef_performance.end() &&
        static_cast<int>(it->second.size()) >= params.k) {
        performance = it->second;
    } else {
        performance.assign(static_cast<size_t>(params.k), 1.0); // uniform fallback
    }

    const ScaleWeights weights = make_scale_weights(performance, params.k, params.sigma2);
    FeatureMap joint = jlef(log_transform(img), weights);
    if (!want_ajlef) return joint;
    return ajlef_face(joint, params.delta);
}

FeatureMap weber_face(const GrayImage& img, double smooth_sigma) {
    if (!(smooth_sigma > 0.0)) throw InvalidArgument("weber_face: smooth_sigma must be > 0");
    LogImage field(img.width, img.height);
    field.values = img.pixels;
    LogImage smoothed = gaussian_smooth(field, smooth_sigma);
    for (double& v : smoothed.values) v = std::max(v, 1.0);

    const LogImage padded = pad_replicate(smoothed, 1);
    FeatureMap out(img.width, img.height, FeatureKind::Weber);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const double center = smoothed.at(x, y);
            double acc = 0.0;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    acc += (center - padded.at(x + 1 + dx, y + 1 + dy)) / center;
                }
            out.at(x, y) = std::atan(acc);
        }
    }
    return out;
}

FeatureMap gradient_face(const GrayImage& img, double smooth_sigma) {
    if (!(smooth_sigma > 0.0)) throw InvalidArgument("gradient_face: smooth_sigma must be > 0");
    LogImage field(img.width, img.height);
    field.values = img.pixels;
    const LogImage smoothed = gaussian_smooth(field, smooth_sigma);
    const LogImage padded = pad_replicate(smoothed, 1);

    FeatureMap out(img.width, img.height, FeatureKind::Gradient);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const double gx = (padded.at(x + 2, y + 1) - padded.at(x, y + 1)) / 2.0;
            const double gy = (padded.at(x + 1, y + 2) - padded.at(x + 1, y)) / 2.0;
            if (std::abs(gx) <= 1e-12 && std::abs(gy) <= 1e-12) {
                out.at(x, y) = 0.0; // flat region: no edge
            } else {
                out.at(x, y) = std::atan(gy / gx);
            }
        }
    }
    return out;
}

std::vector<std::pair<double, size_t>> feature_histogram(const FeatureMap& m, int bins) {
    if (bins < 1) throw InvalidArgument("feature_histogram: bins must be >= 1");
    if (m.values.empty()) throw InvalidArgument("feature_histogram: empty map");
    const auto [lo_it, hi_it] = std::minmax_element(m.values.begin(), m.values.end());
    const double lo = *lo_it, hi = *hi_it;
    const double width = (hi - lo) / bins;

    std::vector<std::pair<double, size_t>> hist(static_cast<size_t>(bins));
    for (int b = 0; b < bins; ++b)
        hist[static_cast<size_t>(b)] = {lo + (b + 0.5) * width, 0};
    for (double v : m.values) {
        int b = width > 0.0 ? static_cast<int>((v - lo) / width) : 0;
        b = std::clamp(b, 0, bins - 1);
        ++hist[static_cast<size_t>(b)].second;
    }
    return hist;
}

void export_feature_csv(const FeatureMap& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError(path + ": cannot open file for writing");
    out.precision(17);
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            if (x) out << ",";
            out << m.at(x, y);
        }
        out << "\n";
    }
    if (!out) throw IoError(path + ": write failed");
}

void export_feature_image(const FeatureMap& m, const std::string& path) {
    const auto [lo_it, hi_it] = std::minmax_element(m.values.begin(), m.values.end());
    const double lo = *lo_it, hi = *hi_it;
    const double scale = hi > lo ? 255.0 / (hi - lo) : 0.0;
    GrayImage img(m.width, m.height);
    for (size_t i = 0; i < m.size(); ++i) img.pixels[i] = (m.values[i] - lo) * scale;
    save_image(img, path);
}

} // namespace ajlef
