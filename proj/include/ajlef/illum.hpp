#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ajlef/image.hpp"
#include "ajlef/svd.hpp"

namespace ajlef {

enum class IlluminationLevel { L0, L1, L2, L3, L4 };

std::string to_string(IlluminationLevel level);
IlluminationLevel level_from_string(const std::string& name);

/// Per-level extraction parameters: maximal scale k, Gaussian variance
/// sigma2 for the fusion weights, sigmoid gain delta.
struct LevelParams {
    int k = 1;
    double sigma2 = 1.0;
    double delta = 1.0;
};

/// Calibrated classification boundaries plus per-level parameters.
/// step is always (max_coefficient - min_coefficient) / 3.
struct CalibrationProfile {
    double min_coefficient = 0.0;
    double max_coefficient = 0.0;
    double step = 0.0;
    double beta = 1.0;
    std::map<IlluminationLevel, LevelParams> level_params;
    std::map<IlluminationLevel, std::vector<double>> lef_performance; // percent

    const LevelParams& params_for(IlluminationLevel level) const;
};

/// Default per-level parameters: L0 (5,2,3), L1 (5,2,3), L2 (4,1,3),
/// L3 (3,1,2), L4 (3,1,2).
std::map<IlluminationLevel, LevelParams> default_level_params();

/// Default per-scale recognition-rate vectors in percent, for the levels
/// where a reference vector exists (L3 and L4). Other levels fall back to
/// uniform fusion weights at extraction time.
std::map<IlluminationLevel, std::vector<double>> default_lef_performance();

/// Energy coefficients: c_i = 1 / (1 + exp(-beta * d_i)), one per singular value.
std::vector<double> ecil(const SingularSpectrum& s, double beta);

/// L2 norm of the energy-coefficient sequence.
double il_coefficient(const std::vector<double>& c);

/// Derive boundaries from a reference set of coefficients. Requires at
/// least two distinct values; fills in the default level parameters.
CalibrationProfile calibrate(const std::vector<double>& coefficients, double beta = 1.0);

/// Map a coefficient onto a level:
///   L0: c < min      L1: [min, min+step)    L2: [min+step, min+2*step)
///   L3: [min+2*step, max]                   L4: c > max
IlluminationLevel classify_level(double coefficient, const CalibrationProfile& profile);

/// Coefficient of a single image: il_coefficient over the ECILs of its
/// log-domain singular spectrum.
double image_coefficient(const GrayImage& img, double beta);

/// Full classification chain: log transform, SVD, ECIL, coefficient, level.
IlluminationLevel classify_image(const GrayImage& img, const CalibrationProfile& profile);

/// Line-oriented `key = value` text with one [level.Lx] section per level.
void save_profile(const CalibrationProfile& profile, const std::string& path);
CalibrationProfile load_profile(const std::string& path);

std::string serialize_profile(const CalibrationProfile& profile);
CalibrationProfile parse_profile(const std::string& text);

} // namespace ajlef
