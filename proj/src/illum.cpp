#include "ajlef/illum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ajlef/errors.hpp"

namespace ajlef {

namespace {

const IlluminationLevel kAllLevels[] = {IlluminationLevel::L0, IlluminationLevel::L1,
                                        IlluminationLevel::L2, IlluminationLevel::L3,
                                        IlluminationLevel::L4};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw FormatError("profile: bad numeric value for " + what + ": '" + s + "'");
    }
}

} // namespace

std::string to_string(IlluminationLevel level) {
    switch (level) {
        case IlluminationLevel::L0: return "L0";
        case IlluminationLevel::L1: return "L1";
        case IlluminationLevel::L2: return "L2";
        case IlluminationLevel::L3: return "L3";
        case IlluminationLevel::L4: return "L4";
    }
    return "?";
}

IlluminationLevel level_from_string(const std::string& name) {
    for (IlluminationLevel level : kAllLevels)
        if (to_string(level) == name) return level;
    throw InvalidArgument("unknown illumination level '" + name + "'");
}

const LevelParams& CalibrationProfile::params_for(IlluminationLevel level) const {
    auto it = level_params.find(level);
    if (it == level_params.end())
        throw InvalidArgument("profile has no parameters for level " + to_string(level));
    return it->second;
}

std::map<IlluminationLevel, LevelParams> default_level_params() {
    return {
        {IlluminationLevel::L0, {5, 2.0, 3.0}},
        {IlluminationLevel::L1, {5, 2.0, 3.0}},
        {IlluminationLevel::L2, {4, 1.0, 3.0}},
        {IlluminationLevel::L3, {3, 1.0, 2.0}},
        {IlluminationLevel::L4, {3, 1.0, 2.0}},
    };
}

std::map<IlluminationLevel, std::vector<double>> default_lef_performance() {
    // Reference per-scale recognition rates for the heavy-shadow levels;
    // the light levels carry no vector and fall back to uniform weights.
    const std::vector<double> heavy = {92.5, 93.4, 95.9, 95.1, 93.7,
                                       92.2, 91.8, 91.1, 90.3, 89.2};
    return {
        {IlluminationLevel::L3, heavy},
        {IlluminationLevel::L4, heavy},
    };
}

std::vector<double> ecil(const SingularSpectrum& s, double beta) {
    if (!(beta > 0.0)) throw InvalidArgument("ecil: beta must be > 0");
    std::vector<double> c(s.d.size());
    for (size_t i = 0; i < s.d.size(); ++i)
        c[i] = 1.0 / (1.0 + std::exp(-beta * s.d[i]));
    return c;
}

double il_coefficient(const std::vector<double>& c) {
    if (c.empty()) throw InvalidArgument("il_coefficient: empty coefficient sequence");
    double sum = 0.0;
    for (double v : c) sum += v * v;
    return std::sqrt(sum);
}

CalibrationProfile calibrate(const std::vector<double>& coefficients, double beta) {
    if (coefficients.empty()) throw InvalidArgument("calibrate: empty coefficient set");
    const auto [lo, hi] = std::minmax_element(coefficients.begin(), coefficients.end());
    if (!(*lo < *hi))
        throw InvalidArgument("calibrate: need at least 2 distinct coefficients "
                              "(zero-width range)");
    CalibrationProfile p;
    p.min_coefficient = *lo;
    p.max_coefficient = *hi;
    p.step = (*hi - *lo) / 3.0;
    p.beta = beta;
    p.level_params = default_level_params();
    p.lef_performance = default_lef_performance();
    return p;
}

IlluminationLevel classify_level(double coefficient, const CalibrationProfile& profile) {
    if (std::isnan(coefficient)) throw InvalidArgument("classify_level: NaN coefficient");
    const double min = profile.min_coefficient;
    const double max = profile.max_coefficient;
    const double step = profile.step;
    if (coefficient < min) return IlluminationLevel::L0;
    if (coefficient > max) return IlluminationLevel::L4;
    if (coefficient < min + step) return IlluminationLevel::L1;
    if (coefficient < min + 2.0 * step) return IlluminationLevel::L2;
    return IlluminationLevel::L3;
}

double image_coefficient(const GrayImage& img, double beta) {
    return il_coefficient(ecil(thin_svd(log_transform(img)), beta));
}

IlluminationLevel classify_image(const GrayImage& img, const CalibrationProfile& profile) {
    return classify_level(image_coefficient(img, profile.beta), profile);
}

std::string serialize_profile(const CalibrationProfile& profile) {
    std::ostringstream out;
    out << "min_coefficient = " << fmt(profile.min_coefficient) << "\n";
    out << "max_coefficient = " << fmt(profile.max_coefficient) << "\n";
    out << "step = " << fmt(profile.step) << "\n";
    out << "beta = " << fmt(profile.beta) << "\n";
    for (IlluminationLevel level : kAllLevels) {
        auto it = profile.level_params.find(level);
        if (it == profile.level_params.end()) continue;
        out << "\n[level." << to_string(level) << "]\n";
        out << "k = " << it->second.k << "\n";
        out << "sigma2 = " << fmt(it->second.sigma2) << "\n";
        out << "delta = " << fmt(it->second.delta) << "\n";
        auto perf = profile.lef_performance.find(level);
        if (perf != profile.lef_performance.end() && !perf->second.empty()) {
            out << "lef_performance = ";
            for (size_t i = 0; i < perf->second.size(); ++i) {
                if (i) out << ",";
                out << fmt(perf->second[i]);
            }
            out << "\n";
        }
    }
    return out.str();
}

CalibrationProfile parse_profile(const std::string& text) {
    CalibrationProfile p;
    bool have_min = false, have_max = false, have_step = false;
    std::optional<IlluminationLevel> section;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.rfind("[level.", 0) != 0)
                throw FormatError("profile line " + std::to_string(lineno) +
                                  ": bad section header '" + line + "'");
            section = level_from_string(line.substr(7, line.size() - 8));
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw FormatError("profile line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (!section) {
            if (key == "min_coefficient") { p.min_coefficient = parse_double(value, key); have_min = true; }
            else if (key == "max_coefficient") { p.max_coefficient = parse_double(value, key); have_max = true; }
            else if (key == "step") { p.step = parse_double(value, key); have_step = true; }
            else if (key == "beta") { p.beta = parse_double(value, key); }
            else throw FormatError("profile: unknown key '" + key + "'");
        } else {
            LevelParams& lp = p.level_params[*section];
            if (key == "k") lp.k = static_cast<int>(parse_double(value, key));
            else if (key == "sigma2") lp.sigma2 = parse_double(value, key);
            else if (key == "delta") lp.delta = parse_double(value, key);
            else if (key == "lef_performance") {
                std::vector<double> perf;
                std::istringstream items(value);
                std::string item;
                while (std::getline(items, item, ','))
                    perf.push_back(parse_double(trim(item), key));
                p.lef_performance[*section] = std::move(perf);
            } else {
                throw FormatError("profile: unknown level key '" + key + "'");
            }
        }
    }

    if (!have_min || !have_max || !have_step)
        throw FormatError("profile: missing min_coefficient/max_coefficient/step");
    if (!(p.min_coefficient < p.max_coefficient))
        throw FormatError("profile: min_coefficient must be < max_coefficient");
    if (std::abs(p.step - (p.max_coefficient - p.min_coefficient) / 3.0) > 1e-9)
        throw FormatError("profile: step does not equal (max - min) / 3");
    for (const auto& [level, lp] : p.level_params) {
        if (lp.k < 1 || !(lp.sigma2 > 0.0) || !(lp.delta > 0.0))
            throw FormatError("profile: invalid parameters for level " + to_string(level));
        auto perf = p.lef_performance.find(level);
        if (perf != p.lef_performance.end() &&
            static_cast<int>(perf->second.size()) < lp.k)
            throw FormatError("profile: lef_performance for " + to_string(level) +
                              " is shorter than k");
    }
    return p;
}

void save_profile(const CalibrationProfile& profile, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError(path + ": cannot open file for writing");
    out << serialize_profile(profile);
    if (!out) throw IoError(path + ": write failed");
}

CalibrationProfile load_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_profile(buf.str());
}

} // namespace ajlef
