#include "ajlef/recognition.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "ajlef/errors.hpp"

namespace ajlef {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double squared_distance(const FeatureMap& a, const FeatureMap& b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a.values[i] - b.values[i];
        acc += d * d;
    }
    return acc;
}

} // namespace

std::vector<std::string> DatasetManifest::person_ids() const {
    std::vector<std::string> ids;
    std::set<std::string> seen;
    for (const auto& e : entries)
        if (seen.insert(e.person_id).second) ids.push_back(e.person_id);
    return ids;
}

std::vector<const ManifestEntry*> DatasetManifest::images_of(const std::string& person) const {
    std::vector<const ManifestEntry*> out;
    for (const auto& e : entries)
        if (e.person_id == person) out.push_back(&e);
    return out;
}

size_t DatasetManifest::min_images_per_person() const {
    size_t best = std::numeric_limits<size_t>::max();
    for (const auto& id : person_ids()) best = std::min(best, images_of(id).size());
    return best == std::numeric_limits<size_t>::max() ? 0 : best;
}

DatasetManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path + ": cannot open file");
    std::string line;
    if (!std::getline(in, line) || trim(line) != "person_id,image_path")
        throw FormatError(path + ": expected header 'person_id,image_path'");

    DatasetManifest manifest;
    std::set<std::string> paths;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string row = trim(line);
        if (row.empty()) continue;
        const size_t comma = row.find(',');
        if (comma == std::string::npos || comma == 0 || comma + 1 >= row.size())
            throw FormatError(path + " line " + std::to_string(lineno) + ": malformed row");
        ManifestEntry e{trim(row.substr(0, comma)), trim(row.substr(comma + 1))};
        if (!paths.insert(e.path).second)
            throw FormatError(path + ": duplicate image path '" + e.path + "'");
        manifest.entries.push_back(std::move(e));
    }
    if (manifest.entries.empty()) throw FormatError(path + ": manifest has no entries");
    return manifest;
}

void save_manifest(const DatasetManifest& manifest, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError(path + ": cannot open file for writing");
    out << "person_id,image_path\n";
    for (const auto& e : manifest.entries) out << e.person_id << "," << e.path << "\n";
    if (!out) throw IoError(path + ": write failed");
}

Extractor make_extractor(const std::string& method, const CalibrationProfile& profile) {
    if (method == "raw") {
        return {"raw", [](const GrayImage& img) {
                    FeatureMap m(img.width, img.height, FeatureKind::Raw);
                    m.values = img.pixels;
                    return m;
                }};
    }
    if (method == "log") {
        return {"log", [](const GrayImage& img) {
                    FeatureMap m(img.width, img.height, FeatureKind::Log);
                    m.values = log_transform(img).values;
                    return m;
                }};
    }
    if (method == "weber")
        return {"weber", [](const GrayImage& img) { return weber_face(img, 1.0); }};
    if (method == "gradient")
        return {"gradient", [](const GrayImage& img) { return gradient_face(img, 1.0); }};
    if (method == "jlef")
        return {"jlef", [profile](const GrayImage& img) { return extract(img, profile, false); }};
    if (method == "ajlef")
        return {"ajlef", [profile](const GrayImage& img) { return extract(img, profile, true); }};
    if (method.rfind("lef", 0) == 0 && method.size() > 3)
        return make_lef_extractor(std::stoi(method.substr(3)));
    throw InvalidArgument("unknown method '" + method + "'");
}

Extractor make_lef_extractor(int k) {
    if (k < 1) throw InvalidArgument("lef extractor: k must be >= 1");
    return {"lef" + std::to_string(k),
            [k](const GrayImage& img) { return lef(log_transform(img), k); }};
}

std::string nn_classify(const FeatureMap& probe,
                        const std::vector<std::pair<std::string, FeatureMap>>& gallery) {
    if (gallery.empty()) throw InvalidArgument("nn_classify: empty gallery");
    size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < gallery.size(); ++i) {
        const FeatureMap& g = gallery[i].second;
        if (g.width != probe.width || g.height != probe.height)
            throw InvalidArgument("nn_classify: gallery/probe dimension mismatch");
        const double d = squared_distance(probe, g);
        if (d < best_dist) { // strict: ties keep the lowest index
            best_dist = d;
            best = i;
        }
    }
    return gallery[best].first;
}

EvaluationReport arr_evaluate(const DatasetManifest& manifest, const Extractor& extractor) {
    const auto persons = manifest.person_ids();
    if (persons.size() < 2)
        throw InvalidArgument("arr_evaluate: need at least 2 persons");

    EvaluationReport report;
    report.method = extractor.name;

    // Feature extraction once per image; rounds reuse the cache.
    std::vector<std::vector<FeatureMap>> features(persons.size());
    size_t rounds = std::numeric_limits<size_t>::max();
    for (size_t p = 0; p < persons.size(); ++p) {
        const auto images = manifest.images_of(persons[p]);
        if (images.size() < 2)
            throw InvalidArgument("arr_evaluate: person '" + persons[p] +
                                  "' has fewer than 2 images");
        rounds = std::min(rounds, images.size());
        report.per_person_counts[persons[p]] = images.size();
        for (const ManifestEntry* e : images) {
            try {
                features[p].push_back(extractor.fn(load_image(e->path)));
            } catch (const Error& err) {
                throw Error("arr_evaluate: extraction failed for '" + e->path +
                            "': " + err.what());
            }
        }
    }

    for (size_t round = 0; round < rounds; ++round) {
        std::vector<std::pair<std::string, FeatureMap>> gallery;
        for (size_t p = 0; p < persons.size(); ++p)
            gallery.emplace_back(persons[p], features[p][round]);

        size_t correct = 0, total = 0;
        for (size_t p = 0; p < persons.size(); ++p) {
            for (size_t i = 0; i < features[p].size(); ++i) {
                if (i == round) continue; // current round's gallery image
                ++total;
                if (nn_classify(features[p][i], gallery) == persons[p]) ++correct;
            }
        }
        report.rounds.push_back(total ? static_cast<double>(correct) / total : 0.0);
    }

    double sum = 0.0;
    for (double r : report.rounds) sum += r;
    report.arr = sum / static_cast<double>(report.rounds.size());
    return report;
}

std::vector<double> manifest_coefficients(const DatasetManifest& manifest, double beta) {
    std::vector<double> coeffs;
    coeffs.reserve(manifest.entries.size());
    for (const auto& e : manifest.entries)
        coeffs.push_back(image_coefficient(load_image(e.path), beta));
    return coeffs;
}

std::vector<SweepPoint> sweep(const DatasetManifest& manifest, const CalibrationProfile& profile,
                              SweepAxis axis, const std::vector<double>& grid) {
    if (grid.empty()) throw InvalidArgument("sweep: empty parameter grid");
    std::vector<SweepPoint> points;
    points.reserve(grid.size());
    for (double value : grid) {
        Extractor extractor;
        switch (axis) {
            case SweepAxis::Scale:
                extractor = make_lef_extractor(static_cast<int>(value));
                break;
            case SweepAxis::Sigma2: {
                CalibrationProfile p = profile;
                for (auto& [level, lp] : p.level_params) lp.sigma2 = value;
                extractor = {"jlef", [p](const GrayImage& img) { return extract(img, p, false); }};
                break;
            }
            case SweepAxis::Delta: {
                CalibrationProfile p = profile;
                for (auto& [level, lp] : p.level_params) lp.delta = value;
                extractor = {"ajlef", [p](const GrayImage& img) { return extract(img, p, true); }};
                break;
            }
            case SweepAxis::Beta: {
                // Boundaries depend on beta, so recalibrate on the manifest.
                CalibrationProfile p = calibrate(manifest_coefficients(manifest, value), value);
                p.level_params = profile.level_params;
                p.lef_performance = profile.lef_performance;
                extractor = {"ajlef", [p](const GrayImage& img) { return extract(img, p, true); }};
                break;
            }
        }
        const EvaluationReport report = arr_evaluate(manifest, extractor);
        points.push_back({value, report.arr * 100.0});
    }
    return points;
}

void export_sweep(const std::vector<SweepPoint>& points, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError(path + ": cannot open file for writing");
    out.precision(17);
    out << "parameter,arr_percent\n";
    for (const auto& p : points) out << p.parameter << "," << p.arr_percent << "\n";
    if (!out) throw IoError(path + ": write failed");
}

void export_report(const EvaluationReport& report, const std::string& path) {
    if (report.rounds.empty()) throw InvalidArgument("export_report: report has no rounds");
    std::ofstream out(path);
    if (!out) throw IoError(path + ": cannot open file for writing");
    out.precision(17);
    out << "method";
    for (size_t i = 0; i < report.rounds.size(); ++i) out << ",round" << (i + 1);
    out << ",arr\n" << report.method;
    for (double r : report.rounds) out << "," << r;
    out << "," << report.arr << "\n";
    if (!out) throw IoError(path + ": write failed");
}

EvaluationReport import_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path + ": cannot open file");
    std::string header, row;
    if (!std::getline(in, header) || !std::getline(in, row))
        throw FormatError(path + ": expected header and one data row");

    EvaluationReport report;
    std::istringstream cells(row);
    std::string cell;
    std::vector<std::string> fields;
    while (std::getline(cells, cell, ',')) fields.push_back(cell);
    if (fields.size() < 3) throw FormatError(path + ": too few report columns");
    report.method = fields.front();
    for (size_t i = 1; i + 1 < fields.size(); ++i) report.rounds.push_back(std::stod(fields[i]));
    report.arr = std::stod(fields.back());
    return report;
}

} // namespace ajlef
