#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ajlef/features.hpp"
#include "ajlef/illum.hpp"
#include "ajlef/image.hpp"

namespace ajlef {

struct ManifestEntry {
    std::string person_id;
    std::string path;
};

/// Identity-labeled image list. Per-person image order is the manifest
/// row order; it defines which image serves as gallery in each round.
struct DatasetManifest {
    std::vector<ManifestEntry> entries;

    std::vector<std::string> person_ids() const;                  // first-seen order
    std::vector<const ManifestEntry*> images_of(const std::string& person) const;
    size_t min_images_per_person() const;
};

/// CSV with header `person_id,image_path`.
DatasetManifest load_manifest(const std::string& path);
void save_manifest(const DatasetManifest& manifest, const std::string& path);

/// Named feature pipeline applied per image.
struct Extractor {
    std::string name;
    std::function<FeatureMap(const GrayImage&)> fn;
};

/// Built-in extractors: raw, log, weber, gradient, jlef, ajlef, and lef_k.
Extractor make_extractor(const std::string& method, const CalibrationProfile& profile);
Extractor make_lef_extractor(int k);

struct EvaluationReport {
    std::string method;
    std::vector<double> rounds; // per-round accuracy fractions
    double arr = 0.0;           // mean of rounds
    std::map<std::string, size_t> per_person_counts;
};

/// Nearest gallery identity by Euclidean distance on flattened maps;
/// ties go to the lowest gallery index.
std::string nn_classify(const FeatureMap& probe,
                        const std::vector<std::pair<std::string, FeatureMap>>& gallery);

/// Average recognition rate: round i uses the i-th image of every person as
/// gallery and all remaining images as probes; rounds = min per-person count.
EvaluationReport arr_evaluate(const DatasetManifest& manifest, const Extractor& extractor);

enum class SweepAxis { Scale, Sigma2, Delta, Beta };

struct SweepPoint {
    double parameter = 0.0;
    double arr_percent = 0.0;
};

/// ARR (in percent) per grid point along one parameter axis. The Scale axis
/// evaluates plain LEF_k; Sigma2/Delta override the profile's per-level
/// parameter; Beta recalibrates the profile on the manifest before AJLEF.
std::vector<SweepPoint> sweep(const DatasetManifest& manifest, const CalibrationProfile& profile,
                              SweepAxis axis, const std::vector<double>& grid);

void export_sweep(const std::vector<SweepPoint>& points, const std::string& path);

/// CSV row layout: method, one accuracy column per round, final arr column.
void export_report(const EvaluationReport& report, const std::string& path);
EvaluationReport import_report(const std::string& path);

/// Coefficients of all manifest images (manifest order), for calibrate().
std::vector<double> manifest_coefficients(const DatasetManifest& manifest, double beta);

} // namespace ajlef
