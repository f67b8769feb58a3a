#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include <doctest.h>

#include "ajlef/errors.hpp"
#include "ajlef/recognition.hpp"
#include "test_util.hpp"

using namespace ajlef;
using testutil::TempDir;

namespace {

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

FeatureMap map_of(std::vector<double> values, int w, int h) {
    FeatureMap m(w, h, FeatureKind::Raw);
    m.values = std::move(values);
    return m;
}

// Writes a tiny dataset whose per-person images are constant gray levels.
// Per-person images are identical; persons differ.
DatasetManifest constant_dataset(const TempDir& dir, int persons, int images_each) {
    DatasetManifest manifest;
    for (int p = 0; p < persons; ++p) {
        for (int i = 0; i < images_each; ++i) {
            const std::string path =
                dir.file("p" + std::to_string(p) + "_" + std::to_string(i) + ".pgm");
            save_image(GrayImage(4, 4, 40.0 + 30.0 * p), path);
            manifest.entries.push_back({"p" + std::to_string(p), path});
        }
    }
    return manifest;
}

} // namespace

TEST_CASE("load_manifest") {
    TempDir dir;
    write_text(dir.file("m.csv"),
               "person_id,image_path\na,x1.pgm\na,x2.pgm\nb,y1.pgm\nb,y2.pgm\n");
    const DatasetManifest m = load_manifest(dir.file("m.csv"));
    CHECK(m.entries.size() == 4);
    CHECK(m.person_ids() == std::vector<std::string>{"a", "b"});
    CHECK(m.images_of("a").size() == 2);
    CHECK(m.min_images_per_person() == 2);

    write_text(dir.file("dup.csv"), "person_id,image_path\na,x.pgm\nb,x.pgm\n");
    CHECK_THROWS_WITH_AS(load_manifest(dir.file("dup.csv")),
                         doctest::Contains("x.pgm"), FormatError);

    write_text(dir.file("empty.csv"), "person_id,image_path\n");
    CHECK_THROWS_AS(load_manifest(dir.file("empty.csv")), FormatError);

    write_text(dir.file("badrow.csv"), "person_id,image_path\nno-comma-here\n");
    CHECK_THROWS_AS(load_manifest(dir.file("badrow.csv")), FormatError);

    write_text(dir.file("badhdr.csv"), "id,path\na,x.pgm\n");
    CHECK_THROWS_AS(load_manifest(dir.file("badhdr.csv")), FormatError);
}

TEST_CASE("nn_classify basics") {
    const FeatureMap g0 = map_of({0, 0, 0, 0}, 2, 2);
    const FeatureMap g1 = map_of({5, 5, 5, 5}, 2, 2);
    std::vector<std::pair<std::string, FeatureMap>> gallery = {{"a", g0}, {"b", g1}};

    CHECK(nn_classify(g1, gallery) == "b"); // exact match wins

    // Two equidistant items: lowest index wins.
    const FeatureMap probe = map_of({2.5, 2.5, 2.5, 2.5}, 2, 2);
    CHECK(nn_classify(probe, gallery) == "a");

    CHECK_THROWS_AS(nn_classify(probe, {}), InvalidArgument);
    gallery.push_back({"c", map_of({0}, 1, 1)});
    CHECK_THROWS_AS(nn_classify(probe, gallery), InvalidArgument);
}

TEST_CASE("nn_classify matches the brute-force oracle") {
    std::mt19937 rng(61);
    // Small integer values so that exact ties occur naturally.
    std::uniform_int_distribution<int> value(0, 3);
    for (int iter = 0; iter < 200; ++iter) {
        const int n = 2 + static_cast<int>(rng() % 5);
        std::vector<std::pair<std::string, FeatureMap>> gallery;
        for (int g = 0; g < n; ++g) {
            FeatureMap m(3, 2, FeatureKind::Raw);
            for (double& v : m.values) v = value(rng);
            gallery.emplace_back("g" + std::to_string(g), std::move(m));
        }
        FeatureMap probe(3, 2, FeatureKind::Raw);
        for (double& v : probe.values) v = value(rng);

        size_t best = 0;
        double best_dist = std::numeric_limits<double>::infinity();
        for (size_t g = 0; g < gallery.size(); ++g) {
            double d = 0.0;
            for (size_t i = 0; i < probe.size(); ++i) {
                const double diff = probe.values[i] - gallery[g].second.values[i];
                d += diff * diff;
            }
            if (d < best_dist) {
                best_dist = d;
                best = g;
            }
        }
        CHECK(nn_classify(probe, gallery) == gallery[best].first);
    }
}

TEST_CASE("arr_evaluate on a perfectly separable dataset") {
    TempDir dir;
    const DatasetManifest manifest = constant_dataset(dir, 3, 4);
    const CalibrationProfile profile = calibrate({1.0, 7.0});
    const EvaluationReport report = arr_evaluate(manifest, make_extractor("raw", profile));
    CHECK(report.rounds.size() == 4);
    for (double r : report.rounds) CHECK(r == 1.0);
    CHECK(report.arr == 1.0);
    CHECK(report.per_person_counts.at("p0") == 4);
}

TEST_CASE("arr_evaluate contract cases") {
    TempDir dir;
    const CalibrationProfile profile = calibrate({1.0, 7.0});

    DatasetManifest single = constant_dataset(dir, 1, 3);
    CHECK_THROWS_AS(arr_evaluate(single, make_extractor("raw", profile)), InvalidArgument);

    DatasetManifest thin = constant_dataset(dir, 2, 2);
    thin.entries.pop_back(); // second person now has a single image
    CHECK_THROWS_AS(arr_evaluate(thin, make_extractor("raw", profile)), InvalidArgument);

    DatasetManifest broken = constant_dataset(dir, 2, 2);
    broken.entries[0].path = dir.file("missing.pgm");
    CHECK_THROWS_WITH_AS(arr_evaluate(broken, make_extractor("raw", profile)),
                         doctest::Contains("missing.pgm"), Error);
}

TEST_CASE("arr_evaluate is invariant to person-block shuffling") {
    TempDir dir;
    DatasetManifest manifest;
    for (int p = 0; p < 4; ++p) {
        for (int i = 0; i < 3; ++i) {
            const std::string path =
                dir.file("s" + std::to_string(p) + "_" + std::to_string(i) + ".pgm");
            GrayImage img(6, 6, 30.0 + 50.0 * p);      // separable base
            img.pixels[static_cast<size_t>(i)] += 5.0; // per-image variation
            save_image(img, path);
            manifest.entries.push_back({"s" + std::to_string(p), path});
        }
    }
    const CalibrationProfile profile = calibrate({1.0, 7.0});
    const EvaluationReport base = arr_evaluate(manifest, make_extractor("raw", profile));

    DatasetManifest rotated;
    for (int p = 3; p >= 0; --p)
        for (const auto* e : manifest.images_of("s" + std::to_string(p)))
            rotated.entries.push_back(*e);
    const EvaluationReport moved = arr_evaluate(rotated, make_extractor("raw", profile));
    CHECK(moved.rounds == base.rounds);
    CHECK(moved.arr == base.arr);
}

TEST_CASE("arr is the mean of the rounds") {
    TempDir dir;
    DatasetManifest manifest = constant_dataset(dir, 2, 3);
    const CalibrationProfile profile = calibrate({1.0, 7.0});
    const EvaluationReport report = arr_evaluate(manifest, make_extractor("log", profile));
    double mean = 0.0;
    for (double r : report.rounds) mean += r;
    mean /= static_cast<double>(report.rounds.size());
    CHECK(report.arr == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("report export round trip") {
    TempDir dir;
    EvaluationReport report;
    report.method = "ajlef";
    report.rounds = {0.25, 0.5, 1.0 / 3.0};
    report.arr = (0.25 + 0.5 + 1.0 / 3.0) / 3.0;
    export_report(report, dir.file("r.csv"));

    const EvaluationReport back = import_report(dir.file("r.csv"));
    CHECK(back.method == report.method);
    REQUIRE(back.rounds.size() == report.rounds.size());
    for (size_t i = 0; i < report.rounds.size(); ++i)
        CHECK(std::abs(back.rounds[i] - report.rounds[i]) < 1e-12);
    CHECK(std::abs(back.arr - report.arr) < 1e-12);

    EvaluationReport empty;
    empty.method = "raw";
    CHECK_THROWS_AS(export_report(empty, dir.file("e.csv")), InvalidArgument);
}

TEST_CASE("sweep produces one row per grid point") {
    TempDir dir;
    // Edge features of a flat image vanish, so give each person a distinct
    // spatial texture instead of a distinct constant level.
    DatasetManifest manifest;
    for (int p = 0; p < 2; ++p) {
        for (int i = 0; i < 2; ++i) {
            const std::string path =
                dir.file("t" + std::to_string(p) + "_" + std::to_string(i) + ".pgm");
            GrayImage img(8, 8);
            for (int y = 0; y < 8; ++y)
                for (int x = 0; x < 8; ++x)
                    img.at(x, y) = p == 0 ? 40.0 + 20.0 * (x % 2) : 40.0 + 20.0 * (y % 2);
            save_image(img, path);
            manifest.entries.push_back({"t" + std::to_string(p), path});
        }
    }
    const CalibrationProfile profile = calibrate({1.0, 7.0});

    const auto points = sweep(manifest, profile, SweepAxis::Scale, {1, 2, 3});
    REQUIRE(points.size() == 3);
    // Identical per-person images: perfect recognition at every scale.
    for (const auto& p : points) CHECK(p.arr_percent == 100.0);

    const auto deltas = sweep(manifest, profile, SweepAxis::Delta, {1.0, 2.0});
    CHECK(deltas.size() == 2);
    CHECK_THROWS_AS(sweep(manifest, profile, SweepAxis::Delta, {}), InvalidArgument);

    export_sweep(points, dir.file("sweep.csv"));
    std::ifstream in(dir.file("sweep.csv"));
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "parameter,arr_percent");
}
