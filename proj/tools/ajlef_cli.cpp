#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ajlef/errors.hpp"
#include "ajlef/features.hpp"
#include "ajlef/illum.hpp"
#include "ajlef/image.hpp"
#include "ajlef/recognition.hpp"
#include "ajlef/synth.hpp"

namespace {

std::vector<double> parse_grid(const std::string& csv) {
    std::vector<double> grid;
    std::istringstream in(csv);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) grid.push_back(std::stod(item));
    }
    return grid;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Illumination-invariant face-feature pipeline: calibration, "
                 "classification, LEF/JLEF/AJLEF extraction, ARR evaluation, "
                 "parameter sweeps and synthetic scene generation"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a key = value file; flags win on conflict");

    // calibrate
    std::string cal_manifest, cal_out;
    double cal_beta = 1.0;
    auto* cal = app.add_subcommand("calibrate", "Derive level boundaries from a reference set");
    cal->add_option("--manifest", cal_manifest, "Dataset manifest CSV")->required();
    cal->add_option("--out", cal_out, "Output profile path")->required();
    cal->add_option("--beta", cal_beta, "Sigmoid slope for the energy coefficients");

    // classify
    std::string cls_profile, cls_image;
    auto* cls = app.add_subcommand("classify", "Print the illumination level of an image");
    cls->add_option("--profile", cls_profile, "Calibration profile")->required();
    cls->add_option("image", cls_image, "Input image (PGM or PNG)")->required();

    // extract
    std::string ext_profile, ext_image, ext_stage = "ajlef", ext_csv, ext_png;
    int ext_k = 1;
    auto* ext = app.add_subcommand("extract", "Extract a feature map from one image");
    ext->add_option("--profile", ext_profile, "Calibration profile")->required();
    ext->add_option("--stage", ext_stage, "One of lef, jlef, ajlef")
        ->check(CLI::IsMember({"lef", "jlef", "ajlef"}));
    ext->add_option("--k", ext_k, "Scale for --stage lef");
    ext->add_option("--out-csv", ext_csv, "Write real-valued CSV here");
    ext->add_option("--out-image", ext_png, "Write rescaled 8-bit image here (PGM/PNG)");
    ext->add_option("image", ext_image, "Input image")->required();

    // evaluate
    std::string ev_profile, ev_manifest, ev_method = "ajlef", ev_out;
    auto* ev = app.add_subcommand("evaluate", "Run the ARR protocol over a manifest");
    ev->add_option("--profile", ev_profile, "Calibration profile")->required();
    ev->add_option("--manifest", ev_manifest, "Dataset manifest CSV")->required();
    ev->add_option("--method", ev_method, "raw, log, weber, gradient, jlef, ajlef or lefN")
        ->required();
    ev->add_option("--out", ev_out, "Report CSV path")->required();

    // sweep
    std::string sw_profile, sw_manifest, sw_axis, sw_grid, sw_out, sw_store, sw_profile_out;
    auto* sw = app.add_subcommand("sweep", "ARR as a function of one parameter");
    sw->add_option("--profile", sw_profile, "Calibration profile")->required();
    sw->add_option("--manifest", sw_manifest, "Dataset manifest CSV")->required();
    sw->add_option("--axis", sw_axis, "k, sigma2, delta or beta")
        ->required()
        ->check(CLI::IsMember({"k", "sigma2", "delta", "beta"}));
    sw->add_option("--grid", sw_grid, "Comma-separated parameter values (k defaults to 1..10)");
    sw->add_option("--out", sw_out, "Sweep CSV path")->required();
    sw->add_option("--store-level", sw_store,
                   "Write the k-sweep ARR vector into this level of the profile");
    sw->add_option("--profile-out", sw_profile_out, "Where to save the updated profile");

    // synth
    std::string sy_kind = "constant", sy_out, sy_dir;
    uint64_t sy_seed = 1;
    double sy_strength = 1.0, sy_atten = 0.5, sy_soft = 0.2, sy_center = 0.5;
    int sy_w = 64, sy_h = 64, sy_ids = 0, sy_variants = 0;
    auto* sy = app.add_subcommand("synth", "Generate synthetic Lambertian scenes");
    sy->add_option("--seed", sy_seed, "Deterministic scene seed");
    sy->add_option("--kind", sy_kind, "constant, ramp, shadow or spot")
        ->check(CLI::IsMember({"constant", "ramp", "shadow", "spot"}));
    sy->add_option("--strength", sy_strength, "Illumination strength");
    sy->add_option("--attenuation", sy_atten, "Shadow/spot min-to-max ratio");
    sy->add_option("--softness", sy_soft, "Falloff width as a fraction of image width");
    sy->add_option("--center", sy_center, "Falloff center as a fraction of image width");
    sy->add_option("--width", sy_w, "Image width");
    sy->add_option("--height", sy_h, "Image height");
    sy->add_option("--out", sy_out, "Scene image path (sidecar .txt written next to it)");
    sy->add_option("--identities", sy_ids, "Generate a benchmark set with this many identities");
    sy->add_option("--variants", sy_variants, "Illumination variants per identity");
    sy->add_option("--out-dir", sy_dir, "Benchmark set output directory");

    // hist
    std::string hi_profile, hi_image, hi_method = "ajlef", hi_out;
    int hi_bins = 64;
    auto* hi = app.add_subcommand("hist", "Histogram of a feature map");
    hi->add_option("--profile", hi_profile, "Calibration profile")->required();
    hi->add_option("--method", hi_method, "Feature method (see evaluate)");
    hi->add_option("--bins", hi_bins, "Number of histogram bins");
    hi->add_option("--out", hi_out, "Histogram CSV path")->required();
    hi->add_option("image", hi_image, "Input image")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            app.exit(e);
            return 0;
        }
        app.exit(e);
        return 2;
    }

    try {
        using namespace ajlef;
        if (*cal) {
            const DatasetManifest manifest = load_manifest(cal_manifest);
            const CalibrationProfile profile =
                calibrate(manifest_coefficients(manifest, cal_beta), cal_beta);
            save_profile(profile, cal_out);
        } else if (*cls) {
            const CalibrationProfile profile = load_profile(cls_profile);
            std::cout << to_string(classify_image(load_image(cls_image), profile)) << "\n";
        } else if (*ext) {
            const CalibrationProfile profile = load_profile(ext_profile);
            const GrayImage img = load_image(ext_image);
            FeatureMap map;
            if (ext_stage == "lef") {
                map = lef(log_transform(img), ext_k);
            } else {
                map = extract(img, profile, ext_stage == "ajlef");
            }
            if (ext_csv.empty() && ext_png.empty())
                throw InvalidArgument("extract: need --out-csv and/or --out-image");
            if (!ext_csv.empty()) export_feature_csv(map, ext_csv);
            if (!ext_png.empty()) export_feature_image(map, ext_png);
        } else if (*ev) {
            const CalibrationProfile profile = load_profile(ev_profile);
            const DatasetManifest manifest = load_manifest(ev_manifest);
            const EvaluationReport report =
                arr_evaluate(manifest, make_extractor(ev_method, profile));
            export_report(report, ev_out);
            std::cout << report.method << " arr " << report.arr << "\n";
        } else if (*sw) {
            const CalibrationProfile profile = load_profile(sw_profile);
            const DatasetManifest manifest = load_manifest(sw_manifest);
            SweepAxis axis = SweepAxis::Scale;
            if (sw_axis == "sigma2") axis = SweepAxis::Sigma2;
            else if (sw_axis == "delta") axis = SweepAxis::Delta;
            else if (sw_axis == "beta") axis = SweepAxis::Beta;

            std::vector<double> grid = parse_grid(sw_grid);
            if (grid.empty()) {
                if (axis != SweepAxis::Scale) throw InvalidArgument("sweep: --grid is required");
                for (int k = 1; k <= 10; ++k) grid.push_back(k);
            }
            const auto points = sweep(manifest, profile, axis, grid);
            export_sweep(points, sw_out);
            if (!sw_store.empty()) {
                if (axis != SweepAxis::Scale)
                    throw InvalidArgument("sweep: --store-level applies to the k axis only");
                if (sw_profile_out.empty())
                    throw InvalidArgument("sweep: --store-level needs --profile-out");
                CalibrationProfile updated = profile;
                std::vector<double>& perf = updated.lef_performance[level_from_string(sw_store)];
                perf.clear();
                for (const auto& p : points) perf.push_back(p.arr_percent);
                save_profile(updated, sw_profile_out);
            }
        } else if (*sy) {
            if (sy_ids > 0 || sy_variants > 0) {
                if (sy_dir.empty())
                    throw InvalidArgument("synth: benchmark mode needs --out-dir");
                write_benchmark_set(sy_dir, sy_ids, sy_variants, sy_seed, sy_w, sy_h);
            } else {
                if (sy_out.empty()) throw InvalidArgument("synth: need --out");
                SceneSpec spec;
                spec.identity_seed = sy_seed;
                spec.illum_strength = sy_strength;
                spec.attenuation = sy_atten;
                spec.softness = sy_soft;
                spec.center = sy_center;
                spec.width = sy_w;
                spec.height = sy_h;
                if (sy_kind == "ramp") spec.illum_kind = IllumKind::LinearRamp;
                else if (sy_kind == "shadow") spec.illum_kind = IllumKind::HalfPlaneShadow;
                else if (sy_kind == "spot") spec.illum_kind = IllumKind::RadialSpot;

                const IlluminationField light = make_illumination(spec);
                save_image(quantize(render(make_reflectance(spec), light)), sy_out);

                std::ofstream sidecar(sy_out + ".txt");
                if (!sidecar) throw IoError(sy_out + ".txt: cannot open file for writing");
                sidecar.precision(17);
                sidecar << "seed = " << sy_seed << "\n"
                        << "kind = " << to_string(spec.illum_kind) << "\n"
                        << "strength = " << sy_strength << "\n";
                for (int radius = 1; radius <= 5; ++radius)
                    sidecar << "epsilon_max_r" << radius << " = "
                            << epsilon_bound(light, radius) << "\n";
            }
        } else if (*hi) {
            const CalibrationProfile profile = load_profile(hi_profile);
            const FeatureMap map = make_extractor(hi_method, profile).fn(load_image(hi_image));
            const auto hist = feature_histogram(map, hi_bins);
            std::ofstream out(hi_out);
            if (!out) throw IoError(hi_out + ": cannot open file for writing");
            out.precision(17);
            out << "bin_center,count\n";
            for (const auto& [center, count] : hist) out << center << "," << count << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
