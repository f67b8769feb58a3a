#include <algorithm>
#include <cmath>
#include <random>

#include <doctest.h>

#include "ajlef/errors.hpp"
#include "ajlef/illum.hpp"
#include "ajlef/synth.hpp"
#include "test_util.hpp"

using namespace ajlef;
using testutil::TempDir;

namespace {

SingularSpectrum spectrum_with(std::vector<double> d) {
    SingularSpectrum s;
    s.m = s.n = static_cast<int>(d.size());
    s.d = std::move(d);
    return s;
}

} // namespace

TEST_CASE("ecil values") {
    const SingularSpectrum s = spectrum_with({1000.0, 1.0, 0.0});
    const auto c = ecil(s, 1.0);
    CHECK(c[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(c[1] == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))).epsilon(1e-12));
    CHECK(c[2] == 0.5);
    CHECK_THROWS_AS(ecil(s, 0.0), InvalidArgument);
}

TEST_CASE("ecil range and ordering follow the singular values") {
    std::mt19937 rng(31);
    std::vector<double> d(12);
    std::uniform_real_distribution<double> dist(0.0, 50.0);
    for (double& v : d) v = dist(rng);
    std::sort(d.rbegin(), d.rend());
    const auto c = ecil(spectrum_with(d), 1.0);
    for (size_t i = 0; i < c.size(); ++i) {
        CHECK(c[i] >= 0.5);
        CHECK(c[i] <= 1.0);
        if (i + 1 < c.size()) CHECK(c[i] >= c[i + 1]);
    }
}

TEST_CASE("ecil grows pointwise with beta for positive singular values") {
    const SingularSpectrum s = spectrum_with({3.0, 0.7, 0.01});
    const auto lo = ecil(s, 0.5);
    const auto hi = ecil(s, 2.0);
    for (size_t i = 0; i < lo.size(); ++i) CHECK(hi[i] >= lo[i]);
}

TEST_CASE("il_coefficient") {
    CHECK(il_coefficient({1.0}) == 1.0);
    CHECK(il_coefficient({0.5, 0.5, 0.5, 0.5}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(il_coefficient({3.0, 4.0}) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK_THROWS_AS(il_coefficient({}), InvalidArgument);
}

TEST_CASE("calibrate sets boundaries and defaults") {
    const CalibrationProfile p = calibrate({10.0, 13.0, 16.0});
    CHECK(p.min_coefficient == 10.0);
    CHECK(p.max_coefficient == 16.0);
    CHECK(p.step == 2.0);
    CHECK(p.beta == 1.0);

    const auto& l0 = p.params_for(IlluminationLevel::L0);
    CHECK(l0.k == 5); CHECK(l0.sigma2 == 2.0); CHECK(l0.delta == 3.0);
    const auto& l2 = p.params_for(IlluminationLevel::L2);
    CHECK(l2.k == 4); CHECK(l2.sigma2 == 1.0); CHECK(l2.delta == 3.0);
    const auto& l3 = p.params_for(IlluminationLevel::L3);
    CHECK(l3.k == 3); CHECK(l3.sigma2 == 1.0); CHECK(l3.delta == 2.0);
    const auto& l4 = p.params_for(IlluminationLevel::L4);
    CHECK(l4.k == 3); CHECK(l4.sigma2 == 1.0); CHECK(l4.delta == 2.0);

    CHECK_THROWS_AS(calibrate({5.0, 5.0}), InvalidArgument);
    CHECK_THROWS_AS(calibrate({}), InvalidArgument);
}

TEST_CASE("classify_level partitions the real line") {
    const CalibrationProfile p = calibrate({10.0, 16.0});
    CHECK(classify_level(9.0, p) == IlluminationLevel::L0);
    CHECK(classify_level(10.0, p) == IlluminationLevel::L1);
    CHECK(classify_level(11.999, p) == IlluminationLevel::L1);
    CHECK(classify_level(12.0, p) == IlluminationLevel::L2);
    CHECK(classify_level(13.0, p) == IlluminationLevel::L2); // min + 1.5 steps
    CHECK(classify_level(14.0, p) == IlluminationLevel::L3);
    CHECK(classify_level(16.0, p) == IlluminationLevel::L3); // closed upper bound
    CHECK(classify_level(17.0, p) == IlluminationLevel::L4);
    CHECK_THROWS_AS(classify_level(std::nan(""), p), InvalidArgument);
}

TEST_CASE("classify_level is monotone over sorted coefficients") {
    const CalibrationProfile p = calibrate({2.0, 30.0});
    std::mt19937 rng(33);
    std::uniform_real_distribution<double> dist(-5.0, 40.0);
    std::vector<double> coeffs(1000);
    for (double& c : coeffs) c = dist(rng);
    std::sort(coeffs.begin(), coeffs.end());
    IlluminationLevel prev = IlluminationLevel::L0;
    for (double c : coeffs) {
        const IlluminationLevel level = classify_level(c, p);
        CHECK(static_cast<int>(level) >= static_cast<int>(prev));
        prev = level;
    }
}

TEST_CASE("classify_image equals manual chaining of the pipeline steps") {
    std::mt19937 rng(34);
    const CalibrationProfile p = calibrate({4.0, 8.0});
    for (int iter = 0; iter < 20; ++iter) {
        const GrayImage img = testutil::random_image(rng, 12, 10);
        const auto spectrum = thin_svd(log_transform(img));
        const double coefficient = il_coefficient(ecil(spectrum, p.beta));
        CHECK(classify_image(img, p) == classify_level(coefficient, p));
        CHECK(classify_image(img, p) == classify_image(img, p)); // repeat-stable
    }
}

TEST_CASE("a cast shadow changes the coefficient of a constant scene") {
    SceneSpec spec;
    spec.identity_seed = 5;
    spec.width = 32;
    spec.height = 32;
    spec.illum_strength = 1.0;
    const GrayImage reflectance = make_reflectance(spec);

    spec.illum_kind = IllumKind::Constant;
    const double plain =
        image_coefficient(render(reflectance, make_illumination(spec)), 1.0);
    spec.illum_kind = IllumKind::HalfPlaneShadow;
    spec.attenuation = 0.25;
    const double shadowed =
        image_coefficient(render(reflectance, make_illumination(spec)), 1.0);
    CHECK(plain != shadowed);
}

TEST_CASE("profile serialization round trip") {
    CalibrationProfile p = calibrate({1.5, 9.75});
    p.beta = 1.25;
    p.lef_performance[IlluminationLevel::L1] = {50.0, 60.5, 70.25, 80.0, 90.0};

    TempDir dir;
    save_profile(p, dir.file("profile.txt"));
    const CalibrationProfile q = load_profile(dir.file("profile.txt"));
    CHECK(q.min_coefficient == p.min_coefficient);
    CHECK(q.max_coefficient == p.max_coefficient);
    CHECK(q.step == p.step);
    CHECK(q.beta == p.beta);
    for (const auto& [level, lp] : p.level_params) {
        CHECK(q.params_for(level).k == lp.k);
        CHECK(q.params_for(level).sigma2 == lp.sigma2);
        CHECK(q.params_for(level).delta == lp.delta);
    }
    CHECK(q.lef_performance == p.lef_performance);
}

TEST_CASE("profile loading validates its contents") {
    CHECK_THROWS_AS(parse_profile("min_coefficient = 1\nmax_coefficient = 4\nstep = 2\n"),
                    FormatError); // step != (max-min)/3
    CHECK_THROWS_AS(parse_profile("min_coefficient = 4\nmax_coefficient = 1\nstep = -1\n"),
                    FormatError);
    CHECK_THROWS_AS(parse_profile("beta = 1\n"), FormatError); // boundaries missing
    CHECK_THROWS_AS(parse_profile("min_coefficient = oops\n"), FormatError);

    // lef_performance shorter than k.
    std::string text = "min_coefficient = 0\nmax_coefficient = 3\nstep = 1\n"
                       "[level.L3]\nk = 3\nsigma2 = 1\ndelta = 2\nlef_performance = 90,91\n";
    CHECK_THROWS_AS(parse_profile(text), FormatError);
}
