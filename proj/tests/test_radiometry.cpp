#include <gtest/gtest.h>

#include <json.hpp>

#include <random>

#include "test_support.hpp"
#include "uvgb/error.hpp"
#include "uvgb/radiometry.hpp"

using namespace uvgb;

namespace {

struct OlsOracle {
    long double slope, intercept, r2;
};

// Textbook normal equations on raw sums, in extended precision.
OlsOracle ols_oracle(const std::vector<ReflectanceSample>& s) {
    long double n = s.size(), sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (const auto& p : s) {
        const long double x = p.mean_pixel_value, y = p.percent_reflectance;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const long double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const long double intercept = (sy - slope * sx) / n;
    long double ss_res = 0, ss_tot = 0;
    for (const auto& p : s) {
        const long double r = p.percent_reflectance - (slope * p.mean_pixel_value + intercept);
        const long double d = p.percent_reflectance - sy / n;
        ss_res += r * r;
        ss_tot += d * d;
    }
    return {slope, intercept, ss_tot == 0 ? 1.0L : 1.0L - ss_res / ss_tot};
}

std::vector<ReflectanceSample> six_standards(std::mt19937& gen, double slope, double intercept, double sigma) {
    std::normal_distribution<double> noise(0.0, sigma);
    std::vector<ReflectanceSample> out;
    for (int i = 0; i < 6; ++i) {
        const double px = 12.0 + i * (240.0 - 12.0) / 5.0;
        out.push_back({i + 1, slope * px + intercept + noise(gen), px});
    }
    return out;
}

}  // namespace

TEST(FitCalibration, TwoPointsDefineTheLine) {
    const auto c = fit_calibration({{1, 0.0, 0.0}, {2, 100.0, 255.0}});
    EXPECT_NEAR(c.slope, 100.0 / 255.0, 1e-15);
    EXPECT_NEAR(c.intercept, 0.0, 1e-12);
    EXPECT_DOUBLE_EQ(c.r_squared, 1.0);
    EXPECT_DOUBLE_EQ(c.pixel_min, 0.0);
    EXPECT_DOUBLE_EQ(c.pixel_max, 255.0);
}

TEST(FitCalibration, NoisySixPointsMatchClosedForm) {
    std::mt19937 gen(3);
    std::uniform_real_distribution<double> jitter(-1.0, 1.0);
    std::vector<ReflectanceSample> s;
    for (int i = 0; i < 6; ++i) {
        const double px = 20.0 + 40.0 * i;
        s.push_back({i, 0.4 * px + 2.0 + jitter(gen), px});
    }
    const auto c = fit_calibration(s);
    const auto o = ols_oracle(s);
    EXPECT_NEAR(c.slope, double(o.slope), 1e-12);
    EXPECT_NEAR(c.intercept, double(o.intercept), 1e-10);
    EXPECT_NEAR(c.r_squared, double(o.r2), 1e-12);
    EXPECT_GE(c.slope, 0.38);
    EXPECT_LE(c.slope, 0.42);
    EXPECT_GT(c.r_squared, 0.99);
}

TEST(FitCalibration, ExactLinearDataIsRecovered) {
    std::mt19937 gen(4);
    std::uniform_real_distribution<double> slope(0.05, 0.35), icpt(0, 10), px(0, 255);
    for (int trial = 0; trial < 200; ++trial) {
        const double a = slope(gen), b = icpt(gen);
        std::vector<ReflectanceSample> s;
        for (int i = 0; i < 6; ++i) {
            const double x = px(gen);
            s.push_back({i, a * x + b, x});
        }
        const auto c = fit_calibration(s);
        EXPECT_NEAR(c.slope, a, 1e-9 * a);
        EXPECT_NEAR(c.intercept, b, 1e-9 * std::max(1.0, std::abs(b)));
        EXPECT_NEAR(c.r_squared, 1.0, 1e-12);
    }
}

TEST(FitCalibration, Errors) {
    try {
        fit_calibration({{1, 10, 50}, {2, 20, 50}, {3, 30, 50}});
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("zero variance"), std::string::npos);
    }
    EXPECT_THROW(fit_calibration({{1, 10, 50}}), DataError);
    EXPECT_THROW(fit_calibration({{1, 10, 50}, {2, 120, 60}}), DataError);
    EXPECT_THROW(fit_calibration({{1, 10, 50}, {2, 20, 300}}), DataError);
}

TEST(FitCalibration, FlatResponseHasUnitRSquared) {
    const auto c = fit_calibration({{1, 40, 10}, {2, 40, 200}});
    EXPECT_DOUBLE_EQ(c.slope, 0.0);
    EXPECT_DOUBLE_EQ(c.intercept, 40.0);
    EXPECT_DOUBLE_EQ(c.r_squared, 1.0);
}

TEST(FitCalibration, RSquaredInvariantUnderAffinePixelRescaling) {
    std::mt19937 gen(5);
    std::uniform_real_distribution<double> scale(0.2, 0.9), shift(0.0, 30.0);
    for (int trial = 0; trial < 100; ++trial) {
        auto s = six_standards(gen, 0.35, 5.0, 3.0);
        for (auto& p : s) p.percent_reflectance = std::clamp(p.percent_reflectance, 0.0, 100.0);
        const auto base = fit_calibration(s);
        const double k = scale(gen), d = shift(gen);
        for (auto& p : s) p.mean_pixel_value = k * p.mean_pixel_value + d;
        const auto moved = fit_calibration(s);
        EXPECT_NEAR(moved.r_squared, base.r_squared, 1e-12);
        EXPECT_NEAR(moved.slope * k, base.slope, 1e-12);
    }
}

TEST(FitCalibration, SixNoisyStandardsFitStronglyAlmostAlways) {
    int strong = 0;
    for (std::uint32_t seed = 0; seed < 200; ++seed) {
        std::mt19937 gen(seed);
        auto s = six_standards(gen, 0.4, 2.0, 3.0);
        for (auto& p : s) p.percent_reflectance = std::clamp(p.percent_reflectance, 0.0, 100.0);
        if (fit_calibration(s).r_squared >= 0.95) ++strong;
    }
    EXPECT_GE(strong, 198);
}

TEST(PixelToReflectance, EvaluatesAndClamps) {
    const CalibrationCurve half{0.5, 0.0, 1.0, 0.0, 255.0};
    EXPECT_DOUBLE_EQ(pixel_to_reflectance(half, 100).percent_reflectance, 50.0);
    EXPECT_FALSE(pixel_to_reflectance(half, 100).clamped);

    const CalibrationCurve offset{0.5, 60.0, 1.0, 0.0, 255.0};
    const auto e = pixel_to_reflectance(offset, 100);
    EXPECT_DOUBLE_EQ(e.percent_reflectance, 100.0);
    EXPECT_TRUE(e.clamped);

    const CalibrationCurve negative{0.5, -20.0, 1.0, 50.0, 200.0};
    const auto low = pixel_to_reflectance(negative, 10);
    EXPECT_DOUBLE_EQ(low.percent_reflectance, 0.0);
    EXPECT_TRUE(low.clamped);
    EXPECT_TRUE(low.extrapolated);
    EXPECT_FALSE(pixel_to_reflectance(negative, 120).extrapolated);
}

TEST(ReflectanceToPixel, InvertsTheLine) {
    const CalibrationCurve half{0.5, 0.0, 1.0, 0.0, 255.0};
    EXPECT_DOUBLE_EQ(reflectance_to_pixel(half, 50), 100.0);
    const CalibrationCurve c{0.37, 4.5, 1.0, 0.0, 255.0};
    EXPECT_DOUBLE_EQ(reflectance_to_pixel(c, 4.5), 0.0);
    for (double px = 0; px <= 255; px += 7.5) {
        const auto r = pixel_to_reflectance(c, px);
        if (!r.clamped) EXPECT_NEAR(reflectance_to_pixel(c, r.percent_reflectance), px, 1e-9);
    }
    EXPECT_THROW(reflectance_to_pixel({0.0, 5.0, 1.0, 0.0, 255.0}, 5), DataError);
}

TEST(SampleFromImage, UniformAndAlternating) {
    EXPECT_DOUBLE_EQ(sample_from_image(MonoImage(10, 10, 42), {2, 2, 5, 5}), 42.0);
    MonoImage alt(8, 4);
    for (int y = 0; y < 4; ++y) {
        for (int x = 0; x < 8; ++x) alt.at(x, y) = ((x + y) % 2) ? 255 : 0;
    }
    EXPECT_DOUBLE_EQ(sample_from_image(alt, {0, 0, 8, 4}), 127.5);
}

TEST(SampleFromImage, MatchesBruteForceOnRandomRegions) {
    std::mt19937 gen(6);
    std::uniform_int_distribution<int> coord(0, 40), size(4, 30);
    const MonoImage img = uvgb::testing::random_image(gen, 60, 50);
    for (int trial = 0; trial < 200; ++trial) {
        const int x = coord(gen), y = coord(gen), w = size(gen), h = size(gen);
        long sum = 0, count = 0;
        for (int yy = y; yy < std::min(y + h, img.height()); ++yy) {
            for (int xx = x; xx < std::min(x + w, img.width()); ++xx) {
                sum += img.at(xx, yy);
                ++count;
            }
        }
        if (count < 10) {
            EXPECT_THROW(sample_from_image(img, {double(x), double(y), double(w), double(h)}), DataError);
        } else {
            EXPECT_NEAR(sample_from_image(img, {double(x), double(y), double(w), double(h)}), double(sum) / count, 1e-12);
        }
    }
}

TEST(SampleFromImage, RejectsTooFewPixels) {
    EXPECT_THROW(sample_from_image(MonoImage(10, 10, 1), {0, 0, 3, 3}), DataError);
    EXPECT_THROW(sample_from_image(MonoImage(10, 10, 1), {20, 20, 5, 5}), DataError);
}

TEST(SamplesCsv, ParseFormatRoundTrip) {
    const auto s = generate_standards(9, 0.4, 2.0, 1.0);
    ASSERT_EQ(s.size(), 6u);
    const auto back = parse_samples_csv(format_samples_csv(s));
    ASSERT_EQ(back.size(), s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        EXPECT_EQ(back[i].standard_id, s[i].standard_id);
        EXPECT_EQ(back[i].percent_reflectance, s[i].percent_reflectance);
        EXPECT_EQ(back[i].mean_pixel_value, s[i].mean_pixel_value);
    }
    EXPECT_EQ(generate_standards(9, 0.4, 2.0, 1.0).front().percent_reflectance, s.front().percent_reflectance);
}

TEST(SamplesCsv, ErrorsNameTheRow) {
    const std::string text = "standard_id,percent_reflectance,mean_pixel_value\n1,10,20\n2,abc,30\n";
    try {
        parse_samples_csv(text);
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("row 3"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse_samples_csv("standard_id,percent_reflectance,mean_pixel_value\n1,10\n"), DataError);
    EXPECT_THROW(parse_samples_csv("standard_id,percent_reflectance,mean_pixel_value\n1,110,10\n"), DataError);
    EXPECT_THROW(parse_samples_csv("id,r,p\n1,10,10\n"), DataError);
}

TEST(CalibrationRecord, CarriesTheFit) {
    const auto c = fit_calibration({{1, 0.0, 0.0}, {2, 100.0, 255.0}});
    const auto j = nlohmann::json::parse(calibration_record(c, 2));
    EXPECT_DOUBLE_EQ(j.at("slope").get<double>(), c.slope);
    EXPECT_DOUBLE_EQ(j.at("r_squared").get<double>(), 1.0);
    const std::string svg = calibration_svg({{1, 0.0, 0.0}, {2, 100.0, 255.0}}, c);
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
}
