#include <gtest/gtest.h>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "test_support.hpp"
#include "uvgb/augment.hpp"
#include "uvgb/csv.hpp"
#include "uvgb/dataset.hpp"
#include "uvgb/error.hpp"
#include "uvgb/eval.hpp"
#include "uvgb/image_io.hpp"
#include "uvgb/tiling.hpp"

using namespace uvgb;
using uvgb::testing::TempDir;

namespace {

std::array<std::size_t, 256> histogram(const MonoImage& img) {
    std::array<std::size_t, 256> h{};
    for (auto v : img.pixels()) ++h[v];
    return h;
}

void write_bytes(const std::filesystem::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary);
    out << bytes;
}

}  // namespace

// ---------------------------------------------------------------- image I/O

TEST(ImageIo, LoadsHandWrittenPgm) {
    TempDir dir("io");
    write_bytes(dir / "a.pgm", std::string("P5\n# comment\n2 2\n255\n") + std::string("\x00\xff\x80\x07", 4));
    const MonoImage img = load_image(dir / "a.pgm");
    EXPECT_EQ(img, MonoImage(2, 2, {0, 255, 128, 7}));
}

TEST(ImageIo, RejectsMultiChannelInput) {
    TempDir dir("io");
    write_bytes(dir / "rgb.ppm", "P6\n1 1\n255\n\x01\x02\x03");
    cv::Mat rgb(4, 4, CV_8UC3, cv::Scalar(1, 2, 3));
    ASSERT_TRUE(cv::imwrite((dir / "rgb.png").string(), rgb));
    for (const char* name : {"rgb.ppm", "rgb.png"}) {
        try {
            load_image(dir / name);
            FAIL() << name << " should be rejected";
        } catch (const DataError& e) {
            EXPECT_NE(std::string(e.what()).find("multi-channel input"), std::string::npos) << e.what();
        }
    }
}

TEST(ImageIo, RejectsMissingAndUnsupportedFiles) {
    TempDir dir("io");
    EXPECT_THROW(load_image(dir / "nope.png"), DataError);
    write_bytes(dir / "text.png", "hello world");
    EXPECT_THROW(load_image(dir / "text.png"), DataError);
    cv::Mat deep(3, 3, CV_16UC1, cv::Scalar(1000));
    ASSERT_TRUE(cv::imwrite((dir / "deep.png").string(), deep));
    EXPECT_THROW(load_image(dir / "deep.png"), DataError);
    write_bytes(dir / "short.pgm", "P5\n4 4\n255\n\x01\x02");
    EXPECT_THROW(load_image(dir / "short.pgm"), DataError);
    EXPECT_THROW(save_image(MonoImage(2, 2), dir / "x.bmp"), UsageError);
}

TEST(ImageIo, RoundTripIsByteIdentical) {
    TempDir dir("io");
    std::mt19937 gen(11);
    std::uniform_int_distribution<int> dim(1, 70);
    for (int trial = 0; trial < 40; ++trial) {
        const MonoImage img = uvgb::testing::random_image(gen, dim(gen), dim(gen));
        for (const char* ext : {".png", ".pgm"}) {
            const auto first = dir / (std::to_string(trial) + ext);
            const auto second = dir / (std::to_string(trial) + "_again" + ext);
            save_image(img, first);
            const MonoImage loaded = load_image(first);
            ASSERT_EQ(loaded, img);
            save_image(loaded, second);
            ASSERT_EQ(csv::read_file(first), csv::read_file(second));
        }
    }
}

TEST(ImageIo, ReadsPngWrittenByAnotherEncoder) {
    TempDir dir("io");
    std::mt19937 gen(5);
    const MonoImage img = uvgb::testing::random_image(gen, 13, 9);
    cv::Mat m(9, 13, CV_8UC1, const_cast<std::uint8_t*>(img.pixels().data()));
    ASSERT_TRUE(cv::imwrite((dir / "cv.png").string(), m));
    EXPECT_EQ(load_image(dir / "cv.png"), img);
}

// ------------------------------------------------------------------- resize

TEST(Resize, SameSizeIsIdentity) {
    std::mt19937 gen(1);
    const MonoImage img = uvgb::testing::random_image(gen, 17, 11);
    EXPECT_EQ(resize(img, 17, 11), img);
}

TEST(Resize, ConstantImageStaysConstant) {
    const MonoImage img(9, 5, 77);
    for (auto [w, h] : {std::pair{1, 1}, {3, 20}, {416, 416}, {8, 4}}) {
        const MonoImage out = resize(img, w, h);
        ASSERT_EQ(out.width(), w);
        ASSERT_EQ(out.height(), h);
        EXPECT_TRUE(std::all_of(out.pixels().begin(), out.pixels().end(), [](auto v) { return v == 77; }));
    }
}

TEST(Resize, HalfScaleAveragesTwoByTwoBlocks) {
    const MonoImage checker(4, 4, {0, 255, 0, 255, 255, 0, 255, 0, 0, 255, 0, 255, 255, 0, 255, 0});
    const MonoImage half = resize(checker, 2, 2);
    // mean 127.5 rounds half away from zero
    EXPECT_EQ(half, MonoImage(2, 2, {128, 128, 128, 128}));

    std::mt19937 gen(3);
    for (int trial = 0; trial < 20; ++trial) {
        const MonoImage img = uvgb::testing::random_image(gen, 4, 4);
        const MonoImage out = resize(img, 2, 2);
        for (int by = 0; by < 2; ++by) {
            for (int bx = 0; bx < 2; ++bx) {
                const int sum = img.at(2 * bx, 2 * by) + img.at(2 * bx + 1, 2 * by) + img.at(2 * bx, 2 * by + 1) +
                                img.at(2 * bx + 1, 2 * by + 1);
                EXPECT_EQ(out.at(bx, by), std::lround(sum / 4.0));
            }
        }
    }
}

TEST(Resize, RejectsZeroDimension) {
    EXPECT_THROW(resize(MonoImage(4, 4), 0, 4), UsageError);
    EXPECT_THROW(resize(MonoImage(4, 4), 4, 0), UsageError);
}

// ------------------------------------------------------------------- tiling

TEST(Tile, ExactFitGivesOneTile) {
    const auto tiles = tile(MonoImage(768, 768, 9), 768, 0);
    ASSERT_EQ(tiles.size(), 1u);
    EXPECT_EQ(tiles[0].offset_x, 0);
    EXPECT_EQ(tiles[0].offset_y, 0);
    EXPECT_EQ(tiles[0].image, MonoImage(768, 768, 9));
}

TEST(Tile, FullResolutionFrameGivesTwentyTiles) {
    const auto tiles = tile(MonoImage(3264, 2448, 1), 768, 0);
    EXPECT_EQ(tiles.size(), 20u);
    EXPECT_EQ(tile_offsets(3264, 768, 0), (std::vector<int>{0, 768, 1536, 2304, 3072}));
    EXPECT_EQ(tile_offsets(2448, 768, 0), (std::vector<int>{0, 768, 1536, 2304}));
}

TEST(Tile, OverlapSetsStride) {
    const auto tiles = tile(MonoImage(1000, 768), 768, 256);
    ASSERT_EQ(tiles.size(), 2u);
    EXPECT_EQ(tiles[0].offset_x, 0);
    EXPECT_EQ(tiles[1].offset_x, 512);
}

TEST(Tile, EdgeTilesAreZeroPadded) {
    std::mt19937 gen(8);
    const MonoImage img = uvgb::testing::random_image(gen, 10, 7);
    const auto tiles = tile(img, 6, 0);
    ASSERT_EQ(tiles.size(), 4u);
    for (const auto& t : tiles) {
        ASSERT_EQ(t.image.width(), 6);
        for (int y = 0; y < 6; ++y) {
            for (int x = 0; x < 6; ++x) {
                const int fx = t.offset_x + x;
                const int fy = t.offset_y + y;
                const std::uint8_t expected = (fx < img.width() && fy < img.height()) ? img.at(fx, fy) : 0;
                ASSERT_EQ(t.image.at(x, y), expected);
            }
        }
    }
}

TEST(Tile, RejectsOverlapNotBelowTileSize) {
    EXPECT_THROW(tile(MonoImage(10, 10), 5, 5), UsageError);
    EXPECT_THROW(tile(MonoImage(10, 10), 5, 7), UsageError);
    EXPECT_THROW(tile(MonoImage(10, 10), 5, -1), UsageError);
}

TEST(Tile, ZeroOverlapPartitionsTheFrame) {
    std::mt19937 gen(21);
    std::uniform_int_distribution<int> dim(1, 300), ts(1, 90);
    for (int trial = 0; trial < 50; ++trial) {
        const int w = dim(gen), h = dim(gen), size = ts(gen);
        std::vector<int> cover(static_cast<std::size_t>(w) * h, 0);
        for (const auto& r : tile_rects(w, h, size, 0)) {
            for (int y = static_cast<int>(r.y); y < static_cast<int>(r.bottom()); ++y) {
                for (int x = static_cast<int>(r.x); x < static_cast<int>(r.right()); ++x) ++cover[static_cast<std::size_t>(y) * w + x];
            }
        }
        ASSERT_TRUE(std::all_of(cover.begin(), cover.end(), [](int c) { return c == 1; })) << w << "x" << h << " @" << size;
    }
}

TEST(Tile, OverlapAtLeastBoxDiagonalKeepsEveryBoxWholeSomewhere) {
    std::mt19937 gen(4);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int w = 200 + static_cast<int>(unit(gen) * 600);
        const int h = 200 + static_cast<int>(unit(gen) * 600);
        const double bw = 1 + unit(gen) * 30, bh = 1 + unit(gen) * 30;
        const int overlap = static_cast<int>(std::ceil(std::hypot(bw, bh)));
        const int size = overlap + 1 + static_cast<int>(unit(gen) * 150);
        const Annotation ann{0, {unit(gen) * (w - bw), unit(gen) * (h - bh), bw, bh}};
        bool whole = false;
        for (const auto& r : tile_rects(w, h, size, overlap)) {
            if (!clip_annotations_to_tile({ann}, r, 1.0).empty()) whole = true;
        }
        ASSERT_TRUE(whole) << "trial " << trial;
    }
}

// ------------------------------------------------------------------ clipping

TEST(ClipAnnotations, ContainedBoxIsTranslated) {
    const auto out = clip_annotations_to_tile({{0, {110, 220, 10, 5}}}, {100, 200, 50, 50});
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].bbox, (BBox{10, 20, 10, 5}));
}

TEST(ClipAnnotations, OutsideBoxIsDropped) {
    EXPECT_TRUE(clip_annotations_to_tile({{0, {0, 0, 10, 10}}}, {100, 100, 50, 50}).empty());
}

TEST(ClipAnnotations, VisibleFractionThreshold) {
    const std::vector<Annotation> half_in{{0, {90, 110, 20, 10}}};  // 10 of 20 px wide inside
    const BBox tile_rect{100, 100, 50, 50};
    const auto kept = clip_annotations_to_tile(half_in, tile_rect, 0.25);
    ASSERT_EQ(kept.size(), 1u);
    EXPECT_EQ(kept[0].bbox, (BBox{0, 10, 10, 10}));
    EXPECT_TRUE(clip_annotations_to_tile(half_in, tile_rect, 0.75).empty());
    EXPECT_EQ(clip_annotations_to_tile(half_in, tile_rect, 0.5).size(), 1u);
}

// ------------------------------------------------------------------ stitching

TEST(Stitch, SingleTileAtOriginIsUnchanged) {
    const std::vector<Detection> dets{{0, {5, 5, 4, 4}, 0.9}, {0, {50, 8, 6, 6}, 0.7}};
    EXPECT_EQ(stitch_detections({{dets, 0, 0}}, 0.5), dets);
}

TEST(Stitch, TranslatesByTileOffset) {
    const auto out = stitch_detections({{{{0, {10, 10, 4, 4}, 0.8}}, 512, 0}}, 0.5);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].bbox.x, 522.0);
    EXPECT_EQ(out[0].bbox.y, 10.0);
}

TEST(Stitch, MergesDuplicateAcrossOverlappingTiles) {
    // Tile A at x=0, tile B at x=512. Same flower near x=600 in frame space.
    const Detection in_a{0, {600, 40, 20, 20}, 0.7};
    const Detection in_b{0, {89, 41, 20, 19}, 0.9};  // frame (601, 41, 20, 19)
    const auto frame_b = in_b.bbox.translated(512, 0);
    ASSERT_GE(iou(in_a.bbox, frame_b), 0.85);
    const auto out = stitch_detections({{{in_a}, 0, 0}, {{in_b}, 512, 0}}, 0.5);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_DOUBLE_EQ(out[0].confidence, 0.9);
    EXPECT_EQ(out[0].bbox, frame_b);
}

TEST(Stitch, DisjointBoxesSurviveZeroThreshold) {
    const auto out = stitch_detections({{{{0, {0, 0, 5, 5}, 0.9}, {0, {100, 100, 5, 5}, 0.8}}, 0, 0}}, 0.0);
    EXPECT_EQ(out.size(), 2u);
}

// ------------------------------------------------------------------ augment

TEST(Augment, HorizontalFlipReflectsBoxes) {
    std::mt19937 gen(2);
    const MonoImage img = uvgb::testing::random_image(gen, 40, 30);
    AugmentSpec spec = AugmentSpec::neutral();
    spec.flip_h = true;
    const auto out = augment(img, {{0, {3, 4, 10, 6}}}, spec);
    ASSERT_EQ(out.annotations.size(), 1u);
    EXPECT_EQ(out.annotations[0].bbox, (BBox{40 - 3 - 10, 4, 10, 6}));
    for (int y = 0; y < 30; ++y) {
        for (int x = 0; x < 40; ++x) ASSERT_EQ(out.image.at(x, y), img.at(39 - x, y));
    }
}

TEST(Augment, FlipTwiceRestoresEverything) {
    std::mt19937 gen(3);
    const MonoImage img = uvgb::testing::random_image(gen, 33, 21);
    const std::vector<Annotation> anns{{0, {1.5, 2.25, 7, 3}}, {0, {20, 10, 13, 11}}};
    for (bool vertical : {false, true}) {
        AugmentSpec spec = AugmentSpec::neutral();
        (vertical ? spec.flip_v : spec.flip_h) = true;
        const auto once = augment(img, anns, spec);
        const auto twice = augment(once.image, once.annotations, spec);
        EXPECT_EQ(twice.image, img);
        EXPECT_EQ(twice.annotations, anns);
    }
}

TEST(Augment, Rot90MatchesExhaustivePixelMapping) {
    // 3x2 image, every pixel distinct; a 1x1 box on each pixel in turn.
    const MonoImage img(3, 2, {1, 2, 3, 4, 5, 6});
    const int h = img.height();
    AugmentSpec spec = AugmentSpec::neutral();
    spec.rot90_steps = 1;
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            const auto out = augment(img, {{0, {double(x), double(y), 1, 1}}}, spec);
            ASSERT_EQ(out.image.width(), 2);
            ASSERT_EQ(out.image.height(), 3);
            EXPECT_EQ(out.image.at(h - 1 - y, x), img.at(x, y));
            ASSERT_EQ(out.annotations.size(), 1u);
            EXPECT_EQ(out.annotations[0].bbox, (BBox{double(h - 1 - y), double(x), 1, 1}));
        }
    }
}

TEST(Augment, FourQuarterTurnsAreIdentity) {
    std::mt19937 gen(4);
    const MonoImage img = uvgb::testing::random_image(gen, 19, 12);
    const std::vector<Annotation> anns{{0, {2, 3, 5, 4}}, {0, {10.5, 0.25, 8, 11}}};
    AugmentSpec spec = AugmentSpec::neutral();
    spec.rot90_steps = 1;
    auto cur = augment(img, anns, spec);
    for (int i = 0; i < 3; ++i) cur = augment(cur.image, cur.annotations, spec);
    EXPECT_EQ(cur.image, img);
    EXPECT_EQ(cur.annotations, anns);
    for (int steps = 1; steps < 4; ++steps) {
        spec.rot90_steps = steps;
        EXPECT_EQ(augment(img, anns, spec).image, rotate90(img, steps));
    }
}

TEST(Augment, FlipsAndQuarterTurnsPreserveHistogram) {
    std::mt19937 gen(5);
    const MonoImage img = uvgb::testing::random_image(gen, 25, 14);
    const auto hist = histogram(img);
    for (int mask = 0; mask < 16; ++mask) {
        AugmentSpec spec = AugmentSpec::neutral();
        spec.flip_h = mask & 1;
        spec.flip_v = mask & 2;
        spec.rot90_steps = mask >> 2;
        EXPECT_EQ(histogram(augment(img, {}, spec).image), hist);
    }
}

TEST(Augment, NeutralSpecIsIdentity) {
    std::mt19937 gen(6);
    const MonoImage img = uvgb::testing::random_image(gen, 31, 17);
    const std::vector<Annotation> anns{{0, {0, 0, 31, 17}}, {0, {4.5, 6.5, 2, 3}}};
    const auto out = augment(img, anns, AugmentSpec::neutral());
    EXPECT_EQ(out.image, img);
    EXPECT_EQ(out.annotations, anns);
}

TEST(Augment, SameInputsGiveSameOutputAndSeedMatters) {
    std::mt19937 gen(7);
    const MonoImage img = uvgb::testing::random_image(gen, 64, 48);
    const std::vector<Annotation> anns{{0, {10, 10, 12, 9}}};
    AugmentSpec spec;
    spec.flip_h = true;
    spec.rot90_steps = 3;
    spec.rot_small_deg = 12;
    spec.shear_h_deg = -9;
    spec.shear_v_deg = 4;
    spec.seed = 99;
    const auto a = augment(img, anns, spec);
    const auto b = augment(img, anns, spec);
    EXPECT_EQ(a.image, b.image);
    EXPECT_EQ(a.annotations, b.annotations);
    spec.seed = 100;
    EXPECT_NE(augment(img, anns, spec).image, a.image);
}

TEST(Augment, NoiseTouchesTheRequestedShareOfPixels) {
    const MonoImage img(50, 40, 128);
    const MonoImage noisy = add_salt_pepper(img, 0.05, 1);
    std::size_t changed = 0, salt = 0;
    for (auto v : noisy.pixels()) {
        if (v != 128) ++changed;
        if (v == 255) ++salt;
        ASSERT_TRUE(v == 0 || v == 128 || v == 255);
    }
    EXPECT_EQ(changed, 100u);  // 5% of 2000
    EXPECT_GT(salt, 20u);
    EXPECT_LT(salt, 80u);
}

TEST(Augment, BlurPreservesConstantsAndIsSymmetric) {
    EXPECT_EQ(gaussian_blur(MonoImage(12, 9, 200), 5), MonoImage(12, 9, 200));
    MonoImage impulse(21, 21, 0);
    impulse.at(10, 10) = 255;
    const MonoImage out = gaussian_blur(impulse, 5);
    EXPECT_LT(out.at(10, 10), 255);
    for (int d = 1; d <= 5; ++d) {
        EXPECT_EQ(out.at(10 - d, 10), out.at(10 + d, 10));
        EXPECT_EQ(out.at(10, 10 - d), out.at(10 + d, 10));
        EXPECT_LE(out.at(10 + d, 10), out.at(10 + d - 1, 10));
    }
    EXPECT_EQ(out.at(16, 10), 0);  // outside the kernel radius
}

TEST(Augment, SmallRotationKeepsCentreAndGrowsHull) {
    MonoImage img(81, 81, 0);
    uvgb::testing::draw_disk(img, 40.5, 40.5, 6, 255);
    AugmentSpec spec = AugmentSpec::neutral();
    spec.rot_small_deg = 15;
    const auto out = augment(img, {{0, {30.5, 35.5, 20, 10}}}, spec);
    EXPECT_EQ(out.image.at(40, 40), 255);
    ASSERT_EQ(out.annotations.size(), 1u);
    const auto& b = out.annotations[0].bbox;
    EXPECT_NEAR(b.center_x(), 40.5, 1e-9);
    EXPECT_NEAR(b.center_y(), 40.5, 1e-9);
    // hull of a 20x10 box turned by 15 degrees
    const double c = std::cos(15 * M_PI / 180), s = std::sin(15 * M_PI / 180);
    EXPECT_NEAR(b.w, 20 * c + 10 * s, 1e-9);
    EXPECT_NEAR(b.h, 20 * s + 10 * c, 1e-9);
}

TEST(Augment, BoxesStayInsideAndNonDegenerate) {
    std::mt19937 gen(8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> angle(-15.0, 15.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int w = 20 + static_cast<int>(unit(gen) * 60), h = 20 + static_cast<int>(unit(gen) * 60);
        const MonoImage img(w, h, 50);
        std::vector<Annotation> anns;
        for (int k = 0; k < 6; ++k) {
            anns.push_back({0, {unit(gen) * w - 5, unit(gen) * h - 5, 1 + unit(gen) * 15, 1 + unit(gen) * 15}});
        }
        AugmentSpec spec;
        spec.flip_h = unit(gen) < 0.5;
        spec.flip_v = unit(gen) < 0.5;
        spec.rot90_steps = static_cast<int>(unit(gen) * 4);
        spec.rot_small_deg = angle(gen);
        spec.shear_h_deg = angle(gen);
        spec.shear_v_deg = angle(gen);
        spec.blur_radius_px = 1;
        spec.seed = static_cast<std::uint64_t>(trial);
        const auto out = augment(img, anns, spec);
        for (const auto& a : out.annotations) {
            ASSERT_GT(a.bbox.w, 0.0);
            ASSERT_GT(a.bbox.h, 0.0);
            ASSERT_GE(a.bbox.x, 0.0);
            ASSERT_GE(a.bbox.y, 0.0);
            ASSERT_LE(a.bbox.right(), out.image.width() + 1e-9);
            ASSERT_LE(a.bbox.bottom(), out.image.height() + 1e-9);
        }
    }
}

TEST(Augment, RejectsOutOfRangeSpec) {
    const MonoImage img(4, 4);
    AugmentSpec spec = AugmentSpec::neutral();
    spec.rot90_steps = 4;
    EXPECT_THROW(augment(img, {}, spec), UsageError);
    spec = AugmentSpec::neutral();
    spec.shear_v_deg = 15.5;
    EXPECT_THROW(augment(img, {}, spec), UsageError);
    spec = AugmentSpec::neutral();
    spec.noise_fraction = 1.5;
    EXPECT_THROW(augment(img, {}, spec), UsageError);
    spec = AugmentSpec::neutral();
    spec.blur_radius_px = -1;
    EXPECT_THROW(augment(img, {}, spec), UsageError);
}

// -------------------------------------------------------------------- split

namespace {

DatasetManifest manifest_of(std::size_t n) {
    DatasetManifest m;
    for (std::size_t i = 0; i < n; ++i) m.entries.push_back({"img_" + std::to_string(i) + ".png", {}, {}, SplitTag::unsplit});
    return m;
}

std::map<SplitTag, std::size_t> split_sizes(const DatasetManifest& m) {
    std::map<SplitTag, std::size_t> sizes;
    for (const auto& e : m.entries) ++sizes[e.split];
    return sizes;
}

}  // namespace

TEST(Split, ExactDivision) {
    auto sizes = split_sizes(split_dataset(manifest_of(10), {0.4, 0.4, 0.2}, 1));
    EXPECT_EQ(sizes[SplitTag::train], 4u);
    EXPECT_EQ(sizes[SplitTag::val], 4u);
    EXPECT_EQ(sizes[SplitTag::test], 2u);
}

TEST(Split, LargestRemainderOnDatasetOf284) {
    // 113.6 / 113.6 / 56.8: floors 113/113/56, two spare entries go to the
    // largest remainders (0.8, then the first 0.6).
    auto sizes = split_sizes(split_dataset(manifest_of(284), {0.4, 0.4, 0.2}, 1));
    EXPECT_EQ(sizes[SplitTag::train], 114u);
    EXPECT_EQ(sizes[SplitTag::val], 113u);
    EXPECT_EQ(sizes[SplitTag::test], 57u);
}

TEST(Split, DeterministicPerSeed) {
    const auto m = manifest_of(50);
    const auto a = split_dataset(m, {0.4, 0.4, 0.2}, 7);
    const auto b = split_dataset(m, {0.4, 0.4, 0.2}, 7);
    const auto c = split_dataset(m, {0.4, 0.4, 0.2}, 8);
    ASSERT_EQ(a.entries.size(), b.entries.size());
    bool differs = false;
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        EXPECT_EQ(a.entries[i].image, b.entries[i].image);
        EXPECT_EQ(a.entries[i].split, b.entries[i].split);
        differs |= a.entries[i].image != c.entries[i].image;
    }
    EXPECT_TRUE(differs);
}

TEST(Split, PartitionIsExhaustiveDisjointAndNearExact) {
    std::mt19937 gen(9);
    std::uniform_int_distribution<std::size_t> count(1, 500);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = count(gen);
        double a = unit(gen), b = unit(gen) * (1 - a);
        const std::array<double, 3> fr{a, b, 1.0 - a - b};
        const auto m = manifest_of(n);
        const auto out = split_dataset(m, fr, static_cast<std::uint64_t>(trial));
        std::set<std::string> seen;
        for (const auto& e : out.entries) {
            ASSERT_NE(e.split, SplitTag::unsplit);
            ASSERT_TRUE(seen.insert(e.image.string()).second);
        }
        ASSERT_EQ(seen.size(), n);
        auto sizes = split_sizes(out);
        const SplitTag tags[] = {SplitTag::train, SplitTag::val, SplitTag::test};
        for (int k = 0; k < 3; ++k) ASSERT_LT(std::abs(double(sizes[tags[k]]) - fr[k] * double(n)), 1.0);
    }
}

TEST(Split, Errors) {
    EXPECT_THROW(split_dataset(manifest_of(0), {0.4, 0.4, 0.2}, 1), DataError);
    EXPECT_THROW(split_dataset(manifest_of(5), {0.4, 0.4, 0.3}, 1), UsageError);
}

// ----------------------------------------------------------- file formats

TEST(AnnotationFormat, RoundTripWithinFilePrecision) {
    std::mt19937 gen(10);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int w = 100 + trial * 37, h = 80 + trial * 13;
        std::vector<Annotation> anns;
        for (int k = 0; k < 5; ++k) {
            anns.push_back({k % 2, {unit(gen) * w * 0.8, unit(gen) * h * 0.8, 1 + unit(gen) * 40, 1 + unit(gen) * 40}});
        }
        const auto back = parse_annotations(format_annotations(anns, w, h), w, h);
        ASSERT_EQ(back.size(), anns.size());
        for (std::size_t k = 0; k < anns.size(); ++k) {
            EXPECT_EQ(back[k].class_id, anns[k].class_id);
            EXPECT_NEAR(back[k].bbox.center_x(), anns[k].bbox.center_x(), 0.5e-6 * w + 1e-9);
            EXPECT_NEAR(back[k].bbox.w, anns[k].bbox.w, 0.5e-6 * w + 1e-9);
            EXPECT_NEAR(back[k].bbox.center_y(), anns[k].bbox.center_y(), 0.5e-6 * h + 1e-9);
            EXPECT_NEAR(back[k].bbox.h, anns[k].bbox.h, 0.5e-6 * h + 1e-9);
        }
    }
}

TEST(AnnotationFormat, ExactValues) {
    EXPECT_EQ(format_annotations({{0, {10, 20, 30, 40}}}, 100, 200), "0 0.250000 0.200000 0.300000 0.200000\n");
    EXPECT_EQ(format_detections({{0, {10, 20, 30, 40}, 0.875}}, 100, 200), "0 0.250000 0.200000 0.300000 0.200000 0.875000\n");
    const auto dets = parse_detections("0 0.5 0.5 0.1 0.2 0.9\n\n1 0.25 0.25 0.5 0.5 0.1\n", 200, 100);
    ASSERT_EQ(dets.size(), 2u);
    EXPECT_EQ(dets[0].bbox, (BBox{90, 40, 20, 20}));
    EXPECT_EQ(dets[1].class_id, 1);
}

TEST(AnnotationFormat, MalformedLinesNameTheLine) {
    try {
        parse_annotations("0 0.5 0.5 0.1 0.1\n0 0.5 zz 0.1 0.1\n", 10, 10);
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse_annotations("0 0.5 0.5 0.1\n", 10, 10), DataError);
    EXPECT_THROW(parse_detections("0 0.5 0.5 0.1 0.1 1.5\n", 10, 10), DataError);
    EXPECT_THROW(parse_annotations("0 0.5 0.5 0 0.1\n", 10, 10), DataError);
}

TEST(Manifest, SaveLoadWithAnnotations) {
    TempDir dir("manifest");
    save_image(MonoImage(100, 50, 3), dir / "a.png");
    save_image(MonoImage(40, 40, 3), dir / "b.pgm");
    write_annotations(dir / "a.txt", {{0, {10, 10, 20, 10}}}, 100, 50);
    DatasetManifest m;
    m.entries.push_back({"a.png", "a.txt", {}, SplitTag::train});
    m.entries.push_back({"b.pgm", "", {}, SplitTag::test});
    save_manifest(m, dir / "manifest.json");
    const auto back = load_manifest(dir / "manifest.json");
    ASSERT_EQ(back.entries.size(), 2u);
    EXPECT_EQ(back.class_names, std::vector<std::string>{"flower"});
    EXPECT_EQ(back.entries[0].split, SplitTag::train);
    ASSERT_EQ(back.entries[0].annotations.size(), 1u);
    EXPECT_EQ(back.entries[0].annotations[0].bbox, (BBox{10, 10, 20, 10}));
    EXPECT_TRUE(back.entries[1].annotations.empty());
}

TEST(Manifest, ValidatesInvariants) {
    DatasetManifest m;
    m.entries.push_back({"a.png", "", {}, SplitTag::unsplit});
    m.entries.push_back({"a.png", "", {}, SplitTag::unsplit});
    EXPECT_THROW(m.validate(), DataError);
    m.entries.pop_back();
    m.entries[0].annotations.push_back({3, {0, 0, 1, 1}});
    EXPECT_THROW(m.validate(), DataError);

    TempDir dir("manifest");
    csv::write_file(dir / "bad.json", "{\"classes\": [\"flower\"], \"entries\": [{\"split\": \"train\"}]}");
    EXPECT_THROW(load_manifest(dir / "bad.json"), DataError);
    csv::write_file(dir / "tag.json", "{\"classes\": [\"flower\"], \"entries\": [{\"image\": \"x.png\", \"split\": \"dev\"}]}");
    EXPECT_THROW(load_manifest(dir / "tag.json", false), DataError);
}
