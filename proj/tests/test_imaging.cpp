// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <png.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "biokey/image_io.hpp"
#include "biokey/imaging.hpp"
#include "oracles.hpp"

using namespace biokey;

namespace {

GrayImage random_image(std::mt19937& rng, int w, int h) {
    std::uniform_int_distribution<int> d(0, 255);
    GrayImage img(w, h);
    for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(d(rng));
    return img;
}

}  // namespace

TEST_CASE("equalize: constant image maps to white") {
    GrayImage img(8, 8, 7);
    auto r = histogram_equalize(img);
    for (auto p : r.image.pixels()) CHECK(p == 255);
    CHECK(r.mapping.cdf[6] == 0.0);
    CHECK(r.mapping.cdf[7] == 1.0);
}

TEST_CASE("equalize: two halves map to 128 and 255") {
    GrayImage img(4, 2);
    for (int x = 0; x < 4; ++x) img.at(x, 1) = 255;
    auto r = histogram_equalize(img);
    CHECK(r.image.at(0, 0) == 128);
    CHECK(r.image.at(0, 1) == 255);
}

TEST_CASE("equalize: mapping is monotone and re-equalizing stays monotone") {
    std::mt19937 rng(3);
    for (int t = 0; t < 50; ++t) {
        auto img = random_image(rng, 13, 7);
        auto first = histogram_equalize(img);
        auto second = histogram_equalize(first.image);
        for (int k = 1; k < 256; ++k) {
            CHECK(first.mapping.mapping[k - 1] <= first.mapping.mapping[k]);
            CHECK(second.mapping.mapping[first.mapping.mapping[k - 1]] <=
                  second.mapping.mapping[first.mapping.mapping[k]]);
        }
    }
}

TEST_CASE("equalize: matches a rounded cdf oracle") {
    std::mt19937 rng(4);
    auto img = random_image(rng, 17, 11);
    auto r = histogram_equalize(img);
    for (int k = 0; k < 256; ++k) {
        long c = 0;
        for (auto p : img.pixels()) c += p <= k;
        const double exact = 255.0 * static_cast<double>(c) / static_cast<double>(img.size());
        CHECK(r.mapping.mapping[k] == static_cast<int>(std::floor(exact + 0.5)));
    }
}

TEST_CASE("wiener: constant image and zero noise are identities") {
    GrayImage flat(6, 5, 77);
    CHECK(wiener_filter(flat, {123.0}) == flat);
    std::mt19937 rng(5);
    auto img = random_image(rng, 9, 9);
    CHECK(wiener_filter(img, {0.0}) == img);
}

TEST_CASE("wiener: hand-evaluated centre pixel") {
    GrayImage img(3, 3, 10);
    img.at(1, 1) = 100;
    // mean 20, variance 800; gain (800 - 200) / 800 = 0.75 -> 20 + 0.75 * 80 = 80
    CHECK(wiener_filter(img, {200.0}).at(1, 1) == 80);
    // noise above the local variance collapses to the mean
    CHECK(wiener_filter(img, {5000.0}).at(1, 1) == 20);
}

TEST_CASE("wiener: too small and negative noise are rejected") {
    CHECK_THROWS_AS(wiener_filter(GrayImage(2, 5)), InvalidInput);
    CHECK_THROWS_AS(wiener_filter(GrayImage(5, 5), {-1.0}), InvalidParameter);
}

TEST_CASE("wiener: agrees with the oracle on random images") {
    std::mt19937 rng(6);
    std::uniform_real_distribution<double> nd(0.0, 3000.0);
    for (int t = 0; t < 200; ++t) {
        auto img = random_image(rng, 3 + t % 5, 3 + t % 7);
        const double v = nd(rng);
        std::vector<std::uint8_t> raw(img.pixels().begin(), img.pixels().end());
        const auto want = oracle::wiener(raw, img.width(), img.height(), v);
        const auto got = wiener_filter(img, {v});
        CHECK(std::equal(want.begin(), want.end(), got.pixels().begin()));
    }
}

TEST_CASE("gaussian kernel: normalised, peaked, exp(-1/2) ratio") {
    for (double s : {0.5, 1.0, 2.0}) {
        auto k = gaussian_kernel(s);
        double total = 0.0, peak = 0.0;
        for (double w : k.weights.weights()) {
            total += w;
            peak = std::max(peak, w);
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(k.weights.at(0, 0) == peak);
        CHECK(k.radius == static_cast<int>(std::ceil(3 * s)));
    }
    auto k = gaussian_kernel(1.0);
    CHECK(k.weights.at(1, 0) / k.weights.at(0, 0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
    CHECK_THROWS_AS(gaussian_kernel(0.0), InvalidParameter);
}

TEST_CASE("convolve: identity and impulse") {
    std::mt19937 rng(7);
    auto img = random_image(rng, 6, 4);
    CHECK(convolve(img, Kernel2D(1, 1, {1.0})) == img);

    RealImage impulse(7, 7, 0.0);
    impulse.at(3, 3) = 1.0;
    Kernel2D k(3, 3, {1, 2, 3, 4, 5, 6, 7, 8, 9});
    auto out = convolve(impulse, k);
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) CHECK(out.at(3 + dx, 3 + dy) == k.at(dx, dy));
    CHECK_THROWS_AS(Kernel2D(2, 3, std::vector<double>(6)), InvalidParameter);
}

TEST_CASE("convolve: random 5x5 image, 3x3 kernel, oracle exact") {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> kd(-1.0, 1.0);
    for (int t = 0; t < 100; ++t) {
        auto img = random_image(rng, 5, 5);
        std::vector<double> w(9);
        for (auto& v : w) v = kd(rng);
        const auto out = convolve(RealImage(img), Kernel2D(3, 3, w));
        std::vector<double> raw(img.pixels().begin(), img.pixels().end());
        const auto want = oracle::convolve(raw, 5, 5, w, 3, 3);
        for (std::size_t i = 0; i < want.size(); ++i) CHECK(out.values()[i] == want[i]);
    }
}

TEST_CASE("sobel: ramp has constant gradient") {
    RealImage ramp(6, 6);
    for (int y = 0; y < 6; ++y)
        for (int x = 0; x < 6; ++x) ramp.at(x, y) = 3.0 * x + 2.0 * y;
    auto g = sobel(ramp);
    CHECK(g.gx.at(2, 2) == 24.0);
    CHECK(g.gy.at(2, 2) == 16.0);
}

TEST_CASE("pgm: encode/decode round trip and malformed input") {
    std::mt19937 rng(9);
    auto img = random_image(rng, 5, 3);
    CHECK(decode_pgm(encode_pgm(img)) == img);
    const std::string text = "P5\n# comment\n2 1\n255\n\x01\x02";
    CHECK(decode_pgm(std::vector<std::uint8_t>(text.begin(), text.end())).at(1, 0) == 2);
    const std::string bad = "P6\n2 1\n255\n......";
    CHECK_THROWS_AS(decode_pgm(std::vector<std::uint8_t>(bad.begin(), bad.end())), Error);
    const std::string shortbuf = "P5\n4 4\n255\nab";
    CHECK_THROWS_AS(decode_pgm(std::vector<std::uint8_t>(shortbuf.begin(), shortbuf.end())), Error);
    CHECK_THROWS_AS(read_image("/nonexistent/x.pgm"), IoError);
}

TEST_CASE("png: grey and rgb files decode to the same grey raster") {
    std::mt19937 rng(31);
    const auto img = random_image(rng, 13, 7);
    const auto dir = std::filesystem::temp_directory_path();
    const auto grey = (dir / "biokey_test_grey.png").string();
    const auto rgb = (dir / "biokey_test_rgb.png").string();

    png_image out{};
    out.version = PNG_IMAGE_VERSION;
    out.width = 13;
    out.height = 7;
    out.format = PNG_FORMAT_GRAY;
    REQUIRE(png_image_write_to_file(&out, grey.c_str(), 0, img.pixels().data(), 0, nullptr));

    std::vector<std::uint8_t> triples;
    for (auto p : img.pixels()) triples.insert(triples.end(), {p, p, p});
    png_image out_rgb{};
    out_rgb.version = PNG_IMAGE_VERSION;
    out_rgb.width = 13;
    out_rgb.height = 7;
    out_rgb.format = PNG_FORMAT_RGB;
    REQUIRE(png_image_write_to_file(&out_rgb, rgb.c_str(), 0, triples.data(), 0, nullptr));

    CHECK(read_image(grey) == img);
    CHECK(read_image(rgb) == img);
    std::filesystem::remove(grey);
    std::filesystem::remove(rgb);
}
