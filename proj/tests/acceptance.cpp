// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion. `--only N` runs a
// single criterion. Exit status is 0 only when every selected criterion
// passes.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "biokey/fixtures.hpp"
#include "biokey/fusion.hpp"
#include "biokey/image_io.hpp"
#include "biokey/imaging.hpp"
#include "biokey/pipeline.hpp"
#include "oracles.hpp"
#include "shapes.hpp"

using namespace biokey;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string s = ss.str();
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
}

// 1 ---------------------------------------------------------------------------
Outcome end_to_end(const std::string& data) {
    const std::string fp = data + "/fingerprint.pgm", ir = data + "/iris.pgm";
    const std::string golden = read_text(data + "/golden_seed42.bits");
    const auto fpi = read_image(fp), iri = read_image(ir);
    if (fpi.width() != 512 || fpi.height() != 512 || iri.width() != 512 || iri.height() != 512) {
        return {false, "bundled fixtures are not 512x512"};
    }
    PipelineConfig cfg;
    cfg.seed = 42;
    std::string first;
    double slowest = 0.0;
    for (int run = 0; run < 10; ++run) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto rep = run_pipeline(fp, ir, cfg);
        slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        const auto bits = rep.key.to_bitstring();
        if (rep.key.size() != 256) return {false, fmt("key has %zu bits", rep.key.size())};
        if (run == 0) first = bits;
        if (bits != first) return {false, fmt("run %d differs from run 0", run)};
    }
    if (first != golden) return {false, "key differs from the golden file"};
    return {slowest < 10.0,
            fmt("256 bits, 10/10 identical, matches golden key, slowest run %.3f s (this platform only)", slowest)};
}

// 2 ---------------------------------------------------------------------------
Outcome oracles() {
    constexpr int kTrials = 1000;
    std::mt19937 rng(20240101);
    std::uniform_int_distribution<int> pix(0, 255), dim(3, 9);
    std::uniform_real_distribution<double> unit(0.0, 1.0), weight(-2.0, 2.0);
    int conv = 0, wien = 0, dedup = 0, rsz = 0, par = 0, nor = 0, shuf = 0;

    for (int t = 0; t < kTrials; ++t) {
        const int w = dim(rng), h = dim(rng);
        GrayImage img(w, h);
        for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(pix(rng));
        std::vector<double> raw(img.pixels().begin(), img.pixels().end());

        const int kw = 1 + 2 * (t % 3), kh = 1 + 2 * ((t / 3) % 3);
        std::vector<double> k(static_cast<std::size_t>(kw * kh));
        for (auto& v : k) v = weight(rng);
        const auto got = convolve(RealImage(img), Kernel2D(kw, kh, k));
        const auto want = oracle::convolve(raw, w, h, k, kw, kh);
        conv += std::equal(want.begin(), want.end(), got.values().begin());

        const double noise = t % 4 == 0 ? std::floor(unit(rng) * 3000) : unit(rng) * 3000;
        std::vector<std::uint8_t> bytes(img.pixels().begin(), img.pixels().end());
        const auto wo = oracle::wiener(bytes, w, h, noise);
        const auto wg = wiener_filter(img, {noise});
        wien += std::equal(wo.begin(), wo.end(), wg.pixels().begin());

        std::vector<std::uint32_t> v(1 + rng() % 400);
        const std::uint32_t range = 1 + rng() % 600;
        for (auto& e : v) e = rng() % range;
        dedup += keygen::distinct(v) == oracle::dedupe(v);

        const auto u = oracle::dedupe(v);
        const std::size_t kbits = 1 + rng() % 512;
        rsz += keygen::resize(u, kbits) == oracle::resize(u, kbits);

        std::vector<std::uint32_t> b(1 + rng() % 300);
        for (auto& e : b) e = static_cast<std::uint32_t>(rng());
        const auto key = keygen::derive_key(b);
        const auto bits = oracle::parity(b);
        par += std::equal(bits.begin(), bits.end(), key.bits().begin(), [](int x, std::uint8_t y) { return x == y; });

        const int width = 1 + t % 32;
        std::vector<std::uint32_t> m1(b.size()), m2(b.size());
        for (auto& e : m1) e = static_cast<std::uint32_t>(rng());
        for (auto& e : m2) e = static_cast<std::uint32_t>(rng());
        nor += fusion::merge(m1, m2, width) == oracle::nor(m1, m2, width);

        std::vector<double> r(b.size());
        for (auto& e : r) e = unit(rng);
        const std::uint64_t big_m = t % 2 ? fusion::kDefaultBigM : 1 + rng() % 100000;
        shuf += fusion::shuffle(b, r, big_m) == oracle::shuffle(b, r, big_m);
    }
    const bool ok = conv == kTrials && wien == kTrials && dedup == kTrials && rsz == kTrials && par == kTrials &&
                    nor == kTrials && shuf == kTrials;
    return {ok, fmt("exact matches of %d: convolution %d, wiener %d, dedupe %d, resize %d, parity %d, nor-merge %d, "
                    "shuffle %d",
                    kTrials, conv, wien, dedup, rsz, par, nor, shuf)};
}

// 3 ---------------------------------------------------------------------------
Outcome thinning() {
    const auto suite = shapes::suite();
    int shapes_ok = 0;
    std::string first_bad;
    for (const auto& s : suite) {
        const auto once = fingerprint::thin(oracle::to_image(s.grid));
        const auto g = oracle::to_grid(once);
        const bool ok = fingerprint::thin(once) == once && g == oracle::thin(s.grid) &&
                        oracle::components(g) == oracle::components(s.grid) &&
                        oracle::holes(g) == oracle::holes(s.grid);
        shapes_ok += ok;
        if (!ok && first_bad.empty()) first_bad = s.name;
    }
    std::mt19937 rng(777);
    constexpr int kGrids = 10000;
    int grids_ok = 0;
    for (int t = 0; t < kGrids; ++t) {
        auto g = shapes::blank(10, 10);
        const unsigned density = 30 + rng() % 50;
        for (auto& c : g.cells) c = (rng() % 100) < density;
        grids_ok += oracle::to_grid(fingerprint::thin(oracle::to_image(g))) == oracle::thin(g);
    }
    const bool ok = suite.size() >= 20 && shapes_ok == static_cast<int>(suite.size()) && grids_ok == kGrids;
    return {ok, fmt("%d/%zu shapes idempotent, connectivity and holes kept, equal to literal oracle%s%s; "
                    "%d/%d random 10x10 grids equal to literal oracle",
                    shapes_ok, suite.size(), first_bad.empty() ? "" : "; first failure: ", first_bad.c_str(),
                    grids_ok, kGrids)};
}

// 4 ---------------------------------------------------------------------------
Outcome minutiae_segments() {
    std::mt19937 rng(4444);
    std::string counts;
    bool ok = true;
    for (int k = 1; k <= 5; ++k) {
        for (int layout = 0; layout < 20; ++layout) {
            // k non-touching segments in separate horizontal bands of a 192x192 print
            BinaryImage img(192, 192);
            for (int s = 0; s < k; ++s) {
                const int band0 = 24 + s * (144 / k), band1 = 24 + (s + 1) * (144 / k) - 4;
                const int y = band0 + static_cast<int>(rng() % static_cast<unsigned>(std::max(1, band1 - band0 - 12)));
                const int x0 = 24 + static_cast<int>(rng() % 40), len = 20 + static_cast<int>(rng() % 80);
                const int kind = static_cast<int>(rng() % 3);  // horizontal, diagonal, shallow staircase
                for (int i = 0; i <= len; ++i) {
                    int yy = y;
                    if (kind == 1) yy = y + std::min(i, 8);
                    if (kind == 2) yy = y + i / 12;
                    img.set(x0 + i, std::min(yy, 167), true);
                }
            }
            img = fingerprint::thin(img);
            fingerprint::SegmentationMask mask(192, 192, 0.0);
            for (int by = 0; by < mask.blocks_y(); ++by)
                for (int bx = 0; bx < mask.blocks_x(); ++bx) mask.set_foreground(bx, by, true);
            const auto m = fingerprint::extract_minutiae(img, mask);
            int ends = 0, forks = 0;
            for (const auto& mm : m.minutiae) (mm.kind == fingerprint::MinutiaKind::RidgeEnding ? ends : forks)++;
            if (ends != 2 * k || forks != 0) {
                ok = false;
                counts += fmt(" [k=%d layout %d: %d endings, %d bifurcations]", k, layout, ends, forks);
            }
        }
    }
    return {ok, "k = 1..5, 20 layouts each: 2k ridge endings and no bifurcations" + (ok ? std::string() : counts)};
}

// 5 ---------------------------------------------------------------------------
Outcome orientation() {
    std::string detail;
    bool ok = true;
    for (int deg = 0; deg < 180; deg += 30) {
        fixtures::StripeParams p;
        p.width = p.height = 256;
        p.angle = deg * kPi / 180.0;
        p.period = 9;
        p.margin = 16;
        const auto img = fixtures::make_fingerprint_stripes(p);
        const auto pre = wiener_filter(histogram_equalize(img).image);
        const auto mask = fingerprint::segment(pre, fingerprint::default_segment_threshold(pre));
        const auto field = fingerprint::estimate_orientation(pre, mask);
        int interior = 0, good = 0;
        for (int by = 1; by < mask.blocks_y() - 1; ++by)
            for (int bx = 1; bx < mask.blocks_x() - 1; ++bx) {
                bool inner = true;
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) inner = inner && mask.foreground(bx + dx, by + dy);
                if (!inner) continue;
                ++interior;
                if (!field.valid(bx, by)) continue;
                double d = std::fmod(std::abs(field.angle(bx, by) - p.angle), kPi);
                d = std::min(d, kPi - d);
                good += d <= 5.0 * kPi / 180.0;
            }
        const double frac = interior ? static_cast<double>(good) / interior : 0.0;
        ok = ok && interior > 0 && frac >= 0.9;
        detail += fmt("%s%d deg %d/%d", detail.empty() ? "" : ", ", deg, good, interior);
    }
    return {ok, "interior blocks within 5 deg: " + detail};
}

// 6 ---------------------------------------------------------------------------
Outcome hough_eyes() {
    std::mt19937_64 rng(6666);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int hits = 0;
    for (int t = 0; t < 100; ++t) {
        fixtures::EyeParams p;
        p.width = p.height = 160;
        p.pupil_r = 15 + std::floor(u(rng) * 11);
        p.iris_r = 40 + std::floor(u(rng) * 21);
        p.iris_cx = 70 + std::floor(u(rng) * 21);
        p.iris_cy = 70 + std::floor(u(rng) * 21);
        p.pupil_cx = p.iris_cx + std::floor(u(rng) * 7) - 3;
        p.pupil_cy = p.iris_cy + std::floor(u(rng) * 7) - 3;
        p.seed = rng();
        p.rotation = u(rng) * 2 * kPi;
        const auto img = fixtures::make_eye(p);
        try {
            const auto b = iris::locate_boundaries(img, iris::LocalizeParams{});
            auto close = [](const iris::Circle& c, double x, double y, double r) {
                return std::abs(c.cx - x) <= 1 && std::abs(c.cy - y) <= 1 && std::abs(c.r - r) <= 1;
            };
            hits += close(b.pupil, p.pupil_cx, p.pupil_cy, p.pupil_r) && close(b.iris, p.iris_cx, p.iris_cy, p.iris_r);
        } catch (const Error&) {
        }
    }
    return {hits >= 95, fmt("%d/100 eyes with both circles within 1 px", hits)};
}

// 7 ---------------------------------------------------------------------------
template <typename F>
GrayImage radial_image(int size, double c, F f) {
    GrayImage img(size, size);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) img.at(x, y) = to_pixel(f(std::hypot(x - c, y - c)));
    return img;
}

Outcome rubber_sheet() {
    const iris::IrisBoundaries b{{80, 80, 22}, {80, 80, 60}, BinaryImage(160, 160)};
    // constant over the sampled annulus, distinct pupil and sclera levels
    const auto flat = radial_image(160, 80, [](double d) { return d < 20 ? 20.0 : d > 62 ? 230.0 : 140.0; });
    const auto n = iris::normalize(flat, b, 20, 240);
    double mean = 0, var = 0;
    int used = 0;
    for (std::size_t i = 0; i < n.values.size(); ++i)
        if (!n.mask[i]) {
            mean += n.values[i];
            ++used;
        }
    mean /= used;
    for (std::size_t i = 0; i < n.values.size(); ++i)
        if (!n.mask[i]) var += (n.values[i] - mean) * (n.values[i] - mean);
    var /= used;

    const auto ramp = radial_image(160, 80, [](double d) { return 100 + 100 * (d - 22) / (60 - 22); });
    const auto nr = iris::normalize(ramp, b, 20, 240);
    bool monotone = true;
    double worst_end = 0;
    for (int c = 0; c < 240; ++c) {
        for (int r = 1; r < 20; ++r) monotone = monotone && nr.value(r, c) > nr.value(r - 1, c);
        worst_end = std::max({worst_end, std::abs(nr.value(0, c) - 100.0), std::abs(nr.value(19, c) - 200.0)});
    }
    const bool ok = used == 4800 && var == 0.0 && monotone && worst_end <= 1.0;
    return {ok, fmt("constant annulus variance %.3g over %d cells; ramp monotone in every column: %s, "
                    "worst endpoint error %.3f",
                    var, used, monotone ? "yes" : "no", worst_end)};
}

// 8 ---------------------------------------------------------------------------
Outcome log_gabor() {
    auto rows = [](int n, const std::function<double(int)>& f) {
        iris::NormalizedIris norm;
        norm.radial_res = 4;
        norm.angular_res = n;
        for (int r = 0; r < 4; ++r)
            for (int k = 0; k < n; ++k) norm.values.push_back(f(k));
        norm.mask.assign(norm.values.size(), 0);
        return norm;
    };
    auto max_abs = [](const iris::IrisTexture& t) {
        double m = 0;
        for (auto c : t.coeffs) m = std::max(m, std::abs(c));
        return m;
    };
    double dc = 0;
    for (double level : {0.0, 37.0, 128.0, 255.0}) {
        dc = std::max(dc, max_abs(iris::log_gabor_features(rows(240, [&](int) { return level; }))));
    }
    // f0 = 1/18 cycles per sample falls on bin 20 of a 360-sample row
    const int n = 360;
    iris::LogGaborParams p;
    const double f0_bin = p.f0 * n;
    auto tone = [&](double cycles) {
        return max_abs(iris::log_gabor_features(
            rows(n, [&](int k) { return 127.5 + 100 * std::cos(2 * kPi * cycles * k / n); }), p));
    };
    const double ratio = tone(f0_bin) / tone(4 * f0_bin);
    return {dc < 1e-6 && ratio >= 5.0, fmt("DC max |coeff| %.3g; response ratio f0 : 4 f0 = %.3f", dc, ratio)};
}

// 9 ---------------------------------------------------------------------------
Outcome fusion_invariants() {
    std::mt19937_64 rng(9999);
    auto sorted = [](fusion::Vector v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    int perm = 0, length = 0, commute = 0, range = 0;
    constexpr int kTrials = 1000;
    for (int t = 0; t < kTrials; ++t) {
        const std::size_t n = 1 + rng() % 60, m = 1 + rng() % 600;
        fusion::FeatureVectors fv;
        for (std::size_t i = 0; i < n; ++i) {
            fv.f1.push_back(static_cast<std::uint32_t>(rng() % 512));
            fv.f2.push_back(static_cast<std::uint32_t>(rng() % 512));
        }
        for (std::size_t i = 0; i < m; ++i) {
            fv.i1.push_back(static_cast<std::uint32_t>(rng() % 65536));
            fv.i2.push_back(static_cast<std::uint32_t>(rng() % 65536));
        }
        const auto st = fusion::fuse(fv, {rng(), fusion::kDefaultBigM, 16, fusion::kDefaultQuantScale});
        perm += sorted(st.s1) == sorted(fv.f1) && sorted(st.s2) == sorted(fv.f2) && sorted(st.s3) == sorted(fv.i1) &&
                sorted(st.s4) == sorted(fv.i2);
        length += st.bt.size() == n + m;
        commute += fusion::merge(st.m1, st.m2) == fusion::merge(st.m2, st.m1);
        range += std::all_of(st.bt.begin(), st.bt.end(), [](std::uint32_t v) { return v < 65536u; });
    }
    const bool ok = perm == kTrials && length == kTrials && commute == kTrials && range == kTrials;
    return {ok, fmt("of %d trials: permutation at all four shuffles %d, |template| = n + m %d, merge commutative %d, "
                    "values < 2^16 %d",
                    kTrials, perm, length, commute, range)};
}

// 10 --------------------------------------------------------------------------
Outcome seed_sensitivity() {
    std::mt19937_64 rng(1010);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int differ = 0, failed = 0;
    std::size_t fewest = SIZE_MAX;
    for (int t = 0; t < 100; ++t) {
        fixtures::StripeParams sp;
        sp.width = sp.height = 256;
        sp.angle = u(rng) * kPi;
        sp.period = 8 + u(rng) * 3;
        sp.dislocations = 12 + static_cast<int>(rng() % 13);
        sp.margin = 12;
        sp.seed = rng();
        fixtures::EyeParams ep;
        ep.pupil_r = 16 + std::floor(u(rng) * 8);
        ep.iris_r = 44 + std::floor(u(rng) * 12);
        ep.seed = rng();
        ep.rotation = u(rng) * 2 * kPi;
        const auto fp = fixtures::make_fingerprint_stripes(sp);
        const auto eye = fixtures::make_eye(ep);
        PipelineConfig cfg;
        cfg.seed = rng() % 1000000;
        try {
            const auto ra = run_pipeline(fp, eye, cfg);
            const auto& a = ra.key;
            fewest = std::min(fewest, ra.minutiae);
            cfg.seed += 1;
            const auto b = run_pipeline(fp, eye, cfg).key;
            differ += !(a == b);
        } catch (const Error&) {
            ++failed;
        }
    }
    return {differ >= 99, fmt("%d/100 fixture pairs give different keys for seeds s and s+1 (%d pipeline failures, "
                              "fewest minutiae in a pair %zu)",
                              differ, failed, fewest)};
}

}  // namespace

int main(int argc, char** argv) {
    std::string data = BIOKEY_TEST_DATA_DIR;
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--only") && i + 1 < argc) only = std::atoi(argv[++i]);
        else if (!std::strcmp(argv[i], "--data") && i + 1 < argc) data = argv[++i];
    }
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"end-to-end determinism and runtime", [&] { return end_to_end(data); }},
        {"stage oracle equivalence", oracles},
        {"thinning", thinning},
        {"minutiae from disjoint segments", minutiae_segments},
        {"orientation field", orientation},
        {"hough localization", hough_eyes},
        {"rubber-sheet normalization", rubber_sheet},
        {"log-Gabor filtering", log_gabor},
        {"fusion invariants", fusion_invariants},
        {"seed sensitivity", seed_sensitivity},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only && static_cast<int>(i + 1) != only) continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("criterion %2zu %s: %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    o.detail.c_str());
        std::fflush(stdout);
    }
    return failures ? 1 : 0;
}
