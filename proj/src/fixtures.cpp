// SPDX-License-Identifier: Apache-2.0
#include "biokey/fixtures.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "biokey/fusion.hpp"
#include "parse.hpp"

namespace biokey::fixtures {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kSuper = 4;  // supersampling per axis for eye rendering

struct Dislocation {
    double x, y, sign;
};

}  // namespace

GrayImage make_fingerprint_stripes(const StripeParams& p) {
    if (p.width < 16 || p.height < 16) throw InvalidParameter("fingerprint fixture must be at least 16x16");
    if (!(p.period >= 2.0)) throw InvalidParameter("fingerprint fixture period must be >= 2");
    if (p.dislocations < 0) throw InvalidParameter("dislocation count must be >= 0");
    if (p.margin < 0 || 2 * p.margin >= std::min(p.width, p.height)) {
        throw InvalidParameter("fingerprint fixture margin does not fit the image");
    }
    if (!(p.contrast > 0.0 && p.contrast <= 127.0)) throw InvalidParameter("contrast must be in (0, 127]");

    fusion::SplitMix64 rng(p.seed);
    std::vector<Dislocation> forks;
    const double inset = p.margin + 0.25 * (std::min(p.width, p.height) - 2 * p.margin);
    for (int k = 0; k < p.dislocations; ++k) {
        const double x = inset + rng.next_unit() * (p.width - 2 * inset);
        const double y = inset + rng.next_unit() * (p.height - 2 * inset);
        forks.push_back({x, y, rng.next_unit() < 0.5 ? -1.0 : 1.0});
    }

    const double cx = (p.width - 1) / 2.0, cy = (p.height - 1) / 2.0;
    const double ax = p.width / 2.0 - p.margin, ay = p.height / 2.0 - p.margin;
    const double s = std::sin(p.angle), c = std::cos(p.angle);
    const double omega = 2.0 * kPi / p.period;

    GrayImage img(p.width, p.height);
    for (int y = 0; y < p.height; ++y) {
        for (int x = 0; x < p.width; ++x) {
            if (p.margin > 0) {
                const double ex = (x - cx) / ax, ey = (y - cy) / ay;
                if (ex * ex + ey * ey > 1.0) {
                    img.at(x, y) = 128;
                    continue;
                }
            }
            double phase = omega * (-x * s + y * c);
            for (const auto& f : forks) phase += f.sign * std::atan2(y - f.y, x - f.x);
            img.at(x, y) = to_pixel(128.0 + p.contrast * std::cos(phase));
        }
    }
    return img;
}

GrayImage make_eye(const EyeParams& p) {
    if (p.width < 8 || p.height < 8) throw InvalidParameter("eye fixture too small");
    if (!(p.pupil_r > 0.0) || !(p.iris_r > p.pupil_r)) throw InvalidParameter("eye fixture needs 0 < pupil_r < iris_r");
    if (std::hypot(p.pupil_cx - p.iris_cx, p.pupil_cy - p.iris_cy) + p.pupil_r >= p.iris_r) {
        throw InvalidParameter("eye fixture pupil must lie inside the iris");
    }
    if (!(p.texture >= 0.0)) throw InvalidParameter("texture amplitude must be >= 0");

    // Four seeded components: angular frequency, radial cycles, phase, weight.
    struct Component {
        double k, q, phase, weight;
    };
    fusion::SplitMix64 rng(p.seed);
    std::array<Component, 4> comps{};
    double weight_sum = 0.0;
    for (auto& comp : comps) {
        comp.k = 6.0 + std::floor(rng.next_unit() * 19.0);
        comp.q = 0.5 + 1.5 * rng.next_unit();
        comp.phase = 2.0 * kPi * rng.next_unit();
        comp.weight = 0.5 + rng.next_unit();
        weight_sum += comp.weight;
    }

    auto shade = [&](double sx, double sy) -> double {
        if (p.eyelid_top <= p.eyelid_bottom && sy >= p.eyelid_top - 0.5 && sy < p.eyelid_bottom + 0.5) {
            return p.eyelid_level;
        }
        const double dp = std::hypot(sx - p.pupil_cx, sy - p.pupil_cy);
        if (dp <= p.pupil_r) return p.pupil_level;
        const double di = std::hypot(sx - p.iris_cx, sy - p.iris_cy);
        if (di > p.iris_r) return p.sclera_level;
        const double u = (dp - p.pupil_r) / (p.iris_r - p.pupil_r);
        const double phi = std::atan2(sy - p.pupil_cy, sx - p.pupil_cx) - p.rotation;
        double t = 0.0;
        for (const auto& comp : comps) t += comp.weight * std::cos(comp.k * phi + 2.0 * kPi * comp.q * u + comp.phase);
        return p.iris_level + p.texture * t / weight_sum;
    };

    GrayImage img(p.width, p.height);
    for (int y = 0; y < p.height; ++y)
        for (int x = 0; x < p.width; ++x) {
            double acc = 0.0;
            for (int j = 0; j < kSuper; ++j)
                for (int i = 0; i < kSuper; ++i)
                    acc += shade(x - 0.5 + (i + 0.5) / kSuper, y - 0.5 + (j + 0.5) / kSuper);
            img.at(x, y) = to_pixel(acc / (kSuper * kSuper));
        }
    return img;
}

FixtureSpec::FixtureSpec(const std::string& kind) : kind_(kind) {
    if (kind != "fingerprint-stripes" && kind != "eye-annulus") {
        throw InvalidParameter("unknown fixture kind '" + kind + "' (expected fingerprint-stripes or eye-annulus)");
    }
}

void FixtureSpec::set(const std::string& key, const std::string& value) {
    using detail::parse_double;
    using detail::parse_int;
    const double deg = kPi / 180.0;
    if (kind_ == "fingerprint-stripes") {
        if (key == "width") stripes_.width = parse_int<int>(key, value);
        else if (key == "height") stripes_.height = parse_int<int>(key, value);
        else if (key == "angle") stripes_.angle = parse_double(key, value) * deg;
        else if (key == "period") stripes_.period = parse_double(key, value);
        else if (key == "dislocations") stripes_.dislocations = parse_int<int>(key, value);
        else if (key == "seed") stripes_.seed = parse_int<std::uint64_t>(key, value);
        else if (key == "margin") stripes_.margin = parse_int<int>(key, value);
        else if (key == "contrast") stripes_.contrast = parse_double(key, value);
        else throw InvalidParameter("unknown fingerprint-stripes parameter '" + key + "'");
        return;
    }
    if (key == "width") eye_.width = parse_int<int>(key, value);
    else if (key == "height") eye_.height = parse_int<int>(key, value);
    else if (key == "cx") eye_.iris_cx = parse_double(key, value);
    else if (key == "cy") eye_.iris_cy = parse_double(key, value);
    else if (key == "iris_r") eye_.iris_r = parse_double(key, value);
    else if (key == "pupil_r") eye_.pupil_r = parse_double(key, value);
    else if (key == "pupil_cx") { eye_.pupil_cx = parse_double(key, value); pupil_cx_set_ = true; }
    else if (key == "pupil_cy") { eye_.pupil_cy = parse_double(key, value); pupil_cy_set_ = true; }
    else if (key == "texture") eye_.texture = parse_double(key, value);
    else if (key == "seed") eye_.seed = parse_int<std::uint64_t>(key, value);
    else if (key == "rotation") eye_.rotation = parse_double(key, value) * deg;
    else if (key == "eyelid_top") eye_.eyelid_top = parse_int<int>(key, value);
    else if (key == "eyelid_bottom") eye_.eyelid_bottom = parse_int<int>(key, value);
    else if (key == "eyelid_level") eye_.eyelid_level = parse_int<int>(key, value);
    else throw InvalidParameter("unknown eye-annulus parameter '" + key + "'");
}

GrayImage FixtureSpec::render() const {
    if (kind_ == "fingerprint-stripes") return make_fingerprint_stripes(stripes_);
    EyeParams p = eye_;
    if (!pupil_cx_set_) p.pupil_cx = p.iris_cx;
    if (!pupil_cy_set_) p.pupil_cy = p.iris_cy;
    return make_eye(p);
}

}  // namespace biokey::fixtures
