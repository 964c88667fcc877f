// SPDX-License-Identifier: Apache-2.0
//
// Deterministic synthetic inputs: oriented ridge patterns standing in for
// fingerprints and concentric pupil/iris annuli standing in for eye images.
#pragma once

#include <cstdint>
#include <string>

#include "biokey/image.hpp"

namespace biokey::fixtures {

struct StripeParams {
    int width = 256;
    int height = 256;
    // Ridge direction, radians from +x with y pointing down.
    double angle = 0.0;
    double period = 9.0;
    // Phase dislocations; each one forks a ridge and so creates minutiae.
    int dislocations = 0;
    std::uint64_t seed = 1;
    // Width of the flat background border around an elliptical print area.
    int margin = 0;
    double contrast = 100.0;
};

GrayImage make_fingerprint_stripes(const StripeParams& p);

struct EyeParams {
    int width = 160;
    int height = 160;
    double iris_cx = 80.0;
    double iris_cy = 80.0;
    double iris_r = 50.0;
    double pupil_cx = 80.0;
    double pupil_cy = 80.0;
    double pupil_r = 20.0;
    int pupil_level = 30;
    int iris_level = 130;
    int sclera_level = 210;
    // Peak amplitude of the seeded angular/radial iris texture.
    double texture = 20.0;
    std::uint64_t seed = 1;
    // Rotates the texture (radians) about the pupil centre.
    double rotation = 0.0;
    // Dark horizontal band rows [eyelid_top, eyelid_bottom]; disabled when top > bottom.
    int eyelid_top = 0;
    int eyelid_bottom = -1;
    int eyelid_level = 30;
};

GrayImage make_eye(const EyeParams& p);

// Key/value front end shared by the CLI and the C API. Angles are given in
// degrees.
class FixtureSpec {
public:
    explicit FixtureSpec(const std::string& kind);

    const std::string& kind() const noexcept { return kind_; }
    void set(const std::string& key, const std::string& value);
    GrayImage render() const;

private:
    std::string kind_;
    StripeParams stripes_;
    EyeParams eye_;
    bool pupil_cx_set_ = false;
    bool pupil_cy_set_ = false;
};

}  // namespace biokey::fixtures
