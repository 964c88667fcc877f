// SPDX-License-Identifier: Apache-2.0
//
// End-to-end orchestration: fingerprint and iris extraction, fusion and key
// derivation, driven by a flat key/value configuration.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "biokey/fingerprint.hpp"
#include "biokey/iris.hpp"
#include "biokey/keygen.hpp"

namespace biokey {

// Every tunable constant of the pipeline. Text form is one `key = value`
// per line, `#` starts a comment; see docs/config.md.
struct PipelineConfig {
    std::uint64_t seed = 0;
    std::size_t key_bits = keygen::kDefaultKeyBits;

    std::optional<double> fp_wiener_noise;        // "auto" when empty
    std::optional<double> fp_segment_threshold;   // "auto" when empty
    double fp_segment_threshold_factor = 0.1;
    double fp_smoothing_sigma = 1.0;
    double fp_gabor_f0 = 1.0 / 9.0;
    double fp_gabor_sigma_x = 4.0;
    double fp_gabor_sigma_y = 4.0;

    double iris_canny_sigma = 2.0;
    double iris_canny_high_percentile = 0.7;
    double iris_canny_low_ratio = 0.4;
    int iris_pupil_r_min = 15;
    int iris_pupil_r_max = 35;
    int iris_r_min = 40;
    int iris_r_max = 80;
    int iris_centre_tolerance = 10;
    double iris_min_circle_support = 0.3;
    double iris_eyelash_threshold = 60.0;
    double iris_reflection_threshold = 250.0;
    double iris_eyelid_min_fraction = 0.4;
    int iris_radial_res = 20;
    int iris_angular_res = 240;
    double iris_log_gabor_f0 = 1.0 / 18.0;
    double iris_log_gabor_sigma_ratio = 0.5;

    std::uint64_t fusion_big_m = 1'000'007;
    double fusion_quant_scale = 1e4;
    int fusion_bit_width = 16;

    // set() range-checks the single value; validate() adds the cross-key
    // constraints. Both throw InvalidParameter naming the key.
    void set(const std::string& key, const std::string& value);
    std::string get(const std::string& key) const;
    void validate() const;

    static std::vector<std::string> keys();
    static PipelineConfig parse(const std::string& text);
    static PipelineConfig load(const std::string& path);
    // Canonical form: every key in schema order, shortest round-trip numbers.
    std::string serialize() const;

    iris::LocalizeParams localize_params() const;
    iris::NoiseParams noise_params() const;
    fingerprint::EnhanceParams enhance_params() const;

    bool operator==(const PipelineConfig&) const = default;
};

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
};

struct RunReport {
    std::vector<StageTiming> timings;
    std::size_t minutiae = 0;      // n
    std::size_t coefficients = 0;  // m
    std::size_t distinct = 0;      // d
    keygen::CryptoKey key;
    std::vector<std::string> artifacts;
};

// Stage-by-stage extraction. When dump_dir is set, intermediate artifacts
// are written there and their paths appended to `report`.
fingerprint::MinutiaeSet extract_fingerprint(const GrayImage& img, const PipelineConfig& cfg,
                                             const std::optional<std::string>& dump_dir, RunReport& report);
iris::IrisTexture extract_iris(const GrayImage& img, const PipelineConfig& cfg,
                               const std::optional<std::string>& dump_dir, RunReport& report);

// Fusion and key derivation from already extracted features.
keygen::CryptoKey derive_from_features(const fingerprint::MinutiaeSet& minutiae, const iris::IrisTexture& texture,
                                       const PipelineConfig& cfg, RunReport& report);

RunReport run_pipeline(const GrayImage& fingerprint_img, const GrayImage& iris_img, const PipelineConfig& cfg,
                       const std::optional<std::string>& dump_dir = std::nullopt);

RunReport run_pipeline(const std::string& fingerprint_path, const std::string& iris_path, const PipelineConfig& cfg,
                       const std::optional<std::string>& dump_dir = std::nullopt);

}  // namespace biokey
