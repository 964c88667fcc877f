// SPDX-License-Identifier: Apache-2.0
//
// Feature-level fusion of minutiae coordinates and iris texture
// coefficients: seeded shuffling, insertion-based concatenation and an
// elementwise NOR merge into the multimodal template.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "biokey/fingerprint.hpp"
#include "biokey/iris.hpp"

namespace biokey::fusion {

using Vector = std::vector<std::uint32_t>;

inline constexpr int kDefaultBitWidth = 16;
inline constexpr std::uint64_t kDefaultBigM = 1'000'007;
inline constexpr double kDefaultQuantScale = 1e4;

// SplitMix64. Outputs map to [0, 1) as (z >> 11) * 2^-53. See
// docs/shuffle-generator.md for reference vectors.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    double next_unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    std::vector<double> draw(std::size_t n);

private:
    std::uint64_t state_;
};

struct FeatureVectors {
    Vector f1;  // minutia x
    Vector f2;  // minutia y
    Vector i1;  // quantised real parts
    Vector i2;  // quantised imaginary parts
};

struct FusionParams {
    std::uint64_t seed = 0;
    std::uint64_t big_m = kDefaultBigM;
    int bit_width = kDefaultBitWidth;
    double quant_scale = kDefaultQuantScale;
};

struct FusionState {
    Vector s1, s2, s3, s4;
    Vector m1, m2;
    Vector bt;
};

std::uint32_t width_mask(int bit_width);

// round(v * scale) reduced modulo 2^w into [0, 2^w).
std::uint32_t quantize(double v, double scale, int bit_width);

FeatureVectors build_feature_vectors(const fingerprint::MinutiaeSet& minutiae, const iris::IrisTexture& texture,
                                     double quant_scale = kDefaultQuantScale, int bit_width = kDefaultBitWidth);

// In-place order: for each i, j = floor(rand[i] * big_m) mod |v|, swap v[i], v[j].
Vector shuffle(Vector v, std::span<const double> rand, std::uint64_t big_m);

// FNV-1a 64 over the elements as 4-byte little-endian words.
std::uint64_t hash_vector(std::span<const std::uint32_t> v) noexcept;

// Fresh [0,1) vector of length n from a generator seeded with hash_vector(prior).
std::vector<double> derive_random(std::span<const std::uint32_t> prior, std::size_t n);

// Populates s1..s4.
FusionState shuffle_all(const FeatureVectors& fv, std::uint64_t seed, std::uint64_t big_m = kDefaultBigM);

Vector concatenate(std::span<const std::uint32_t> fp, std::span<const std::uint32_t> ir);

Vector merge(std::span<const std::uint32_t> m1, std::span<const std::uint32_t> m2, int bit_width = kDefaultBitWidth);

// shuffle_all -> concatenate (S1,S3), (S2,S4) -> merge.
FusionState fuse(const FeatureVectors& fv, const FusionParams& params);

}  // namespace biokey::fusion
