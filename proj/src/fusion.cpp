// SPDX-License-Identifier: Apache-2.0
#include "biokey/fusion.hpp"

#include <cmath>

namespace biokey::fusion {

std::vector<double> SplitMix64::draw(std::size_t n) {
    std::vector<double> out(n);
    for (auto& v : out) v = next_unit();
    return out;
}

std::uint32_t width_mask(int bit_width) {
    if (bit_width < 1 || bit_width > 32) throw InvalidParameter("bit width must be in [1, 32]");
    return bit_width == 32 ? 0xFFFFFFFFu : ((1u << bit_width) - 1u);
}

std::uint32_t quantize(double v, double scale, int bit_width) {
    const double q = std::round(v * scale);
    if (!std::isfinite(q) || std::abs(q) >= 0x1.0p62) throw InvalidInput("quantize: value out of range");
    // two's-complement wrap: the low w bits of the signed integer
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(static_cast<std::int64_t>(q))) & width_mask(bit_width);
}

FeatureVectors build_feature_vectors(const fingerprint::MinutiaeSet& minutiae, const iris::IrisTexture& texture,
                                     double quant_scale, int bit_width) {
    if (minutiae.empty()) throw StageError("insufficient features: no minutiae");
    if (texture.empty()) throw StageError("insufficient features: empty iris texture");
    const std::uint32_t mask = width_mask(bit_width);
    FeatureVectors fv;
    for (const auto& m : minutiae.minutiae) {
        fv.f1.push_back(static_cast<std::uint32_t>(m.x) & mask);
        fv.f2.push_back(static_cast<std::uint32_t>(m.y) & mask);
    }
    for (const auto& c : texture.coeffs) {
        fv.i1.push_back(quantize(c.real(), quant_scale, bit_width));
        fv.i2.push_back(quantize(c.imag(), quant_scale, bit_width));
    }
    return fv;
}

Vector shuffle(Vector v, std::span<const double> rand, std::uint64_t big_m) {
    if (rand.size() != v.size()) throw InvalidInput("shuffle: random vector length differs from input length");
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto product = static_cast<std::uint64_t>(std::floor(rand[i] * static_cast<double>(big_m)));
        const std::size_t j = static_cast<std::size_t>(product % n);
        std::swap(v[i], v[j]);
    }
    return v;
}

std::uint64_t hash_vector(std::span<const std::uint32_t> v) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint32_t e : v) {
        for (int b = 0; b < 4; ++b) {
            h ^= (e >> (8 * b)) & 0xFFu;
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

std::vector<double> derive_random(std::span<const std::uint32_t> prior, std::size_t n) {
    return SplitMix64(hash_vector(prior)).draw(n);
}

FusionState shuffle_all(const FeatureVectors& fv, std::uint64_t seed, std::uint64_t big_m) {
    if (fv.f1.empty() || fv.f1.size() != fv.f2.size() || fv.i1.empty() || fv.i1.size() != fv.i2.size()) {
        throw InvalidInput("shuffle_all: malformed feature vectors");
    }
    if (big_m == 0) throw InvalidParameter("shuffle_all: big_m must be positive");
    FusionState st;
    st.s1 = shuffle(fv.f1, SplitMix64(seed).draw(fv.f1.size()), big_m);
    st.s2 = shuffle(fv.f2, derive_random(st.s1, fv.f2.size()), big_m);
    st.s3 = shuffle(fv.i1, derive_random(st.s2, fv.i1.size()), big_m);
    st.s4 = shuffle(fv.i2, derive_random(st.s3, fv.i2.size()), big_m);
    return st;
}

Vector concatenate(std::span<const std::uint32_t> fp, std::span<const std::uint32_t> ir) {
    if (fp.empty() || ir.empty()) throw InvalidInput("concatenate: vectors must be non-empty");
    Vector m(fp.size() + ir.size(), 0);
    std::copy(ir.begin(), ir.end(), m.begin());
    std::size_t occupied = ir.size();
    for (std::uint32_t value : fp) {
        const std::size_t t = value % occupied;
        std::copy_backward(m.begin() + static_cast<std::ptrdiff_t>(t),
                           m.begin() + static_cast<std::ptrdiff_t>(occupied),
                           m.begin() + static_cast<std::ptrdiff_t>(occupied + 1));
        m[t] = value;
        ++occupied;
    }
    return m;
}

Vector merge(std::span<const std::uint32_t> m1, std::span<const std::uint32_t> m2, int bit_width) {
    if (m1.size() != m2.size()) throw InvalidInput("merge: vectors differ in length");
    const std::uint32_t mask = width_mask(bit_width);
    Vector bt(m1.size());
    for (std::size_t i = 0; i < m1.size(); ++i) bt[i] = ~(m1[i] | m2[i]) & mask;
    return bt;
}

FusionState fuse(const FeatureVectors& fv, const FusionParams& params) {
    FusionState st = shuffle_all(fv, params.seed, params.big_m);
    st.m1 = concatenate(st.s1, st.s3);
    st.m2 = concatenate(st.s2, st.s4);
    st.bt = merge(st.m1, st.m2, params.bit_width);
    return st;
}

}  // namespace biokey::fusion
