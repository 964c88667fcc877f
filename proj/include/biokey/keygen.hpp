// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace biokey::keygen {

inline constexpr std::size_t kDefaultKeyBits = 256;

class CryptoKey {
public:
    CryptoKey() = default;
    explicit CryptoKey(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {}

    std::size_t size() const noexcept { return bits_.size(); }
    std::span<const std::uint8_t> bits() const noexcept { return bits_; }

    // ASCII '0'/'1', bit 1 first.
    std::string to_bitstring() const;
    // Bit 1 is the most significant bit of byte 0; a partial last byte is
    // zero-padded in its low bits.
    std::vector<std::uint8_t> to_bytes() const;
    std::string to_hex() const;

    bool operator==(const CryptoKey&) const = default;

private:
    std::vector<std::uint8_t> bits_;
};

// Duplicates removed, first occurrence kept.
std::vector<std::uint32_t> distinct(std::span<const std::uint32_t> bt);

// Truncate to the first k values, or pad with round_half_up(mean) to length k.
std::vector<std::uint32_t> resize(std::span<const std::uint32_t> u, std::size_t k);

CryptoKey derive_key(std::span<const std::uint32_t> b);

CryptoKey generate_key(std::span<const std::uint32_t> bt, std::size_t k = kDefaultKeyBits);

}  // namespace biokey::keygen
