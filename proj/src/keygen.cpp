// SPDX-License-Identifier: Apache-2.0
#include "biokey/keygen.hpp"

#include <unordered_set>

#include "biokey/error.hpp"

namespace biokey::keygen {

std::string CryptoKey::to_bitstring() const {
    std::string s;
    s.reserve(bits_.size());
    for (auto b : bits_) s.push_back(b ? '1' : '0');
    return s;
}

std::vector<std::uint8_t> CryptoKey::to_bytes() const {
    std::vector<std::uint8_t> out((bits_.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    return out;
}

std::string CryptoKey::to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string s;
    for (auto byte : to_bytes()) {
        s.push_back(kDigits[byte >> 4]);
        s.push_back(kDigits[byte & 0xF]);
    }
    return s;
}

std::vector<std::uint32_t> distinct(std::span<const std::uint32_t> bt) {
    std::vector<std::uint32_t> out;
    std::unordered_set<std::uint32_t> seen;
    for (auto v : bt)
        if (seen.insert(v).second) out.push_back(v);
    return out;
}

std::vector<std::uint32_t> resize(std::span<const std::uint32_t> u, std::size_t k) {
    if (u.empty()) throw InvalidInput("resize: empty distinct vector");
    if (k == 0) throw InvalidParameter("resize: key length must be at least 1");
    if (u.size() >= k) return {u.begin(), u.begin() + static_cast<std::ptrdiff_t>(k)};

    std::uint64_t sum = 0;
    for (auto v : u) sum += v;
    const std::uint64_t d = u.size();
    const auto mean = static_cast<std::uint32_t>((2 * sum + d) / (2 * d));
    std::vector<std::uint32_t> out(u.begin(), u.end());
    out.resize(k, mean);
    return out;
}

CryptoKey derive_key(std::span<const std::uint32_t> b) {
    std::vector<std::uint8_t> bits(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) bits[i] = static_cast<std::uint8_t>(b[i] % 2);
    return CryptoKey(std::move(bits));
}

CryptoKey generate_key(std::span<const std::uint32_t> bt, std::size_t k) {
    if (bt.empty()) throw InvalidInput("generate_key: empty template");
    return derive_key(resize(distinct(bt), k));
}

}  // namespace biokey::keygen
