// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "biokey/keygen.hpp"
#include "oracles.hpp"

using namespace biokey;
using namespace biokey::keygen;
using V = std::vector<std::uint32_t>;

TEST_CASE("distinct keeps first occurrences") {
    CHECK(distinct(V{5, 5, 5}) == V{5});
    CHECK(distinct(V{3, 1, 3, 2, 1}) == V{3, 1, 2});
    std::mt19937 rng(41);
    std::uniform_int_distribution<std::uint32_t> d(0, 700);
    for (int t = 0; t < 20; ++t) {
        V v(1000);
        for (auto& e : v) e = d(rng);
        CHECK(distinct(v) == oracle::dedupe(v));
    }
}

TEST_CASE("resize truncates or pads with the rounded mean") {
    V u(300);
    for (std::uint32_t i = 0; i < 300; ++i) u[i] = i * 7;
    CHECK(resize(u, 256) == V(u.begin(), u.begin() + 256));
    CHECK(resize(u, 300) == u);
    CHECK(resize(V{1, 2, 3}, 6) == V{1, 2, 3, 2, 2, 2});
    CHECK(resize(V{1, 2}, 3) == V{1, 2, 2});  // 1.5 rounds up
    CHECK_THROWS_AS(resize(V{}, 3), InvalidInput);
    CHECK_THROWS_AS(resize(V{1}, 0), InvalidParameter);
}

TEST_CASE("derive_key takes parities") {
    CHECK(derive_key(V{2, 4, 6, 8}).to_bitstring() == "0000");
    CHECK(derive_key(V{1, 2, 3, 4}).to_bitstring() == "1010");
    std::mt19937 rng(42);
    V b(256);
    for (auto& e : b) e = rng() & 0xFFFF;
    const auto key = derive_key(b);
    const auto bits = oracle::parity(b);
    for (std::size_t i = 0; i < 256; ++i) CHECK(key.bits()[i] == bits[i]);
}

TEST_CASE("generate_key composes the stages") {
    CHECK(generate_key(V{2, 2, 4}, 4).to_bitstring() == "0011");
    CHECK(generate_key(V{9}).size() == 256);
    CHECK(generate_key(V{3, 8, 8, 1}) == generate_key(V{3, 8, 8, 1}));
    CHECK_THROWS_AS(generate_key(V{}), InvalidInput);
    // padding copies the mean, so the tail bits are constant
    const auto k = generate_key(V{1, 4, 6, 9, 12}, 64);
    for (std::size_t i = 6; i < 64; ++i) CHECK(k.bits()[i] == k.bits()[5]);
}

TEST_CASE("key encodings: MSB-first bytes and lowercase hex") {
    const CryptoKey k(std::vector<std::uint8_t>{1, 0, 1, 0, 1, 1, 1, 1, 1, 1});
    CHECK(k.to_bytes() == std::vector<std::uint8_t>{0xAF, 0xC0});
    CHECK(k.to_hex() == "afc0");
    V b(256, 1);
    const auto full = derive_key(b);
    CHECK(full.to_hex() == std::string(64, 'f'));
    CHECK(full.to_bytes().size() == 32);
}
