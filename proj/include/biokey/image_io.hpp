// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "biokey/image.hpp"

namespace biokey {

// Loads an 8-bit grayscale image. Binary PGM (P5, maxval <= 255) and PNG
// are recognised by their magic bytes; PNG input is converted to gray.
GrayImage read_image(const std::string& path);

GrayImage decode_pgm(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> encode_pgm(const GrayImage& img);

void write_pgm(const std::string& path, const GrayImage& img);
// 1 -> 255, 0 -> 0
void write_pgm(const std::string& path, const BinaryImage& img);

}  // namespace biokey
