// Copyright 2026 The sparserl Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sparserl/common/binary_io.hpp"

#include <fstream>
#include <iterator>

#include "sparserl/common/errors.hpp"

namespace sparserl {

std::uint64_t BinaryReader::get(int width) {
  if (remaining() < static_cast<std::size_t>(width)) {
    throw ParseError("unexpected end of data", offset_);
  }
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[offset_ + i])) << (8 * i);
  }
  offset_ += width;
  return v;
}

std::uint8_t BinaryReader::u8() { return static_cast<std::uint8_t>(get(1)); }

std::string_view BinaryReader::raw(std::size_t n) {
  if (remaining() < n) throw ParseError("unexpected end of data", offset_);
  auto out = bytes_.substr(offset_, n);
  offset_ += n;
  return out;
}

std::uint64_t BinaryReader::length(std::size_t element_size) {
  const std::uint64_t at = offset_;
  const std::uint64_t n = u64();
  if (element_size != 0 && n > remaining() / element_size) {
    throw ParseError("length field exceeds remaining data", at);
  }
  return n;
}

std::string BinaryReader::str() {
  const auto n = length(1);
  return std::string(raw(n));
}

std::vector<double> BinaryReader::f64s() {
  const auto n = length(8);
  std::vector<double> out(n);
  for (auto& v : out) v = f64();
  return out;
}

std::vector<std::uint8_t> BinaryReader::u8s() {
  const auto n = length(1);
  std::vector<std::uint8_t> out(n);
  for (auto& v : out) v = u8();
  return out;
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace sparserl
