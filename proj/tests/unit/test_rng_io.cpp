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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "sparserl/common/binary_io.hpp"
#include "sparserl/common/errors.hpp"
#include "sparserl/common/rng.hpp"

using namespace sparserl;

TEST(Rng, SameSeedAndLabelReplay) {
  RngStream a(42, "env");
  RngStream b(42, "env");
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
}

TEST(Rng, LabelsGiveDifferentStreams) {
  RngStream a(42, "member/0/init");
  RngStream b(42, "member/1/init");
  int equal = 0;
  for (int i = 0; i < 1000; ++i) equal += a() == b();
  EXPECT_EQ(equal, 0);
  // Weak independence check: correlation of paired uniforms near zero.
  RngStream c(1, "x");
  RngStream d(1, "y");
  double sxy = 0, sx = 0, sy = 0, sxx = 0, syy = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = c.uniform(), y = d.uniform();
    sxy += x * y, sx += x, sy += y, sxx += x * x, syy += y * y;
  }
  const double cov = sxy / n - (sx / n) * (sy / n);
  const double corr = cov / std::sqrt((sxx / n - sx * sx / n / n) * (syy / n - sy * sy / n / n));
  EXPECT_LT(std::abs(corr), 0.03);
}

TEST(Rng, SaveRestoreResumesExactly) {
  RngStream a(7, "sample");
  for (int i = 0; i < 123; ++i) a();
  const auto saved = a.save_state();
  std::vector<std::uint64_t> expect;
  for (int i = 0; i < 50; ++i) expect.push_back(a());
  RngStream b(7, "sample");
  b.restore_state(saved);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(b(), expect[static_cast<std::size_t>(i)]);
}

TEST(Rng, UniformRangeAndIndexFrequencies) {
  RngStream rng(3, "u");
  std::vector<int> counts(6, 0);
  const int n = 60000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ++counts[rng.uniform_index(6)];
  }
  // Chi-square with 5 degrees of freedom, 0.001 critical value 20.5.
  double chi = 0.0;
  for (int c : counts) chi += (c - n / 6.0) * (c - n / 6.0) / (n / 6.0);
  EXPECT_LT(chi, 20.5);
}

TEST(Rng, NormalMoments) {
  RngStream rng(4, "n");
  double s = 0, ss = 0;
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s += z;
    ss += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 0.02);
  EXPECT_NEAR(ss / n, 1.0, 0.03);
}

TEST(Rng, DeriveIsDeterministic) {
  const RngStream root(9, "run");
  auto a = root.derive("env");
  auto b = root.derive("env");
  EXPECT_EQ(a(), b());
  EXPECT_EQ(a.label(), "run/env");
}

TEST(BinaryIo, RoundTripAllWidths) {
  BinaryWriter w;
  w.u8(200);
  w.u32(0xdeadbeef);
  w.u64(0x0123456789abcdefULL);
  w.i64(-5);
  w.f64(-0.1);
  w.str("hello");
  w.f64s(std::vector<double>{1.5, -2.25});
  w.u8s(std::vector<std::uint8_t>{0, 1, 1});
  BinaryReader r(w.bytes());
  EXPECT_EQ(r.u8(), 200);
  EXPECT_EQ(r.u32(), 0xdeadbeefu);
  EXPECT_EQ(r.u64(), 0x0123456789abcdefULL);
  EXPECT_EQ(r.i64(), -5);
  EXPECT_EQ(r.f64(), -0.1);
  EXPECT_EQ(r.str(), "hello");
  EXPECT_EQ(r.f64s(), (std::vector<double>{1.5, -2.25}));
  EXPECT_EQ(r.u8s(), (std::vector<std::uint8_t>{0, 1, 1}));
  EXPECT_TRUE(r.at_end());
}

TEST(BinaryIo, LittleEndianLayout) {
  BinaryWriter w;
  w.u32(0x01020304);
  EXPECT_EQ(w.bytes(), std::string("\x04\x03\x02\x01", 4));
}

TEST(BinaryIo, TruncationReportsOffset) {
  BinaryWriter w;
  w.u32(1);
  w.u64(99);
  const std::string cut = w.bytes().substr(0, 7);
  BinaryReader r(cut);
  r.u32();
  try {
    r.u64();
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 4u);
  }
}

TEST(BinaryIo, OversizedLengthPrefixIsRejected) {
  BinaryWriter w;
  w.u64(1ULL << 40);
  w.f64(1.0);
  BinaryReader r(w.bytes());
  EXPECT_THROW(r.f64s(), ParseError);
}
