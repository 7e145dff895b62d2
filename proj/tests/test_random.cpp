// SPDX-License-Identifier: Apache-2.0
//
// spider-ris: movable RIS assisted mmWave hybrid beamforming simulator
// Copyright (C) 2026 The spider-ris authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <catch_amalgamated.hpp>

#include "spider_ris/random.hpp"

#include <cmath>
#include <set>

using spider_ris::RandomStream;

TEST_CASE("RandomStream - Same seed, same sequence")
{
    RandomStream a(42), b(42);
    for (int i = 0; i < 1000; ++i)
        REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("RandomStream - Split leaves the parent untouched")
{
    RandomStream a(7);
    auto before = a.counter();
    auto c1 = a.split(3);
    auto c2 = a.split(3);
    CHECK(a.counter() == before);
    CHECK(c1.key() == c2.key());
    CHECK(a.split(3).key() != a.split(4).key());
    CHECK(a.split(3).key() != a.key());
}

TEST_CASE("RandomStream - Children of different tags do not collide")
{
    RandomStream root(1);
    std::set<std::uint64_t> first;
    for (std::uint64_t t = 0; t < 2000; ++t)
        first.insert(root.split(t).next_u64());
    CHECK(first.size() == 2000);
}

TEST_CASE("RandomStream - Uniform range and moments")
{
    RandomStream r(11);
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i)
    {
        double u = r.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        s += u;
        s2 += u * u;
    }
    CHECK(s / n == Catch::Approx(0.5).margin(0.005));
    CHECK(s2 / n - (s / n) * (s / n) == Catch::Approx(1.0 / 12.0).margin(0.002));

    for (int i = 0; i < 1000; ++i)
    {
        double u = r.uniform(-2.0, 3.0);
        REQUIRE(u >= -2.0);
        REQUIRE(u < 3.0);
    }
}

TEST_CASE("RandomStream - Complex normal has unit power")
{
    RandomStream r(5);
    const int n = 100000;
    double p = 0.0, re = 0.0, im = 0.0;
    for (int i = 0; i < n; ++i)
    {
        auto z = r.complex_normal();
        p += std::norm(z);
        re += z.real();
        im += z.imag();
    }
    CHECK(p / n == Catch::Approx(1.0).margin(0.02));
    CHECK(std::abs(re / n) < 0.01);
    CHECK(std::abs(im / n) < 0.01);
}
