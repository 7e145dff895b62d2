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

#include "spider_ris/random.hpp"

#include <cmath>
#include <numbers>

namespace spider_ris
{
    namespace
    {
        constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;
    }

    std::uint64_t mix64(std::uint64_t x) noexcept
    {
        x ^= x >> 30;
        x *= 0xBF58476D1CE4E5B9ULL;
        x ^= x >> 27;
        x *= 0x94D049BB133111EBULL;
        x ^= x >> 31;
        return x;
    }

    RandomStream::RandomStream(std::uint64_t seed) noexcept : key_(mix64(seed ^ 0x5D1DE55EEDULL)) {}

    RandomStream RandomStream::split(std::uint64_t tag) const noexcept
    {
        // Child key depends on the parent key and the tag only.
        std::uint64_t k = mix64(key_ + golden_gamma * (tag + 1));
        k = mix64(k ^ 0xA0761D6478BD642FULL);
        return RandomStream(k, 0);
    }

    std::uint64_t RandomStream::next_u64() noexcept
    {
        ++counter_;
        return mix64(key_ + golden_gamma * counter_);
    }

    double RandomStream::uniform() noexcept
    {
        return double(next_u64() >> 11) * 0x1.0p-53;
    }

    double RandomStream::uniform(double lo, double hi) noexcept
    {
        return lo + (hi - lo) * uniform();
    }

    double RandomStream::normal() noexcept
    {
        // Box-Muller, one output per call so the draw count stays fixed.
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 0x1.0p-60)
            u1 = 0x1.0p-60;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::complex<double> RandomStream::complex_normal() noexcept
    {
        double re = normal() * std::numbers::sqrt2 * 0.5;
        double im = normal() * std::numbers::sqrt2 * 0.5;
        return {re, im};
    }
}
