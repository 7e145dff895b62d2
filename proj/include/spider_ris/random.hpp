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

#pragma once

#include <complex>
#include <cstdint>

namespace spider_ris
{
    // Counter-based splittable random stream.
    //
    // A stream is identified by a 64-bit key. Draw n of a stream is a pure function of (key, n), so
    // the whole simulator is reproducible from one seed: child streams are derived with split(tag)
    // and never share state with their parent. Output is SplitMix64-finalised, and all derived
    // distributions are implemented here so results do not depend on the standard library vendor.
    class RandomStream
    {
    public:
        using result_type = std::uint64_t;

        explicit RandomStream(std::uint64_t seed = 0) noexcept;

        // Independent child stream; the parent is not advanced.
        [[nodiscard]] RandomStream split(std::uint64_t tag) const noexcept;

        std::uint64_t next_u64() noexcept;
        std::uint64_t operator()() noexcept { return next_u64(); }
        static constexpr std::uint64_t min() noexcept { return 0; }
        static constexpr std::uint64_t max() noexcept { return ~std::uint64_t(0); }

        double uniform() noexcept;                    // [0, 1)
        double uniform(double lo, double hi) noexcept; // [lo, hi)
        double normal() noexcept;                     // N(0, 1)
        std::complex<double> complex_normal() noexcept; // CN(0, 1), E|z|^2 = 1

        [[nodiscard]] std::uint64_t key() const noexcept { return key_; }
        [[nodiscard]] std::uint64_t counter() const noexcept { return counter_; }

    private:
        RandomStream(std::uint64_t key, std::uint64_t counter) noexcept : key_(key), counter_(counter) {}

        std::uint64_t key_;
        std::uint64_t counter_ = 0;
    };

    // SplitMix64 finaliser, exposed for hashing and tests.
    std::uint64_t mix64(std::uint64_t x) noexcept;
}
