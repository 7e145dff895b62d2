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

#include "spider_ris/beamforming.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

using namespace spider_ris;
using Catch::Approx;

namespace
{
    constexpr double pi = std::numbers::pi;
    constexpr double deg = pi / 180.0;

    CMatrix random_matrix(int r, int c, RandomStream &rng)
    {
        CMatrix m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j)
                m(i, j) = rng.complex_normal();
        return m;
    }

    // Independent rate: eigenvalues of W^{-1/2} S W^{-1/2}.
    double eigen_rate(const BeamformerSet &set, const CMatrix &h, double noise)
    {
        CMatrix g = set.b2 * h * set.b1;
        CMatrix s = g * g.adjoint();
        CMatrix c = set.b2 * set.f2;
        CMatrix w = noise * c * c.adjoint();
        Eigen::SelfAdjointEigenSolver<CMatrix> we(w);
        Eigen::VectorXd inv = we.eigenvalues().cwiseSqrt().cwiseInverse();
        CMatrix w_inv_sqrt = we.eigenvectors() * inv.asDiagonal() * we.eigenvectors().adjoint();
        CMatrix t = w_inv_sqrt * s * w_inv_sqrt;
        Eigen::SelfAdjointEigenSolver<CMatrix> te(0.5 * (t + t.adjoint()));
        double r = 0.0;
        for (int i = 0; i < te.eigenvalues().size(); ++i)
            r += std::log2(1.0 + std::max(0.0, te.eigenvalues()(i)));
        return r;
    }

    struct Instance
    {
        RfStages rf;
        CMatrix h;
    };

    Instance random_instance(RandomStream &rng)
    {
        ArrayDims tx{2 + int(rng.uniform() * 7), 2 + int(rng.uniform() * 7)};
        ArrayDims rx{2 + int(rng.uniform() * 7), 2 + int(rng.uniform() * 7)};
        Direction dt{rng.uniform(0.0, 1.5), rng.uniform(-pi, pi)};
        Direction dr{rng.uniform(0.0, 1.5), rng.uniform(-pi, pi)};
        AngularSpread sp{rng.uniform(2.0, 20.0) * deg, rng.uniform(2.0, 20.0) * deg};
        LinkSupports sup{AngleSupport::from_mean(dt, sp), AngleSupport::from_mean(dr, sp)};
        Instance in;
        in.rf = design_rf(sup, tx, rx, 0.5, {2, 16});
        in.h = random_matrix(rx.count(), tx.count(), rng) * 1e-4;
        return in;
    }
}

TEST_CASE("Beamforming - Quantized grid")
{
    auto g = build_grid(8, 1);
    REQUIRE(g.x.size() == 8);
    const double expect[] = {-0.875, -0.625, -0.375, -0.125, 0.125, 0.375, 0.625, 0.875};
    for (int i = 0; i < 8; ++i)
        CHECK(g.x[std::size_t(i)] == Approx(expect[i]).margin(1e-15));
    CHECK(g.y == std::vector<double>{0.0});
    CHECK(build_grid(2, 2).x == std::vector<double>{-0.5, 0.5});
    CHECK(build_grid(1, 1).x == std::vector<double>{0.0});
}

TEST_CASE("Beamforming - Beam vectors")
{
    CVector f = beam_vector({0.0, 0.0}, {8, 8}, 0.5);
    for (int i = 0; i < 64; ++i)
        CHECK(std::abs(f(i) - std::complex<double>(0.125, 0.0)) < 1e-15);

    auto g = build_grid(8, 8);
    std::vector<CVector> beams;
    for (double x : g.x)
        for (double y : g.y)
            if (x * x + y * y <= 1.0)
                beams.push_back(beam_vector({x, y}, {8, 8}, 0.5));
    for (const auto &b : beams)
        for (int i = 0; i < b.size(); ++i)
            REQUIRE(std::abs(std::abs(b(i)) - 0.125) <= 4e-16 * 0.125);
    for (std::size_t i = 0; i < beams.size(); ++i)
        for (std::size_t j = 0; j < beams.size(); ++j)
        {
            double c = std::abs(beams[i].dot(beams[j]));
            if (i == j)
                REQUIRE(c == Approx(1.0).epsilon(1e-14));
            else
                REQUIRE(c < 1e-13); // grid steps are multiples of 2 / M at half-wavelength spacing
        }

    // Off-grid directions are correlated but not identical.
    double c = std::abs(beam_vector({0.1, 0.0}, {8, 8}, 0.5).dot(beam_vector({0.125, 0.0}, {8, 8}, 0.5)));
    CHECK(c > 0.0);
    CHECK(c < 1.0);

    CHECK_THROWS_AS(beam_vector({0.9, 0.9}, {4, 4}, 0.5), InvalidBeam);

    // A beam on the same direction collects the full array gain of the steering vector.
    double el = 0.6, az = 0.9;
    BeamPair b{std::sin(el) * std::cos(az), std::sin(el) * std::sin(az)};
    CHECK(std::abs((beam_vector(b, {4, 6}, 0.5).transpose() * steering_vector(el, az, {4, 6}, 0.5)).value()) ==
          Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Beamforming - Beam selection limits")
{
    auto g = build_grid(8, 8);
    RfChainPolicy policy{2, 16};

    // Whole disk: every visible cell intersects, truncated to the policy maximum.
    AngleSupport whole = AngleSupport::from_mean({0.0, 0.0}, {pi / 2.0, pi});
    CHECK(whole.contains(0.9, 0.0));
    CHECK(whole.contains(0.0, -0.5));
    auto all = select_beams(g, whole, policy);
    CHECK(all.size() == 16);
    auto wide = select_beams(g, whole, {2, 64});
    int visible = 0;
    for (double x : g.x)
        for (double y : g.y)
            visible += x * x + y * y <= 1.0;
    CHECK(int(wide.size()) == visible);
    for (const auto &b : wide)
        CHECK(b.x * b.x + b.y * b.y <= 1.0);

    // Point support on a grid point: that pair, then the nearest visible fill.
    double u = 0.375, v = 0.125;
    Direction d{std::asin(std::hypot(u, v)), std::atan2(v, u)};
    auto point = select_beams(g, AngleSupport::from_mean(d, {0.0, 0.0}), policy);
    REQUIRE(point.size() == 2);
    CHECK(point[0].x == Approx(u));
    CHECK(point[0].y == Approx(v));
    CHECK(std::hypot(point[1].x - u, point[1].y - v) == Approx(0.25));
}

TEST_CASE("Beamforming - default-geometry beam selection against dense sampling")
{
    Scenario s = default_config();
    Vec3 ris = s.geometry.platform_center();
    auto link = mean_angles_from_geometry(s.geometry.tx_position, ris, ArrayFacing::up, ArrayFacing::down);
    AngularSpread sp{10 * deg, 10 * deg};
    AngleSupport support = AngleSupport::from_mean(link.departure, sp);
    auto g = build_grid(8, 8);
    auto beams = select_beams(g, support, s.config.rf_chains);

    // Cells hit by a dense sampling of the angle rectangle.
    std::set<std::pair<int, int>> hit;
    const int n = 801;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
        {
            double el = link.departure.elevation + sp.elevation * (2.0 * i / (n - 1) - 1.0);
            double az = link.departure.azimuth + sp.azimuth * (2.0 * j / (n - 1) - 1.0);
            double x = std::sin(el) * std::cos(az), y = std::sin(el) * std::sin(az);
            int cx = std::clamp(int(std::floor((x + 1.0) * 4.0)), 0, 7);
            int cy = std::clamp(int(std::floor((y + 1.0) * 4.0)), 0, 7);
            double gx = g.x[std::size_t(cx)], gy = g.y[std::size_t(cy)];
            if (gx * gx + gy * gy <= 1.0)
                hit.insert({cx, cy});
        }

    std::set<std::pair<int, int>> chosen;
    for (const auto &b : beams)
        chosen.insert({int(std::lround((b.x + 0.875) * 4.0)), int(std::lround((b.y + 0.875) * 4.0))});
    CHECK(chosen.size() == beams.size());
    REQUIRE_FALSE(hit.empty());
    const auto &policy = s.config.rf_chains;
    CHECK(beams.size() == std::clamp(hit.size(), std::size_t(policy.min_chains), std::size_t(policy.max_chains)));
    if (hit.size() <= std::size_t(policy.max_chains))
        for (const auto &c : hit)
        {
            INFO("cell " << c.first << "," << c.second);
            CHECK(chosen.count(c) == 1);
        }
    // Fills beyond the intersecting cells sit next to the anchor.
    for (std::size_t i = hit.size(); i < beams.size(); ++i)
        CHECK(std::hypot(beams[i].x - support.anchor().x, beams[i].y - support.anchor().y) < 0.5);

    // Frozen after the sampling check above passed.
    const std::vector<BeamPair> golden = {{0.625, 0.625}, {0.625, 0.375}};
    REQUIRE(beams.size() == golden.size());
    for (std::size_t i = 0; i < golden.size(); ++i)
    {
        CHECK(beams[i].x == Approx(golden[i].x).margin(1e-15));
        CHECK(beams[i].y == Approx(golden[i].y).margin(1e-15));
    }
}

TEST_CASE("Beamforming - Singular value decomposition")
{
    auto zero = decompose(CMatrix::Zero(3, 4));
    CHECK(zero.sigma.size() > 0);
    CHECK(zero.sigma.maxCoeff() == 0.0);
    CHECK(zero.rank == 0);

    CMatrix one(1, 1);
    one(0, 0) = {3.0, -4.0};
    auto e1 = decompose(one);
    CHECK(e1.sigma(0) == Approx(5.0));

    RandomStream rng(17);
    for (int k = 0; k < 50; ++k)
    {
        CMatrix h = random_matrix(2 + k % 5, 1 + k % 7, rng);
        auto e = decompose(h);
        CMatrix rebuilt = e.u * e.sigma.cast<std::complex<double>>().asDiagonal() * e.v.adjoint();
        REQUIRE((rebuilt - h).norm() < 1e-9 * std::max(1.0, h.norm()));
        for (int i = 1; i < e.sigma.size(); ++i)
            REQUIRE(e.sigma(i) <= e.sigma(i - 1));
        // Phase convention: first non-negligible entry of each right vector is real positive.
        for (int j = 0; j < e.v.cols(); ++j)
        {
            int i = 0;
            while (std::abs(e.v(i, j)) < 1e-12)
                ++i;
            REQUIRE(std::abs(e.v(i, j).imag()) < 1e-12);
            REQUIRE(e.v(i, j).real() > 0.0);
        }
    }
}

TEST_CASE("Beamforming - Baseband stage")
{
    auto id = decompose(CMatrix::Identity(2, 2));
    auto bb = bb_stages(id, 2.0, 2);
    CHECK(bb.streams == 2);
    CHECK_FALSE(bb.rank_deficient);
    for (int j = 0; j < 2; ++j)
    {
        CHECK(std::abs(bb.b1.col(j).norm() - 1.0) < 1e-14);
        CHECK(std::abs(std::abs(bb.b1(j, j)) - 1.0) < 1e-14);
        CHECK(std::abs(std::abs(bb.b2(j, j)) - 1.0) < 1e-14);
    }

    CMatrix r1 = CMatrix::Zero(3, 3);
    r1(0, 0) = 1.0;
    auto def = bb_stages(decompose(r1), 1.0, 2);
    CHECK(def.rank_deficient);
    CHECK(def.streams == 1);

    RandomStream rng(23);
    for (int k = 0; k < 100; ++k)
    {
        Instance in = random_instance(rng);
        double p = std::pow(10.0, rng.uniform(-3.0, 2.0));
        HybridDesign d = design_hybrid(in.h, in.rf, p, 2, 1e-12);

        // C1 on the RF stages.
        double m1 = 1.0 / std::sqrt(double(in.rf.f1.rows())), m2 = 1.0 / std::sqrt(double(in.rf.f2.cols()));
        REQUIRE(((in.rf.f1.cwiseAbs().array() - m1).abs() <= 4e-16 * m1).all());
        REQUIRE(((in.rf.f2.cwiseAbs().array() - m2).abs() <= 4e-16 * m2).all());
        // C2.
        REQUIRE(std::abs((d.beams.f1 * d.beams.b1).squaredNorm() - p) < 1e-9 * p);

        // Diagonalisation.
        CMatrix g = d.beams.b2 * d.eff.h * d.beams.b1;
        double diag = 0.0, off = 0.0;
        for (int i = 0; i < g.rows(); ++i)
            for (int j = 0; j < g.cols(); ++j)
                (i == j ? diag : off) += std::norm(g(i, j));
        REQUIRE(off < 1e-8 * diag);
    }
}

TEST_CASE("Beamforming - Achievable rate")
{
    RandomStream rng(29);

    // Zero channel.
    {
        Instance in = random_instance(rng);
        HybridDesign d = design_hybrid(CMatrix::Zero(in.h.rows(), in.h.cols()), in.rf, 1.0, 2, 1e-12);
        CHECK(d.rate.bits_per_hz == 0.0);
    }

    // Scalar case reduces to log2(1 + P sigma^2 / noise).
    {
        RfStages rf{CMatrix::Ones(1, 1), CMatrix::Ones(1, 1)};
        CMatrix h(1, 1);
        h(0, 0) = {0.3, 0.4};
        HybridDesign d = design_hybrid(h, rf, 2.0, 1, 0.1);
        CHECK(d.rate.bits_per_hz == Approx(std::log2(1.0 + 2.0 * 0.25 / 0.1)).epsilon(1e-13));
    }

    // Independent eigenvalue evaluation and invariances.
    for (int k = 0; k < 100; ++k)
    {
        Instance in = random_instance(rng);
        double p = std::pow(10.0, rng.uniform(-3.0, 2.0));
        HybridDesign d = design_hybrid(in.h, in.rf, p, 2, 1e-12);
        double r = d.rate.bits_per_hz;
        REQUIRE(std::abs(r - eigen_rate(d.beams, d.eff.h, 1e-12)) < 1e-8);

        BeamformerSet turned = d.beams;
        std::complex<double> ph = std::polar(1.0, rng.uniform(0.0, 2.0 * pi));
        turned.b1.col(0) *= ph;
        turned.b2.row(0) *= std::conj(ph);
        REQUIRE(std::abs(achievable_rate(turned, d.eff.h, 1e-12).bits_per_hz - r) < 1e-9);

        double r2 = design_hybrid(in.h, in.rf, 2.0 * p, 2, 1e-12).rate.bits_per_hz;
        REQUIRE(r2 >= r);
    }

    // High SNR: doubling P_T adds about N_S bits.
    {
        Instance in = random_instance(rng);
        HybridDesign lo = design_hybrid(in.h, in.rf, 1e6, 2, 1e-12);
        REQUIRE(lo.streams == 2);
        double s2 = lo.eff.sigma(1) * lo.eff.sigma(1) * 1e6 / 2.0 / 1e-12;
        REQUIRE(s2 > 1e3);
        HybridDesign hi = design_hybrid(in.h, in.rf, 2e6, 2, 1e-12);
        CHECK(hi.rate.bits_per_hz - lo.rate.bits_per_hz == Approx(2.0).margin(0.01));
    }
}
