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

#include "spider_ris/channel.hpp"
#include "spider_ris/scenario.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace spider_ris
{
    class InvalidBeam : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // A beam direction in directional-cosine space: (sin(el) cos(az), sin(el) sin(az)).
    struct BeamPair
    {
        double x = 0.0;
        double y = 0.0;

        bool operator==(const BeamPair &) const = default;
    };

    // Quantized angle pairs lambda_u = -1 + (2u - 1) / M for u = 1..M, per axis.
    struct QuantizedGrid
    {
        std::vector<double> x;
        std::vector<double> y;

        [[nodiscard]] double cell_half_width_x() const { return 1.0 / double(x.size()); }
        [[nodiscard]] double cell_half_width_y() const { return 1.0 / double(y.size()); }
    };

    QuantizedGrid build_grid(int mx, int my);

    // Image of [el - d_el, el + d_el] x [az - d_az, az + d_az] in directional-cosine space. It is a
    // union of annular sectors: elevations past the boresight fold onto the opposite azimuth.
    class AngleSupport
    {
    public:
        struct Sector
        {
            double r_min = 0.0;
            double r_max = 0.0;
            double az_min = 0.0; // azimuth interval start
            double az_span = 0.0; // >= 2 pi means the full circle
        };

        static AngleSupport from_mean(Direction mean, AngularSpread spread);

        [[nodiscard]] bool contains(double u, double v) const;
        [[nodiscard]] bool intersects_cell(double x_min, double x_max, double y_min, double y_max) const;
        // Midpoint-rule estimate of the cell area inside the support.
        [[nodiscard]] double overlap_area(double x_min, double x_max, double y_min, double y_max, int samples = 16) const;
        // Directional cosine of the mean direction.
        [[nodiscard]] BeamPair anchor() const { return anchor_; }
        [[nodiscard]] const std::vector<Sector> &sectors() const { return sectors_; }
        [[nodiscard]] bool empty() const { return sectors_.empty(); }

    private:
        std::vector<Sector> sectors_;
        BeamPair anchor_;
    };

    // Grid pairs whose cell intersects the support, ordered by decreasing overlap area (ties by
    // grid index), truncated to policy.max_chains. Pairs outside the unit disk are never used.
    // When fewer than policy.min_chains intersect, the visible pairs nearest to the support anchor
    // fill the deficit.
    std::vector<BeamPair> select_beams(const QuantizedGrid &grid, const AngleSupport &support, RfChainPolicy policy);

    // Unit-norm beam column e^{+j 2 pi d (mx x + my y)} / sqrt(M). Throws InvalidBeam outside
    // the unit disk.
    CVector beam_vector(const BeamPair &beam, ArrayDims dims, double spacing);

    struct RfStages
    {
        CMatrix f1; // M_1 x N_RF1, columns are transmit beams
        CMatrix f2; // N_RF2 x M_2, rows are receive beams
    };

    RfStages rf_stages(const std::vector<BeamPair> &beams_tx, const std::vector<BeamPair> &beams_rx,
                       ArrayDims tx, ArrayDims rx, double spacing);

    struct EffectiveChannel
    {
        CMatrix h;             // F2 H F1
        CMatrix u;             // left singular vectors, N_RF2 x k
        Eigen::VectorXd sigma; // non-increasing
        CMatrix v;             // right singular vectors, N_RF1 x k
        int rank = 0;
    };

    // SVD with a deterministic phase: the first non-negligible entry of each right singular vector
    // is real positive.
    EffectiveChannel decompose(const CMatrix &effective);
    EffectiveChannel effective_channel(const CMatrix &f2, const CMatrix &h, const CMatrix &f1);

    struct BasebandStages
    {
        CMatrix b1; // N_RF1 x streams
        CMatrix b2; // streams x N_RF2
        int streams = 0;
        bool rank_deficient = false;
    };

    // B1 = sqrt(P_T / N) V_1, B2 = U_1^H with N = min(N_S, rank). A rank below N_S is flagged.
    BasebandStages bb_stages(const EffectiveChannel &eff, double tx_power, int num_streams);

    struct BeamformerSet
    {
        CMatrix f1;
        CMatrix b1;
        CMatrix f2;
        CMatrix b2;
    };

    struct RateEval
    {
        double bits_per_hz = 0.0;
        bool regularized = false; // noise covariance needed a ridge
    };

    // log2 det(I + W^{-1} B2 Hc B1 B1^H Hc^H B2^H), W = noise B2 F2 F2^H B2^H.
    RateEval achievable_rate(const BeamformerSet &set, const CMatrix &effective, double noise);
    RateEval achievable_rate(const BeamformerSet &set, const EffectiveChannel &eff, double noise);

    struct HybridDesign
    {
        BeamformerSet beams;
        EffectiveChannel eff;
        RateEval rate;
        int streams = 0;
        bool rank_deficient = false;
    };

    // Baseband stage and rate for a fixed RF stage and effective channel F2 H F1. B1 is rescaled so
    // that ||F1 B1||_F^2 = P_T holds even when the RF beams are not mutually orthogonal.
    HybridDesign design_baseband(const RfStages &rf, const CMatrix &effective, double tx_power, int num_streams,
                                 double noise);

    // Full angular-based hybrid design for one point-to-point channel H (M_2 x M_1).
    struct LinkSupports
    {
        AngleSupport tx;
        AngleSupport rx;
    };

    RfStages design_rf(const LinkSupports &supports, ArrayDims tx, ArrayDims rx, double spacing, RfChainPolicy policy);
    HybridDesign design_hybrid(const CMatrix &h, const RfStages &rf, double tx_power, int num_streams, double noise);
}
