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

#include "spider_ris/random.hpp"
#include "spider_ris/scenario.hpp"

#include <Eigen/Dense>

#include <complex>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

namespace spider_ris
{
    using CMatrix = Eigen::MatrixXcd;
    using CVector = Eigen::VectorXcd;

    class DegenerateGeometry : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    class DimensionMismatch : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Elevation is measured from the array boresight normal, azimuth in the global x-y plane from +x.
    struct Direction
    {
        double elevation = 0.0;
        double azimuth = 0.0;
    };

    // Tx and UE arrays lie horizontally facing the ceiling; the RIS (and relay) face the floor.
    enum class ArrayFacing
    {
        up,
        down
    };

    struct LinkGeometry
    {
        Direction departure; // at the first endpoint, pointing to the second
        Direction arrival;   // at the second endpoint, pointing back to the first
        double distance = 0.0;
    };

    // Throws DegenerateGeometry for coincident endpoints.
    LinkGeometry mean_angles_from_geometry(const Vec3 &a, const Vec3 &b,
                                           ArrayFacing facing_a = ArrayFacing::up,
                                           ArrayFacing facing_b = ArrayFacing::up);

    // URA steering vector with Euclidean norm 1. Entry (mx, my) sits at index mx * My + my and has
    // phase -2 pi d (mx sin(el) cos(az) + my sin(el) sin(az)).
    CVector steering_vector(double elevation, double azimuth, ArrayDims dims, double spacing);

    // Same phases as steering_vector(), unit modulus per entry (norm sqrt(M)).
    CVector array_response(double elevation, double azimuth, ArrayDims dims, double spacing);

    // 10^((32.4 + 20 log10(fc) + 10 eta log10(tau)) / 10)
    double path_loss_linear(double carrier_ghz, double distance_m, double exponent);

    // Power attenuation of one link under the selected model, linear scale.
    double path_loss(PathLossModel model, double carrier_ghz, double distance_m, double exponent);

    enum class LinkTag
    {
        tx_ris, // Tx -> RIS (H_TI)
        ris_rx  // RIS -> Rx (H_IR)
    };

    struct AngularSpread
    {
        double elevation = 0.0; // radians
        double azimuth = 0.0;   // radians
    };

    // Random part of one path, independent of where the RIS sits.
    struct PathOffset
    {
        std::complex<double> gain;
        double departure_elevation = 0.0;
        double departure_azimuth = 0.0;
        double arrival_elevation = 0.0;
        double arrival_azimuth = 0.0;
    };

    using LinkDraw = std::vector<PathOffset>;

    LinkDraw sample_link_draw(int num_paths, AngularSpread spread, RandomStream &rng);

    struct Path
    {
        std::complex<double> gain;
        Direction departure;
        Direction arrival;
    };

    struct PathSet
    {
        LinkTag tag = LinkTag::tx_ris;
        double distance = 0.0;
        std::vector<Path> paths;
    };

    PathSet apply_draw(const LinkDraw &draw, const LinkGeometry &mean, LinkTag tag);

    // Uniform angles within +-spread of the mean, CN(0, 1) gains.
    PathSet draw_paths(const LinkGeometry &mean, AngularSpread spread, int num_paths, RandomStream &rng,
                       LinkTag tag = LinkTag::tx_ris);

    struct ArrayPair
    {
        ArrayDims tx;
        ArrayDims rx;
    };

    // H = sum_l z_l / sqrt(PL) * r_l t_l^T with unit-modulus array responses r_l, t_l, so a
    // single unit path with PL = 1 has ||H||_F = sqrt(Mr * Mt).
    CMatrix link_channel(const PathSet &paths, ArrayPair arrays, double loss_linear, double spacing);

    // H_IR * diag(exp(j phi)) * H_TI
    CMatrix composite_channel(const CMatrix &h_ir, std::span<const double> phases, const CMatrix &h_ti);

    // Per-trial random draws for both links, reused for every RIS position.
    struct ChannelDraws
    {
        LinkDraw tx_ris;
        LinkDraw ris_rx;
    };

    ChannelDraws draw_channels(const SystemConfig &config, RandomStream rng);

    struct ChannelRealization
    {
        CMatrix h_ti; // M_I x M_1
        CMatrix h_ir; // M_2 x M_I
        PathSet tx_ris;
        PathSet ris_rx;
        LinkGeometry tx_ris_mean;
        LinkGeometry ris_rx_mean;
    };

    ChannelRealization realize_channels(const Scenario &scenario, const ChannelDraws &draws, double ris_x, double ris_y);

    // Text matrix file: a "# key value" header followed by one row per line of "re im" pairs.
    void write_matrix_file(const std::filesystem::path &path, const CMatrix &m, std::string_view label);
    CMatrix read_matrix_file(const std::filesystem::path &path);
}
