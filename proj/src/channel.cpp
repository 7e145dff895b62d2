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

#include "spider_ris/channel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

namespace spider_ris
{
    namespace
    {
        constexpr double two_pi = 2.0 * std::numbers::pi;

        double elevation_from_normal(double dz, double length, ArrayFacing facing)
        {
            double c = (facing == ArrayFacing::up ? dz : -dz) / length;
            return std::acos(std::clamp(c, -1.0, 1.0));
        }

        // Phase progression e^{-j 2 pi d m u}, m = 0..n-1.
        void axis_phasors(double u, int n, double spacing, std::complex<double> *out)
        {
            for (int m = 0; m < n; ++m)
                out[m] = std::polar(1.0, -two_pi * spacing * double(m) * u);
        }
    }

    LinkGeometry mean_angles_from_geometry(const Vec3 &a, const Vec3 &b, ArrayFacing facing_a, ArrayFacing facing_b)
    {
        double dx = b.x - a.x, dy = b.y - a.y, dz = b.z - a.z;
        double length = std::sqrt(dx * dx + dy * dy + dz * dz);
        if (!(length > 0.0))
            throw DegenerateGeometry("degenerate geometry: link endpoints coincide");

        LinkGeometry g;
        g.distance = length;
        g.departure.elevation = elevation_from_normal(dz, length, facing_a);
        g.departure.azimuth = (dx == 0.0 && dy == 0.0) ? 0.0 : std::atan2(dy, dx);
        g.arrival.elevation = elevation_from_normal(-dz, length, facing_b);
        g.arrival.azimuth = (dx == 0.0 && dy == 0.0) ? 0.0 : std::atan2(-dy, -dx);
        return g;
    }

    CVector array_response(double elevation, double azimuth, ArrayDims dims, double spacing)
    {
        double s = std::sin(elevation);
        double ux = s * std::cos(azimuth);
        double uy = s * std::sin(azimuth);

        std::vector<std::complex<double>> px(std::size_t(dims.x)), py(std::size_t(dims.y));
        axis_phasors(ux, dims.x, spacing, px.data());
        axis_phasors(uy, dims.y, spacing, py.data());

        CVector a(dims.count());
        for (int mx = 0; mx < dims.x; ++mx)
            for (int my = 0; my < dims.y; ++my)
                a(mx * dims.y + my) = px[std::size_t(mx)] * py[std::size_t(my)];
        return a;
    }

    CVector steering_vector(double elevation, double azimuth, ArrayDims dims, double spacing)
    {
        if (dims.x < 1 || dims.y < 1)
            throw DimensionMismatch("steering vector needs at least one element per axis");
        CVector a = array_response(elevation, azimuth, dims, spacing);
        a /= std::sqrt(double(dims.count()));
        return a;
    }

    double path_loss_linear(double carrier_ghz, double distance_m, double exponent)
    {
        double db = 32.4 + 20.0 * std::log10(carrier_ghz) + 10.0 * exponent * std::log10(distance_m);
        return std::pow(10.0, db / 10.0);
    }

    double path_loss(PathLossModel model, double carrier_ghz, double distance_m, double exponent)
    {
        switch (model)
        {
        case PathLossModel::reference_db:
            return path_loss_linear(carrier_ghz, distance_m, exponent);
        case PathLossModel::literal_product:
            return (32.4 + 20.0 * std::log10(carrier_ghz)) * std::pow(distance_m, exponent);
        }
        return path_loss_linear(carrier_ghz, distance_m, exponent);
    }

    LinkDraw sample_link_draw(int num_paths, AngularSpread spread, RandomStream &rng)
    {
        LinkDraw draw(std::size_t(std::max(num_paths, 0)));
        for (auto &p : draw)
        {
            p.gain = rng.complex_normal();
            p.departure_elevation = rng.uniform(-spread.elevation, spread.elevation);
            p.departure_azimuth = rng.uniform(-spread.azimuth, spread.azimuth);
            p.arrival_elevation = rng.uniform(-spread.elevation, spread.elevation);
            p.arrival_azimuth = rng.uniform(-spread.azimuth, spread.azimuth);
        }
        return draw;
    }

    PathSet apply_draw(const LinkDraw &draw, const LinkGeometry &mean, LinkTag tag)
    {
        PathSet set;
        set.tag = tag;
        set.distance = mean.distance;
        set.paths.reserve(draw.size());
        for (const auto &o : draw)
        {
            Path p;
            p.gain = o.gain;
            p.departure = {mean.departure.elevation + o.departure_elevation, mean.departure.azimuth + o.departure_azimuth};
            p.arrival = {mean.arrival.elevation + o.arrival_elevation, mean.arrival.azimuth + o.arrival_azimuth};
            set.paths.push_back(p);
        }
        return set;
    }

    PathSet draw_paths(const LinkGeometry &mean, AngularSpread spread, int num_paths, RandomStream &rng, LinkTag tag)
    {
        return apply_draw(sample_link_draw(num_paths, spread, rng), mean, tag);
    }

    CMatrix link_channel(const PathSet &paths, ArrayPair arrays, double loss_linear, double spacing)
    {
        CMatrix h = CMatrix::Zero(arrays.rx.count(), arrays.tx.count());
        double amplitude = 1.0 / std::sqrt(loss_linear);
        for (const auto &p : paths.paths)
        {
            CVector r = array_response(p.arrival.elevation, p.arrival.azimuth, arrays.rx, spacing);
            CVector t = array_response(p.departure.elevation, p.departure.azimuth, arrays.tx, spacing);
            r *= p.gain * amplitude;
            h.noalias() += r * t.transpose();
        }
        return h;
    }

    CMatrix composite_channel(const CMatrix &h_ir, std::span<const double> phases, const CMatrix &h_ti)
    {
        if (h_ir.cols() != Eigen::Index(phases.size()) || h_ti.rows() != Eigen::Index(phases.size()))
            throw DimensionMismatch("composite channel: H_IR columns, phase count and H_TI rows must agree");
        CMatrix scaled = h_ti;
        for (std::size_t i = 0; i < phases.size(); ++i)
            scaled.row(Eigen::Index(i)) *= std::polar(1.0, phases[i]);
        return h_ir * scaled;
    }

    ChannelDraws draw_channels(const SystemConfig &config, RandomStream rng)
    {
        AngularSpread spread{config.spread_elevation_deg * std::numbers::pi / 180.0,
                             config.spread_azimuth_deg * std::numbers::pi / 180.0};
        ChannelDraws d;
        RandomStream ti = rng.split(0);
        RandomStream ir = rng.split(1);
        d.tx_ris = sample_link_draw(config.num_paths, spread, ti);
        d.ris_rx = sample_link_draw(config.num_paths, spread, ir);
        return d;
    }

    ChannelRealization realize_channels(const Scenario &scenario, const ChannelDraws &draws, double ris_x, double ris_y)
    {
        const auto &c = scenario.config;
        const auto &g = scenario.geometry;
        Vec3 ris{ris_x, ris_y, g.ris_height};

        ChannelRealization r;
        r.tx_ris_mean = mean_angles_from_geometry(g.tx_position, ris, ArrayFacing::up, ArrayFacing::down);
        r.ris_rx_mean = mean_angles_from_geometry(ris, g.ue_position, ArrayFacing::down, ArrayFacing::up);
        r.tx_ris = apply_draw(draws.tx_ris, r.tx_ris_mean, LinkTag::tx_ris);
        r.ris_rx = apply_draw(draws.ris_rx, r.ris_rx_mean, LinkTag::ris_rx);

        double d = c.element_spacing_wavelengths;
        double loss_ti = path_loss(c.path_loss_model, c.carrier_frequency_ghz, r.tx_ris.distance, c.path_loss_exponent);
        double loss_ir = path_loss(c.path_loss_model, c.carrier_frequency_ghz, r.ris_rx.distance, c.path_loss_exponent);
        r.h_ti = link_channel(r.tx_ris, {c.tx_antennas, c.ris_elements}, loss_ti, d);
        r.h_ir = link_channel(r.ris_rx, {c.ris_elements, c.rx_antennas}, loss_ir, d);
        return r;
    }

    void write_matrix_file(const std::filesystem::path &path, const CMatrix &m, std::string_view label)
    {
        std::ofstream out(path);
        if (!out)
            throw std::runtime_error("cannot write matrix file " + path.string());
        out << "# spider-ris complex matrix\n";
        out << "# label " << label << '\n';
        out << "# rows " << m.rows() << '\n';
        out << "# cols " << m.cols() << '\n';
        out << "# layout row-major re im pairs\n";
        char buf[64];
        for (Eigen::Index i = 0; i < m.rows(); ++i)
        {
            for (Eigen::Index j = 0; j < m.cols(); ++j)
            {
                std::snprintf(buf, sizeof(buf), "%.17g %.17g", m(i, j).real(), m(i, j).imag());
                if (j > 0)
                    out << ' ';
                out << buf;
            }
            out << '\n';
        }
        if (!out)
            throw std::runtime_error("error writing matrix file " + path.string());
    }

    CMatrix read_matrix_file(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot read matrix file " + path.string());
        Eigen::Index rows = -1, cols = -1;
        std::string line;
        std::vector<double> values;
        while (std::getline(in, line))
        {
            if (line.rfind("#", 0) == 0)
            {
                std::istringstream hs(line.substr(1));
                std::string key;
                hs >> key;
                if (key == "rows")
                    hs >> rows;
                else if (key == "cols")
                    hs >> cols;
                continue;
            }
            std::istringstream ls(line);
            double v;
            while (ls >> v)
                values.push_back(v);
        }
        if (rows < 0 || cols < 0 || values.size() != std::size_t(2 * rows * cols))
            throw std::runtime_error("malformed matrix file " + path.string());
        CMatrix m(rows, cols);
        std::size_t k = 0;
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j, k += 2)
                m(i, j) = {values[k], values[k + 1]};
        return m;
    }
}
