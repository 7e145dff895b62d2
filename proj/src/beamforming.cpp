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

#include "spider_ris/beamforming.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace spider_ris
{
    namespace
    {
        constexpr double pi = std::numbers::pi;
        constexpr double two_pi = 2.0 * std::numbers::pi;
        constexpr double geom_eps = 1e-12;

        double wrap_positive(double a)
        {
            a = std::fmod(a, two_pi);
            return a < 0.0 ? a + two_pi : a;
        }

        bool sector_contains(const AngleSupport::Sector &s, double u, double v)
        {
            double r = std::hypot(u, v);
            if (r < s.r_min - geom_eps || r > s.r_max + geom_eps)
                return false;
            if (s.az_span >= two_pi || r <= geom_eps)
                return s.az_span >= two_pi || s.r_min <= geom_eps;
            double rel = wrap_positive(std::atan2(v, u) - s.az_min);
            return rel <= s.az_span + geom_eps || rel >= two_pi - geom_eps;
        }

        bool in_rect(double u, double v, double x0, double x1, double y0, double y1)
        {
            return u >= x0 - geom_eps && u <= x1 + geom_eps && v >= y0 - geom_eps && v <= y1 + geom_eps;
        }

        bool angle_in_sector(const AngleSupport::Sector &s, double angle)
        {
            if (s.az_span >= two_pi)
                return true;
            double rel = wrap_positive(angle - s.az_min);
            return rel <= s.az_span + geom_eps || rel >= two_pi - geom_eps;
        }

        // Segment p0-p1 against an axis-aligned rectangle (Liang-Barsky clip).
        bool segment_hits_rect(double px0, double py0, double px1, double py1, double x0, double x1, double y0, double y1)
        {
            double t0 = 0.0, t1 = 1.0;
            double dx = px1 - px0, dy = py1 - py0;
            double p[4] = {-dx, dx, -dy, dy};
            double q[4] = {px0 - x0, x1 - px0, py0 - y0, y1 - py0};
            for (int i = 0; i < 4; ++i)
            {
                if (std::abs(p[i]) < 1e-300)
                {
                    if (q[i] < -geom_eps)
                        return false;
                    continue;
                }
                double t = q[i] / p[i];
                if (p[i] < 0.0)
                    t0 = std::max(t0, t);
                else
                    t1 = std::min(t1, t);
                if (t0 > t1 + geom_eps)
                    return false;
            }
            return true;
        }

        // Does the arc of radius r (restricted to the sector's azimuths) cross the rectangle boundary?
        bool arc_hits_rect(const AngleSupport::Sector &s, double r, double x0, double x1, double y0, double y1)
        {
            if (r <= geom_eps)
                return false;
            auto check = [&](double u, double v)
            { return in_rect(u, v, x0, x1, y0, y1) && angle_in_sector(s, std::atan2(v, u)); };
            // vertical edges u = x0, x1
            for (double u : {x0, x1})
            {
                double h = r * r - u * u;
                if (h < 0.0)
                    continue;
                double root = std::sqrt(h);
                if (check(u, root) || check(u, -root))
                    return true;
            }
            for (double v : {y0, y1})
            {
                double h = r * r - v * v;
                if (h < 0.0)
                    continue;
                double root = std::sqrt(h);
                if (check(root, v) || check(-root, v))
                    return true;
            }
            return false;
        }

        bool sector_intersects_rect(const AngleSupport::Sector &s, double x0, double x1, double y0, double y1)
        {
            for (double u : {x0, x1})
                for (double v : {y0, y1})
                    if (sector_contains(s, u, v))
                        return true;

            bool full = s.az_span >= two_pi;
            double az_end = s.az_min + (full ? 0.0 : s.az_span);
            for (double r : {s.r_min, s.r_max})
                for (double a : {s.az_min, az_end})
                    if (in_rect(r * std::cos(a), r * std::sin(a), x0, x1, y0, y1))
                        return true;

            if (!full)
            {
                for (double a : {s.az_min, az_end})
                {
                    double c = std::cos(a), sn = std::sin(a);
                    if (segment_hits_rect(s.r_min * c, s.r_min * sn, s.r_max * c, s.r_max * sn, x0, x1, y0, y1))
                        return true;
                }
            }
            return arc_hits_rect(s, s.r_min, x0, x1, y0, y1) || arc_hits_rect(s, s.r_max, x0, x1, y0, y1);
        }

        // sin over [a, b] within [0, pi]: returns (min, max).
        std::pair<double, double> sin_range(double a, double b)
        {
            double sa = std::sin(a), sb = std::sin(b);
            double lo = std::min(sa, sb);
            double hi = (a <= pi / 2 && b >= pi / 2) ? 1.0 : std::max(sa, sb);
            return {std::max(lo, 0.0), std::min(hi, 1.0)};
        }
    }

    QuantizedGrid build_grid(int mx, int my)
    {
        if (mx < 1 || my < 1)
            throw InvalidBeam("quantized grid needs at least one point per axis");
        QuantizedGrid g;
        g.x.resize(std::size_t(mx));
        g.y.resize(std::size_t(my));
        for (int u = 1; u <= mx; ++u)
            g.x[std::size_t(u - 1)] = -1.0 + double(2 * u - 1) / double(mx);
        for (int k = 1; k <= my; ++k)
            g.y[std::size_t(k - 1)] = -1.0 + double(2 * k - 1) / double(my);
        return g;
    }

    AngleSupport AngleSupport::from_mean(Direction mean, AngularSpread spread)
    {
        AngleSupport s;
        double el_lo = mean.elevation - std::abs(spread.elevation);
        double el_hi = mean.elevation + std::abs(spread.elevation);
        double az_span = 2.0 * std::abs(spread.azimuth);
        double az_min = mean.azimuth - std::abs(spread.azimuth);
        if (az_span >= two_pi)
        {
            az_span = two_pi;
            az_min = 0.0;
        }

        // Elevations in [0, pi] map straight; negative ones and ones past pi flip the azimuth.
        double a = std::max(el_lo, 0.0), b = std::min(el_hi, pi);
        if (a <= b)
        {
            auto [r0, r1] = sin_range(a, b);
            s.sectors_.push_back({r0, r1, az_min, az_span});
        }
        if (el_lo < 0.0)
        {
            auto [r0, r1] = sin_range(std::max(0.0, -std::min(el_hi, 0.0)), -el_lo);
            s.sectors_.push_back({r0, r1, az_min + pi, az_span});
        }
        if (el_hi > pi)
        {
            auto [r0, r1] = sin_range(0.0, el_hi - pi);
            if (el_lo > pi)
                std::tie(r0, r1) = sin_range(el_lo - pi, el_hi - pi);
            s.sectors_.push_back({r0, r1, az_min + pi, az_span});
        }
        double r = std::sin(mean.elevation);
        s.anchor_ = {r * std::cos(mean.azimuth), r * std::sin(mean.azimuth)};
        return s;
    }

    bool AngleSupport::contains(double u, double v) const
    {
        return std::any_of(sectors_.begin(), sectors_.end(), [&](const Sector &s)
                           { return sector_contains(s, u, v); });
    }

    bool AngleSupport::intersects_cell(double x_min, double x_max, double y_min, double y_max) const
    {
        return std::any_of(sectors_.begin(), sectors_.end(), [&](const Sector &s)
                           { return sector_intersects_rect(s, x_min, x_max, y_min, y_max); });
    }

    double AngleSupport::overlap_area(double x_min, double x_max, double y_min, double y_max, int samples) const
    {
        int inside = 0;
        double dx = (x_max - x_min) / samples, dy = (y_max - y_min) / samples;
        for (int i = 0; i < samples; ++i)
            for (int j = 0; j < samples; ++j)
                if (contains(x_min + (i + 0.5) * dx, y_min + (j + 0.5) * dy))
                    ++inside;
        return double(inside) * dx * dy;
    }

    std::vector<BeamPair> select_beams(const QuantizedGrid &grid, const AngleSupport &support, RfChainPolicy policy)
    {
        struct Candidate
        {
            BeamPair beam;
            std::size_t index;
            double area;
            bool hit;
        };

        double hx = grid.cell_half_width_x(), hy = grid.cell_half_width_y();
        std::vector<Candidate> visible;
        for (std::size_t u = 0; u < grid.x.size(); ++u)
        {
            for (std::size_t k = 0; k < grid.y.size(); ++k)
            {
                double lx = grid.x[u], ly = grid.y[k];
                if (lx * lx + ly * ly > 1.0 + geom_eps)
                    continue;
                Candidate c{{lx, ly}, u * grid.y.size() + k, 0.0, false};
                c.hit = support.intersects_cell(lx - hx, lx + hx, ly - hy, ly + hy);
                if (c.hit)
                    c.area = support.overlap_area(lx - hx, lx + hx, ly - hy, ly + hy);
                visible.push_back(c);
            }
        }

        std::vector<Candidate> hits;
        std::copy_if(visible.begin(), visible.end(), std::back_inserter(hits), [](const Candidate &c)
                     { return c.hit; });
        std::stable_sort(hits.begin(), hits.end(), [](const Candidate &a, const Candidate &b)
                         { return a.area > b.area; });
        if (hits.size() > std::size_t(std::max(policy.max_chains, 0)))
            hits.resize(std::size_t(std::max(policy.max_chains, 0)));

        std::vector<BeamPair> out;
        for (const auto &c : hits)
            out.push_back(c.beam);

        if (int(out.size()) < policy.min_chains)
        {
            BeamPair anchor = support.anchor();
            std::vector<Candidate> rest;
            std::copy_if(visible.begin(), visible.end(), std::back_inserter(rest), [&](const Candidate &c)
                         { return std::none_of(hits.begin(), hits.end(), [&](const Candidate &h)
                                               { return h.index == c.index; }); });
            std::stable_sort(rest.begin(), rest.end(), [&](const Candidate &a, const Candidate &b)
                             { return std::hypot(a.beam.x - anchor.x, a.beam.y - anchor.y) <
                                      std::hypot(b.beam.x - anchor.x, b.beam.y - anchor.y); });
            for (const auto &c : rest)
            {
                if (int(out.size()) >= policy.min_chains)
                    break;
                out.push_back(c.beam);
            }
        }
        return out;
    }

    CVector beam_vector(const BeamPair &beam, ArrayDims dims, double spacing)
    {
        if (beam.x * beam.x + beam.y * beam.y > 1.0 + geom_eps)
            throw InvalidBeam("invalid beam: angle pair lies outside the unit disk");
        double scale = 1.0 / std::sqrt(double(dims.count()));
        CVector e(dims.count());
        for (int mx = 0; mx < dims.x; ++mx)
            for (int my = 0; my < dims.y; ++my)
                e(mx * dims.y + my) = std::polar(scale, two_pi * spacing * (double(mx) * beam.x + double(my) * beam.y));
        return e;
    }

    RfStages rf_stages(const std::vector<BeamPair> &beams_tx, const std::vector<BeamPair> &beams_rx, ArrayDims tx,
                       ArrayDims rx, double spacing)
    {
        if (beams_tx.empty() || beams_rx.empty())
            throw InvalidBeam("invalid beam: RF stage needs at least one beam per side");
        RfStages rf;
        rf.f1.resize(tx.count(), Eigen::Index(beams_tx.size()));
        for (std::size_t n = 0; n < beams_tx.size(); ++n)
            rf.f1.col(Eigen::Index(n)) = beam_vector(beams_tx[n], tx, spacing);
        rf.f2.resize(Eigen::Index(beams_rx.size()), rx.count());
        for (std::size_t n = 0; n < beams_rx.size(); ++n)
            rf.f2.row(Eigen::Index(n)) = beam_vector(beams_rx[n], rx, spacing).transpose();
        return rf;
    }

    EffectiveChannel decompose(const CMatrix &effective)
    {
        EffectiveChannel eff;
        eff.h = effective;
        Eigen::JacobiSVD<CMatrix> svd(effective, Eigen::ComputeThinU | Eigen::ComputeThinV);
        eff.u = svd.matrixU();
        eff.v = svd.matrixV();
        eff.sigma = svd.singularValues();

        double smax = eff.sigma.size() > 0 ? eff.sigma(0) : 0.0;
        double tol = smax * double(std::max(effective.rows(), effective.cols())) * std::numeric_limits<double>::epsilon();
        eff.rank = 0;
        for (Eigen::Index i = 0; i < eff.sigma.size(); ++i)
            if (eff.sigma(i) > tol && eff.sigma(i) > 0.0)
                ++eff.rank;

        for (Eigen::Index j = 0; j < eff.v.cols(); ++j)
        {
            auto col = eff.v.col(j);
            double threshold = 1e-8 * col.cwiseAbs().maxCoeff();
            for (Eigen::Index i = 0; i < col.size(); ++i)
            {
                double mag = std::abs(col(i));
                if (mag > threshold && mag > 0.0)
                {
                    std::complex<double> phase = std::conj(col(i)) / mag;
                    eff.v.col(j) *= phase;
                    eff.u.col(j) *= phase;
                    break;
                }
            }
        }
        return eff;
    }

    EffectiveChannel effective_channel(const CMatrix &f2, const CMatrix &h, const CMatrix &f1)
    {
        if (f2.cols() != h.rows() || h.cols() != f1.rows())
            throw DimensionMismatch("effective channel: F2 H F1 dimensions do not chain");
        return decompose(f2 * h * f1);
    }

    BasebandStages bb_stages(const EffectiveChannel &eff, double tx_power, int num_streams)
    {
        BasebandStages bb;
        bb.streams = std::min(num_streams, eff.rank);
        bb.rank_deficient = eff.rank < num_streams;
        if (bb.streams <= 0)
        {
            // Nothing to send on: keep one all-zero stream so the shapes stay valid.
            bb.streams = 0;
            bb.b1 = CMatrix::Zero(eff.v.rows(), 1);
            bb.b2 = CMatrix::Zero(1, eff.u.rows());
            return bb;
        }
        double scale = std::sqrt(tx_power / double(bb.streams));
        bb.b1 = scale * eff.v.leftCols(bb.streams);
        bb.b2 = eff.u.leftCols(bb.streams).adjoint();
        return bb;
    }

    RateEval achievable_rate(const BeamformerSet &set, const CMatrix &effective, double noise)
    {
        RateEval out;
        CMatrix signal_mix = set.b2 * effective * set.b1;
        CMatrix s = signal_mix * signal_mix.adjoint();
        CMatrix comb = set.b2 * set.f2;
        CMatrix w = noise * (comb * comb.adjoint());
        const Eigen::Index n = s.rows();

        Eigen::SelfAdjointEigenSolver<CMatrix> weig(w);
        const Eigen::VectorXd &lw = weig.eigenvalues();
        double lmin = lw.minCoeff(), lmax = lw.maxCoeff();
        bool ill = !(lmin > 0.0) || lmax / lmin > 1e12;

        if (!ill)
        {
            Eigen::LLT<CMatrix> chol(w);
            CMatrix linv_s = chol.matrixL().solve(s);
            CMatrix whitened = chol.matrixL().solve(linv_s.adjoint()).adjoint();
            CMatrix m = CMatrix::Identity(n, n) + 0.5 * (whitened + whitened.adjoint());
            Eigen::LLT<CMatrix> mchol(m);
            double logdet = 0.0;
            for (Eigen::Index i = 0; i < n; ++i)
                logdet += 2.0 * std::log(std::real(mchol.matrixL()(i, i)));
            out.bits_per_hz = std::max(0.0, logdet / std::numbers::ln2);
            return out;
        }

        // Ridge-regularized eigen route for a singular or badly conditioned noise covariance.
        out.regularized = true;
        double ridge = 1e-12 * (lmax > 0.0 ? lmax : (noise > 0.0 ? noise : 1.0));
        Eigen::VectorXd lam = (lw.array().max(0.0) + ridge).matrix();
        CMatrix q = weig.eigenvectors();
        Eigen::VectorXd inv_sqrt = lam.cwiseSqrt().cwiseInverse();
        CMatrix t = inv_sqrt.asDiagonal() * (q.adjoint() * s * q) * inv_sqrt.asDiagonal();
        Eigen::SelfAdjointEigenSolver<CMatrix> teig(0.5 * (t + t.adjoint()), Eigen::EigenvaluesOnly);
        double bits = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            bits += std::log2(1.0 + std::max(0.0, teig.eigenvalues()(i)));
        out.bits_per_hz = bits;
        return out;
    }

    RateEval achievable_rate(const BeamformerSet &set, const EffectiveChannel &eff, double noise)
    {
        return achievable_rate(set, eff.h, noise);
    }

    HybridDesign design_baseband(const RfStages &rf, const CMatrix &effective, double tx_power, int num_streams,
                                 double noise)
    {
        HybridDesign d;
        d.eff = decompose(effective);
        BasebandStages bb = bb_stages(d.eff, tx_power, num_streams);
        d.streams = bb.streams;
        d.rank_deficient = bb.rank_deficient;

        if (bb.streams > 0)
        {
            double radiated = (rf.f1 * bb.b1).squaredNorm();
            if (radiated > 0.0 && std::abs(radiated - tx_power) > 1e-12 * tx_power)
                bb.b1 *= std::sqrt(tx_power / radiated);
        }
        d.beams = {rf.f1, bb.b1, rf.f2, bb.b2};
        d.rate = achievable_rate(d.beams, d.eff.h, noise);
        return d;
    }

    RfStages design_rf(const LinkSupports &supports, ArrayDims tx, ArrayDims rx, double spacing, RfChainPolicy policy)
    {
        auto tx_beams = select_beams(build_grid(tx.x, tx.y), supports.tx, policy);
        auto rx_beams = select_beams(build_grid(rx.x, rx.y), supports.rx, policy);
        return rf_stages(tx_beams, rx_beams, tx, rx, spacing);
    }

    HybridDesign design_hybrid(const CMatrix &h, const RfStages &rf, double tx_power, int num_streams, double noise)
    {
        if (rf.f2.cols() != h.rows() || h.cols() != rf.f1.rows())
            throw DimensionMismatch("hybrid design: RF stages do not match the channel");
        return design_baseband(rf, rf.f2 * h * rf.f1, tx_power, num_streams, noise);
    }
}
