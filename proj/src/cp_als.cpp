// SPDX-License-Identifier: Apache-2.0
//
// emvs-parafac: angle and polarization estimation for bistatic EMVS-MIMO radar
// Copyright (C) 2026 The emvs-parafac authors
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

#include "emvs/cp_als.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>

#include "emvs/radar_model.hpp"

namespace emvs
{

namespace
{

constexpr double pinv_rel_threshold = 1e-12;

// MTTKRP: unfold_n(T) * conj(khatri_rao(F_next2, F_next1)). unfold_1 is the
// tensor storage itself, so mode 1 is one GEMM. Modes 2 and 3 share the
// contraction W = unfold_1^T conj(F1), whose row i3*I2 + i2 holds
// sum_i1 T[i1,i2,i3] conj(F1[i1,:]); it stays valid between the two updates.
Eigen::Map<const ComplexMatrix> unfold1_view(const ComplexTensor3 &t)
{
    return {t.data().data(), t.dims().i1, t.dims().i2 * t.dims().i3};
}

ComplexMatrix mttkrp_mode1(const ComplexTensor3 &t, const ComplexMatrix &f2, const ComplexMatrix &f3)
{
    return unfold1_view(t) * khatri_rao(f3, f2).conjugate();
}

ComplexMatrix slice_contractions(const ComplexTensor3 &t, const ComplexMatrix &f1)
{
    return unfold1_view(t).transpose() * f1.conjugate();
}

ComplexMatrix mttkrp_mode2(const ComplexMatrix &w, Index i2, const ComplexMatrix &f3)
{
    ComplexMatrix out = ComplexMatrix::Zero(i2, f3.cols());
    for (Index i3 = 0; i3 < f3.rows(); ++i3)
        out.array() += w.middleRows(i3 * i2, i2).array().rowwise() * f3.row(i3).conjugate().array();
    return out;
}

ComplexMatrix mttkrp_mode3(const ComplexMatrix &w, const ComplexMatrix &f2, Index i3)
{
    const Index i2 = f2.rows();
    const ComplexMatrix c2 = f2.conjugate();
    ComplexMatrix out(i3, f2.cols());
    for (Index s = 0; s < i3; ++s)
        out.row(s) = (w.middleRows(s * i2, i2).array() * c2.array()).colwise().sum();
    return out;
}

struct PinvResult
{
    ComplexMatrix pinv;
    bool truncated = false;
};

// Pseudo-inverse of the Hermitian PSD Gram matrix G = B^H B, truncating by the
// singular values of B (square roots of the eigenvalues of G).
PinvResult gram_pinv(const ComplexMatrix &gram)
{
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(gram);
    if (eig.info() != Eigen::Success)
        fail(ErrorCode::numerical, "eigen-decomposition of the Gram matrix failed");
    const Eigen::VectorXd &lambda = eig.eigenvalues();
    const double sigma_max = std::sqrt(std::max(lambda.maxCoeff(), 0.0));
    PinvResult out;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(lambda.size());
    for (Index i = 0; i < lambda.size(); ++i)
    {
        const double sigma = std::sqrt(std::max(lambda(i), 0.0));
        if (sigma > pinv_rel_threshold * sigma_max && sigma > 0.0)
            inv(i) = 1.0 / lambda(i);
        else
            out.truncated = true;
    }
    out.pinv = eig.eigenvectors() * inv.cast<cdouble>().asDiagonal() * eig.eigenvectors().adjoint();
    return out;
}

ComplexMatrix random_factor(Index rows, Index K, std::mt19937_64 &rng)
{
    return gaussian_sources(rows, K, rng);
}

CpResult run_once(const ComplexTensor3 &t, double t_norm, const AlsOptions &opts, int restart)
{
    const Dims3 &d = t.dims();
    const Index K = opts.rank;
    std::mt19937_64 rng(derive_seed(opts.seed, {static_cast<std::uint64_t>(restart)}));

    CpResult r;
    r.factors.f1 = random_factor(d.i1, K, rng);
    r.factors.f2 = random_factor(d.i2, K, rng);
    r.factors.f3 = random_factor(d.i3, K, rng);
    r.report.restart_index = restart;

    double previous = residual(t, r.factors);
    r.report.residual_history.push_back(previous);

    const double t_norm2 = t_norm * t_norm;
    for (int sweep = 1; sweep <= opts.max_iters; ++sweep)
    {
        const auto gram_pinv_of = [&](int a, int b) {
            const ComplexMatrix gram = (r.factors.mode(a).adjoint() * r.factors.mode(a))
                                           .cwiseProduct(r.factors.mode(b).adjoint() * r.factors.mode(b));
            PinvResult p = gram_pinv(gram.conjugate());
            r.report.regularized = r.report.regularized || p.truncated;
            return std::move(p.pinv);
        };
        r.factors.f1 = mttkrp_mode1(t, r.factors.f2, r.factors.f3) * gram_pinv_of(2, 3);
        const ComplexMatrix w = slice_contractions(t, r.factors.f1);
        r.factors.f2 = mttkrp_mode2(w, d.i2, r.factors.f3) * gram_pinv_of(1, 3);
        const ComplexMatrix last_mttkrp = mttkrp_mode3(w, r.factors.f2, d.i3);
        r.factors.f3 = last_mttkrp * gram_pinv_of(1, 2);

        // ||T - R||^2 = ||T||^2 - 2 Re<T,R> + ||R||^2 with <T,R> from the mode-3
        // MTTKRP; recomputed explicitly near the floor where cancellation bites.
        const CpFactors &f = r.factors;
        const cdouble inner = (last_mttkrp.array() * f.f3.conjugate().array()).sum();
        const ComplexMatrix g = (f.f1.adjoint() * f.f1)
                                    .cwiseProduct(f.f2.adjoint() * f.f2)
                                    .cwiseProduct(f.f3.adjoint() * f.f3);
        const double r_norm2 = g.sum().real();
        double current = std::sqrt(std::max(t_norm2 - 2.0 * inner.real() + r_norm2, 0.0)) / t_norm;
        if (!std::isfinite(current))
            fail(ErrorCode::numerical, "ALS residual became NaN at sweep " + std::to_string(sweep));
        if (current < 1e-3)
            current = residual(t, f);

        // Keep modes 1 and 2 unit-norm; the scale lives in mode 3.
        for (Index k = 0; k < K; ++k)
        {
            const double n1 = r.factors.f1.col(k).norm();
            const double n2 = r.factors.f2.col(k).norm();
            if (n1 > 0.0 && n2 > 0.0)
            {
                r.factors.f1.col(k) /= n1;
                r.factors.f2.col(k) /= n2;
                r.factors.f3.col(k) *= n1 * n2;
            }
        }

        r.report.residual_history.push_back(current);
        r.report.iterations = sweep;
        r.report.final_residual = current;
        if (current < residual_floor || std::abs(previous - current) < opts.rel_tol * previous)
        {
            r.report.converged = true;
            break;
        }
        previous = current;
    }
    if (r.report.iterations == 0)
        r.report.final_residual = previous;
    return r;
}

} // namespace

void CpFactors::validate() const
{
    if (f1.cols() != f2.cols() || f1.cols() != f3.cols())
        fail(ErrorCode::dimension, "CP factors have different ranks");
}

void AlsOptions::validate() const
{
    if (rank < 1)
        fail(ErrorCode::argument, "ALS rank must be >= 1");
    if (max_iters < 1)
        fail(ErrorCode::argument, "ALS max_iters must be >= 1");
    if (!(rel_tol > 0.0))
        fail(ErrorCode::argument, "ALS rel_tol must be > 0");
    if (restarts < 1)
        fail(ErrorCode::argument, "ALS restarts must be >= 1");
}

bool generic_kruskal_holds(Dims3 dims, Index rank)
{
    // A nonzero rank-1 tensor determines its factors up to scale; the
    // inequality below is only meaningful from rank 2 on.
    if (rank == 1)
        return true;
    return 2 * rank + 2 <= std::min(dims.i1, rank) + std::min(dims.i2, rank) + std::min(dims.i3, rank);
}

double residual(const ComplexTensor3 &t, const CpFactors &f)
{
    f.validate();
    if (f.f1.rows() != t.dims().i1 || f.f2.rows() != t.dims().i2 || f.f3.rows() != t.dims().i3)
        fail(ErrorCode::dimension, "residual: factor rows do not match tensor dims");
    const ComplexTensor3 model = cp_reconstruct(f.f1, f.f2, f.f3);
    double diff = 0.0;
    const auto a = t.data();
    const auto b = model.data();
    for (std::size_t i = 0; i < a.size(); ++i)
        diff += std::norm(a[i] - b[i]);
    diff = std::sqrt(diff);
    const double norm = t.frobenius_norm();
    return norm > 0.0 ? diff / norm : diff;
}

CpResult cp_als(const ComplexTensor3 &t, const AlsOptions &opts)
{
    opts.validate();
    const Dims3 &d = t.dims();
    const Index max_rank = std::min({d.i2 * d.i3, d.i1 * d.i3, d.i1 * d.i2});
    if (opts.rank > max_rank)
        fail(ErrorCode::argument, "ALS rank " + std::to_string(opts.rank) +
                                      " exceeds the smallest unfolding width " + std::to_string(max_rank));
    const double t_norm = t.frobenius_norm();
    if (t_norm == 0.0)
        fail(ErrorCode::degenerate, "cannot decompose a zero tensor");

    std::optional<CpResult> best;
    for (int restart = 0; restart < opts.restarts; ++restart)
    {
        CpResult run = run_once(t, t_norm, opts, restart);
        if (!best || run.report.final_residual < best->report.final_residual)
            best = std::move(run);
        // An exact fit cannot be improved on; later restarts would only compare rounding noise.
        if (best->report.final_residual < residual_floor)
            break;
    }
    best->report.uniqueness_risk = !generic_kruskal_holds(d, opts.rank);
    return std::move(*best);
}

double column_congruence(const ComplexVector &x, const ComplexVector &y)
{
    const double nx = x.norm(), ny = y.norm();
    if (nx == 0.0 || ny == 0.0)
        return 0.0;
    return std::abs(x.dot(y)) / (nx * ny);
}

Alignment align_factors(const CpFactors &est, const CpFactors &ref)
{
    est.validate();
    ref.validate();
    if (est.rank() != ref.rank())
        fail(ErrorCode::dimension, "align_factors: rank mismatch");
    for (int n = 1; n <= 3; ++n)
        if (est.mode(n).rows() != ref.mode(n).rows())
            fail(ErrorCode::dimension, "align_factors: factor shapes differ");

    const Index K = ref.rank();
    Eigen::MatrixXd score(K, K); // est column x ref column
    for (Index i = 0; i < K; ++i)
        for (Index j = 0; j < K; ++j)
        {
            double c = 1.0;
            for (int n = 1; n <= 3; ++n)
                c *= column_congruence(est.mode(n).col(i), ref.mode(n).col(j));
            score(i, j) = c;
        }

    Alignment out;
    out.permutation.assign(static_cast<std::size_t>(K), -1);
    out.congruence.assign(static_cast<std::size_t>(K), 0.0);
    std::vector<bool> est_used(static_cast<std::size_t>(K), false);
    for (Index step = 0; step < K; ++step)
    {
        double best = -1.0;
        Index bi = 0, bj = 0;
        for (Index i = 0; i < K; ++i)
        {
            if (est_used[static_cast<std::size_t>(i)])
                continue;
            for (Index j = 0; j < K; ++j)
                if (out.permutation[static_cast<std::size_t>(j)] < 0 && score(i, j) > best)
                {
                    best = score(i, j);
                    bi = i;
                    bj = j;
                }
        }
        est_used[static_cast<std::size_t>(bi)] = true;
        out.permutation[static_cast<std::size_t>(bj)] = bi;
        out.congruence[static_cast<std::size_t>(bj)] = best;
    }

    for (int n = 1; n <= 3; ++n)
    {
        ComplexMatrix &dst = out.aligned.mode(n);
        dst.resize(ref.mode(n).rows(), K);
        out.scales[static_cast<std::size_t>(n - 1)].resize(K);
        for (Index j = 0; j < K; ++j)
        {
            const auto col = est.mode(n).col(out.permutation[static_cast<std::size_t>(j)]);
            const double energy = col.squaredNorm();
            const cdouble s = energy > 0.0 ? col.dot(ref.mode(n).col(j)) / energy : cdouble{};
            out.scales[static_cast<std::size_t>(n - 1)](j) = s;
            dst.col(j) = s * col;
        }
    }
    return out;
}

} // namespace emvs
