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

#include "emvs/tensor.hpp"

#include <cmath>
#include <string>

namespace emvs
{

const char *to_string(ErrorCode code)
{
    switch (code)
    {
    case ErrorCode::argument: return "argument error";
    case ErrorCode::dimension: return "dimension error";
    case ErrorCode::identifiability: return "identifiability error";
    case ErrorCode::numerical: return "numerical error";
    case ErrorCode::degenerate: return "degenerate input";
    case ErrorCode::io: return "I/O error";
    case ErrorCode::config: return "configuration error";
    }
    return "unknown error";
}

namespace
{

bool all_finite(std::span<const cdouble> values)
{
    for (const cdouble &z : values)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            return false;
    return true;
}

void require_dims(Dims3 dims)
{
    if (dims.i1 < 1 || dims.i2 < 1 || dims.i3 < 1)
        fail(ErrorCode::dimension, "tensor dimensions must all be >= 1");
}

int checked_mode(int mode)
{
    if (mode < 1 || mode > 3)
        fail(ErrorCode::argument, "unfolding mode must be 1, 2 or 3, got " + std::to_string(mode));
    return mode;
}

} // namespace

void require_finite(const ComplexMatrix &m, const char *what)
{
    if (!all_finite({m.data(), static_cast<std::size_t>(m.size())}))
        fail(ErrorCode::numerical, std::string(what) + " has non-finite entries");
}

ComplexTensor3::ComplexTensor3(Dims3 dims) : dims_(dims)
{
    require_dims(dims);
    data_.assign(static_cast<std::size_t>(dims.size()), cdouble{});
}

ComplexTensor3::ComplexTensor3(Dims3 dims, std::vector<cdouble> data)
    : dims_(dims), data_(std::move(data))
{
    require_dims(dims);
    if (data_.size() != static_cast<std::size_t>(dims.size()))
        fail(ErrorCode::dimension, "tensor data length does not match I1*I2*I3");
    if (!all_finite(data_))
        fail(ErrorCode::numerical, "tensor has non-finite entries");
}

double ComplexTensor3::frobenius_norm() const
{
    double sum = 0.0;
    for (const cdouble &z : data_)
        sum += std::norm(z);
    return std::sqrt(sum);
}

ComplexVector kron(const ComplexVector &a, const ComplexVector &b)
{
    ComplexVector out(a.size() * b.size());
    for (Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

ComplexMatrix khatri_rao(const ComplexMatrix &a, const ComplexMatrix &b)
{
    if (a.cols() != b.cols())
        fail(ErrorCode::dimension, "khatri_rao: column counts differ (" + std::to_string(a.cols()) +
                                       " vs " + std::to_string(b.cols()) + ")");
    const Index rows_b = b.rows();
    ComplexMatrix out(a.rows() * rows_b, a.cols());
    for (Index k = 0; k < a.cols(); ++k)
        for (Index i = 0; i < a.rows(); ++i)
            out.col(k).segment(i * rows_b, rows_b) = a(i, k) * b.col(k);
    return out;
}

ComplexTensor3 cp_reconstruct(const ComplexMatrix &f1, const ComplexMatrix &f2,
                              const ComplexMatrix &f3)
{
    if (f1.cols() != f2.cols() || f1.cols() != f3.cols())
        fail(ErrorCode::dimension, "cp_reconstruct: factor ranks differ");
    const Dims3 dims{f1.rows(), f2.rows(), f3.rows()};
    ComplexTensor3 t(dims);
    // unfold_1(T) = F1 (F3 ⊙ F2)^T and unfold_1 shares the tensor's storage.
    Eigen::Map<ComplexMatrix> u1(t.data().data(), dims.i1, dims.i2 * dims.i3);
    if (f1.cols() > 0)
        u1.noalias() = f1 * khatri_rao(f3, f2).transpose();
    return t;
}

ComplexMatrix unfold(const ComplexTensor3 &t, int mode)
{
    checked_mode(mode);
    const Dims3 &d = t.dims();
    switch (mode)
    {
    case 1:
        return Eigen::Map<const ComplexMatrix>(t.data().data(), d.i1, d.i2 * d.i3);
    case 2:
    {
        ComplexMatrix out(d.i2, d.i1 * d.i3);
        for (Index i3 = 0; i3 < d.i3; ++i3)
            for (Index i2 = 0; i2 < d.i2; ++i2)
                for (Index i1 = 0; i1 < d.i1; ++i1)
                    out(i2, i1 * d.i3 + i3) = t(i1, i2, i3);
        return out;
    }
    default:
    {
        ComplexMatrix out(d.i3, d.i1 * d.i2);
        for (Index i3 = 0; i3 < d.i3; ++i3)
            for (Index i2 = 0; i2 < d.i2; ++i2)
                for (Index i1 = 0; i1 < d.i1; ++i1)
                    out(i3, i2 * d.i1 + i1) = t(i1, i2, i3);
        return out;
    }
    }
}

ComplexTensor3 fold(const ComplexMatrix &m, int mode, Dims3 dims)
{
    checked_mode(mode);
    require_dims(dims);
    const Index rows = dims[mode];
    if (m.rows() != rows || m.cols() * rows != dims.size())
        fail(ErrorCode::dimension, "fold: matrix shape does not match mode and dims");
    require_finite(m, "fold input");

    ComplexTensor3 t(dims);
    for (Index i3 = 0; i3 < dims.i3; ++i3)
        for (Index i2 = 0; i2 < dims.i2; ++i2)
            for (Index i1 = 0; i1 < dims.i1; ++i1)
            {
                switch (mode)
                {
                case 1: t(i1, i2, i3) = m(i1, i3 * dims.i2 + i2); break;
                case 2: t(i1, i2, i3) = m(i2, i1 * dims.i3 + i3); break;
                default: t(i1, i2, i3) = m(i3, i2 * dims.i1 + i1); break;
                }
            }
    return t;
}

ComplexVector vec_row(const ComplexMatrix &m)
{
    ComplexVector v(m.size());
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            v(i * m.cols() + j) = m(i, j);
    return v;
}

ComplexMatrix ivec_row(const ComplexVector &v, Index p, Index q)
{
    if (p < 1 || q < 1 || v.size() != p * q)
        fail(ErrorCode::dimension, "ivec_row: vector length " + std::to_string(v.size()) +
                                       " is not " + std::to_string(p) + "*" + std::to_string(q));
    ComplexMatrix out(p, q);
    for (Index i = 0; i < p; ++i)
        for (Index j = 0; j < q; ++j)
            out(i, j) = v(i * q + j);
    return out;
}

} // namespace emvs
