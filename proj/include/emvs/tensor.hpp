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

// Dense complex matrix / 3-way tensor algebra.
//
// Conventions (formulas use 1-based indices, the code is 0-based):
//
//   storage      T[i1,i2,i3] lives at offset (i1-1) + I1*((i2-1) + I2*(i3-1)),
//                i.e. mode 1 varies fastest ("mode-1-major").
//   khatri_rao   (A ⊙ B)[(i-1)*J + j, k] = A[i,k] * B[j,k]
//   unfold_1     U1[i1, (i3-1)*I2 + i2] = T[i1,i2,i3]
//   unfold_2     U2[i2, (i1-1)*I3 + i3] = T[i1,i2,i3]
//   unfold_3     U3[i3, (i2-1)*I1 + i1] = T[i1,i2,i3]
//
// With T = cp_reconstruct(F1,F2,F3) this gives
//   unfold_1(T) = F1 (F3 ⊙ F2)^T,  unfold_2(T) = F2 (F1 ⊙ F3)^T,
//   unfold_3(T) = F3 (F2 ⊙ F1)^T.
// Slice relations of the form  T[:,:,i3]^T = F2 diag(F3[i3,:]) F1^T  are
// the column blocks of unfold_1 transposed; tests/test_tensor_core.cpp
// checks both forms.
//
// unfold_1 shares storage with the tensor: its column-major data is the
// tensor data verbatim.

#ifndef EMVS_TENSOR_HPP
#define EMVS_TENSOR_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "emvs/errors.hpp"

namespace emvs
{

using cdouble = std::complex<double>;
using Index = Eigen::Index;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

struct Dims3
{
    Index i1 = 1;
    Index i2 = 1;
    Index i3 = 1;

    Index operator[](int mode) const { return mode == 1 ? i1 : mode == 2 ? i2 : i3; }
    Index size() const { return i1 * i2 * i3; }
    friend bool operator==(const Dims3 &, const Dims3 &) = default;
};

/// Throws ErrorCode::numerical if any entry is NaN or infinite.
void require_finite(const ComplexMatrix &m, const char *what);

class ComplexTensor3
{
public:
    /// Zero tensor. All dims must be >= 1.
    explicit ComplexTensor3(Dims3 dims);
    /// Takes ownership of `data` laid out in mode-1-major order; entries must be finite.
    ComplexTensor3(Dims3 dims, std::vector<cdouble> data);

    const Dims3 &dims() const noexcept { return dims_; }

    cdouble operator()(Index i1, Index i2, Index i3) const { return data_[offset(i1, i2, i3)]; }
    cdouble &operator()(Index i1, Index i2, Index i3) { return data_[offset(i1, i2, i3)]; }

    std::span<const cdouble> data() const noexcept { return data_; }
    std::span<cdouble> data() noexcept { return data_; }

    /// Frontal slice T[:,:,i3] as an I1 x I2 view.
    Eigen::Map<const ComplexMatrix> frontal(Index i3) const
    {
        return {data_.data() + i3 * dims_.i1 * dims_.i2, dims_.i1, dims_.i2};
    }

    double frobenius_norm() const;

private:
    std::size_t offset(Index i1, Index i2, Index i3) const
    {
        return static_cast<std::size_t>(i1 + dims_.i1 * (i2 + dims_.i2 * i3));
    }

    Dims3 dims_;
    std::vector<cdouble> data_;
};

ComplexVector kron(const ComplexVector &a, const ComplexVector &b);

/// Column-wise Kronecker product; A and B need equal column counts.
ComplexMatrix khatri_rao(const ComplexMatrix &a, const ComplexMatrix &b);

/// T[i1,i2,i3] = sum_k F1[i1,k] F2[i2,k] F3[i3,k].
ComplexTensor3 cp_reconstruct(const ComplexMatrix &f1, const ComplexMatrix &f2,
                              const ComplexMatrix &f3);

ComplexMatrix unfold(const ComplexTensor3 &t, int mode);
ComplexTensor3 fold(const ComplexMatrix &m, int mode, Dims3 dims);

/// Row-major vectorization: [row 1, row 2, ...].
ComplexVector vec_row(const ComplexMatrix &m);
/// Inverse of vec_row: out[i,j] = v[(i-1)*q + j].
ComplexMatrix ivec_row(const ComplexVector &v, Index p, Index q);

} // namespace emvs

#endif
