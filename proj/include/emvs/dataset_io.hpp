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

// Binary dataset file:
//   bytes 0..4   magic "EMVS1"
//   3 x u32 LE   I1, I2, I3
//   I1*I2*I3 x (f64 LE re, f64 LE im), mode-1-major (i1 fastest)

#ifndef EMVS_DATASET_IO_HPP
#define EMVS_DATASET_IO_HPP

#include <iosfwd>
#include <string>

#include "emvs/tensor.hpp"

namespace emvs
{

inline constexpr char dataset_magic[] = "EMVS1";

void write_dataset(std::ostream &out, const ComplexTensor3 &tensor);
void write_dataset(const std::string &path, const ComplexTensor3 &tensor);

ComplexTensor3 read_dataset(std::istream &in);
ComplexTensor3 read_dataset(const std::string &path);

} // namespace emvs

#endif
