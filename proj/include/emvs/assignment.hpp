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

#ifndef EMVS_ASSIGNMENT_HPP
#define EMVS_ASSIGNMENT_HPP

#include <vector>

#include <Eigen/Dense>

namespace emvs
{

/// Minimum-cost one-to-one assignment on a square cost matrix (Hungarian
/// method, O(n^3)). Returns `row_to_col` with row i assigned to column
/// row_to_col[i].
std::vector<Eigen::Index> solve_assignment(const Eigen::MatrixXd &cost);

} // namespace emvs

#endif
