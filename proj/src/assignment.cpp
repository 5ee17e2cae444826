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

#include "emvs/assignment.hpp"

#include <limits>

#include "emvs/errors.hpp"

namespace emvs
{

// Shortest augmenting path formulation with row/column potentials.
std::vector<Eigen::Index> solve_assignment(const Eigen::MatrixXd &cost)
{
    using Eigen::Index;
    if (cost.rows() != cost.cols())
        fail(ErrorCode::dimension, "solve_assignment: cost matrix must be square");
    if (!cost.allFinite())
        fail(ErrorCode::numerical, "solve_assignment: non-finite cost");

    const Index n = cost.rows();
    const double inf = std::numeric_limits<double>::infinity();
    // 1-based work arrays; index 0 is the virtual source column.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<Index> match(n + 1, 0), way(n + 1, 0);

    for (Index row = 1; row <= n; ++row)
    {
        match[0] = row;
        Index col0 = 0;
        std::vector<double> min_to(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do
        {
            used[col0] = true;
            const Index row0 = match[col0];
            double delta = inf;
            Index col1 = 0;
            for (Index col = 1; col <= n; ++col)
            {
                if (used[col])
                    continue;
                const double reduced = cost(row0 - 1, col - 1) - u[row0] - v[col];
                if (reduced < min_to[col])
                {
                    min_to[col] = reduced;
                    way[col] = col0;
                }
                if (min_to[col] < delta)
                {
                    delta = min_to[col];
                    col1 = col;
                }
            }
            for (Index col = 0; col <= n; ++col)
            {
                if (used[col])
                {
                    u[match[col]] += delta;
                    v[col] -= delta;
                }
                else
                {
                    min_to[col] -= delta;
                }
            }
            col0 = col1;
        } while (match[col0] != 0);

        do
        {
            const Index col1 = way[col0];
            match[col0] = match[col1];
            col0 = col1;
        } while (col0 != 0);
    }

    std::vector<Index> row_to_col(static_cast<std::size_t>(n), 0);
    for (Index col = 1; col <= n; ++col)
        row_to_col[static_cast<std::size_t>(match[col] - 1)] = col - 1;
    return row_to_col;
}

} // namespace emvs
