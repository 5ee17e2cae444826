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

#include "emvs/dataset_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>

namespace emvs
{

namespace
{

constexpr std::size_t magic_len = sizeof(dataset_magic) - 1;

template <typename T>
void put_le(std::ostream &out, T value)
{
    static_assert(std::is_trivially_copyable_v<T>);
    std::array<char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(bytes.begin(), bytes.end());
    out.write(bytes.data(), sizeof(T));
}

template <typename T>
T get_le(std::istream &in)
{
    std::array<char, sizeof(T)> bytes;
    if (!in.read(bytes.data(), sizeof(T)))
        fail(ErrorCode::io, "dataset truncated");
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(bytes.begin(), bytes.end());
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

} // namespace

void write_dataset(std::ostream &out, const ComplexTensor3 &tensor)
{
    const Dims3 &d = tensor.dims();
    constexpr auto u32_max = static_cast<Index>(std::numeric_limits<std::uint32_t>::max());
    if (d.i1 > u32_max || d.i2 > u32_max || d.i3 > u32_max)
        fail(ErrorCode::io, "tensor dimension does not fit in u32");
    out.write(dataset_magic, magic_len);
    put_le(out, static_cast<std::uint32_t>(d.i1));
    put_le(out, static_cast<std::uint32_t>(d.i2));
    put_le(out, static_cast<std::uint32_t>(d.i3));
    for (const cdouble &z : tensor.data())
    {
        put_le(out, z.real());
        put_le(out, z.imag());
    }
    if (!out)
        fail(ErrorCode::io, "failed writing dataset");
}

void write_dataset(const std::string &path, const ComplexTensor3 &tensor)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        fail(ErrorCode::io, "cannot open '" + path + "' for writing");
    write_dataset(out, tensor);
}

ComplexTensor3 read_dataset(std::istream &in)
{
    char magic[magic_len];
    if (!in.read(magic, magic_len) || std::memcmp(magic, dataset_magic, magic_len) != 0)
        fail(ErrorCode::io, "not an EMVS1 dataset (bad magic)");
    Dims3 d;
    d.i1 = get_le<std::uint32_t>(in);
    d.i2 = get_le<std::uint32_t>(in);
    d.i3 = get_le<std::uint32_t>(in);
    if (d.i1 < 1 || d.i2 < 1 || d.i3 < 1)
        fail(ErrorCode::io, "dataset has a zero dimension");
    std::vector<cdouble> data(static_cast<std::size_t>(d.size()));
    for (cdouble &z : data)
    {
        const double re = get_le<double>(in);
        const double im = get_le<double>(in);
        z = {re, im};
    }
    if (in.peek() != std::char_traits<char>::eof())
        fail(ErrorCode::io, "trailing bytes after dataset payload");
    return ComplexTensor3(d, std::move(data));
}

ComplexTensor3 read_dataset(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(ErrorCode::io, "cannot open '" + path + "'");
    return read_dataset(in);
}

} // namespace emvs
