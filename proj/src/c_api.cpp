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

#include "emvs/emvs.h"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <optional>
#include <sstream>
#include <string>

#include "emvs/bench.hpp"
#include "emvs/dataset_io.hpp"
#include "emvs/nested_estimator.hpp"

struct emvs_scene
{
    emvs::Scene scene;
};

struct emvs_dataset
{
    emvs::SnapshotData data;
};

struct emvs_estimates
{
    std::vector<emvs::TargetParams> params;
    bool converged = true;
};

struct emvs_bench_config
{
    emvs::BenchConfig cfg;
};

struct emvs_bench_result
{
    emvs::BenchResult result;
};

namespace
{

thread_local std::string last_error;

emvs_status status_of(emvs::ErrorCode code)
{
    switch (code)
    {
    case emvs::ErrorCode::argument: return EMVS_ERR_ARGUMENT;
    case emvs::ErrorCode::dimension: return EMVS_ERR_DIMENSION;
    case emvs::ErrorCode::identifiability: return EMVS_ERR_IDENTIFIABILITY;
    case emvs::ErrorCode::numerical: return EMVS_ERR_NUMERICAL;
    case emvs::ErrorCode::degenerate: return EMVS_ERR_DEGENERATE;
    case emvs::ErrorCode::io: return EMVS_ERR_IO;
    case emvs::ErrorCode::config: return EMVS_ERR_CONFIG;
    }
    return EMVS_ERR_INTERNAL;
}

emvs_status set_error(emvs_status s, const std::string &msg)
{
    last_error = msg;
    return s;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
emvs_status guarded(F &&body)
{
    try
    {
        body();
        return EMVS_OK;
    }
    catch (const emvs::Error &e)
    {
        return set_error(status_of(e.code()), e.what());
    }
    catch (const std::bad_alloc &)
    {
        return set_error(EMVS_ERR_INTERNAL, "out of memory");
    }
    catch (const std::exception &e)
    {
        return set_error(EMVS_ERR_INTERNAL, e.what());
    }
    catch (...)
    {
        return set_error(EMVS_ERR_INTERNAL, "unknown exception");
    }
}

void need(const void *p, const char *what)
{
    if (!p)
        emvs::fail(emvs::ErrorCode::argument, std::string(what) + " is null");
}

std::string read_text(const char *path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        emvs::fail(emvs::ErrorCode::io, std::string("cannot open ") + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const char *path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        emvs::fail(emvs::ErrorCode::io, std::string("cannot write ") + path);
    out << text;
    if (!out)
        emvs::fail(emvs::ErrorCode::io, std::string("write failed: ") + path);
}

emvs::AlsOptions als_from(const emvs_als_options *o)
{
    emvs::AlsOptions opts;
    if (o)
    {
        opts.max_iters = o->max_iters;
        opts.rel_tol = o->rel_tol;
        opts.restarts = o->restarts;
        opts.seed = o->seed;
    }
    opts.validate();
    return opts;
}

} // namespace

extern "C" {

const char *emvs_version(void) { return EMVS_VERSION; }

const char *emvs_last_error(void) { return last_error.c_str(); }

const char *emvs_status_string(emvs_status status)
{
    switch (status)
    {
    case EMVS_OK: return "ok";
    case EMVS_ERR_ARGUMENT: return "invalid argument";
    case EMVS_ERR_DIMENSION: return "dimension mismatch";
    case EMVS_ERR_IDENTIFIABILITY: return "not identifiable";
    case EMVS_ERR_NUMERICAL: return "numerical failure";
    case EMVS_ERR_DEGENERATE: return "degenerate input";
    case EMVS_ERR_IO: return "i/o error";
    case EMVS_ERR_CONFIG: return "invalid configuration";
    case EMVS_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void emvs_als_options_default(emvs_als_options *opts)
{
    if (!opts)
        return;
    const emvs::AlsOptions d;
    opts->max_iters = d.max_iters;
    opts->rel_tol = d.rel_tol;
    opts->restarts = d.restarts;
    opts->seed = d.seed;
}

// ---- scenes ---------------------------------------------------------------

emvs_status emvs_scene_from_json(const char *json_text, emvs_scene **out)
{
    return guarded([&] {
        need(json_text, "json_text");
        need(out, "out");
        *out = new emvs_scene{emvs::parse_scene(json_text)};
    });
}

emvs_status emvs_scene_load(const char *path, emvs_scene **out)
{
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new emvs_scene{emvs::parse_scene(read_text(path))};
    });
}

emvs_status emvs_scene_create(int M, int N, int L, int K, const double *params, emvs_scene **out)
{
    return guarded([&] {
        need(params, "params");
        need(out, "out");
        if (K < 1)
            emvs::fail(emvs::ErrorCode::argument, "K must be at least 1");
        emvs::Scene s;
        s.M = M;
        s.N = N;
        s.L = L;
        for (int k = 0; k < K; ++k)
        {
            std::array<double, 8> a{};
            std::copy_n(params + 8 * k, 8, a.begin());
            s.targets.push_back(emvs::TargetParams::from_array(a));
        }
        s.validate();
        *out = new emvs_scene{std::move(s)};
    });
}

void emvs_scene_free(emvs_scene *scene) { delete scene; }

emvs_status emvs_scene_dims(const emvs_scene *scene, int *M, int *N, int *L, int *K)
{
    return guarded([&] {
        need(scene, "scene");
        if (M) *M = static_cast<int>(scene->scene.M);
        if (N) *N = static_cast<int>(scene->scene.N);
        if (L) *L = static_cast<int>(scene->scene.L);
        if (K) *K = static_cast<int>(scene->scene.K());
    });
}

emvs_status emvs_scene_target(const emvs_scene *scene, int k, double params[8])
{
    return guarded([&] {
        need(scene, "scene");
        need(params, "params");
        if (k < 0 || k >= scene->scene.K())
            emvs::fail(emvs::ErrorCode::argument, "target index out of range");
        const auto a = scene->scene.targets[static_cast<std::size_t>(k)].as_array();
        std::copy(a.begin(), a.end(), params);
    });
}

// ---- datasets -------------------------------------------------------------

emvs_status emvs_simulate(const emvs_scene *scene, int has_snr, double snr_db, uint64_t seed,
                          emvs_dataset **out)
{
    return guarded([&] {
        need(scene, "scene");
        need(out, "out");
        std::optional<double> snr;
        if (has_snr)
            snr = snr_db;
        *out = new emvs_dataset{emvs::synthesize(scene->scene, snr, seed)};
    });
}

emvs_status emvs_dataset_create(int M, int N, int L, const double *interleaved, emvs_dataset **out)
{
    return guarded([&] {
        need(interleaved, "interleaved");
        need(out, "out");
        if (M < 2 || N < 2 || L < 1)
            emvs::fail(emvs::ErrorCode::argument, "need M >= 2, N >= 2, L >= 1");
        const emvs::Dims3 dims{6 * static_cast<emvs::Index>(M) * N, 6, L};
        std::vector<emvs::cdouble> v(static_cast<std::size_t>(dims.size()));
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = {interleaved[2 * i], interleaved[2 * i + 1]};
        *out = new emvs_dataset{emvs::SnapshotData::from_tensor(emvs::ComplexTensor3(dims, std::move(v)), M, N)};
    });
}

emvs_status emvs_dataset_save(const emvs_dataset *data, const char *path)
{
    return guarded([&] {
        need(data, "data");
        need(path, "path");
        emvs::write_dataset(std::string(path), data->data.tensor);
    });
}

emvs_status emvs_dataset_load(const char *path, int M, int N, emvs_dataset **out)
{
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        auto t = emvs::read_dataset(std::string(path));
        *out = new emvs_dataset{emvs::SnapshotData::from_tensor(std::move(t), M, N)};
    });
}

emvs_status emvs_dataset_file_dims(const char *path, uint32_t dims[3])
{
    return guarded([&] {
        need(path, "path");
        need(dims, "dims");
        std::ifstream in(path, std::ios::binary);
        if (!in)
            emvs::fail(emvs::ErrorCode::io, std::string("cannot open ") + path);
        char magic[sizeof emvs::dataset_magic - 1];
        unsigned char raw[12];
        if (!in.read(magic, sizeof magic) || std::memcmp(magic, emvs::dataset_magic, sizeof magic) != 0)
            emvs::fail(emvs::ErrorCode::io, "not a dataset file");
        if (!in.read(reinterpret_cast<char *>(raw), sizeof raw))
            emvs::fail(emvs::ErrorCode::io, "truncated dataset header");
        for (int d = 0; d < 3; ++d)
            dims[d] = uint32_t(raw[4 * d]) | uint32_t(raw[4 * d + 1]) << 8 | uint32_t(raw[4 * d + 2]) << 16 |
                      uint32_t(raw[4 * d + 3]) << 24;
    });
}

emvs_status emvs_dataset_dims(const emvs_dataset *data, uint32_t dims[3])
{
    return guarded([&] {
        need(data, "data");
        need(dims, "dims");
        const auto &d = data->data.tensor.dims();
        dims[0] = static_cast<uint32_t>(d.i1);
        dims[1] = static_cast<uint32_t>(d.i2);
        dims[2] = static_cast<uint32_t>(d.i3);
    });
}

emvs_status emvs_dataset_entry(const emvs_dataset *data, uint32_t i1, uint32_t i2, uint32_t i3, double *re,
                               double *im)
{
    return guarded([&] {
        need(data, "data");
        const auto &d = data->data.tensor.dims();
        if (i1 >= d.i1 || i2 >= d.i2 || i3 >= d.i3)
            emvs::fail(emvs::ErrorCode::argument, "entry index out of range");
        const auto v = data->data.tensor(i1, i2, i3);
        if (re) *re = v.real();
        if (im) *im = v.imag();
    });
}

void emvs_dataset_free(emvs_dataset *data) { delete data; }

// ---- estimation -----------------------------------------------------------

emvs_status emvs_check_identifiability(int M, int N, int K, int L, int *passes, char *details,
                                       size_t details_len)
{
    return guarded([&] {
        need(passes, "passes");
        const auto id = emvs::check_identifiability(M, N, K, L);
        *passes = id.passes ? 1 : 0;
        if (details && details_len > 0)
        {
            const std::string v = id.violations();
            const std::size_t n = std::min(v.size(), details_len - 1);
            std::memcpy(details, v.data(), n);
            details[n] = '\0';
        }
    });
}

double emvs_complexity_estimate(int M, int N, int L, int K, int sweeps)
{
    return emvs::complexity_estimate(M, N, L, K, sweeps);
}

emvs_status emvs_estimate(const emvs_dataset *data, int K, emvs_method method, const emvs_als_options *opts,
                          emvs_estimates **out)
{
    return guarded([&] {
        need(data, "data");
        need(out, "out");
        const auto als = als_from(opts);
        emvs::EstimationReport rep;
        switch (method)
        {
        case EMVS_METHOD_NESTED: rep = emvs::estimate_nested(data->data, K, als); break;
        case EMVS_METHOD_BASELINE: rep = emvs::estimate_baseline_parafac(data->data, K, als); break;
        default: emvs::fail(emvs::ErrorCode::argument, "unknown method");
        }
        auto est = std::make_unique<emvs_estimates>();
        for (const auto &t : rep.targets)
            est->params.push_back(t.params);
        for (const auto &r : rep.als)
            est->converged = est->converged && r.converged;
        *out = est.release();
    });
}

int emvs_estimates_count(const emvs_estimates *est)
{
    return est ? static_cast<int>(est->params.size()) : 0;
}

emvs_status emvs_estimates_get(const emvs_estimates *est, int k, double params[8])
{
    return guarded([&] {
        need(est, "est");
        need(params, "params");
        if (k < 0 || k >= static_cast<int>(est->params.size()))
            emvs::fail(emvs::ErrorCode::argument, "estimate index out of range");
        const auto a = est->params[static_cast<std::size_t>(k)].as_array();
        std::copy(a.begin(), a.end(), params);
    });
}

emvs_status emvs_estimates_match(emvs_estimates *est, const emvs_scene *truth)
{
    return guarded([&] {
        need(est, "est");
        need(truth, "truth");
        if (est->params.size() != truth->scene.targets.size())
            emvs::fail(emvs::ErrorCode::dimension, "estimate count differs from the scene's target count");
        std::vector<emvs::TargetEstimate> wrapped(est->params.size());
        for (std::size_t i = 0; i < wrapped.size(); ++i)
            wrapped[i].params = est->params[i];
        est->params = emvs::match_to_truth(wrapped, truth->scene.targets);
    });
}

int emvs_estimates_converged(const emvs_estimates *est) { return est && est->converged ? 1 : 0; }

void emvs_estimates_free(emvs_estimates *est) { delete est; }

// ---- benchmark ------------------------------------------------------------

emvs_status emvs_bench_config_from_json(const char *json_text, emvs_bench_config **out)
{
    return guarded([&] {
        need(json_text, "json_text");
        need(out, "out");
        *out = new emvs_bench_config{emvs::parse_bench_config(json_text)};
    });
}

emvs_status emvs_bench_config_load(const char *path, emvs_bench_config **out)
{
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new emvs_bench_config{emvs::load_bench_config(path)};
    });
}

void emvs_bench_config_free(emvs_bench_config *cfg) { delete cfg; }

emvs_status emvs_bench_run(const emvs_bench_config *cfg, emvs_bench_result **out)
{
    return guarded([&] {
        need(cfg, "cfg");
        need(out, "out");
        *out = new emvs_bench_result{emvs::run_sweep(cfg->cfg)};
    });
}

int emvs_bench_result_rows(const emvs_bench_result *res)
{
    return res ? static_cast<int>(res->result.rows.size()) : 0;
}

emvs_status emvs_bench_result_row(const emvs_bench_result *res, int i, double *snr_db, emvs_method *method,
                                  emvs_param_group *group, double *rmse_rad, int *trials_used)
{
    return guarded([&] {
        need(res, "res");
        if (i < 0 || i >= static_cast<int>(res->result.rows.size()))
            emvs::fail(emvs::ErrorCode::argument, "row index out of range");
        const auto &r = res->result.rows[static_cast<std::size_t>(i)];
        if (snr_db) *snr_db = r.snr_db;
        if (method) *method = r.method == emvs::Method::nested ? EMVS_METHOD_NESTED : EMVS_METHOD_BASELINE;
        if (group) *group = r.group == emvs::ParamGroup::angle ? EMVS_GROUP_ANGLE : EMVS_GROUP_POLARIZATION;
        if (rmse_rad) *rmse_rad = r.rmse;
        if (trials_used) *trials_used = r.trials_used;
    });
}

emvs_status emvs_bench_write_csv(const emvs_bench_result *res, const char *path, int with_wall_time)
{
    return guarded([&] {
        need(res, "res");
        need(path, "path");
        write_text(path, emvs::results_csv(res->result, with_wall_time != 0));
    });
}

emvs_status emvs_bench_write_param_csv(const emvs_bench_result *res, const char *path)
{
    return guarded([&] {
        need(res, "res");
        need(path, "path");
        write_text(path, emvs::per_param_csv(res->result));
    });
}

emvs_status emvs_bench_write_manifest(const emvs_bench_config *cfg, const emvs_bench_result *res,
                                      const char *path)
{
    return guarded([&] {
        need(cfg, "cfg");
        need(res, "res");
        need(path, "path");
        write_text(path, emvs::manifest_json(cfg->cfg, res->result));
    });
}

void emvs_bench_result_free(emvs_bench_result *res) { delete res; }

} // extern "C"
