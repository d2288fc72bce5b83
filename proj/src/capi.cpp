/*
 * Copyright 2026 the tlrd authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "tlrd.h"

#include <cstring>
#include <string>

#include "tlrd/metrics.hpp"
#include "tlrd/multislice.hpp"
#include "tlrd/phantom.hpp"
#include "tlrd/tpcp.hpp"
#include "tlrd/transform.hpp"
#include "tlrd/tsvd.hpp"
#include "tlrd/volume_io.hpp"

struct tlrd_tensor {
  tlrd::Tensor3 value;
};

struct tlrd_transform {
  tlrd::TransformSpec value;
};

// The per-volume tensors are moved out of the core result into these
// wrappers so the getters can hand out stable borrowed views.
struct tlrd_ms_result {
  tlrd::MultiSliceResult value;
  std::vector<tlrd_tensor> low_rank_views;
  std::vector<tlrd_tensor> sparse_views;
};

struct tlrd_phantom {
  std::vector<tlrd_tensor> volume_views;
  std::vector<tlrd_tensor> low_rank_views;
  std::vector<tlrd_tensor> sparse_views;
  std::vector<tlrd_tensor> mask_views;
};

namespace {

thread_local std::string g_last_error;

tlrd_status fail(tlrd_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <class Fn>
tlrd_status guarded(Fn&& fn) {
  try {
    fn();
    return TLRD_OK;
  } catch (const tlrd::ShapeError& e) {
    return fail(TLRD_ERR_SHAPE, e.what());
  } catch (const tlrd::IndexError& e) {
    return fail(TLRD_ERR_INDEX, e.what());
  } catch (const tlrd::NumericError& e) {
    return fail(TLRD_ERR_NUMERIC, e.what());
  } catch (const tlrd::UnsupportedError& e) {
    return fail(TLRD_ERR_UNSUPPORTED, e.what());
  } catch (const tlrd::UndefinedStatError& e) {
    return fail(TLRD_ERR_UNDEFINED_STAT, e.what());
  } catch (const tlrd::IoError& e) {
    return fail(TLRD_ERR_IO, e.what());
  } catch (const tlrd::InvalidArgument& e) {
    return fail(TLRD_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(TLRD_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(TLRD_ERR_INTERNAL, "unknown error");
  }
}

tlrd_status require(bool ok, const char* message) {
  return ok ? TLRD_OK : fail(TLRD_ERR_INVALID_ARGUMENT, message);
}

tlrd::TransformKind to_kind(tlrd_transform_kind kind) {
  switch (kind) {
    case TLRD_TRANSFORM_DCT: return tlrd::TransformKind::dct;
    case TLRD_TRANSFORM_DFT: return tlrd::TransformKind::dft;
    case TLRD_TRANSFORM_DWT4: return tlrd::TransformKind::dwt4;
  }
  throw tlrd::InvalidArgument("unknown transform kind");
}

tlrd::TpcpConfig to_config(const tlrd_tpcp_config* cfg,
                           tlrd::TransformSpec transform) {
  tlrd::TpcpConfig out(std::move(transform));
  if (cfg) {
    if (cfg->lambda > 0) out.lambda = cfg->lambda;
    out.mu0 = cfg->mu0;
    out.mu_max = cfg->mu_max;
    out.rho = cfg->rho;
    out.eps = cfg->eps;
    out.max_iters = cfg->max_iters;
    out.workers = cfg->workers;
  }
  return out;
}

tlrd::LabelVolume to_label(const tlrd_tensor* t, double threshold,
                           std::array<double, 3> spacing = {1.0, 1.0, 1.0}) {
  return tlrd::LabelVolume::from_tensor(t->value, threshold, spacing);
}

tlrd_element_type to_c_element(tlrd::ElementType type) {
  switch (type) {
    case tlrd::ElementType::u8: return TLRD_ELEMENT_U8;
    case tlrd::ElementType::i16: return TLRD_ELEMENT_I16;
    case tlrd::ElementType::f32: return TLRD_ELEMENT_F32;
  }
  return TLRD_ELEMENT_F32;
}

tlrd::ElementType to_cpp_element(tlrd_element_type type) {
  switch (type) {
    case TLRD_ELEMENT_U8: return tlrd::ElementType::u8;
    case TLRD_ELEMENT_I16: return tlrd::ElementType::i16;
    case TLRD_ELEMENT_F32: return tlrd::ElementType::f32;
  }
  throw tlrd::InvalidArgument("unknown element type");
}

tlrd_status borrowed_view(const std::vector<tlrd_tensor>& views, int64_t i,
                          const tlrd_tensor** out) {
  if (i < 0 || i >= static_cast<int64_t>(views.size())) {
    return fail(TLRD_ERR_INDEX, "index out of range");
  }
  *out = &views[static_cast<std::size_t>(i)];
  return TLRD_OK;
}

}  // namespace

extern "C" {

const char* tlrd_version(void) {
#ifdef TLRD_VERSION_STRING
  return TLRD_VERSION_STRING;
#else
  return "0.0.0";
#endif
}

const char* tlrd_last_error_message(void) { return g_last_error.c_str(); }

tlrd_status tlrd_tensor_create(int64_t n1, int64_t n2, int64_t n3,
                               tlrd_tensor** out) {
  if (auto s = require(out != nullptr, "out must not be null")) return s;
  return guarded([&] { *out = new tlrd_tensor{tlrd::Tensor3(n1, n2, n3)}; });
}

void tlrd_tensor_destroy(tlrd_tensor* t) { delete t; }

tlrd_status tlrd_tensor_clone(const tlrd_tensor* t, tlrd_tensor** out) {
  if (auto s = require(t && out, "null argument")) return s;
  return guarded([&] { *out = new tlrd_tensor{t->value}; });
}

tlrd_status tlrd_tensor_dims(const tlrd_tensor* t, int64_t* n1, int64_t* n2,
                             int64_t* n3) {
  if (auto s = require(t && n1 && n2 && n3, "null argument")) return s;
  *n1 = t->value.n1();
  *n2 = t->value.n2();
  *n3 = t->value.n3();
  return TLRD_OK;
}

tlrd_status tlrd_tensor_data(tlrd_tensor* t, double** out) {
  if (auto s = require(t && out, "null argument")) return s;
  *out = t->value.data().data();
  return TLRD_OK;
}

tlrd_status tlrd_tensor_data_const(const tlrd_tensor* t, const double** out) {
  if (auto s = require(t && out, "null argument")) return s;
  *out = t->value.data().data();
  return TLRD_OK;
}

tlrd_status tlrd_transform_create(tlrd_transform_kind kind, int64_t n3,
                                  tlrd_transform** out) {
  if (auto s = require(out != nullptr, "out must not be null")) return s;
  return guarded([&] {
    *out = new tlrd_transform{tlrd::build_transform(to_kind(kind), n3)};
  });
}

tlrd_status tlrd_transform_create_custom(const double* matrix, int64_t n3,
                                         tlrd_transform** out) {
  if (auto s = require(matrix && out, "null argument")) return s;
  return guarded([&] {
    tlrd::Matrix m = Eigen::Map<const tlrd::Matrix>(matrix, n3, n3);
    *out = new tlrd_transform{tlrd::TransformSpec::custom(m)};
  });
}

void tlrd_transform_destroy(tlrd_transform* t) { delete t; }

tlrd_status tlrd_transform_scale(const tlrd_transform* t, double* l) {
  if (auto s = require(t && l, "null argument")) return s;
  *l = t->value.scale();
  return TLRD_OK;
}

tlrd_status tlrd_tsvd_analyze(const tlrd_tensor* x, const tlrd_transform* t,
                              double rank_tol, int workers,
                              tlrd_tsvd_report* out) {
  if (auto s = require(x && t && out, "null argument")) return s;
  return guarded([&] {
    const auto factors = tlrd::tsvd(t->value, x->value, workers);
    const tlrd::Tensor3 recon = tlrd::reconstruct(factors);
    const double denom = tlrd::fro_norm(x->value);
    double rel = 0.0;
    if (denom > 0) {
      tlrd::Tensor3 diff = recon;
      diff.array() -= x->value.array();
      rel = tlrd::fro_norm(diff) / denom;
    }
    out->tubal_rank = tlrd::tubal_rank(factors, rank_tol);
    out->avg_rank = tlrd::avg_rank(t->value, x->value, rank_tol, workers);
    out->tnn = tlrd::tnn(t->value, x->value, workers);
    out->recon_rel_error = rel;
  });
}

void tlrd_tpcp_config_init(tlrd_tpcp_config* cfg) {
  if (!cfg) return;
  cfg->lambda = 0.0;
  cfg->mu0 = 1e-3;
  cfg->mu_max = 1e10;
  cfg->rho = 1.1;
  cfg->eps = 1e-8;
  cfg->max_iters = 500;
  cfg->workers = 1;
}

tlrd_status tlrd_tpcp_solve(const tlrd_tensor* x, const tlrd_transform* t,
                            const tlrd_tpcp_config* cfg,
                            tlrd_tensor** low_rank, tlrd_tensor** sparse,
                            tlrd_solve_info* info) {
  if (auto s = require(x && t && low_rank && sparse, "null argument")) {
    return s;
  }
  return guarded([&] {
    tlrd::TpcpResult result =
        tlrd::tpcp_solve(x->value, to_config(cfg, t->value));
    if (info) {
      info->iterations = result.iterations;
      info->converged = result.converged ? 1 : 0;
      info->resolved_lambda = result.resolved_lambda;
      const auto& last = result.trace.back();
      info->final_primal_inf = last.primal_inf;
      info->final_dl_inf = last.dl_inf;
      info->final_de_inf = last.de_inf;
    }
    *low_rank = new tlrd_tensor{std::move(result.low_rank)};
    *sparse = new tlrd_tensor{std::move(result.sparse)};
  });
}

double tlrd_default_lambda(int64_t n1, int64_t n2, int64_t n3) {
  try {
    return tlrd::default_lambda(n1, n2, n3);
  } catch (...) {
    return 0.0;
  }
}

tlrd_status tlrd_ms_lrtd(const tlrd_tensor* const* volumes,
                         int64_t n_volumes, int64_t segment_length,
                         tlrd_transform_kind kind,
                         const tlrd_tpcp_config* cfg, tlrd_ms_result** out) {
  if (auto s = require(volumes && out && n_volumes > 0, "null argument")) {
    return s;
  }
  return guarded([&] {
    std::vector<tlrd::Tensor3> vols;
    vols.reserve(static_cast<std::size_t>(n_volumes));
    for (int64_t i = 0; i < n_volumes; ++i) {
      if (!volumes[i]) throw tlrd::InvalidArgument("null volume handle");
      vols.push_back(volumes[i]->value);
    }
    // Kind carrier; each segment is re-sized internally.
    tlrd::TransformSpec like = tlrd::build_transform(
        to_kind(kind), to_kind(kind) == tlrd::TransformKind::dwt4 ? 2 : 1);
    tlrd::MultiSliceResult result =
        tlrd::ms_lrtd(vols, segment_length, to_config(cfg, std::move(like)));

    auto* wrapper = new tlrd_ms_result{std::move(result), {}, {}};
    wrapper->low_rank_views.reserve(wrapper->value.low_rank.size());
    wrapper->sparse_views.reserve(wrapper->value.sparse.size());
    for (auto& t : wrapper->value.low_rank) {
      wrapper->low_rank_views.push_back(tlrd_tensor{std::move(t)});
    }
    for (auto& t : wrapper->value.sparse) {
      wrapper->sparse_views.push_back(tlrd_tensor{std::move(t)});
    }
    wrapper->value.low_rank.clear();
    wrapper->value.sparse.clear();
    *out = wrapper;
  });
}

void tlrd_ms_result_destroy(tlrd_ms_result* r) { delete r; }

tlrd_status tlrd_ms_result_counts(const tlrd_ms_result* r,
                                  int64_t* n_volumes, int64_t* n_segments) {
  if (auto s = require(r && n_volumes && n_segments, "null argument")) {
    return s;
  }
  *n_volumes = static_cast<int64_t>(r->low_rank_views.size());
  *n_segments = static_cast<int64_t>(r->value.segments.size());
  return TLRD_OK;
}

tlrd_status tlrd_ms_result_low_rank(const tlrd_ms_result* r, int64_t volume,
                                    const tlrd_tensor** out) {
  if (auto s = require(r && out, "null argument")) return s;
  return borrowed_view(r->low_rank_views, volume, out);
}

tlrd_status tlrd_ms_result_sparse(const tlrd_ms_result* r, int64_t volume,
                                  const tlrd_tensor** out) {
  if (auto s = require(r && out, "null argument")) return s;
  return borrowed_view(r->sparse_views, volume, out);
}

tlrd_status tlrd_ms_result_segment(const tlrd_ms_result* r, int64_t segment,
                                   tlrd_segment_info* out) {
  if (auto s = require(r && out, "null argument")) return s;
  if (segment < 0 ||
      segment >= static_cast<int64_t>(r->value.segments.size())) {
    return fail(TLRD_ERR_INDEX, "segment index out of range");
  }
  const auto& s = r->value.segments[static_cast<std::size_t>(segment)];
  out->core_start = s.range.core_start;
  out->core_end = s.range.core_end;
  out->padded_start = s.range.padded_start;
  out->padded_end = s.range.padded_end;
  out->iterations = s.iterations;
  out->converged = s.converged ? 1 : 0;
  out->resolved_lambda = s.resolved_lambda;
  out->solve_seconds = s.solve_seconds;
  out->final_primal_inf = s.trace.empty() ? 0.0 : s.trace.back().primal_inf;
  return TLRD_OK;
}

tlrd_status tlrd_ms_result_trace(const tlrd_ms_result* r, int64_t segment,
                                 double* trace, int64_t* rows) {
  if (auto s = require(r && rows, "null argument")) return s;
  if (segment < 0 ||
      segment >= static_cast<int64_t>(r->value.segments.size())) {
    return fail(TLRD_ERR_INDEX, "segment index out of range");
  }
  const auto& t = r->value.segments[static_cast<std::size_t>(segment)].trace;
  if (trace) {
    const auto n = std::min<int64_t>(*rows, static_cast<int64_t>(t.size()));
    for (int64_t i = 0; i < n; ++i) {
      trace[4 * i + 0] = t[static_cast<std::size_t>(i)].primal_inf;
      trace[4 * i + 1] = t[static_cast<std::size_t>(i)].dl_inf;
      trace[4 * i + 2] = t[static_cast<std::size_t>(i)].de_inf;
      trace[4 * i + 3] = t[static_cast<std::size_t>(i)].mu;
    }
  }
  *rows = static_cast<int64_t>(t.size());
  return TLRD_OK;
}

tlrd_status tlrd_masked_stats_compute(const tlrd_tensor* image,
                                      const tlrd_tensor* mask,
                                      double mask_threshold, int64_t bins,
                                      tlrd_masked_stats* out) {
  if (auto s = require(image && mask && out, "null argument")) return s;
  return guarded([&] {
    const auto stats = tlrd::masked_stats(
        image->value, to_label(mask, mask_threshold), bins);
    out->sigma = stats.sigma;
    out->entropy_bits = stats.entropy_bits;
    out->voxel_count = stats.voxel_count;
    out->bin_count = stats.bin_count;
  });
}

tlrd_status tlrd_ncc(const tlrd_tensor* a, const tlrd_tensor* b,
                     const tlrd_tensor* region, double mask_threshold,
                     double* out) {
  if (auto s = require(a && b && out, "null argument")) return s;
  return guarded([&] {
    *out = region ? tlrd::ncc(a->value, b->value,
                              to_label(region, mask_threshold))
                  : tlrd::ncc(a->value, b->value);
  });
}

tlrd_status tlrd_dice(const tlrd_tensor* a, const tlrd_tensor* b,
                      double mask_threshold, double* out) {
  if (auto s = require(a && b && out, "null argument")) return s;
  return guarded([&] {
    *out = tlrd::dice(to_label(a, mask_threshold),
                      to_label(b, mask_threshold));
  });
}

tlrd_status tlrd_jaccard(const tlrd_tensor* a, const tlrd_tensor* b,
                         double mask_threshold, double* out) {
  if (auto s = require(a && b && out, "null argument")) return s;
  return guarded([&] {
    *out = tlrd::jaccard(to_label(a, mask_threshold),
                         to_label(b, mask_threshold));
  });
}

tlrd_status tlrd_asd(const tlrd_tensor* a, const tlrd_tensor* b,
                     double mask_threshold, const double spacing[3],
                     double* out) {
  if (auto s = require(a && b && spacing && out, "null argument")) return s;
  return guarded([&] {
    const std::array<double, 3> sp{spacing[0], spacing[1], spacing[2]};
    *out = tlrd::asd(to_label(a, mask_threshold, sp),
                     to_label(b, mask_threshold, sp));
  });
}

tlrd_status tlrd_volume_read(const char* path, tlrd_tensor** out,
                             tlrd_volume_meta* meta) {
  if (auto s = require(path && out, "null argument")) return s;
  return guarded([&] {
    auto [tensor, m] = tlrd::read_volume(path);
    if (meta) {
      meta->dims[0] = m.dims[0];
      meta->dims[1] = m.dims[1];
      meta->dims[2] = m.dims[2];
      meta->spacing[0] = m.spacing[0];
      meta->spacing[1] = m.spacing[1];
      meta->spacing[2] = m.spacing[2];
      meta->element_type = to_c_element(m.element_type);
      meta->intensity_offset = m.intensity_offset;
      meta->intensity_scale = m.intensity_scale;
    }
    *out = new tlrd_tensor{std::move(tensor)};
  });
}

tlrd_status tlrd_volume_write(const char* path, const tlrd_tensor* t,
                              const tlrd_volume_meta* meta) {
  if (auto s = require(path && t && meta, "null argument")) return s;
  return guarded([&] {
    tlrd::VolumeMeta m;
    m.dims = {meta->dims[0], meta->dims[1], meta->dims[2]};
    m.spacing = {meta->spacing[0], meta->spacing[1], meta->spacing[2]};
    m.element_type = to_cpp_element(meta->element_type);
    m.intensity_offset = meta->intensity_offset;
    m.intensity_scale = meta->intensity_scale;
    tlrd::write_volume(path, t->value, m);
  });
}

tlrd_status tlrd_tensor_normalize(tlrd_tensor* t, double* offset,
                                  double* scale) {
  if (auto s = require(t && offset && scale, "null argument")) return s;
  return guarded([&] {
    tlrd::Normalized n = tlrd::normalize(t->value);
    t->value = std::move(n.tensor);
    *offset = n.offset;
    *scale = n.scale;
  });
}

tlrd_status tlrd_tensor_denormalize(tlrd_tensor* t, double offset,
                                    double scale) {
  if (auto s = require(t != nullptr, "null argument")) return s;
  return guarded([&] {
    t->value = tlrd::denormalize(t->value, offset, scale);
  });
}

void tlrd_phantom_spec_init(tlrd_phantom_spec* spec) {
  if (!spec) return;
  spec->n1 = 64;
  spec->n2 = 64;
  spec->d = 30;
  spec->tubal_rank = 5;
  spec->n_volumes = 1;
  spec->sparse_fraction = 0.05;
  spec->sparse_magnitude = 1.0;
  spec->slice_drift = 0.0;
  spec->seed = 0;
}

tlrd_status tlrd_phantom_generate(const tlrd_phantom_spec* spec,
                                  tlrd_phantom** out) {
  if (auto s = require(spec && out, "null argument")) return s;
  return guarded([&] {
    tlrd::PhantomSpec ps;
    ps.n1 = spec->n1;
    ps.n2 = spec->n2;
    ps.d = spec->d;
    ps.tubal_rank = spec->tubal_rank;
    ps.n_volumes = spec->n_volumes;
    ps.sparse_fraction = spec->sparse_fraction;
    ps.sparse_magnitude = spec->sparse_magnitude;
    ps.slice_drift = spec->slice_drift;
    ps.seed = spec->seed;

    tlrd::Phantom phantom = tlrd::make_phantom(ps);
    auto* wrapper = new tlrd_phantom{};
    for (auto& t : phantom.volumes) {
      wrapper->volume_views.push_back(tlrd_tensor{std::move(t)});
    }
    for (auto& t : phantom.truth_low_rank) {
      wrapper->low_rank_views.push_back(tlrd_tensor{std::move(t)});
    }
    for (auto& t : phantom.truth_sparse) {
      wrapper->sparse_views.push_back(tlrd_tensor{std::move(t)});
    }
    for (auto& m : phantom.anomaly_masks) {
      wrapper->mask_views.push_back(tlrd_tensor{m.to_tensor()});
    }
    *out = wrapper;
  });
}

void tlrd_phantom_destroy(tlrd_phantom* p) { delete p; }

tlrd_status tlrd_phantom_volume(const tlrd_phantom* p, int64_t i,
                                const tlrd_tensor** out) {
  if (auto s = require(p && out, "null argument")) return s;
  return borrowed_view(p->volume_views, i, out);
}

tlrd_status tlrd_phantom_truth_low_rank(const tlrd_phantom* p, int64_t i,
                                        const tlrd_tensor** out) {
  if (auto s = require(p && out, "null argument")) return s;
  return borrowed_view(p->low_rank_views, i, out);
}

tlrd_status tlrd_phantom_truth_sparse(const tlrd_phantom* p, int64_t i,
                                      const tlrd_tensor** out) {
  if (auto s = require(p && out, "null argument")) return s;
  return borrowed_view(p->sparse_views, i, out);
}

tlrd_status tlrd_phantom_anomaly_mask(const tlrd_phantom* p, int64_t i,
                                      const tlrd_tensor** out) {
  if (auto s = require(p && out, "null argument")) return s;
  return borrowed_view(p->mask_views, i, out);
}

tlrd_status tlrd_sweep_k(const tlrd_tensor* const* volumes,
                         int64_t n_volumes, const int64_t* k_values,
                         int64_t n_k, const tlrd_tensor* mask,
                         double mask_threshold, tlrd_transform_kind kind,
                         const tlrd_tpcp_config* cfg, double* sigmas,
                         double* entropies) {
  if (auto s = require(volumes && k_values && mask && sigmas && entropies &&
                           n_volumes > 0 && n_k > 0,
                       "null argument")) {
    return s;
  }
  return guarded([&] {
    std::vector<tlrd::Tensor3> vols;
    vols.reserve(static_cast<std::size_t>(n_volumes));
    for (int64_t i = 0; i < n_volumes; ++i) {
      if (!volumes[i]) throw tlrd::InvalidArgument("null volume handle");
      vols.push_back(volumes[i]->value);
    }
    std::vector<tlrd::Index> ks(k_values, k_values + n_k);
    tlrd::TransformSpec like = tlrd::build_transform(
        to_kind(kind), to_kind(kind) == tlrd::TransformKind::dwt4 ? 2 : 1);
    const auto rows = tlrd::sweep_segment_length(
        vols, ks, to_label(mask, mask_threshold),
        to_config(cfg, std::move(like)));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      sigmas[i] = rows[i].sigma;
      entropies[i] = rows[i].entropy_bits;
    }
  });
}

}  // extern "C"
