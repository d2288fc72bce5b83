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

// Command-line front end over the tlrd shared library. Subcommands:
//   decompose        multi-slice low-rank + sparse separation of volumes
//   tsvd             factor one volume and report rank statistics
//   bench-transforms compare dct / fft / dwt4 on the same inputs
//   sweep-k          segment-length study, CSV + optional SVG plot
//   phantom          generate synthetic volumes with known ground truth
//   metrics          segmentation and intensity statistics
//
// Exit codes: 0 success, 1 error, 2 success with non-converged segments.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tlrd.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kReportVersion = 1;
// Sparse-support cut for reporting, as a fraction of the intensity range.
constexpr double kSupportThreshold = 5e-3;

class CliError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void check(tlrd_status status) {
  if (status != TLRD_OK) throw CliError(tlrd_last_error_message());
}

struct TensorDeleter {
  void operator()(tlrd_tensor* t) const { tlrd_tensor_destroy(t); }
};
using TensorPtr = std::unique_ptr<tlrd_tensor, TensorDeleter>;

struct TransformDeleter {
  void operator()(tlrd_transform* t) const { tlrd_transform_destroy(t); }
};
using TransformPtr = std::unique_ptr<tlrd_transform, TransformDeleter>;

struct MsResultDeleter {
  void operator()(tlrd_ms_result* r) const { tlrd_ms_result_destroy(r); }
};
using MsResultPtr = std::unique_ptr<tlrd_ms_result, MsResultDeleter>;

struct PhantomDeleter {
  void operator()(tlrd_phantom* p) const { tlrd_phantom_destroy(p); }
};
using PhantomPtr = std::unique_ptr<tlrd_phantom, PhantomDeleter>;

TensorPtr clone(const tlrd_tensor* t) {
  tlrd_tensor* out = nullptr;
  check(tlrd_tensor_clone(t, &out));
  return TensorPtr(out);
}

std::array<int64_t, 3> dims_of(const tlrd_tensor* t) {
  std::array<int64_t, 3> d{};
  check(tlrd_tensor_dims(t, &d[0], &d[1], &d[2]));
  return d;
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch())
      .count();
}

tlrd_transform_kind parse_transform(const std::string& name) {
  if (name == "dct") return TLRD_TRANSFORM_DCT;
  if (name == "fft") return TLRD_TRANSFORM_DFT;
  if (name == "dwt4") return TLRD_TRANSFORM_DWT4;
  throw CliError("unknown transform '" + name +
                 "' (expected dct, fft or dwt4)");
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

struct LoadedVolume {
  fs::path path;
  TensorPtr tensor;
  tlrd_volume_meta meta{};
};

LoadedVolume load_volume(const std::string& path) {
  LoadedVolume v;
  v.path = path;
  tlrd_tensor* raw = nullptr;
  check(tlrd_volume_read(path.c_str(), &raw, &v.meta));
  v.tensor.reset(raw);
  return v;
}

std::vector<LoadedVolume> load_volumes(const std::vector<std::string>& paths) {
  std::vector<LoadedVolume> out;
  out.reserve(paths.size());
  for (const auto& p : paths) out.push_back(load_volume(p));
  for (const auto& v : out) {
    if (dims_of(v.tensor.get()) != dims_of(out.front().tensor.get())) {
      throw CliError("input volumes do not share dimensions");
    }
  }
  return out;
}

/// Shared affine normalization of a volume stack onto [0, 1]; values are
/// rescaled in place. Returns {offset, scale}.
std::pair<double, double> normalize_stack(std::vector<LoadedVolume>& vols) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (auto& v : vols) {
    const auto d = dims_of(v.tensor.get());
    double* data = nullptr;
    check(tlrd_tensor_data(v.tensor.get(), &data));
    const int64_t n = d[0] * d[1] * d[2];
    for (int64_t i = 0; i < n; ++i) {
      lo = std::min(lo, data[i]);
      hi = std::max(hi, data[i]);
    }
  }
  const double scale = hi > lo ? hi - lo : 1.0;
  for (auto& v : vols) {
    const auto d = dims_of(v.tensor.get());
    double* data = nullptr;
    check(tlrd_tensor_data(v.tensor.get(), &data));
    const int64_t n = d[0] * d[1] * d[2];
    for (int64_t i = 0; i < n; ++i) data[i] = (data[i] - lo) / scale;
  }
  return {lo, scale};
}

void scale_shift(tlrd_tensor* t, double scale, double shift) {
  const auto d = dims_of(t);
  double* data = nullptr;
  check(tlrd_tensor_data(t, &data));
  const int64_t n = d[0] * d[1] * d[2];
  for (int64_t i = 0; i < n; ++i) data[i] = data[i] * scale + shift;
}

/// 0/1 support tensor of |t| > threshold.
TensorPtr support_of(const tlrd_tensor* t, double threshold) {
  const auto d = dims_of(t);
  tlrd_tensor* raw = nullptr;
  check(tlrd_tensor_create(d[0], d[1], d[2], &raw));
  TensorPtr out(raw);
  const double* src = nullptr;
  double* dst = nullptr;
  check(tlrd_tensor_data_const(t, &src));
  check(tlrd_tensor_data(out.get(), &dst));
  const int64_t n = d[0] * d[1] * d[2];
  for (int64_t i = 0; i < n; ++i) {
    dst[i] = std::abs(src[i]) > threshold ? 1.0 : 0.0;
  }
  return out;
}

void write_report(const std::string& path, const json& report) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw CliError("cannot write report '" + path + "'");
  out << report.dump(2) << "\n";
}

json segment_json(const tlrd_ms_result* result, int64_t n_segments) {
  json segments = json::array();
  for (int64_t j = 0; j < n_segments; ++j) {
    tlrd_segment_info info{};
    check(tlrd_ms_result_segment(result, j, &info));
    int64_t rows = 0;
    check(tlrd_ms_result_trace(result, j, nullptr, &rows));
    std::vector<double> trace(static_cast<std::size_t>(rows) * 4);
    check(tlrd_ms_result_trace(result, j, trace.data(), &rows));
    json trace_json = json::array();
    for (int64_t r = 0; r < rows; ++r) {
      trace_json.push_back({{"primal_inf", trace[4 * r + 0]},
                            {"dl_inf", trace[4 * r + 1]},
                            {"de_inf", trace[4 * r + 2]},
                            {"mu", trace[4 * r + 3]}});
    }
    segments.push_back({{"core_start", info.core_start},
                        {"core_end", info.core_end},
                        {"padded_start", info.padded_start},
                        {"padded_end", info.padded_end},
                        {"iterations", info.iterations},
                        {"converged", info.converged != 0},
                        {"lambda", info.resolved_lambda},
                        {"solve_seconds", info.solve_seconds},
                        {"final_primal_inf", info.final_primal_inf},
                        {"trace", std::move(trace_json)}});
  }
  return segments;
}

std::string command_echo(int argc, char** argv) {
  std::string echo;
  for (int i = 0; i < argc; ++i) {
    if (i) echo += ' ';
    echo += argv[i];
  }
  return echo;
}

struct AdmmFlags {
  double lambda = 0.0;  // 0 means auto
  double mu0 = 1e-3;
  double mu_max = 1e10;
  double rho = 1.1;
  double eps = 1e-8;
  int64_t max_iters = 500;
  int workers = 0;

  void attach(CLI::App* app) {
    app->add_option("--mu0", mu0, "Initial penalty parameter");
    app->add_option("--mu-max", mu_max, "Penalty parameter cap");
    app->add_option("--rho", rho, "Penalty growth factor (> 1)");
    app->add_option("--eps", eps, "Convergence tolerance (infinity norm)");
    app->add_option("--max-iters", max_iters, "Iteration cap per segment");
    app->add_option("--workers", workers,
                    "Worker threads (default: all hardware threads)");
  }

  tlrd_tpcp_config to_config() const {
    tlrd_tpcp_config cfg;
    tlrd_tpcp_config_init(&cfg);
    cfg.lambda = lambda;
    cfg.mu0 = mu0;
    cfg.mu_max = mu_max;
    cfg.rho = rho;
    cfg.eps = eps;
    cfg.max_iters = max_iters;
    cfg.workers = resolve_workers(workers);
    return cfg;
  }

  json to_json(tlrd_transform_kind kind, int64_t segment_length) const {
    const char* names[] = {"dct", "fft", "dwt4"};
    return {{"transform", names[kind]},
            {"segment_length", segment_length},
            {"lambda", lambda > 0 ? json(lambda) : json("per-segment")},
            {"mu0", mu0},
            {"mu_max", mu_max},
            {"rho", rho},
            {"eps", eps},
            {"max_iters", max_iters},
            {"workers", resolve_workers(workers)}};
  }
};

double parse_lambda(const std::string& text) {
  if (text == "auto") return 0.0;
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size() || value <= 0) throw std::invalid_argument("");
    return value;
  } catch (const std::exception&) {
    throw CliError("--lambda expects 'auto' or a positive number, got '" +
                   text + "'");
  }
}

struct MaskSet {
  std::vector<LoadedVolume> masks;  // empty, one shared, or one per input

  const tlrd_tensor* for_volume(std::size_t i) const {
    if (masks.empty()) return nullptr;
    return masks.size() == 1 ? masks[0].tensor.get()
                             : masks[i].tensor.get();
  }
};

MaskSet load_masks(const std::vector<std::string>& paths,
                   std::size_t n_inputs) {
  MaskSet set;
  if (paths.empty()) return set;
  if (paths.size() != 1 && paths.size() != n_inputs) {
    throw CliError("--mask expects one shared mask or one per input");
  }
  for (const auto& p : paths) set.masks.push_back(load_volume(p));
  return set;
}

// ---- decompose -----------------------------------------------------------

struct DecomposeOutcome {
  int exit_code = 0;
};

DecomposeOutcome run_decompose(const std::vector<std::string>& inputs,
                               const std::string& transform_name,
                               int64_t segment_length,
                               const std::string& lambda_text,
                               const std::vector<std::string>& mask_paths,
                               const std::string& out_dir,
                               const std::string& report_path,
                               AdmmFlags& admm, const std::string& echo) {
  const double t_start = now_seconds();
  const tlrd_transform_kind kind = parse_transform(transform_name);
  admm.lambda = parse_lambda(lambda_text);

  auto volumes = load_volumes(inputs);
  const MaskSet masks = load_masks(mask_paths, volumes.size());
  for (const auto& m : masks.masks) {
    if (dims_of(m.tensor.get()) != dims_of(volumes[0].tensor.get())) {
      throw CliError("mask dimensions do not match the input volumes");
    }
  }

  // Raw-intensity statistics before normalization.
  std::vector<tlrd_masked_stats> raw_stats(volumes.size());
  for (std::size_t i = 0; i < volumes.size(); ++i) {
    if (const tlrd_tensor* mask = masks.for_volume(i)) {
      check(tlrd_masked_stats_compute(volumes[i].tensor.get(), mask, 0.5,
                                      256, &raw_stats[i]));
    }
  }

  const auto [offset, scale] = normalize_stack(volumes);
  const double t_read = now_seconds();

  std::vector<const tlrd_tensor*> handles;
  for (const auto& v : volumes) handles.push_back(v.tensor.get());
  const tlrd_tpcp_config cfg = admm.to_config();
  tlrd_ms_result* raw_result = nullptr;
  check(tlrd_ms_lrtd(handles.data(),
                     static_cast<int64_t>(handles.size()), segment_length,
                     kind, &cfg, &raw_result));
  MsResultPtr result(raw_result);
  const double t_solve = now_seconds();

  int64_t n_volumes = 0, n_segments = 0;
  check(tlrd_ms_result_counts(result.get(), &n_volumes, &n_segments));

  fs::create_directories(out_dir);
  json outputs = json::array();
  json metrics = json::array();
  for (int64_t i = 0; i < n_volumes; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const tlrd_tensor* low_view = nullptr;
    const tlrd_tensor* sparse_view = nullptr;
    check(tlrd_ms_result_low_rank(result.get(), i, &low_view));
    check(tlrd_ms_result_sparse(result.get(), i, &sparse_view));

    json volume_metrics = {{"input", volumes[idx].path.string()}};
    if (const tlrd_tensor* mask = masks.for_volume(idx)) {
      const TensorPtr support = support_of(sparse_view, kSupportThreshold);
      double dice_value = 0;
      check(tlrd_dice(support.get(), mask, 0.5, &dice_value));

      TensorPtr low_denorm_for_stats = clone(low_view);
      scale_shift(low_denorm_for_stats.get(), scale, offset);
      tlrd_masked_stats low_stats{};
      check(tlrd_masked_stats_compute(low_denorm_for_stats.get(), mask,
                                      0.5, 256, &low_stats));
      volume_metrics["sparse_support_dice"] = dice_value;
      volume_metrics["raw_masked_sigma"] = raw_stats[idx].sigma;
      volume_metrics["raw_masked_entropy_bits"] =
          raw_stats[idx].entropy_bits;
      volume_metrics["lowrank_masked_sigma"] = low_stats.sigma;
      volume_metrics["lowrank_masked_entropy_bits"] =
          low_stats.entropy_bits;
    }
    metrics.push_back(std::move(volume_metrics));

    // Back to input intensities: x = L*scale + offset + E*scale.
    TensorPtr low = clone(low_view);
    TensorPtr sparse = clone(sparse_view);
    scale_shift(low.get(), scale, offset);
    scale_shift(sparse.get(), scale, 0.0);

    const std::string stem = volumes[idx].path.stem().string();
    const fs::path low_path = fs::path(out_dir) / (stem + ".lowrank.mhd");
    const fs::path sparse_path =
        fs::path(out_dir) / (stem + ".sparse.mhd");

    tlrd_volume_meta meta = volumes[idx].meta;
    meta.element_type = TLRD_ELEMENT_F32;
    meta.intensity_offset = 0.0;
    meta.intensity_scale = 1.0;
    check(tlrd_volume_write(low_path.string().c_str(), low.get(), &meta));
    check(tlrd_volume_write(sparse_path.string().c_str(), sparse.get(),
                            &meta));
    outputs.push_back({{"input", volumes[idx].path.string()},
                       {"low_rank", low_path.string()},
                       {"sparse", sparse_path.string()}});
  }
  const double t_write = now_seconds();

  bool all_converged = true;
  json resolved_lambdas = json::array();
  for (int64_t j = 0; j < n_segments; ++j) {
    tlrd_segment_info info{};
    check(tlrd_ms_result_segment(result.get(), j, &info));
    all_converged = all_converged && info.converged != 0;
    resolved_lambdas.push_back(info.resolved_lambda);
  }

  json config = admm.to_json(kind, segment_length);
  // Auto lambda resolves per segment; the report carries the values.
  config["lambda"] = admm.lambda > 0 ? json(admm.lambda)
                                     : std::move(resolved_lambdas);
  config["normalization"] = {{"offset", offset}, {"scale", scale}};
  json report = {
      {"report_version", kReportVersion},
      {"command", echo},
      {"config", std::move(config)},
      {"inputs", inputs},
      {"outputs", std::move(outputs)},
      {"segments", segment_json(result.get(), n_segments)},
      {"metrics", std::move(metrics)},
      {"timings",
       {{"read_seconds", t_read - t_start},
        {"solve_seconds", t_solve - t_read},
        {"write_seconds", t_write - t_solve},
        {"total_seconds", t_write - t_start}}},
      {"all_converged", all_converged}};
  write_report(report_path, report);

  std::cout << "decomposed " << n_volumes << " volume(s) in " << n_segments
            << " segment(s); converged: " << (all_converged ? "yes" : "no")
            << "\n";
  return {all_converged ? 0 : 2};
}

// ---- tsvd ----------------------------------------------------------------

int run_tsvd(const std::string& input, const std::string& transform_name,
             double rank_tol, int workers, const std::string& report_path,
             const std::string& echo) {
  const LoadedVolume volume = load_volume(input);
  const auto d = dims_of(volume.tensor.get());
  tlrd_transform* raw = nullptr;
  check(tlrd_transform_create(parse_transform(transform_name), d[2], &raw));
  TransformPtr transform(raw);

  tlrd_tsvd_report stats{};
  check(tlrd_tsvd_analyze(volume.tensor.get(), transform.get(), rank_tol,
                          resolve_workers(workers), &stats));

  std::cout << "tubal_rank " << stats.tubal_rank << "\n"
            << "avg_rank " << stats.avg_rank << "\n"
            << "tnn " << stats.tnn << "\n"
            << "recon_rel_error " << stats.recon_rel_error << "\n";

  write_report(report_path,
               {{"report_version", kReportVersion},
                {"command", echo},
                {"config",
                 {{"transform", transform_name},
                  {"rank_tol", rank_tol},
                  {"workers", resolve_workers(workers)}}},
                {"inputs", json::array({input})},
                {"metrics",
                 {{"tubal_rank", stats.tubal_rank},
                  {"avg_rank", stats.avg_rank},
                  {"tnn", stats.tnn},
                  {"recon_rel_error", stats.recon_rel_error}}}});
  return 0;
}

// ---- bench-transforms ------------------------------------------------------

int run_bench(const std::vector<std::string>& inputs,
              const std::vector<std::string>& mask_paths,
              int64_t segment_length, AdmmFlags& admm,
              const std::string& report_path, const std::string& echo) {
  auto volumes = load_volumes(inputs);
  const MaskSet masks = load_masks(mask_paths, volumes.size());
  if (masks.masks.empty()) throw CliError("--mask is required");

  const auto [offset, scale] = normalize_stack(volumes);
  std::vector<const tlrd_tensor*> handles;
  for (const auto& v : volumes) handles.push_back(v.tensor.get());
  const tlrd_tpcp_config cfg = admm.to_config();

  json rows = json::array();
  std::cout << std::left << std::setw(10) << "transform" << std::setw(14)
            << "sigma" << std::setw(14) << "entropy_bits"
            << "mean_segment_seconds\n";
  for (const auto& name : {std::string("dct"), std::string("fft"),
                           std::string("dwt4")}) {
    tlrd_ms_result* raw_result = nullptr;
    check(tlrd_ms_lrtd(handles.data(),
                       static_cast<int64_t>(handles.size()),
                       segment_length, parse_transform(name), &cfg,
                       &raw_result));
    MsResultPtr result(raw_result);

    int64_t n_volumes = 0, n_segments = 0;
    check(tlrd_ms_result_counts(result.get(), &n_volumes, &n_segments));

    double sigma = 0, entropy = 0;
    for (int64_t i = 0; i < n_volumes; ++i) {
      const tlrd_tensor* low = nullptr;
      check(tlrd_ms_result_low_rank(result.get(), i, &low));
      tlrd_masked_stats stats{};
      check(tlrd_masked_stats_compute(
          low, masks.for_volume(static_cast<std::size_t>(i)), 0.5, 256,
          &stats));
      sigma += stats.sigma;
      entropy += stats.entropy_bits;
    }
    sigma = sigma / static_cast<double>(n_volumes) * scale;
    entropy /= static_cast<double>(n_volumes);

    double solve_seconds = 0;
    for (int64_t j = 0; j < n_segments; ++j) {
      tlrd_segment_info info{};
      check(tlrd_ms_result_segment(result.get(), j, &info));
      solve_seconds += info.solve_seconds;
    }
    const double mean_seconds =
        solve_seconds / static_cast<double>(n_segments);

    std::cout << std::left << std::setw(10) << name << std::setw(14)
              << sigma << std::setw(14) << entropy << mean_seconds << "\n";
    rows.push_back({{"transform", name},
                    {"masked_sigma", sigma},
                    {"masked_entropy_bits", entropy},
                    {"mean_segment_solve_seconds", mean_seconds}});
  }

  // Raw-input reference statistics in original intensity units.
  double raw_sigma = 0, raw_entropy = 0;
  for (std::size_t i = 0; i < volumes.size(); ++i) {
    tlrd_masked_stats stats{};
    check(tlrd_masked_stats_compute(volumes[i].tensor.get(),
                                    masks.for_volume(i), 0.5, 256, &stats));
    raw_sigma += stats.sigma;
    raw_entropy += stats.entropy_bits;
  }
  raw_sigma = raw_sigma / static_cast<double>(volumes.size()) * scale;
  raw_entropy /= static_cast<double>(volumes.size());

  write_report(report_path,
               {{"report_version", kReportVersion},
                {"command", echo},
                {"config", admm.to_json(TLRD_TRANSFORM_DCT, segment_length)},
                {"inputs", inputs},
                {"raw",
                 {{"masked_sigma", raw_sigma},
                  {"masked_entropy_bits", raw_entropy}}},
                {"table", std::move(rows)}});
  return 0;
}

// ---- sweep-k ---------------------------------------------------------------

std::vector<int64_t> parse_k_values(const std::string& text) {
  std::vector<int64_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stoll(item));
    } catch (const std::exception&) {
      throw CliError("--k-values expects a comma-separated integer list");
    }
  }
  if (out.empty()) throw CliError("--k-values is empty");
  for (int64_t k : out) {
    if (k < 2) throw CliError("every segment length must be >= 2");
  }
  return out;
}

void write_svg_plot(const std::string& path,
                    const std::vector<int64_t>& ks,
                    const std::vector<double>& sigmas) {
  const double width = 480, height = 320, margin = 48;
  double lo = *std::min_element(sigmas.begin(), sigmas.end());
  double hi = *std::max_element(sigmas.begin(), sigmas.end());
  if (hi <= lo) hi = lo + 1.0;
  const double kmin = static_cast<double>(ks.front());
  const double kmax = static_cast<double>(ks.back());
  auto sx = [&](double k) {
    return margin +
           (k - kmin) / std::max(1.0, kmax - kmin) * (width - 2 * margin);
  };
  auto sy = [&](double s) {
    return height - margin - (s - lo) / (hi - lo) * (height - 2 * margin);
  };

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw CliError("cannot write plot '" + path + "'");
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
      << "' height='" << height << "'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n"
      << "<line x1='" << margin << "' y1='" << height - margin << "' x2='"
      << width - margin << "' y2='" << height - margin
      << "' stroke='black'/>\n"
      << "<line x1='" << margin << "' y1='" << margin << "' x2='" << margin
      << "' y2='" << height - margin << "' stroke='black'/>\n"
      << "<text x='" << width / 2 << "' y='" << height - 12
      << "' font-size='12' text-anchor='middle'>segment length K</text>\n"
      << "<text x='14' y='" << height / 2
      << "' font-size='12' text-anchor='middle' transform='rotate(-90 14 "
      << height / 2 << ")'>masked sigma</text>\n<polyline fill='none' "
      << "stroke='steelblue' stroke-width='2' points='";
  for (std::size_t i = 0; i < ks.size(); ++i) {
    out << sx(static_cast<double>(ks[i])) << "," << sy(sigmas[i]) << " ";
  }
  out << "'/>\n";
  for (std::size_t i = 0; i < ks.size(); ++i) {
    out << "<circle cx='" << sx(static_cast<double>(ks[i])) << "' cy='"
        << sy(sigmas[i]) << "' r='3' fill='steelblue'/>\n"
        << "<text x='" << sx(static_cast<double>(ks[i])) << "' y='"
        << height - margin + 16 << "' font-size='10' text-anchor='middle'>"
        << ks[i] << "</text>\n";
  }
  out << "</svg>\n";
}

int run_sweep(const std::vector<std::string>& inputs,
              const std::vector<std::string>& mask_paths,
              const std::string& k_text, AdmmFlags& admm,
              const std::string& transform_name,
              const std::string& report_path, const std::string& plot_path,
              const std::string& echo) {
  (void)echo;
  auto volumes = load_volumes(inputs);
  const MaskSet masks = load_masks(mask_paths, volumes.size());
  if (masks.masks.size() != 1) {
    throw CliError("sweep-k expects exactly one --mask");
  }
  const std::vector<int64_t> ks = parse_k_values(k_text);

  const auto norm = normalize_stack(volumes);
  std::vector<const tlrd_tensor*> handles;
  for (const auto& v : volumes) handles.push_back(v.tensor.get());
  const tlrd_tpcp_config cfg = admm.to_config();

  std::vector<double> sigmas(ks.size()), entropies(ks.size());
  check(tlrd_sweep_k(handles.data(), static_cast<int64_t>(handles.size()),
                     ks.data(), static_cast<int64_t>(ks.size()),
                     masks.masks[0].tensor.get(), 0.5,
                     parse_transform(transform_name), &cfg, sigmas.data(),
                     entropies.data()));
  for (auto& s : sigmas) s *= norm.second;  // back to input units

  std::ostringstream csv;
  csv << "k,sigma,entropy_bits\n";
  for (std::size_t i = 0; i < ks.size(); ++i) {
    csv << ks[i] << "," << sigmas[i] << "," << entropies[i] << "\n";
  }
  if (report_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(report_path, std::ios::trunc);
    if (!out) throw CliError("cannot write '" + report_path + "'");
    out << csv.str();
    std::cout << "wrote " << report_path << "\n";
  }
  if (!plot_path.empty()) {
    write_svg_plot(plot_path, ks, sigmas);
    std::cout << "wrote " << plot_path << "\n";
  }
  return 0;
}

// ---- phantom ---------------------------------------------------------------

std::array<int64_t, 3> parse_dims(const std::string& text) {
  std::array<int64_t, 3> dims{};
  std::stringstream in(text);
  std::string item;
  int i = 0;
  while (std::getline(in, item, ',') && i < 3) {
    try {
      dims[static_cast<std::size_t>(i++)] = std::stoll(item);
    } catch (const std::exception&) {
      throw CliError("--dims expects n1,n2,n3");
    }
  }
  if (i != 3) throw CliError("--dims expects n1,n2,n3");
  return dims;
}

int run_phantom(const std::string& dims_text, int64_t rank,
                int64_t n_volumes, double sparse_fraction,
                double sparse_magnitude, double slice_drift, uint64_t seed,
                const std::string& out_dir, const std::string& report_path,
                const std::string& echo) {
  const auto dims = parse_dims(dims_text);
  tlrd_phantom_spec spec;
  tlrd_phantom_spec_init(&spec);
  spec.n1 = dims[0];
  spec.n2 = dims[1];
  spec.d = dims[2];
  spec.tubal_rank = rank;
  spec.n_volumes = n_volumes;
  spec.sparse_fraction = sparse_fraction;
  spec.sparse_magnitude = sparse_magnitude;
  spec.slice_drift = slice_drift;
  spec.seed = seed;

  tlrd_phantom* raw = nullptr;
  check(tlrd_phantom_generate(&spec, &raw));
  PhantomPtr phantom(raw);

  fs::create_directories(out_dir);
  tlrd_volume_meta meta{};
  meta.dims[0] = dims[0];
  meta.dims[1] = dims[1];
  meta.dims[2] = dims[2];
  meta.spacing[0] = meta.spacing[1] = meta.spacing[2] = 1.0;
  meta.element_type = TLRD_ELEMENT_F32;
  meta.intensity_offset = 0.0;
  meta.intensity_scale = 1.0;

  json outputs = json::array();
  char name[64];
  for (int64_t i = 0; i < n_volumes; ++i) {
    const tlrd_tensor* t = nullptr;
    json entry;

    std::snprintf(name, sizeof(name), "vol%03d.mhd", static_cast<int>(i));
    check(tlrd_phantom_volume(phantom.get(), i, &t));
    fs::path p = fs::path(out_dir) / name;
    check(tlrd_volume_write(p.string().c_str(), t, &meta));
    entry["volume"] = p.string();

    std::snprintf(name, sizeof(name), "truth_lowrank%03d.mhd",
                  static_cast<int>(i));
    check(tlrd_phantom_truth_low_rank(phantom.get(), i, &t));
    p = fs::path(out_dir) / name;
    check(tlrd_volume_write(p.string().c_str(), t, &meta));
    entry["truth_low_rank"] = p.string();

    std::snprintf(name, sizeof(name), "truth_sparse%03d.mhd",
                  static_cast<int>(i));
    check(tlrd_phantom_truth_sparse(phantom.get(), i, &t));
    p = fs::path(out_dir) / name;
    check(tlrd_volume_write(p.string().c_str(), t, &meta));
    entry["truth_sparse"] = p.string();

    std::snprintf(name, sizeof(name), "mask%03d.mhd",
                  static_cast<int>(i));
    check(tlrd_phantom_anomaly_mask(phantom.get(), i, &t));
    p = fs::path(out_dir) / name;
    tlrd_volume_meta mask_meta = meta;
    mask_meta.element_type = TLRD_ELEMENT_U8;
    check(tlrd_volume_write(p.string().c_str(), t, &mask_meta));
    entry["anomaly_mask"] = p.string();

    outputs.push_back(std::move(entry));
  }

  write_report(report_path,
               {{"report_version", kReportVersion},
                {"command", echo},
                {"config",
                 {{"dims", {dims[0], dims[1], dims[2]}},
                  {"tubal_rank", rank},
                  {"n_volumes", n_volumes},
                  {"sparse_fraction", sparse_fraction},
                  {"sparse_magnitude", sparse_magnitude},
                  {"slice_drift", slice_drift},
                  {"seed", seed}}},
                {"outputs", std::move(outputs)}});
  std::cout << "wrote " << n_volumes << " phantom volume set(s) to "
            << out_dir << "\n";
  return 0;
}

// ---- metrics ---------------------------------------------------------------

int run_metrics(const std::string& a_path, const std::string& b_path,
                const std::string& image_path, const std::string& mask_path,
                const std::string& ref_path, const std::string& report_path,
                const std::string& echo) {
  json metrics;
  if (!a_path.empty() || !b_path.empty()) {
    if (a_path.empty() || b_path.empty()) {
      throw CliError("label comparison needs both --a and --b");
    }
    const LoadedVolume a = load_volume(a_path);
    const LoadedVolume b = load_volume(b_path);
    for (int axis = 0; axis < 3; ++axis) {
      if (a.meta.spacing[axis] != b.meta.spacing[axis]) {
        throw CliError("label volumes disagree on voxel spacing");
      }
    }
    double dc = 0, ji = 0, surface = 0;
    check(tlrd_dice(a.tensor.get(), b.tensor.get(), 0.5, &dc));
    check(tlrd_jaccard(a.tensor.get(), b.tensor.get(), 0.5, &ji));
    check(tlrd_asd(a.tensor.get(), b.tensor.get(), 0.5, a.meta.spacing,
                   &surface));
    std::cout << "dice_percent " << dc << "\njaccard_percent " << ji
              << "\nasd_mm " << surface << "\n";
    metrics = {{"dice_percent", dc},
               {"jaccard_percent", ji},
               {"asd_mm", surface}};
  } else if (!image_path.empty()) {
    if (mask_path.empty()) {
      throw CliError("image statistics need --mask");
    }
    const LoadedVolume image = load_volume(image_path);
    const LoadedVolume mask = load_volume(mask_path);
    tlrd_masked_stats stats{};
    check(tlrd_masked_stats_compute(image.tensor.get(), mask.tensor.get(),
                                    0.5, 256, &stats));
    std::cout << "masked_sigma " << stats.sigma << "\nmasked_entropy_bits "
              << stats.entropy_bits << "\n";
    metrics = {{"masked_sigma", stats.sigma},
               {"masked_entropy_bits", stats.entropy_bits},
               {"voxel_count", stats.voxel_count}};
    if (!ref_path.empty()) {
      const LoadedVolume ref = load_volume(ref_path);
      double corr = 0;
      check(tlrd_ncc(image.tensor.get(), ref.tensor.get(),
                     mask.tensor.get(), 0.5, &corr));
      std::cout << "ncc " << corr << "\n";
      metrics["ncc"] = corr;
    }
  } else {
    throw CliError("metrics needs either --a/--b labels or --image/--mask");
  }

  write_report(report_path, {{"report_version", kReportVersion},
                             {"command", echo},
                             {"metrics", std::move(metrics)}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-rank + sparse tensor decomposition of 3D volumes"};
  app.require_subcommand(1);
  const std::string echo = command_echo(argc, argv);

  // decompose
  auto* decompose = app.add_subcommand(
      "decompose", "Separate volumes into low-rank and sparse components");
  std::vector<std::string> inputs;
  std::string transform_name = "dct";
  int64_t segment_length = 5;
  std::string lambda_text = "auto";
  std::vector<std::string> mask_paths;
  std::string out_dir;
  std::string report_path;
  AdmmFlags decompose_admm;
  decompose->add_option("--input", inputs, "Input volume headers (.mhd)")
      ->required()
      ->expected(-1);
  decompose->add_option("--transform", transform_name,
                        "Transform: dct, fft or dwt4");
  decompose->add_option("--segment-length", segment_length,
                        "Consecutive slices per segment (K >= 2)")
      ->check(CLI::Range(static_cast<int64_t>(2),
                         std::numeric_limits<int64_t>::max()));
  decompose->add_option("--lambda", lambda_text,
                        "Sparsity weight: 'auto' or a positive value");
  decompose->add_option("--mask", mask_paths,
                        "Anomaly mask volume(s): one shared or one per "
                        "input");
  decompose->add_option("--out-dir", out_dir, "Output directory")
      ->required();
  decompose->add_option("--report", report_path, "JSON run report path");
  decompose_admm.attach(decompose);

  // tsvd
  auto* tsvd_cmd = app.add_subcommand(
      "tsvd", "Factor a volume and report rank statistics");
  std::string tsvd_input;
  std::string tsvd_transform = "dct";
  double rank_tol = 0.0;
  int tsvd_workers = 0;
  std::string tsvd_report;
  tsvd_cmd->add_option("--input", tsvd_input, "Input volume header")
      ->required();
  tsvd_cmd->add_option("--transform", tsvd_transform,
                       "Transform: dct, fft or dwt4");
  tsvd_cmd->add_option("--rank-tol", rank_tol,
                       "Rank tolerance (0 = relative default)");
  tsvd_cmd->add_option("--workers", tsvd_workers, "Worker threads");
  tsvd_cmd->add_option("--report", tsvd_report, "JSON report path");

  // bench-transforms
  auto* bench = app.add_subcommand(
      "bench-transforms", "Compare dct, fft and dwt4 on the same inputs");
  std::vector<std::string> bench_inputs;
  std::vector<std::string> bench_masks;
  int64_t bench_segment_length = 5;
  std::string bench_report;
  AdmmFlags bench_admm;
  bench->add_option("--inputs", bench_inputs, "Input volume headers")
      ->required()
      ->expected(-1);
  bench->add_option("--mask", bench_masks,
                    "Mask volume(s): one shared or one per input")
      ->required();
  bench->add_option("--segment-length", bench_segment_length,
                    "Consecutive slices per segment")
      ->check(CLI::Range(static_cast<int64_t>(2),
                         std::numeric_limits<int64_t>::max()));
  bench->add_option("--report", bench_report, "JSON report path");
  bench_admm.attach(bench);

  // sweep-k
  auto* sweep = app.add_subcommand(
      "sweep-k", "Masked statistics as a function of the segment length");
  std::vector<std::string> sweep_inputs;
  std::vector<std::string> sweep_masks;
  std::string k_values = "2,3,4,5,6,7,8,9,10,11";
  std::string sweep_transform = "dct";
  std::string sweep_report;
  std::string sweep_plot;
  AdmmFlags sweep_admm;
  sweep->add_option("--inputs", sweep_inputs, "Input volume headers")
      ->required()
      ->expected(-1);
  sweep->add_option("--mask", sweep_masks, "Mask volume")->required();
  sweep->add_option("--k-values", k_values,
                    "Comma-separated segment lengths");
  sweep->add_option("--transform", sweep_transform,
                    "Transform: dct, fft or dwt4");
  sweep->add_option("--report", sweep_report,
                    "CSV output path (stdout when omitted)");
  sweep->add_option("--plot", sweep_plot, "Optional SVG plot of sigma vs K");
  sweep_admm.attach(sweep);

  // phantom
  auto* phantom = app.add_subcommand(
      "phantom", "Generate synthetic volumes with known ground truth");
  std::string dims_text = "64,64,30";
  int64_t rank = 5;
  int64_t n_volumes = 1;
  double sparse_fraction = 0.05;
  double sparse_magnitude = 1.0;
  double slice_drift = 0.0;
  uint64_t seed = 0;
  std::string phantom_out_dir;
  std::string phantom_report;
  phantom->add_option("--dims", dims_text, "Volume dimensions n1,n2,n3");
  phantom->add_option("--rank", rank, "Background tubal rank");
  phantom->add_option("--volumes", n_volumes, "Number of volumes");
  phantom->add_option("--sparse-fraction", sparse_fraction,
                      "Anomaly voxel fraction in [0, 1]");
  phantom->add_option("--sparse-magnitude", sparse_magnitude,
                      "Anomaly intensity offset");
  phantom->add_option("--slice-drift", slice_drift,
                      "Background change rate along slices");
  phantom->add_option("--seed", seed, "Random seed");
  phantom->add_option("--out-dir", phantom_out_dir, "Output directory")
      ->required();
  phantom->add_option("--report", phantom_report, "JSON report path");

  // metrics
  auto* metrics_cmd = app.add_subcommand(
      "metrics", "Segmentation and intensity statistics");
  std::string a_path, b_path, image_path, metrics_mask, ref_path;
  std::string metrics_report;
  metrics_cmd->add_option("--a", a_path, "First label volume");
  metrics_cmd->add_option("--b", b_path, "Second label volume");
  metrics_cmd->add_option("--image", image_path, "Intensity volume");
  metrics_cmd->add_option("--mask", metrics_mask, "Mask label volume");
  metrics_cmd->add_option("--ref", ref_path,
                          "Reference volume for correlation");
  metrics_cmd->add_option("--report", metrics_report, "JSON report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (decompose->parsed()) {
      return run_decompose(inputs, transform_name, segment_length,
                           lambda_text, mask_paths, out_dir, report_path,
                           decompose_admm, echo)
          .exit_code;
    }
    if (tsvd_cmd->parsed()) {
      return run_tsvd(tsvd_input, tsvd_transform, rank_tol, tsvd_workers,
                      tsvd_report, echo);
    }
    if (bench->parsed()) {
      return run_bench(bench_inputs, bench_masks, bench_segment_length,
                       bench_admm, bench_report, echo);
    }
    if (sweep->parsed()) {
      return run_sweep(sweep_inputs, sweep_masks, k_values, sweep_admm,
                       sweep_transform, sweep_report, sweep_plot, echo);
    }
    if (phantom->parsed()) {
      return run_phantom(dims_text, rank, n_volumes, sparse_fraction,
                         sparse_magnitude, slice_drift, seed,
                         phantom_out_dir, phantom_report, echo);
    }
    if (metrics_cmd->parsed()) {
      return run_metrics(a_path, b_path, image_path, metrics_mask, ref_path,
                         metrics_report, echo);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
