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

// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tlrd/metrics.hpp"
#include "tlrd/multislice.hpp"
#include "tlrd/phantom.hpp"
#include "tlrd/tpcp.hpp"
#include "tlrd/transform.hpp"
#include "tlrd/tsvd.hpp"
#include "tlrd/volume_io.hpp"

using namespace tlrd;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Runner {
  int failures = 0;

  void run(const std::string& name, double time_limit_seconds,
           const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = body();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (seconds > time_limit_seconds) {
      outcome.pass = false;
      outcome.detail += (outcome.detail.empty() ? "" : "; ") +
                        std::string("time limit exceeded");
    }
    std::printf("%s  %-28s (%.1fs)  %s\n", outcome.pass ? "PASS" : "FAIL",
                name.c_str(), seconds, outcome.detail.c_str());
    std::fflush(stdout);
    if (!outcome.pass) ++failures;
  }
};

Tensor3 random_tensor(Index n1, Index n2, Index n3, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Tensor3 out(n1, n2, n3);
  for (auto& v : out.data()) v = gauss(rng);
  return out;
}

double rel_error(const Tensor3& got, const Tensor3& want) {
  Tensor3 diff = got;
  diff.array() -= want.array();
  const double denom = fro_norm(want);
  return denom == 0 ? fro_norm(diff) : fro_norm(diff) / denom;
}

// --- criterion 1: transform-domain product vs block-circulant oracle ----

Outcome oracle_equivalence() {
  std::uint64_t seed = 1;
  double worst = 0;
  std::mt19937_64 shape_rng(12345);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n1 = 1 + static_cast<Index>(shape_rng() % 4);
    const Index n2 = 1 + static_cast<Index>(shape_rng() % 4);
    const Index n3 = 1 + static_cast<Index>(shape_rng() % 5);
    const Index m = 1 + static_cast<Index>(shape_rng() % 4);
    const TransformSpec t = TransformSpec::dft(n3);
    const Tensor3 x = random_tensor(n1, n2, n3, seed++);
    const Tensor3 y = random_tensor(n2, m, n3, seed++);
    const Tensor3 got = mproduct(t, x, y);
    const Tensor3 want = ref::tproduct(x, y);
    worst = std::max(worst, rel_error(got, want));
  }
  std::ostringstream detail;
  detail << "max rel err " << worst << " over 200 pairs";
  return {worst < 1e-10, detail.str()};
}

// --- criterion 2: t-SVD reconstruction and orthogonality ----------------

Outcome tsvd_reconstruction() {
  const std::vector<std::array<Index, 3>> shapes{
      {32, 32, 16}, {24, 16, 12}, {9, 17, 8}, {32, 32, 2}};
  double worst_recon = 0, worst_orth = 0;
  std::uint64_t seed = 71;
  for (const auto& shape : shapes) {
    const Tensor3 x = random_tensor(shape[0], shape[1], shape[2], seed++);
    for (auto kind : {TransformKind::dct, TransformKind::dft,
                      TransformKind::dwt4}) {
      const TransformSpec t = build_transform(kind, shape[2]);
      const TsvdFactors f = tsvd(t, x);
      worst_recon = std::max(worst_recon, rel_error(reconstruct(f), x));
      Tensor3 uu = mproduct(t, conj_transpose(t, f.u), f.u);
      uu.array() -= identity_tensor(t, shape[0]).array();
      worst_orth = std::max(worst_orth, fro_norm(uu));
    }
  }
  std::ostringstream detail;
  detail << "recon " << worst_recon << ", orthogonality " << worst_orth;
  return {worst_recon < 1e-8 && worst_orth < 1e-8, detail.str()};
}

// --- criterion 3: proximal optimality probes -----------------------------

Outcome proximal_optimality() {
  const TransformSpec t = TransformSpec::dct(6);
  std::mt19937_64 rng(20202);
  std::normal_distribution<double> gauss;
  auto tnn_objective = [&](const Tensor3& x, const Tensor3& w, double tau) {
    Tensor3 diff = x;
    diff.array() -= w.array();
    const double f = fro_norm(diff);
    return tau * tnn(t, x) + 0.5 * f * f;
  };
  auto l1_objective = [](const Tensor3& x, const Tensor3& w, double tau) {
    Tensor3 diff = x;
    diff.array() -= w.array();
    const double f = fro_norm(diff);
    return tau * l1_norm(x) + 0.5 * f * f;
  };

  std::uint64_t seed = 909;
  for (int instance = 0; instance < 50; ++instance) {
    const Tensor3 w = random_tensor(8, 8, 6, seed++);
    for (const double tau : {0.1, 0.5, 2.0}) {
      const Tensor3 svt_out = tsvt(t, w, tau);
      const double svt_best = tnn_objective(svt_out, w, tau);
      if (svt_best > tnn_objective(w, w, tau) + 1e-9 ||
          svt_best > tnn_objective(Tensor3(8, 8, 6), w, tau) + 1e-9) {
        return {false, "t-SVT lost to a trivial point"};
      }
      const Tensor3 shrink_out = shrink(w, tau);
      const double shrink_best = l1_objective(shrink_out, w, tau);
      if (shrink_best > l1_objective(w, w, tau) + 1e-9 ||
          shrink_best > l1_objective(Tensor3(8, 8, 6), w, tau) + 1e-9) {
        return {false, "shrink lost to a trivial point"};
      }
      for (int perturb = 0; perturb < 100; ++perturb) {
        const double scale = 1e-3 + 0.02 * static_cast<double>(perturb % 20);
        Tensor3 p1 = svt_out;
        Tensor3 p2 = shrink_out;
        for (auto& v : p1.data()) v += scale * gauss(rng);
        for (auto& v : p2.data()) v += scale * gauss(rng);
        if (svt_best > tnn_objective(p1, w, tau) + 1e-9) {
          return {false, "t-SVT lost to a perturbation"};
        }
        if (shrink_best > l1_objective(p2, w, tau) + 1e-9) {
          return {false, "shrink lost to a perturbation"};
        }
      }
    }
  }
  return {true, "50 instances x 3 thresholds x 100 perturbations"};
}

// --- criterion 4: exact recovery ------------------------------------------

Outcome exact_recovery() {
  const Index n = 64, n3 = 30, rank = 5;
  const TransformSpec t = TransformSpec::dct(n3);
  int successes = 0;
  double worst_err = 0, worst_f1 = 1;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Tensor3 a = random_tensor(n, rank, n3, 7000 + seed);
    const Tensor3 b = random_tensor(rank, n, n3, 8000 + seed);
    const Tensor3 low0 = mproduct(t, a, b);

    std::mt19937_64 rng(9000 + seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    Tensor3 sparse0(n, n, n3);
    for (auto& v : sparse0.data()) {
      if (uni(rng) < 0.05) v = uni(rng) < 0.5 ? 1.0 : -1.0;
    }
    Tensor3 x = low0;
    x.array() += sparse0.array();

    TpcpConfig cfg(t);  // mu0 1e-3, rho 1.1, eps 1e-8, lambda auto
    const TpcpResult r = tpcp_solve(x, cfg);

    const double err = rel_error(r.low_rank, low0);
    Index tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < sparse0.data().size(); ++i) {
      const bool truth = sparse0.data()[i] != 0.0;
      const bool found = std::abs(r.sparse.data()[i]) > 1e-3;
      tp += (truth && found) ? 1 : 0;
      fp += (!truth && found) ? 1 : 0;
      fn += (truth && !found) ? 1 : 0;
    }
    const double f1 =
        2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
    worst_err = std::max(worst_err, err);
    worst_f1 = std::min(worst_f1, f1);
    if (r.converged && err < 1e-3 && f1 > 0.95) ++successes;
  }
  std::ostringstream detail;
  detail << successes << "/10 seeds (worst err " << worst_err
         << ", worst F1 " << worst_f1 << ")";
  return {successes >= 9, detail.str()};
}

// --- criterion 5: multi-slice correctness ---------------------------------

Outcome multislice_correctness() {
  // Part 1: a single segment covering all slices must reproduce the
  // whole-volume solve bitwise.
  {
    const PhantomSpec spec{.n1 = 16,
                           .n2 = 16,
                           .d = 8,
                           .tubal_rank = 2,
                           .n_volumes = 3,
                           .sparse_fraction = 0.03,
                           .sparse_magnitude = 1.0,
                           .slice_drift = 0.3,
                           .seed = 424242};
    const Phantom ph = make_phantom(spec);
    TpcpConfig cfg(TransformSpec::dct(1));
    const MultiSliceResult ms = ms_lrtd(ph.volumes, spec.d, cfg);

    TpcpConfig whole_cfg = cfg;
    whole_cfg.transform = TransformSpec::dct(spec.d * spec.n_volumes);
    const TpcpResult whole = tpcp_solve(stack_volumes(ph.volumes),
                                        whole_cfg);
    for (Index i = 0; i < spec.n_volumes; ++i) {
      for (Index k = 0; k < spec.d; ++k) {
        const double dl =
            (ms.low_rank[static_cast<std::size_t>(i)].slice(k) -
             whole.low_rank.slice(i * spec.d + k))
                .cwiseAbs()
                .maxCoeff();
        const double de =
            (ms.sparse[static_cast<std::size_t>(i)].slice(k) -
             whole.sparse.slice(i * spec.d + k))
                .cwiseAbs()
                .maxCoeff();
        if (dl != 0.0 || de != 0.0) {
          return {false, "K = d does not reproduce the whole-volume solve"};
        }
      }
    }
  }

  // Part 2: on a slice-drifting phantom, short segments beat the
  // whole-volume decomposition on most seeds.
  int wins = 0;
  std::ostringstream errs;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const PhantomSpec spec{.n1 = 32,
                           .n2 = 32,
                           .d = 24,
                           .tubal_rank = 3,
                           .n_volumes = 4,
                           .sparse_fraction = 0.03,
                           .sparse_magnitude = 1.0,
                           .slice_drift = 1.0,
                           .seed = 5550 + seed};
    const Phantom ph = make_phantom(spec);
    const Tensor3 truth_stack = stack_volumes(ph.truth_low_rank);

    TpcpConfig cfg(TransformSpec::dct(1));
    const MultiSliceResult ms = ms_lrtd(ph.volumes, 5, cfg);
    const Tensor3 ms_stack = stack_volumes(ms.low_rank);
    const double ms_err = rel_error(ms_stack, truth_stack);

    TpcpConfig whole_cfg = cfg;
    whole_cfg.transform = TransformSpec::dct(spec.d * spec.n_volumes);
    const TpcpResult whole = tpcp_solve(stack_volumes(ph.volumes),
                                        whole_cfg);
    const double whole_err = rel_error(whole.low_rank, truth_stack);
    if (ms_err < whole_err) ++wins;
    errs << " " << ms_err << "<" << whole_err << "?";
  }
  std::ostringstream detail;
  detail << "bitwise K=d ok; segment wins " << wins << "/5:" << errs.str();
  return {wins >= 4, detail.str()};
}

// --- criterion 6: directional transform comparison ------------------------

Outcome transform_comparison() {
  const PhantomSpec spec{.n1 = 32,
                         .n2 = 32,
                         .d = 18,
                         .tubal_rank = 3,
                         .n_volumes = 6,
                         .sparse_fraction = 0.03,
                         .sparse_magnitude = 1.0,
                         .slice_drift = 0.25,
                         .seed = 31337};
  const Phantom ph = make_phantom(spec);

  double raw_sigma = 0, raw_entropy = 0;
  for (Index i = 0; i < spec.n_volumes; ++i) {
    const auto stats =
        masked_stats(ph.volumes[static_cast<std::size_t>(i)],
                     ph.anomaly_masks[static_cast<std::size_t>(i)]);
    raw_sigma += stats.sigma;
    raw_entropy += stats.entropy_bits;
  }
  raw_sigma /= static_cast<double>(spec.n_volumes);
  raw_entropy /= static_cast<double>(spec.n_volumes);

  std::ostringstream detail;
  detail << "raw sigma " << raw_sigma << " H " << raw_entropy;
  double dct_time = 0, fft_time = 0;
  bool all_reduced = true;
  for (auto kind : {TransformKind::dct, TransformKind::dft,
                    TransformKind::dwt4}) {
    TpcpConfig cfg(build_transform(kind, kind == TransformKind::dwt4 ? 2
                                                                     : 1));
    const MultiSliceResult r = ms_lrtd(ph.volumes, 5, cfg);
    double sigma = 0, entropy = 0;
    for (Index i = 0; i < spec.n_volumes; ++i) {
      const auto stats =
          masked_stats(r.low_rank[static_cast<std::size_t>(i)],
                       ph.anomaly_masks[static_cast<std::size_t>(i)]);
      sigma += stats.sigma;
      entropy += stats.entropy_bits;
    }
    sigma /= static_cast<double>(spec.n_volumes);
    entropy /= static_cast<double>(spec.n_volumes);
    all_reduced = all_reduced && sigma < raw_sigma && entropy < raw_entropy;

    double solve_seconds = 0;
    for (const auto& seg : r.segments) solve_seconds += seg.solve_seconds;
    solve_seconds /= static_cast<double>(r.segments.size());
    if (kind == TransformKind::dct) dct_time = solve_seconds;
    if (kind == TransformKind::dft) fft_time = solve_seconds;
    detail << "; " << to_string(kind) << " sigma " << sigma << " H "
           << entropy << " t " << solve_seconds << "s";
  }
  const bool timing_order = dct_time < fft_time;
  if (!timing_order) detail << "; dct not faster than fft";
  return {all_reduced && timing_order, detail.str()};
}

// --- criterion 7: metric identities ---------------------------------------

LabelVolume random_mask(Index n, std::uint64_t seed, double fill,
                        std::array<double, 3> spacing = {1, 1, 1}) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  LabelVolume m(n, n, n, spacing);
  for (Index k = 0; k < n; ++k) {
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < n; ++i) m.set(i, j, k, uni(rng) < fill);
    }
  }
  return m;
}

double asd_brute_force(const LabelVolume& a, const LabelVolume& b) {
  const auto spacing = a.spacing();
  auto surface = [](const LabelVolume& m) {
    std::vector<std::array<Index, 3>> out;
    auto inside = [&](Index i, Index j, Index k) {
      return i >= 0 && i < m.n1() && j >= 0 && j < m.n2() && k >= 0 &&
             k < m.n3() && m.at(i, j, k);
    };
    for (Index k = 0; k < m.n3(); ++k) {
      for (Index j = 0; j < m.n2(); ++j) {
        for (Index i = 0; i < m.n1(); ++i) {
          if (!m.at(i, j, k)) continue;
          if (!inside(i - 1, j, k) || !inside(i + 1, j, k) ||
              !inside(i, j - 1, k) || !inside(i, j + 1, k) ||
              !inside(i, j, k - 1) || !inside(i, j, k + 1)) {
            out.push_back({i, j, k});
          }
        }
      }
    }
    return out;
  };
  const auto sa = surface(a);
  const auto sb = surface(b);
  auto shortest = [&](const std::array<Index, 3>& v,
                      const std::vector<std::array<Index, 3>>& set) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& w : set) {
      const double di = static_cast<double>(v[0] - w[0]) * spacing[0];
      const double dj = static_cast<double>(v[1] - w[1]) * spacing[1];
      const double dk = static_cast<double>(v[2] - w[2]) * spacing[2];
      best = std::min(best, std::sqrt(di * di + dj * dj + dk * dk));
    }
    return best;
  };
  double total = 0;
  for (const auto& v : sa) total += shortest(v, sb);
  for (const auto& v : sb) total += shortest(v, sa);
  return total / static_cast<double>(sa.size() + sb.size());
}

Outcome metric_identities() {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const LabelVolume a = random_mask(8, 1000 + seed, 0.3);
    const LabelVolume b = random_mask(8, 2000 + seed, 0.3);
    const double j = jaccard(a, b) / 100.0;
    const double d = dice(a, b) / 100.0;
    if (std::abs(d - 2.0 * j / (1.0 + j)) > 1e-9) {
      return {false, "dice != 2J/(1+J)"};
    }
  }
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const std::array<double, 3> spacing{1.0 + 0.5 * (seed % 2), 1.0,
                                        0.75 + 0.25 * (seed % 3)};
    LabelVolume a = random_mask(16, 3000 + seed, 0.15, spacing);
    LabelVolume b = random_mask(16, 4000 + seed, 0.15, spacing);
    if (a.count() == 0) a.set(0, 0, 0, true);
    if (b.count() == 0) b.set(1, 1, 1, true);
    if (std::abs(asd(a, b) - asd_brute_force(a, b)) > 1e-9) {
      return {false, "asd disagrees with the brute-force oracle"};
    }
  }
  const Tensor3 x = random_tensor(8, 8, 8, 123);
  Tensor3 neg = x;
  neg.array() *= -1.0;
  if (std::abs(ncc(x, x) - 1.0) > 1e-12) return {false, "ncc(x,x) != 1"};
  if (std::abs(ncc(x, neg) + 1.0) > 1e-12) return {false, "ncc(x,-x) != -1"};
  return {true, "dice/jaccard identity, asd oracle, ncc endpoints"};
}

// --- criterion 8: volume format round trip --------------------------------

Outcome format_round_trip() {
  const fs::path dir =
      fs::temp_directory_path() /
      ("tlrd_acceptance_io_" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  std::mt19937_64 rng(515151);
  int cases = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const Index n1 = 1 + static_cast<Index>(rng() % 8);
    const Index n2 = 1 + static_cast<Index>(rng() % 8);
    const Index n3 = 1 + static_cast<Index>(rng() % 6);
    Tensor3 x(n1, n2, n3);
    VolumeMeta meta;
    meta.dims = {n1, n2, n3};
    meta.spacing = {0.5 + 0.25 * static_cast<double>(rng() % 8), 1.0, 2.0};
    const int which = trial % 3;
    if (which == 0) {
      meta.element_type = ElementType::u8;
      for (auto& v : x.data()) v = static_cast<double>(rng() % 256);
    } else if (which == 1) {
      meta.element_type = ElementType::i16;
      for (auto& v : x.data()) {
        v = static_cast<double>(static_cast<int>(rng() % 4096) - 1024);
      }
    } else {
      meta.element_type = ElementType::f32;
      std::normal_distribution<double> gauss;
      for (auto& v : x.data()) {
        v = static_cast<double>(static_cast<float>(gauss(rng) * 100.0));
      }
    }
    const fs::path path = dir / ("case" + std::to_string(trial) + ".mhd");
    write_volume(path, x, meta);
    const auto [y, got] = read_volume(path);
    if ((x.array() - y.array()).abs().maxCoeff() != 0.0) {
      fs::remove_all(dir);
      return {false, "round trip not bit-exact on case " +
                         std::to_string(trial)};
    }
    ++cases;
  }
  fs::remove_all(dir);
  return {true, std::to_string(cases) + " cases bit-exact"};
}

// --- criterion 9: CLI end to end -------------------------------------------

int run_command(const std::string& command) {
  const int status = std::system(command.c_str());
  if (status == -1) return -1;
  return WEXITSTATUS(status);
}

Outcome cli_end_to_end() {
#ifndef TLRD_CLI_PATH
  return {false, "CLI path not configured"};
#else
  const std::string cli = TLRD_CLI_PATH;
  const fs::path dir =
      fs::temp_directory_path() /
      ("tlrd_acceptance_cli_" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  const fs::path phantoms = dir / "phantoms";
  const fs::path out = dir / "out";
  struct Cleanup {
    fs::path dir;
    ~Cleanup() {
      std::error_code ec;
      fs::remove_all(dir, ec);
    }
  } cleanup{dir};

  {
    std::ostringstream cmd;
    cmd << cli << " phantom --dims 32,32,18 --rank 3 --volumes 6"
        << " --sparse-fraction 0.03 --slice-drift 0.1 --seed 42"
        << " --out-dir " << phantoms.string() << " --report "
        << (dir / "phantom_report.json").string() << " > /dev/null";
    if (run_command(cmd.str()) != 0) return {false, "phantom command failed"};
  }

  {
    std::ostringstream cmd;
    cmd << cli << " decompose --input";
    for (int i = 0; i < 6; ++i) {
      cmd << " " << (phantoms / ("vol00" + std::to_string(i) +
                                 ".mhd")).string();
    }
    cmd << " --mask";
    for (int i = 0; i < 6; ++i) {
      cmd << " " << (phantoms / ("mask00" + std::to_string(i) +
                                 ".mhd")).string();
    }
    cmd << " --out-dir " << out.string() << " --report "
        << (dir / "report.json").string() << " > /dev/null";
    const int code = run_command(cmd.str());
    if (code != 0) {
      return {false, "decompose exited " + std::to_string(code)};
    }
  }

  json report;
  {
    std::ifstream in(dir / "report.json");
    if (!in) return {false, "missing decompose report"};
    in >> report;
  }
  for (const char* key : {"report_version", "command", "config", "inputs",
                          "outputs", "segments", "metrics", "timings",
                          "all_converged"}) {
    if (!report.contains(key)) {
      return {false, std::string("report missing key '") + key + "'"};
    }
  }
  if (report["report_version"] != 1) return {false, "bad report version"};
  for (const char* key :
       {"transform", "segment_length", "lambda", "mu0", "mu_max", "rho",
        "eps", "max_iters", "workers", "normalization"}) {
    if (!report["config"].contains(key)) {
      return {false, std::string("config missing key '") + key + "'"};
    }
  }
  if (report["config"]["lambda"].is_string()) {
    return {false, "config lambda left unresolved"};
  }
  for (const auto& output : report["outputs"]) {
    if (!fs::exists(output["low_rank"].get<std::string>()) ||
        !fs::exists(output["sparse"].get<std::string>())) {
      return {false, "reported output file missing"};
    }
  }
  double min_dice = 100.0;
  for (const auto& m : report["metrics"]) {
    if (!m.contains("sparse_support_dice")) {
      return {false, "metrics missing sparse_support_dice"};
    }
    min_dice = std::min(min_dice, m["sparse_support_dice"].get<double>());
  }
  if (min_dice <= 80.0) {
    return {false, "sparse support dice " + std::to_string(min_dice)};
  }

  {
    std::ostringstream cmd;
    cmd << cli << " metrics --image "
        << (out / "vol000.lowrank.mhd").string() << " --mask "
        << (phantoms / "mask000.mhd").string() << " --report "
        << (dir / "metrics_image.json").string() << " > /dev/null";
    if (run_command(cmd.str()) != 0) {
      return {false, "metrics (image mode) failed"};
    }
  }
  {
    std::ostringstream cmd;
    cmd << cli << " metrics --a " << (phantoms / "mask000.mhd").string()
        << " --b " << (phantoms / "mask001.mhd").string() << " --report "
        << (dir / "metrics_labels.json").string() << " > /dev/null";
    if (run_command(cmd.str()) != 0) {
      return {false, "metrics (label mode) failed"};
    }
  }

  std::ostringstream detail;
  detail << "pipeline ok, min dice " << min_dice;
  return {true, detail.str()};
#endif
}

}  // namespace

int main() {
  Runner runner;
  runner.run("oracle-equivalence", 10, oracle_equivalence);
  runner.run("tsvd-reconstruction", 30, tsvd_reconstruction);
  runner.run("proximal-optimality", 60, proximal_optimality);
  runner.run("exact-recovery", 300, exact_recovery);
  runner.run("multislice-correctness", 300, multislice_correctness);
  runner.run("transform-comparison", 300, transform_comparison);
  runner.run("metric-identities", 30, metric_identities);
  runner.run("format-round-trip", 10, format_round_trip);
  runner.run("cli-end-to-end", 300, cli_end_to_end);

  if (runner.failures) {
    std::printf("%d criterion(s) failed\n", runner.failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
