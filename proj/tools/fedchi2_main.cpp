// Copyright 2026 The fedchi2 Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Command-line harness. Every experiment writes one CSV whose first line is a
// fingerprint comment carrying the full parameter set (seeds included), so
// any row can be reproduced in isolation. Exit codes: 0 on success, 2 for
// usage or configuration errors, 3 for runtime protocol failures and failed
// acceptance criteria.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "fedchi2/acceptance.hpp"
#include "fedchi2/accuracy.hpp"
#include "fedchi2/caesar.hpp"
#include "fedchi2/config.hpp"
#include "fedchi2/contingency.hpp"
#include "fedchi2/cost.hpp"
#include "fedchi2/fdr.hpp"
#include "fedchi2/featsel.hpp"
#include "fedchi2/leakage.hpp"
#include "fedchi2/projection.hpp"
#include "fedchi2/protocol.hpp"
#include "fedchi2/seeds.hpp"
#include "fedchi2/synthetic.hpp"

#ifndef FEDCHI2_DATA_DIR
#define FEDCHI2_DATA_DIR "data"
#endif

namespace {

using namespace fedchi2;

// ---------------------------------------------------------------------------
// Output plumbing

class CsvFile {
 public:
  explicit CsvFile(const std::string& path) : f_(std::fopen(path.c_str(), "wb")) {
    if (f_ == nullptr) throw ConfigError("cannot open output file for writing: " + path);
  }
  CsvFile(const CsvFile&) = delete;
  CsvFile& operator=(const CsvFile&) = delete;
  ~CsvFile() {
    if (f_ != nullptr) std::fclose(f_);
  }

  void line(const char* format, ...) {
    va_list args;
    va_start(args, format);
    std::vfprintf(f_, format, args);
    va_end(args);
    std::fputc('\n', f_);
  }

 private:
  std::FILE* f_;
};

// The fingerprint is one comment line listing every parameter (and seed) that
// influences the rows below it.
class Fingerprint {
 public:
  explicit Fingerprint(std::string command) : command_(std::move(command)) {}

  Fingerprint& add(const std::string& key, const std::string& value) {
    params_.emplace_back(key, value);
    return *this;
  }
  Fingerprint& add(const std::string& key, std::uint64_t value) {
    return add(key, std::to_string(value));
  }
  Fingerprint& add(const std::string& key, std::int64_t value) {
    return add(key, std::to_string(value));
  }
  Fingerprint& add(const std::string& key, int value) { return add(key, std::to_string(value)); }
  Fingerprint& add(const std::string& key, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return add(key, std::string(buf));
  }
  Fingerprint& add(const std::string& key, bool value) {
    return add(key, std::string(value ? "true" : "false"));
  }
  Fingerprint& add(const std::string& key, const std::vector<int>& values) {
    std::string joined;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i > 0) joined += ',';
      joined += std::to_string(values[i]);
    }
    return add(key, joined);
  }

  std::string str() const {
    std::string out = "# fedchi2 command=" + command_;
    for (const auto& [key, value] : params_) out += " " + key + "=" + value;
    return out;
  }

 private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> params_;
};

// ---------------------------------------------------------------------------
// Shared argument state

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  std::string data_dir = FEDCHI2_DATA_DIR;
  std::uint64_t seed = 42;
};

ConfigFile load_config(const CommonArgs& args) {
  if (args.config_path.empty()) return ConfigFile{};
  return ConfigFile::parse_file(args.config_path);
}

std::uint64_t resolve_seed(const CLI::App* sub, const CommonArgs& args, const ConfigFile& cfg) {
  // CLI flag beats the config file's `seed`, which beats the default.
  if (sub->count("--seed") > 0) return args.seed;
  return cfg.get_u64("seed", args.seed);
}

// ---------------------------------------------------------------------------
// accuracy-sweep

int cmd_accuracy_sweep(const CommonArgs& args, const ConfigFile& cfg, std::uint64_t seed) {
  cfg.require_known({"seed", "datasets", "n_list", "ell_list", "runs", "m_x", "m_y", "samples",
                     "noise_sigma", "scale"});
  AccuracyOptions opt;
  opt.seed = seed;
  std::vector<std::string> names;
  for (SynthKind kind : opt.datasets) names.emplace_back(synth_kind_name(kind));
  names = cfg.get_string_list("datasets", names);
  opt.datasets.clear();
  for (const auto& name : names) opt.datasets.push_back(parse_synth_kind(name));
  opt.n_list = cfg.get_int_list("n_list", opt.n_list);
  opt.ell_list = cfg.get_int_list("ell_list", opt.ell_list);
  opt.runs = cfg.get_int("runs", opt.runs);
  opt.m_x = cfg.get_int("m_x", opt.m_x);
  opt.m_y = cfg.get_int("m_y", opt.m_y);
  opt.samples = cfg.get_i64("samples", opt.samples);
  opt.noise_sigma = cfg.get_double("noise_sigma", opt.noise_sigma);
  opt.scale = cfg.get_u64("scale", opt.scale);
  opt.validate();  // refuses the whole sweep (hiding condition included)

  const auto points = run_accuracy_sweep(opt);

  std::string dataset_csv;
  for (std::size_t i = 0; i < names.size(); ++i)
    dataset_csv += (i > 0 ? "," : "") + names[i];
  Fingerprint fp("accuracy-sweep");
  fp.add("seed", seed)
      .add("datasets", dataset_csv)
      .add("n_list", opt.n_list)
      .add("ell_list", opt.ell_list)
      .add("runs", opt.runs)
      .add("m_x", opt.m_x)
      .add("m_y", opt.m_y)
      .add("samples", opt.samples)
      .add("noise_sigma", opt.noise_sigma)
      .add("scale", opt.scale);

  CsvFile out(args.out_path);
  out.line("%s", fp.str().c_str());
  out.line("dataset,n,ell,runs,mean_rel_error,std_rel_error");
  for (const auto& p : points)
    out.line("%s,%d,%d,%d,%.9g,%.9g", synth_kind_name(p.dataset), p.n, p.ell, p.runs,
             p.mean_rel_error, p.std_rel_error);
  std::printf("accuracy-sweep: %zu grid points -> %s\n", points.size(), args.out_path.c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// caesar

int cmd_caesar(const CommonArgs& args, const ConfigFile& cfg, std::uint64_t seed) {
  cfg.require_known({"seed", "trials", "length", "ell", "n_clients", "scale", "shift"});
  const int trials = cfg.get_int("trials", 10);
  const std::int64_t length = cfg.get_i64("length", 100000);
  const int ell = cfg.get_int("ell", 50);
  const int n_clients = cfg.get_int("n_clients", 10);
  const std::uint64_t scale = cfg.get_u64("scale", 1ull << 20);
  const int fixed_shift = cfg.get_int("shift", -1);  // -1: rotate over trials
  if (trials < 1) throw ConfigError("caesar: trials must be >= 1");
  if (length < 2 * kAlphabet) throw ConfigError("caesar: length must be >= 52");
  if (fixed_shift < -1 || fixed_shift >= kAlphabet)
    throw ConfigError("caesar: shift must be in [0, 25] (or -1 for per-trial shifts)");

  std::ifstream in(args.data_dir + "/english_sample.txt", std::ios::binary);
  if (!in) throw ConfigError("cannot open " + args.data_dir + "/english_sample.txt");
  std::ostringstream buf;
  buf << in.rdbuf();
  const EnglishModel model = EnglishModel::train(normalize_text(buf.str()));
  const auto reference = load_letter_counts_csv(args.data_dir + "/english_letter_counts.csv");
  const std::string stream =
      model.sample(static_cast<std::size_t>(trials) * static_cast<std::size_t>(length),
                   derive_seed(seed, kStreamCaesarModel));

  Fingerprint fp("caesar");
  fp.add("seed", seed)
      .add("trials", trials)
      .add("length", length)
      .add("ell", ell)
      .add("n_clients", n_clients)
      .add("scale", scale)
      .add("shift", fixed_shift)
      .add("data_dir", args.data_dir);

  CsvFile out(args.out_path);
  out.line("%s", fp.str().c_str());
  out.line("trial,length,ell,n_clients,true_shift,recovered_shift,success,stat_true,stat_best_other");
  int wins = 0;
  for (int t = 0; t < trials; ++t) {
    const int shift = fixed_shift >= 0 ? fixed_shift : (7 * t + 3) % kAlphabet;
    CipherTrial trial;
    trial.ciphertext = caesar_encrypt(
        stream.substr(static_cast<std::size_t>(t) * static_cast<std::size_t>(length),
                      static_cast<std::size_t>(length)),
        shift);
    trial.reference_counts = reference;
    CaesarOptions copt;
    copt.n_clients = n_clients;
    copt.ell = ell;
    copt.scale = scale;
    copt.seed = derive_seed(derive_seed(seed, kStreamCaesarTrial, static_cast<std::uint64_t>(t)),
                            kStreamCaesarEll, static_cast<std::uint64_t>(ell));
    const CaesarCrackResult res = crack_caesar(trial, copt);
    double best_other = std::numeric_limits<double>::infinity();
    for (int s = 0; s < kAlphabet; ++s)
      if (s != shift) best_other = std::min(best_other, res.statistics[static_cast<std::size_t>(s)]);
    const bool success = res.shift == shift;
    wins += success ? 1 : 0;
    out.line("%d,%lld,%d,%d,%d,%d,%d,%.9g,%.9g", t, static_cast<long long>(length), ell, n_clients,
             shift, res.shift, success ? 1 : 0, res.statistics[static_cast<std::size_t>(shift)],
             best_other);
  }
  out.line("# success_rate=%.4f", static_cast<double>(wins) / trials);
  std::printf("caesar: %d/%d shifts recovered -> %s\n", wins, trials, args.out_path.c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// fdr

int cmd_fdr(const CommonArgs& args, const ConfigFile& cfg, std::uint64_t seed) {
  cfg.require_known({"seed", "replicates", "steps", "per_step", "null_fraction", "n_clients",
                     "ell", "bins", "samples", "use_sketch", "alpha", "w0", "lambda", "scale"});
  const int replicates = cfg.get_int("replicates", 5);
  if (replicates < 1) throw ConfigError("fdr: replicates must be >= 1");
  FdrOptions base;
  base.steps = cfg.get_int("steps", base.steps);
  base.per_step = cfg.get_int("per_step", base.per_step);
  base.null_fraction = cfg.get_double("null_fraction", base.null_fraction);
  base.n_clients = cfg.get_int("n_clients", base.n_clients);
  base.ell = cfg.get_int("ell", base.ell);
  base.bins = cfg.get_int("bins", base.bins);
  base.samples = cfg.get_i64("samples", base.samples);
  base.use_sketch = cfg.get_bool("use_sketch", base.use_sketch);
  base.scale = cfg.get_u64("scale", base.scale);
  base.saffron.alpha = cfg.get_double("alpha", base.saffron.alpha);
  base.saffron.w0 = cfg.get_double("w0", base.saffron.w0);
  base.saffron.lambda = cfg.get_double("lambda", base.saffron.lambda);

  Fingerprint fp("fdr");
  fp.add("seed", seed)
      .add("replicates", replicates)
      .add("steps", base.steps)
      .add("per_step", base.per_step)
      .add("null_fraction", base.null_fraction)
      .add("n_clients", base.n_clients)
      .add("ell", base.ell)
      .add("bins", base.bins)
      .add("samples", base.samples)
      .add("use_sketch", base.use_sketch)
      .add("alpha", base.saffron.alpha)
      .add("w0", base.saffron.w0)
      .add("lambda", base.saffron.lambda)
      .add("scale", base.scale);

  CsvFile out(args.out_path);
  out.line("%s", fp.str().c_str());
  out.line("seed,ell,step,rejections,false_rejections,fdr");
  std::vector<double> finals;
  for (int rep = 0; rep < replicates; ++rep) {
    FdrOptions opt = base;
    opt.seed = derive_seed(seed, kStreamFdrReplicate, static_cast<std::uint64_t>(rep));
    const FdrResult res = run_fdr_experiment(opt);
    for (const auto& row : res.rows)
      out.line("%llu,%d,%d,%d,%d,%.9g", static_cast<unsigned long long>(opt.seed), opt.ell,
               row.step, row.rejections, row.false_rejections, row.fdr);
    finals.push_back(res.fdr);
  }
  double mean = 0.0;
  for (double f : finals) mean += f;
  mean /= finals.size();
  double se = 0.0;
  if (finals.size() > 1) {
    double ss = 0.0;
    for (double f : finals) ss += (f - mean) * (f - mean);
    se = std::sqrt(ss / (finals.size() - 1)) / std::sqrt(static_cast<double>(finals.size()));
  }
  out.line("# mean_final_fdr=%.6f se=%.6f", mean, se);
  std::printf("fdr: %d replicates, mean final FDR %.4f (se %.4f) -> %s\n", replicates, mean, se,
              args.out_path.c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// featsel

int cmd_featsel(const CommonArgs& args, const ConfigFile& cfg, std::uint64_t seed) {
  cfg.require_known({"seed", "n_features", "n_correlated", "n_classes", "levels", "docs",
                     "n_clients", "ell", "scale"});
  FeatselOptions opt;
  opt.n_features = cfg.get_int("n_features", opt.n_features);
  opt.n_correlated = cfg.get_int("n_correlated", opt.n_correlated);
  opt.n_classes = cfg.get_int("n_classes", opt.n_classes);
  opt.levels = cfg.get_int("levels", opt.levels);
  opt.docs = cfg.get_int("docs", opt.docs);
  opt.n_clients = cfg.get_int("n_clients", opt.n_clients);
  opt.ell = cfg.get_int("ell", opt.ell);
  opt.scale = cfg.get_u64("scale", opt.scale);
  opt.seed = seed;

  const FeatselResult res = run_featsel_experiment(opt);

  Fingerprint fp("featsel");
  fp.add("seed", seed)
      .add("n_features", opt.n_features)
      .add("n_correlated", opt.n_correlated)
      .add("n_classes", opt.n_classes)
      .add("levels", opt.levels)
      .add("docs", opt.docs)
      .add("n_clients", opt.n_clients)
      .add("ell", opt.ell)
      .add("scale", opt.scale);

  std::vector<char> in_central(static_cast<std::size_t>(opt.n_features), 0);
  std::vector<char> in_federated(static_cast<std::size_t>(opt.n_features), 0);
  for (int f : res.centralized_top) in_central[static_cast<std::size_t>(f)] = 1;
  for (int f : res.federated_top) in_federated[static_cast<std::size_t>(f)] = 1;

  CsvFile out(args.out_path);
  out.line("%s", fp.str().c_str());
  out.line("feature,centralized_score,federated_score,in_centralized_top,in_federated_top");
  for (int f = 0; f < opt.n_features; ++f)
    out.line("%d,%.9g,%.9g,%d,%d", f, res.centralized_scores[static_cast<std::size_t>(f)],
             res.federated_scores[static_cast<std::size_t>(f)],
             in_central[static_cast<std::size_t>(f)], in_federated[static_cast<std::size_t>(f)]);
  out.line("# top_k=%d overlap=%.6f", opt.n_correlated, res.overlap);
  std::printf("featsel: top-%d overlap with the centralized ranking %.4f -> %s\n",
              opt.n_correlated, res.overlap, args.out_path.c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// cost-sweep

int cmd_cost_sweep(const CommonArgs& args, const ConfigFile& cfg, std::uint64_t seed) {
  cfg.require_known({"seed", "n_list", "ell_list", "m_list", "m_x", "m_y", "samples", "by_seed",
                     "scale", "encode_ell"});
  const std::vector<int> n_list = cfg.get_int_list("n_list", {10, 50, 100});
  const std::vector<int> ell_list = cfg.get_int_list("ell_list", {50, 100, 200});
  const std::vector<int> m_list = cfg.get_int_list("m_list", {10, 20, 40});  // m_x = m_y sweep
  const int m_x = cfg.get_int("m_x", 20);
  const int m_y = cfg.get_int("m_y", 20);
  const std::int64_t samples = cfg.get_i64("samples", 20000);
  const bool by_seed = cfg.get_bool("by_seed", true);
  const std::uint64_t scale = cfg.get_u64("scale", 1ull << 20);
  const int encode_ell = cfg.get_int("encode_ell", 100);
  if (n_list.empty() || ell_list.empty() || m_list.empty())
    throw ConfigError("cost-sweep: grids must be non-empty");

  // Validate the whole grid before emitting anything.
  for (int n : n_list) {
    for (int ell : ell_list) {
      ProtocolConfig cfg_check;
      cfg_check.n_clients = n;
      cfg_check.m_x = m_x;
      cfg_check.m_y = m_y;
      cfg_check.ell = ell;
      cfg_check.scale = scale;
      cfg_check.validate();
    }
  }

  SynthOptions synth;
  synth.kind = SynthKind::kQuadratic;
  synth.m_x = m_x;
  synth.m_y = m_y;
  synth.samples = samples;
  synth.seed = derive_seed(seed, 72);
  const ContingencyTable global = synth_dataset(synth);

  Fingerprint fp("cost-sweep");
  fp.add("seed", seed)
      .add("n_list", n_list)
      .add("ell_list", ell_list)
      .add("m_list", m_list)
      .add("m_x", m_x)
      .add("m_y", m_y)
      .add("samples", samples)
      .add("by_seed", by_seed)
      .add("scale", scale)
      .add("encode_ell", encode_ell);

  CsvFile out(args.out_path);
  out.line("%s", fp.str().c_str());
  out.line(
      "section,n,k,ell,m_x,m_y,client_bytes_mean,client_bytes_max,server_bytes_sent,"
      "server_bytes_received,masked_uploads,scalar_aggregations,encode_ms");

  const std::size_t grid = n_list.size() * ell_list.size();
  Eigen::MatrixXd x_bytes(static_cast<int>(grid), 4);
  Eigen::VectorXd y_bytes(static_cast<int>(grid));
  int row = 0;
  for (int n : n_list) {
    const auto clients =
        split_table(global, n, derive_seed(seed, 73, static_cast<std::uint64_t>(n)));
    for (int ell : ell_list) {
      const auto point = static_cast<std::uint64_t>(n) * 100000ull + static_cast<std::uint64_t>(ell);
      ProtocolConfig pcfg;
      pcfg.n_clients = n;
      pcfg.m_x = m_x;
      pcfg.m_y = m_y;
      pcfg.ell = ell;
      pcfg.scale = scale;
      pcfg.broadcast_projection_by_seed = by_seed;
      pcfg.graph_seed = derive_seed(seed, 74, point);
      pcfg.projection_seed = derive_seed(seed, 75, point);
      pcfg.ka_seed = derive_seed(seed, 76, point);
      FederatedChi2 protocol(pcfg);
      protocol.run(clients);
      const CostReport report = cost_report_from_transcript(protocol.transcript(), n);
      const int degree = protocol.graph().k;
      out.line("bytes,%d,%d,%d,%d,%d,%.9g,%llu,%llu,%llu,%d,%llu,%.9g", n, degree, ell, m_x, m_y,
               report.mean_client_bytes(),
               static_cast<unsigned long long>(report.max_client_bytes()),
               static_cast<unsigned long long>(report.server_bytes_sent),
               static_cast<unsigned long long>(report.server_bytes_received),
               report.masked_uploads.front(),
               static_cast<unsigned long long>(report.scalar_aggregations),
               protocol.encode_ms());
      x_bytes(row, 0) = 1.0;
      x_bytes(row, 1) = ell;
      x_bytes(row, 2) = m_x + m_y;
      x_bytes(row, 3) = degree;
      y_bytes(row) = report.mean_client_bytes();
      ++row;
    }
  }
  const LinearFit bytes_fit = fit_least_squares(x_bytes, y_bytes);

  // Encode-time sweep: square tables, so m = m_list[i]^2 and the per-encode
  // time grows linearly in m (hence quadratically in m_x).
  Eigen::MatrixXd x_time(static_cast<int>(m_list.size()), 2);
  Eigen::VectorXd y_time(static_cast<int>(m_list.size()));
  double guard = 0.0;
  for (std::size_t i = 0; i < m_list.size(); ++i) {
    const int side = m_list[i];
    if (side < 2) throw ConfigError("cost-sweep: m_list entries must be >= 2");
    const int m = side * side;
    const auto p =
        sample_projection(encode_ell, m, derive_seed(seed, 77, static_cast<std::uint64_t>(side)));
    std::mt19937_64 rng(derive_seed(seed, 78, static_cast<std::uint64_t>(side)));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> u(static_cast<std::size_t>(m));
    for (auto& v : u) v = gauss(rng);
    const auto t0 = std::chrono::steady_clock::now();
    int reps = 0;
    double elapsed = 0.0;
    while (elapsed < 0.08) {
      guard += encode(p, u)[0];
      ++reps;
      elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    const double ms = elapsed * 1000.0 / reps;
    out.line("encode,1,0,%d,%d,%d,0,0,0,0,0,0,%.9g", encode_ell, side, side, ms);
    x_time(static_cast<int>(i), 0) = 1.0;
    x_time(static_cast<int>(i), 1) = m;
    y_time(static_cast<int>(i)) = ms;
  }
  const LinearFit time_fit = fit_least_squares(x_time, y_time);

  out.line("# fit_bytes intercept=%.6g per_ell=%.6g per_m=%.6g per_degree=%.6g r2=%.8f",
           bytes_fit.coef(0), bytes_fit.coef(1), bytes_fit.coef(2), bytes_fit.coef(3),
           bytes_fit.r2);
  out.line("# fit_encode intercept_ms=%.6g per_cell_ms=%.6g r2=%.8f", time_fit.coef(0),
           time_fit.coef(1), time_fit.r2);
  out.line("# per_ell_vs_field_width ratio=%.6f", bytes_fit.coef(1) / 8.0);
  if (!std::isfinite(guard)) throw std::runtime_error("cost-sweep: encode produced non-finite values");
  std::printf("cost-sweep: bytes fit R^2=%.6f, encode fit R^2=%.6f -> %s\n", bytes_fit.r2,
              time_fit.r2, args.out_path.c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// rank-check

int cmd_rank_check(const CommonArgs& args, const ConfigFile& cfg, std::uint64_t seed) {
  cfg.require_known({"seed", "m_x", "m_y", "ell", "trials", "samples"});
  const int m_x = cfg.get_int("m_x", 20);
  const int m_y = cfg.get_int("m_y", 20);
  const int ell = cfg.get_int("ell", 50);
  const int trials = cfg.get_int("trials", 100);
  const std::int64_t samples = cfg.get_i64("samples", 100000);
  if (m_x < 2 || m_y < 2) throw ConfigError("rank-check: table must be at least 2x2");
  if (ell < kMinSketchWidth)
    throw ConfigError("rank-check: ell must be >= " + std::to_string(kMinSketchWidth));
  if (trials < 1) throw ConfigError("rank-check: trials must be >= 1");

  // A realistic witness table for the null-space perturbation columns.
  SynthOptions synth;
  synth.kind = SynthKind::kLinear;
  synth.m_x = m_x;
  synth.m_y = m_y;
  synth.samples = samples;
  synth.seed = derive_seed(seed, 79);
  const ContingencyTable global = synth_dataset(synth);
  const Marginals marg = marginals(global);
  check_positive_marginals(marg);

  Fingerprint fp("rank-check");
  fp.add("seed", seed)
      .add("m_x", m_x)
      .add("m_y", m_y)
      .add("ell", ell)
      .add("trials", trials)
      .add("samples", samples)
      .add("rank_cap", ell + m_x + m_y);

  CsvFile out(args.out_path);
  out.line("%s", fp.str().c_str());
  out.line("trial,projection_seed,rank,nullspace_dim,margin_dev,sketch_dev");
  int max_rank = 0;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t pseed = derive_seed(seed, 66, static_cast<std::uint64_t>(t));
    const auto p = sample_projection(ell, m_x * m_y, pseed);
    const RankCheck rc = leakage_rank_check(p, m_x, m_y);
    max_rank = std::max(max_rank, rc.rank);

    const auto delta = hidden_table_delta(p, marg);
    double margin_dev = 0.0;
    for (int x = 0; x < m_x; ++x) {
      double s = 0.0;
      for (int y = 0; y < m_y; ++y) s += delta[static_cast<std::size_t>(flat_index(x, y, m_y))];
      margin_dev = std::max(margin_dev, std::abs(s));
    }
    for (int y = 0; y < m_y; ++y) {
      double s = 0.0;
      for (int x = 0; x < m_x; ++x) s += delta[static_cast<std::size_t>(flat_index(x, y, m_y))];
      margin_dev = std::max(margin_dev, std::abs(s));
    }
    std::vector<double> shifted(global.counts.begin(), global.counts.end());
    for (std::size_t j = 0; j < shifted.size(); ++j) shifted[j] += delta[j];
    const auto base = encode(p, build_u_vector(global, marg, 1));
    const auto moved = encode(p, u_from_counts(shifted, marg, 1));
    double sketch_dev = 0.0;
    for (std::size_t k = 0; k < base.size(); ++k)
      sketch_dev = std::max(sketch_dev, std::abs(base[k] - moved[k]));

    out.line("%d,%llu,%d,%d,%.3g,%.3g", t, static_cast<unsigned long long>(pseed), rc.rank,
             rc.nullspace_dim, margin_dev, sketch_dev);
  }
  std::printf("rank-check: max rank %d over %d trials (cap %d) -> %s\n", max_rank, trials,
              ell + m_x + m_y, args.out_path.c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// accept

int cmd_accept(const CommonArgs& args, const std::string& suite) {
  const auto results = run_acceptance(suite, args.data_dir);
  int passed = 0;
  for (const auto& r : results) {
    std::printf("[%2d] %-18s %s  %7.2f s  %s\n", r.id, r.name.c_str(),
                r.passed ? "PASS" : "FAIL", r.seconds, r.detail.c_str());
    std::fflush(stdout);
    passed += r.passed ? 1 : 0;
  }
  std::printf("acceptance: %d/%zu criteria passed\n", passed, results.size());
  if (!args.out_path.empty()) {
    CsvFile out(args.out_path);
    Fingerprint fp("accept");
    fp.add("suite", suite).add("root_seed", kAcceptanceSeed).add("data_dir", args.data_dir);
    out.line("%s", fp.str().c_str());
    out.line("id,name,passed,property_ok,seconds,budget_seconds,detail");
    for (const auto& r : results)
      out.line("%d,%s,%d,%d,%.3f,%.0f,\"%s\"", r.id, r.name.c_str(), r.passed ? 1 : 0,
               r.property_ok ? 1 : 0, r.seconds, r.budget_seconds, r.detail.c_str());
  }
  return passed == static_cast<int>(results.size()) ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "fedchi2: federated chi-squared independence testing from stable random "
      "projections over masked secure aggregation"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string suite = "all";

  const auto add_common = [&args](CLI::App* sub, bool out_required) {
    sub->add_option("--config", args.config_path, "key=value configuration file");
    auto* out = sub->add_option("--out", args.out_path, "output CSV path");
    if (out_required) out->required();
    sub->add_option("--seed", args.seed, "root seed (overrides the config file's `seed`)");
    sub->add_option("--data", args.data_dir, "directory with the bundled English reference data");
  };

  CLI::App* sub_accuracy = app.add_subcommand(
      "accuracy-sweep", "multiplicative error over a (dataset, clients, sketch width) grid");
  add_common(sub_accuracy, true);
  CLI::App* sub_caesar =
      app.add_subcommand("caesar", "recover Caesar shifts from the federated statistic");
  add_common(sub_caesar, true);
  CLI::App* sub_fdr =
      app.add_subcommand("fdr", "online false-discovery-rate control over a hypothesis stream");
  add_common(sub_fdr, true);
  CLI::App* sub_featsel =
      app.add_subcommand("featsel", "federated feature selection against a centralized oracle");
  add_common(sub_featsel, true);
  CLI::App* sub_cost =
      app.add_subcommand("cost-sweep", "communication and encode-time scaling with linear fits");
  add_common(sub_cost, true);
  CLI::App* sub_rank =
      app.add_subcommand("rank-check", "leakage rank and null-space witness per projection seed");
  add_common(sub_rank, true);
  CLI::App* sub_accept = app.add_subcommand("accept", "run the release acceptance suite");
  add_common(sub_accept, false);
  sub_accept->add_option("--suite", suite, "criterion name, numeric id, or `all`");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    const ConfigFile cfg = load_config(args);
    const std::uint64_t seed = resolve_seed(sub, args, cfg);
    if (sub == sub_accuracy) return cmd_accuracy_sweep(args, cfg, seed);
    if (sub == sub_caesar) return cmd_caesar(args, cfg, seed);
    if (sub == sub_fdr) return cmd_fdr(args, cfg, seed);
    if (sub == sub_featsel) return cmd_featsel(args, cfg, seed);
    if (sub == sub_cost) return cmd_cost_sweep(args, cfg, seed);
    if (sub == sub_rank) return cmd_rank_check(args, cfg, seed);
    if (sub == sub_accept) {
      cfg.require_known({"seed"});
      return cmd_accept(args, suite);
    }
    throw std::logic_error("unhandled subcommand");
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const ZeroMarginalError& e) {
    std::fprintf(stderr, "protocol abort: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime error: %s\n", e.what());
    return 3;
  }
}
