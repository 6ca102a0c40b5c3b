// Copyright 2026 The qinstr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qinstr: generate instrument models, report their metrics, run randomized
// verification suites and evaluate diamond norms.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or input error.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "qinstr/qinstr.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

/// QINSTR_THREADS overrides the worker count of `verify`.
unsigned thread_count() {
  if (const char* env = std::getenv("QINSTR_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring invalid QINSTR_THREADS=" << env << "\n";
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw qinstr::Error(qinstr::ErrorKind::kInvalidArgument, "cannot write " + out_path);
  f << text;
}

std::string record_csv_header() { return "theorem_id,trial_seed,closed_form,oracle_value,abs_error,passed,note"; }

std::string record_csv_row(const qinstr::VerificationRecord& r) {
  using qinstr::io::format_double;
  return r.theorem_id + ',' + std::to_string(r.trial_seed) + ',' + format_double(r.closed_form) + ',' +
         format_double(r.oracle_value) + ',' + format_double(r.abs_error) + ',' + (r.passed ? "true" : "false") + ",\"" +
         r.note + '"';
}

qinstr::io::json record_json(const qinstr::VerificationRecord& r) {
  return {{"theorem_id", r.theorem_id}, {"trial_seed", r.trial_seed}, {"closed_form", r.closed_form},
          {"oracle_value", r.oracle_value}, {"abs_error", r.abs_error}, {"passed", r.passed}, {"note", r.note}};
}

struct Common {
  std::uint64_t seed = 0;
  std::optional<long> dim_d;
  std::optional<long> dim_e;
  std::optional<double> tol;
  std::string out;
  std::string format = "json";
};

void add_format(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", c.out, "Output file (default stdout)");
}

int cmd_gen(const std::string& kind, const Common& c) {
  const Eigen::Index d = c.dim_d.value_or(2);
  const Eigen::Index e = c.dim_e.value_or(2);
  qinstr::Rng rng(c.seed);
  qinstr::io::json j;
  if (kind == "uniform") {
    j = qinstr::io::to_json(qinstr::random_uniform_model(d, e, rng));
  } else if (kind == "nonuniform") {
    j = qinstr::io::to_json(qinstr::random_nonuniform_model(d, e, rng));
  } else {
    if (e > qinstr::kMaxWeylDim) {
      throw qinstr::Error(qinstr::ErrorKind::kUnsupportedDimension, "E = " + std::to_string(e) + " is not supported");
    }
    j = qinstr::io::to_json(qinstr::random_general_implementation(d, e, rng));
  }
  emit(j.dump(2) + "\n", c.out);
  return kExitOk;
}

int cmd_metrics(const std::string& path, const Common& c) {
  const qinstr::io::Model model = qinstr::io::model_from_json(qinstr::io::parse_json(qinstr::io::read_file(path)));
  qinstr::ReportOptions opt;
  opt.lower.seed = c.seed;
  const qinstr::MetricsReport r = std::visit([&](const auto& m) { return qinstr::build_report(m, opt); }, model);
  if (c.format == "csv") {
    emit(qinstr::io::metrics_csv_header() + "\n" + qinstr::io::metrics_csv_row(r) + "\n", c.out);
  } else {
    emit(qinstr::io::to_json(r).dump(2) + "\n", c.out);
  }
  return kExitOk;
}

int cmd_verify(const std::string& theorem, long trials, const Common& c) {
  const qinstr::TheoremId id = qinstr::parse_theorem_id(theorem);
  if (trials < 1) throw qinstr::Error(qinstr::ErrorKind::kInvalidArgument, "trials must be ≥ 1");
  qinstr::VerifyOptions opt;
  if (c.dim_d) opt.dim_d = *c.dim_d;
  if (c.dim_e) opt.dim_e = *c.dim_e;
  opt.tol = c.tol;
  const auto records = qinstr::run_trials(id, static_cast<std::size_t>(trials), c.seed, opt, thread_count());
  const qinstr::VerificationSummary s = qinstr::summarize(records);

  std::ostringstream text;
  if (c.format == "csv") {
    text << record_csv_header() << "\n";
    for (const auto& r : records) text << record_csv_row(r) << "\n";
  } else {
    for (const auto& r : records) text << record_json(r).dump() << "\n";
    text << qinstr::io::json{{"summary",
                               {{"theorem_id", theorem},
                                {"trials", s.trials},
                                {"passed", s.passed},
                                {"max_abs_error", s.max_abs_error},
                                {"tolerance", opt.tol.value_or(qinstr::theorem_info(id).tolerance)}}}}
                .dump()
         << "\n";
  }
  emit(text.str(), c.out);
  std::cerr << theorem << ": " << s.passed << "/" << s.trials << " passed, max abs_error "
            << qinstr::io::format_double(s.max_abs_error) << "\n";
  return s.all_passed() ? kExitOk : kExitVerifyFailed;
}

int cmd_oracle(const std::string& path, const Common& c) {
  const qinstr::ChoiMatrix delta = qinstr::io::choi_from_json(qinstr::io::parse_json(qinstr::io::read_file(path)));
  qinstr::OracleOptions opt;
  if (c.tol) opt.tol = *c.tol;
  const qinstr::DiamondNormResult r = qinstr::diamond_norm(delta, opt);
  if (c.format == "csv") {
    using qinstr::io::format_double;
    emit("value,primal_bound,dual_bound,gap,iterations,converged\n" + format_double(r.value) + ',' +
             format_double(r.primal_bound) + ',' + format_double(r.dual_bound) + ',' + format_double(r.gap) + ',' +
             std::to_string(r.iterations) + ',' + (r.converged ? "true" : "false") + "\n",
         c.out);
  } else {
    emit(qinstr::io::to_json(r).dump(2) + "\n", c.out);
  }
  if (!r.converged) {
    std::cerr << "oracle did not reach the requested tolerance (gap " << qinstr::io::format_double(r.gap) << ")\n";
    return kExitVerifyFailed;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum instrument error metrics"};
  app.require_subcommand(1);

  Common common;
  std::string kind = "uniform";
  std::string model_path, choi_path, theorem;
  long trials = 1;

  auto* gen = app.add_subcommand("gen", "Generate a random model");
  gen->add_option("kind", kind, "uniform | nonuniform | general")->check(CLI::IsMember({"uniform", "nonuniform", "general"}));
  gen->add_option("--seed", common.seed, "Random seed");
  gen->add_option("--dim-d", common.dim_d, "Measured register dimension D");
  gen->add_option("--dim-e", common.dim_e, "Unmeasured register dimension E");
  gen->add_option("--out", common.out, "Output file (default stdout)");

  auto* metrics = app.add_subcommand("metrics", "Compute the metrics report of a model file");
  metrics->add_option("model", model_path, "Model JSON")->required();
  metrics->add_option("--seed", common.seed, "Seed of the lower-bound restarts");
  add_format(metrics, common);

  auto* verify = app.add_subcommand("verify", "Run a randomized verification suite");
  verify->add_option("theorem_id", theorem, "Check to run")->required();
  verify->add_option("--trials", trials, "Number of trials");
  verify->add_option("--seed", common.seed, "Seed of trial 0; trial i uses seed + i");
  verify->add_option("--dim-d", common.dim_d, "Fix D");
  verify->add_option("--dim-e", common.dim_e, "Fix E");
  verify->add_option("--tol", common.tol, "Override the pass tolerance");
  add_format(verify, common);

  auto* oracle = app.add_subcommand("oracle-diamond", "Certified diamond norm of a ChoiMatrix JSON file");
  oracle->add_option("choi", choi_path, "ChoiMatrix JSON")->required();
  oracle->add_option("--tol", common.tol, "Certification tolerance");
  add_format(oracle, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) return cmd_gen(kind, common);
    if (*metrics) return cmd_metrics(model_path, common);
    if (*verify) return cmd_verify(theorem, trials, common);
    if (*oracle) return cmd_oracle(choi_path, common);
  } catch (const qinstr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
