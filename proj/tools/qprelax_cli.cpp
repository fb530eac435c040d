// Copyright 2026 The qprelax Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end over the C API.
//
// Exit codes: 0 completed, 2 input error, 3 desk-scale limit, 4 numeric or
// internal failure.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "qprelax/qprelax.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitDeskScale = 3;
constexpr int kExitNumeric = 4;

int exitCodeFor(qpr_status status) {
  switch (status) {
    case QPR_OK: return kExitOk;
    case QPR_ERR_DESK_SCALE_LIMIT: return kExitDeskScale;
    case QPR_ERR_NUMERIC:
    case QPR_ERR_INTERNAL:
    case QPR_ERR_GENERATION_FAILED: return kExitNumeric;
    default: return kExitInput;
  }
}

// Output of one command on one instance.
struct Outcome {
  int code = kExitOk;
  std::string out;
  std::string err;
};

Outcome failure(qpr_status status, const std::string& context) {
  return {exitCodeFor(status), "",
          context + ": " + qpr_status_name(status) + ": " + qpr_last_error() + "\n"};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  qpr_string_free(s);
  return out;
}

struct InstanceDeleter {
  void operator()(qpr_instance* p) const { qpr_instance_free(p); }
};
using InstancePtr = std::unique_ptr<qpr_instance, InstanceDeleter>;

struct ResultDeleter {
  void operator()(qpr_result* p) const { qpr_result_free(p); }
};
using ResultPtr = std::unique_ptr<qpr_result, ResultDeleter>;

struct Globals {
  double tol = 0.0;  // 0: library defaults
  int max_iter = 0;
  bool json = false;
  int jobs = 1;
  bool symmetrize = false;
};

qpr_solve_options solveOptions(const Globals& g) {
  qpr_solve_options o;
  qpr_solve_options_default(&o);
  if (g.max_iter > 0) o.max_iterations = g.max_iter;
  if (g.tol > 0) {
    o.tol_primal = g.tol;
    o.tol_dual = g.tol;
  }
  return o;
}

// Emits a JSON document either verbatim or rendered as text.
Outcome emit(const Globals& g, const std::string& json) {
  if (g.json) return {kExitOk, json + "\n", ""};
  char* text = nullptr;
  const qpr_status st = qpr_render_text(json.c_str(), &text);
  if (st != QPR_OK) return failure(st, "render");
  return {kExitOk, take(text), ""};
}

qpr_cone parseCone(const std::string& s) { return s == "psd0" ? QPR_CONE_PSD0 : QPR_CONE_DNN; }

using InstanceCommand = std::function<Outcome(qpr_instance*, const std::string& path)>;

Outcome runOnFile(const Globals& g, const std::string& path, const InstanceCommand& cmd) {
  qpr_instance* raw = nullptr;
  const qpr_status st = qpr_instance_load(path.c_str(), g.symmetrize ? 1 : 0, &raw);
  if (st != QPR_OK) return failure(st, path);
  InstancePtr inst(raw);
  Outcome o = cmd(inst.get(), path);
  if (!o.err.empty() && o.err.rfind(path, 0) != 0) o.err = path + ": " + o.err;
  return o;
}

// A file runs directly; a directory runs every *.json inside it (sorted)
// on a pool of g.jobs workers, printing results in order.
int runTarget(const Globals& g, const std::string& target, const InstanceCommand& cmd) {
  std::error_code ec;
  if (!fs::is_directory(target, ec)) {
    const Outcome o = runOnFile(g, target, cmd);
    std::cout << o.out;
    std::cerr << o.err;
    return o.code;
  }
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(target)) {
    const std::string p = entry.path().string();
    if (entry.is_regular_file() && entry.path().extension() == ".json" &&
        p.find(".meta.json") == std::string::npos) {
      files.push_back(p);
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<Outcome> outcomes(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      outcomes[i] = runOnFile(g, files[i], cmd);
    }
  };
  const int workers = std::max(1, std::min<int>(g.jobs, static_cast<int>(files.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int code = kExitOk;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!g.json) std::cout << "== " << files[i] << "\n";
    std::cout << outcomes[i].out;
    std::cerr << outcomes[i].err;
    code = std::max(code, outcomes[i].code);
  }
  return code;
}

Outcome loadPoint(qpr_instance* inst, const std::string& path, std::vector<double>& x) {
  x.assign(qpr_instance_n(inst), 0.0);
  const qpr_status st = qpr_vector_load(path.c_str(), qpr_instance_n(inst), x.data());
  if (st != QPR_OK) return failure(st, path);
  return {};
}

int writeGenerated(const Globals& g, qpr_status st, qpr_instance* raw, char* meta,
                   const std::string& out_dir) {
  if (st != QPR_OK) {
    const Outcome o = failure(st, "generate");
    std::cerr << o.err;
    return o.code;
  }
  InstancePtr inst(raw);
  const std::string metadata = take(meta);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  const std::string base = (fs::path(out_dir) / qpr_instance_name(inst.get())).string();
  const std::string inst_path = base + ".json";
  const std::string meta_path = base + ".meta.json";
  const qpr_status save = qpr_instance_save(inst.get(), inst_path.c_str());
  if (save != QPR_OK) {
    const Outcome o = failure(save, inst_path);
    std::cerr << o.err;
    return o.code;
  }
  std::ofstream meta_out(meta_path);
  meta_out << metadata << "\n";
  if (!meta_out) {
    std::cerr << meta_path << ": cannot write metadata\n";
    return kExitInput;
  }
  if (g.json) {
    std::cout << "{\"instance\": \"" << inst_path << "\", \"metadata\": \"" << meta_path
              << "\"}\n";
  } else {
    std::cout << inst_path << "\n" << meta_path << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex relaxations of nonconvex quadratic programs"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--tol", g.tol, "Solver residual tolerance (and local-min tolerance)")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-iter", g.max_iter, "Iteration limit for the conic solver")
      ->check(CLI::PositiveNumber);
  app.add_flag("--json", g.json, "Machine-readable output");
  app.add_option("--jobs", g.jobs, "Workers for directory batches")->check(CLI::PositiveNumber);
  app.add_flag("--symmetrize", g.symmetrize, "Replace an asymmetric Q by (Q + Q')/2");

  std::string file;
  std::string cone = "dnn";
  const auto cone_check = CLI::IsMember({"dnn", "psd0"});

  auto* analyze = app.add_subcommand("analyze", "Structural checks");
  analyze->add_option("file", file, "Instance file or directory")->required();

  std::string at;
  auto* solve = app.add_subcommand("solve", "Solve a lifted relaxation");
  solve->add_option("--cone", cone)->check(cone_check);
  solve->add_option("--at", at, "Pin the relaxation at the point in this file");
  solve->add_option("file", file)->required();

  std::string mode = "objective";
  auto* certificate = app.add_subcommand("certificate", "Search for a recession certificate");
  certificate->add_option("--cone", cone)->check(cone_check);
  certificate->add_option("--mode", mode)->check(CLI::IsMember({"objective", "feasibility"}));
  certificate->add_option("file", file)->required();

  auto* oracle = app.add_subcommand("oracle", "Exact global minimum by enumeration");
  oracle->add_option("file", file)->required();

  auto* localmin = app.add_subcommand("localmin", "Verify a local minimizer");
  localmin->add_option("--at", at)->required();
  localmin->add_option("file", file)->required();

  std::string family;
  int gen_n = 5, gen_m = 1;
  std::uint64_t seed = 0;
  std::string kind = "bounded";
  std::string out_dir;
  auto* generate = app.add_subcommand("generate", "Write a generated instance");
  generate->add_option("family", family)
      ->required()
      ->check(CLI::IsMember({"horn", "horn-family", "random"}));
  generate->add_option("--n", gen_n);
  generate->add_option("--m", gen_m);
  generate->add_option("--seed", seed);
  generate->add_option("--kind", kind);
  generate->add_option("--out", out_dir)->required();

  std::string from, to, csv_out;
  int samples = 11;
  auto* envelope = app.add_subcommand("envelope", "Sample the underestimator along a segment");
  envelope->add_option("--cone", cone)->check(cone_check);
  envelope->add_option("--from", from)->required();
  envelope->add_option("--to", to)->required();
  envelope->add_option("--samples", samples)->check(CLI::PositiveNumber);
  envelope->add_option("--out", csv_out, "CSV destination (default stdout)");
  envelope->add_option("file", file)->required();

  auto* compare = app.add_subcommand("compare", "Relaxations versus the oracle");
  compare->add_option("file", file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  const qpr_solve_options opts = solveOptions(g);

  if (*analyze) {
    return runTarget(g, file, [&](qpr_instance* inst, const std::string&) -> Outcome {
      char* out = nullptr;
      const qpr_status st = qpr_analyze_report(inst, &out);
      if (st != QPR_OK) return failure(st, "analyze");
      return emit(g, take(out));
    });
  }
  if (*solve) {
    return runTarget(g, file, [&](qpr_instance* inst, const std::string&) -> Outcome {
      std::vector<double> x;
      if (!at.empty()) {
        Outcome o = loadPoint(inst, at, x);
        if (o.code != kExitOk) return o;
      }
      qpr_result* raw = nullptr;
      const qpr_status st =
          qpr_solve(inst, parseCone(cone), &opts, at.empty() ? nullptr : x.data(), &raw);
      if (st != QPR_OK) return failure(st, "solve");
      ResultPtr result(raw);
      char* out = nullptr;
      const qpr_status js = qpr_result_to_json(result.get(), &out);
      if (js != QPR_OK) return failure(js, "solve");
      return emit(g, take(out));
    });
  }
  if (*certificate) {
    return runTarget(g, file, [&](qpr_instance* inst, const std::string&) -> Outcome {
      char* out = nullptr;
      const qpr_status st = qpr_certificate_search(
          inst, parseCone(cone), mode == "feasibility" ? QPR_MODE_FEASIBILITY : QPR_MODE_OBJECTIVE,
          &opts, &out);
      if (st != QPR_OK) return failure(st, "certificate");
      return emit(g, take(out));
    });
  }
  if (*oracle) {
    return runTarget(g, file, [&](qpr_instance* inst, const std::string&) -> Outcome {
      char* out = nullptr;
      const qpr_status st = qpr_oracle(inst, &out);
      if (st != QPR_OK) return failure(st, "oracle");
      return emit(g, take(out));
    });
  }
  if (*localmin) {
    return runTarget(g, file, [&](qpr_instance* inst, const std::string&) -> Outcome {
      std::vector<double> x;
      Outcome o = loadPoint(inst, at, x);
      if (o.code != kExitOk) return o;
      char* out = nullptr;
      const qpr_status st = qpr_local_min(inst, x.data(), g.tol > 0 ? g.tol : 1e-7, &out);
      if (st != QPR_OK) return failure(st, "localmin");
      return emit(g, take(out));
    });
  }
  if (*generate) {
    qpr_instance* raw = nullptr;
    char* meta = nullptr;
    qpr_status st;
    if (family == "horn") {
      st = qpr_generate_horn(&raw, &meta);
    } else if (family == "horn-family") {
      st = qpr_generate_horn_family(gen_n, seed, &raw, &meta);
    } else {
      st = qpr_generate_random(kind.c_str(), gen_n, gen_m, seed, &raw, &meta);
    }
    return writeGenerated(g, st, raw, meta, out_dir);
  }
  if (*envelope) {
    return runTarget(g, file, [&](qpr_instance* inst, const std::string&) -> Outcome {
      std::vector<double> xa, xb;
      Outcome o = loadPoint(inst, from, xa);
      if (o.code != kExitOk) return o;
      o = loadPoint(inst, to, xb);
      if (o.code != kExitOk) return o;
      char* out = nullptr;
      const qpr_status st =
          qpr_envelope_csv(inst, parseCone(cone), xa.data(), xb.data(), samples, &opts, &out);
      if (st != QPR_OK) return failure(st, "envelope");
      std::string csv = take(out);
      if (csv_out.empty()) return {kExitOk, csv, ""};
      std::ofstream f(csv_out);
      f << csv;
      if (!f) return {kExitInput, "", csv_out + ": cannot write CSV\n"};
      return {kExitOk, csv_out + "\n", ""};
    });
  }
  if (*compare) {
    return runTarget(g, file, [&](qpr_instance* inst, const std::string&) -> Outcome {
      char* out = nullptr;
      const qpr_status st = qpr_compare_report(inst, &opts, &out);
      if (st != QPR_OK) return failure(st, "compare");
      return emit(g, take(out));
    });
  }
  return kExitInput;
}
