#pragma once

// Command implementations behind the affhj executable. Each writes its
// report to `out`, diagnostics to `err`, and returns the process exit code.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "affhj/models.hpp"

namespace affhj::cli {

enum Exit : int { ok = 0, check_failed = 1, input_error = 2, inconsistency = 3 };

/// A built-in model name (see model_by_name) or a model file path, with an
/// optional replacement Hamiltonian.
ModelBundle resolve_model(const std::string& spec, const std::string& hamiltonian = "");

/// A section named in the model, "exact:<S>" for d S, or
/// "cosection:<alpha0>;<alpha1>,...,<alphan>".
CoSection resolve_section(const ModelBundle& model, const std::string& spec);

std::vector<double> parse_vector(const std::string& text);
/// "lo:hi,lo:hi,..."
std::vector<std::pair<double, double>> parse_box(const std::string& text);

struct CommonOptions {
  std::string model;
  std::string hamiltonian;
};

struct SamplingOptions {
  std::string box;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
};

int run_validate(const CommonOptions& opt, const SamplingOptions& sampling, std::ostream& out, std::ostream& err);

struct FlowOptions : CommonOptions {
  std::string x0;
  std::string y0;
  double t0 = 0.0;
  std::optional<double> t_end;
  std::optional<double> step;
  std::string out_path;  // empty: write to `out`
  std::size_t every = 1;
};

int run_flow(const FlowOptions& opt, std::ostream& out, std::ostream& err);

struct HjOptions : CommonOptions {
  std::string alpha;
  SamplingOptions sampling;
};

int run_hj(const HjOptions& opt, std::ostream& out, std::ostream& err);

struct VerifyOptions : CommonOptions {
  std::string alpha;
  /// "seeded", "seeded:<k>" (points in the model box) or "a,b;c,d".
  std::string x0_set = "seeded";
  std::optional<double> horizon;
  std::optional<double> step;
  SamplingOptions sampling;
};

int run_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err);

void print_defaults(std::ostream& out);

}  // namespace affhj::cli
