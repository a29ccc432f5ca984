#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlscat/completeness.hpp"
#include "nlscat/grid.hpp"
#include "nlscat/profile.hpp"
#include "nlscat/solver.hpp"

namespace nlscat {

// Run configuration parsed from flat "key = value" text.  '#' starts a
// comment, blank lines are ignored, unknown keys are rejected, and every
// parse error carries the file name, line number, and offending key.
//
// Schema (defaults in parentheses):
//   simulation   lambda (1), epsilon (0.1), dt (0.005), t_start (0),
//                t_end (1), half_length (200), n_points (8192),
//                checkpoint_times (t_end; comma-separated list),
//                mass_tolerance (1e-6), boundary_tolerance (1e-10),
//                initial_data (gaussian | soliton | random), soliton_a (0.5),
//                seed (1), mu (0; > 0 enables the short-range term),
//                delta (0.25; its exponent)
//   packet       v_lo (-2), v_hi (2), n_v (512),
//                extraction_times (16,32,64,128,256)
//   completeness m_size (0.1), delta_weight (0.25), t_max (256),
//                t_match (16), comp_dt (0.02), comp_half_length (800),
//                comp_n_points (32768), v_support (1.5), profile_half (2.5),
//                profile_n (640)
struct RunConfig {
  SimConfig sim;
  double half_length = 200.0;
  std::size_t n_points = 8192;
  std::string initial_data = "gaussian";
  double soliton_a = 0.5;
  unsigned seed = 1;

  double v_lo = -2.0;
  double v_hi = 2.0;
  std::size_t n_v = 512;
  std::vector<double> extraction_times = {16.0, 32.0, 64.0, 128.0, 256.0};

  CompletenessConfig comp;  // w_input is built on demand from the bump keys
  double v_support = 1.5;
  double profile_half = 2.5;
  std::size_t profile_n = 640;

  void validate() const;  // sub-config validity; throws config_error
};

RunConfig parse_run_config(const std::string& path);
RunConfig parse_run_config_text(const std::string& text, const std::string& name);

// Binary checkpoint format, little-endian throughout:
//   bytes 0..7    magic "NLSSCAT1"
//   bytes 8..11   version, u32, currently 1
//   bytes 12..19  n_points, u64
//   bytes 20..27  half_length, f64
//   bytes 28..35  time, f64
//   bytes 36..39  lambda, i32
//   bytes 40..47  epsilon, f64
//   bytes 48..    n_points (re, im) f64 pairs: 16 n_points bytes
// Written atomically (temp file + rename).  Read errors distinguish a
// missing file (missing_artifact_error) from magic/version/truncation
// damage (config_error).
struct CheckpointData {
  ComplexField field;
  std::int32_t lambda = 0;
  double epsilon = 0.0;
};
void checkpoint_write(const std::string& path, const ComplexField& u,
                      std::int32_t lambda, double epsilon);
CheckpointData checkpoint_read(const std::string& path);

// One-line header, then %.17g comma-separated rows; atomic temp + rename.
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows);
void write_text_atomic(const std::string& path, const std::string& content);

// Reads a CSV written by write_csv: returns rows of doubles, checks the
// header matches.  Throws missing_artifact_error if the file is absent.
std::vector<std::vector<double>> read_csv(const std::string& path,
                                          const std::string& expect_header);

struct CliOptions {
  std::string config_path;  // empty = all defaults
  std::string out_dir = "out";
  int threads = 1;          // reserved; kernels are single-threaded
  bool dt_halve = false;    // simulate: also run dt/2 into halved/
};

// Subcommands.  Each returns 0 on success and reports through files under
// out_dir; failures are thrown (config_error, numerical_error,
// missing_artifact_error) and mapped to exit codes by run_cli.
int cmd_simulate(const CliOptions& opt);
int cmd_gamma(const CliOptions& opt);
int cmd_profile(const CliOptions& opt);
int cmd_complete(const CliOptions& opt);
int cmd_roundtrip(const CliOptions& opt);
int cmd_verify(const CliOptions& opt);

// Full driver: parses argv, dispatches, and maps errors to exit codes
// 0 success, 2 configuration error, 3 numerical failure, 4 missing artifact.
int run_cli(int argc, char** argv);

}  // namespace nlscat
