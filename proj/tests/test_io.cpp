#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "nlscat/errors.hpp"
#include "nlscat/grid.hpp"
#include "nlscat/io.hpp"
#include "nlscat/synth.hpp"

using namespace nlscat;
namespace fs = std::filesystem;

namespace {

fs::path make_clean_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("nlscat_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(static_cast<bool>(in));
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

void spit(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  REQUIRE(static_cast<bool>(out));
  out << text;
}

}  // namespace

TEST_CASE("config parser covers the schema with defaults") {
  const RunConfig rc = parse_run_config_text("", "<defaults>");
  CHECK(rc.sim.lambda == 1);
  CHECK(rc.sim.epsilon == 0.1);
  CHECK(rc.sim.checkpoint_times == std::vector<double>{1.0});
  CHECK(!rc.sim.perturbation.has_value());
  CHECK(rc.initial_data == "gaussian");
  CHECK(rc.n_points == 8192);
  CHECK_NOTHROW(rc.validate());

  const std::string text =
      "# a comment line\n"
      "lambda = -1            # trailing comment\n"
      "epsilon = 0.25\n"
      "dt = 0.001\n"
      "t_start = 0\n"
      "t_end = 10\n"
      "half_length = 100\n"
      "n_points = 2048\n"
      "checkpoint_times = 1, 2.5, 10\n"
      "initial_data = soliton\n"
      "soliton_a = 0.5\n"
      "seed = 7\n"
      "mu = 0.02\n"
      "delta = 0.3\n"
      "v_lo = -1.5\n"
      "v_hi = 1.5\n"
      "n_v = 128\n"
      "extraction_times = 16, 32, 64, 128, 256\n"
      "m_size = 0.05\n"
      "delta_weight = 0.25\n"
      "t_max = 128\n"
      "t_match = 16\n"
      "comp_dt = 0.05\n"
      "comp_half_length = 400\n"
      "comp_n_points = 8192\n"
      "v_support = 1.2\n"
      "profile_half = 3\n"
      "profile_n = 256\n";
  const RunConfig full = parse_run_config_text(text, "full.cfg");
  CHECK(full.sim.lambda == -1);
  CHECK(full.sim.epsilon == 0.25);
  CHECK(full.sim.checkpoint_times == std::vector<double>({1.0, 2.5, 10.0}));
  REQUIRE(full.sim.perturbation.has_value());
  CHECK(full.sim.perturbation->mu == 0.02);
  CHECK(full.sim.perturbation->delta_exp == 0.3);
  CHECK(full.initial_data == "soliton");
  CHECK(full.seed == 7);
  CHECK(full.n_v == 128);
  CHECK(full.comp.t_max == 128.0);
  CHECK(full.comp.n_points == 8192);
  CHECK(full.profile_n == 256);
  CHECK_NOTHROW(full.validate());
}

TEST_CASE("config parser reports line numbers and key names") {
  const auto fails_with = [](const std::string& text, const std::string& needle) {
    try {
      parse_run_config_text(text, "run.cfg");
      FAIL_CHECK("expected config_error for: " << text);
    } catch (const config_error& e) {
      const std::string msg = e.what();
      CHECK(msg.find(needle) != std::string::npos);
    }
  };
  fails_with("dt = 0.01\nbogus_key = 3\n", "run.cfg:2: unknown key 'bogus_key'");
  fails_with("dt = fast\n", "run.cfg:1: invalid number for key 'dt'");
  fails_with("\n\nn_points = -4\n", "run.cfg:3");
  fails_with("n_points = -4\n", "'n_points'");
  fails_with("dt 0.01\n", "expected key = value");
  fails_with("lambda = 2\n", "'lambda' must be -1, 0, or 1");
  fails_with("initial_data = plane_wave\n", "gaussian, soliton, or random");
  fails_with("checkpoint_times = 1,,2\n", "'checkpoint_times'");
  fails_with("epsilon =\n", "empty value for key 'epsilon'");
  CHECK_THROWS_AS(parse_run_config("/nonexistent/place/run.cfg"), config_error);
}

TEST_CASE("checkpoints round-trip byte-exactly and reject damage") {
  const fs::path dir = make_clean_dir("chk");
  const GridPtr grid = make_grid(50.0, 256);
  const ComplexField u = random_smooth_field(grid, 42);
  const std::string path = (dir / "field.bin").string();

  checkpoint_write(path, u, -1, 0.125);
  const CheckpointData back = checkpoint_read(path);
  CHECK(back.lambda == -1);
  CHECK(back.epsilon == 0.125);
  CHECK(back.field.time == u.time);
  CHECK(back.field.grid->n_points == 256);
  CHECK(back.field.grid->half_length == 50.0);
  bool identical = true;
  for (std::size_t k = 0; k < u.values.size(); ++k)
    identical = identical && back.field.values[k] == u.values[k];
  CHECK(identical);

  // A rewrite of the same field is byte-identical (atomic, deterministic).
  const std::string bytes_a = slurp(path);
  CHECK(bytes_a.size() == 48 + 16 * 256);
  checkpoint_write(path, u, -1, 0.125);
  CHECK(slurp(path) == bytes_a);

  CHECK_THROWS_AS(checkpoint_read((dir / "absent.bin").string()),
                  missing_artifact_error);

  spit(dir / "short.bin", bytes_a.substr(0, 100));
  CHECK_THROWS_AS(checkpoint_read((dir / "short.bin").string()), config_error);
  try {
    checkpoint_read((dir / "short.bin").string());
  } catch (const config_error& e) {
    CHECK(std::string(e.what()).find("truncated") != std::string::npos);
  }

  std::string wrong_magic = bytes_a;
  wrong_magic[0] = 'X';
  spit(dir / "magic.bin", wrong_magic);
  try {
    checkpoint_read((dir / "magic.bin").string());
    FAIL_CHECK("expected magic rejection");
  } catch (const config_error& e) {
    CHECK(std::string(e.what()).find("NLSSCAT1") != std::string::npos);
  }

  std::string wrong_version = bytes_a;
  wrong_version[8] = 2;
  spit(dir / "version.bin", wrong_version);
  CHECK_THROWS_AS(checkpoint_read((dir / "version.bin").string()), config_error);
}

TEST_CASE("csv writer keeps full precision and a one-line header") {
  const fs::path dir = make_clean_dir("csv");
  const std::string path = (dir / "table.csv").string();
  const double tricky = 0.1 + 0.2;  // not representable; %.17g must survive
  write_csv(path, "a,b", {{tricky, 1.0}, {2.0, -3.5e-17}});

  const std::string text = slurp(path);
  CHECK(text.substr(0, 4) == "a,b\n");

  const auto rows = read_csv(path, "a,b");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][0] == tricky);
  CHECK(rows[1][1] == -3.5e-17);

  CHECK_THROWS_AS(read_csv(path, "a,b,c"), config_error);
  CHECK_THROWS_AS(read_csv((dir / "absent.csv").string(), "a,b"),
                  missing_artifact_error);
}

TEST_CASE("simulate command writes deterministic artifacts") {
  const fs::path dir = make_clean_dir("sim");
  CliOptions opt;
  opt.out_dir = (dir / "run").string();
  CHECK(cmd_simulate(opt) == 0);
  CHECK(fs::exists(dir / "run" / "diagnostics.csv"));
  CHECK(fs::exists(dir / "run" / "checkpoints" / "chk_0000.bin"));

  CliOptions again = opt;
  again.out_dir = (dir / "run2").string();
  CHECK(cmd_simulate(again) == 0);
  CHECK(slurp(dir / "run" / "checkpoints" / "chk_0000.bin") ==
        slurp(dir / "run2" / "checkpoints" / "chk_0000.bin"));
  CHECK(slurp(dir / "run" / "diagnostics.csv") ==
        slurp(dir / "run2" / "diagnostics.csv"));
}

TEST_CASE("gamma command demands checkpoints") {
  const fs::path dir = make_clean_dir("gamma_empty");
  CliOptions opt;
  opt.out_dir = (dir / "nothing").string();
  CHECK_THROWS_AS(cmd_gamma(opt), missing_artifact_error);
}

TEST_CASE("verify fits diagnostics and flags fabricated rates") {
  const fs::path dir = make_clean_dir("verify");
  const fs::path out = dir / "run";
  fs::create_directories(out);
  spit(dir / "free.cfg", "lambda = 0\n");

  // Exact free-decay diagnostics: sup = t^(-1/2), lu constant.
  std::vector<std::vector<double>> good;
  for (double t : {4.0, 8.0, 16.0, 32.0, 64.0})
    good.push_back({t, 1.0, std::pow(t, -0.5), 2.0, 0.0});
  write_csv((out / "diagnostics.csv").string(), "t,mass,sup_norm,lu_l2,boundary_mass",
            good);

  CliOptions opt;
  opt.config_path = (dir / "free.cfg").string();
  opt.out_dir = out.string();
  CHECK(cmd_verify(opt) == 0);
  std::string report = slurp(out / "verdicts.jsonl");
  CHECK(report.find("\"id\":\"sup_decay_free\",\"pass\":true") != std::string::npos);
  CHECK(report.find("\"id\":\"lu_growth\",\"pass\":true") != std::string::npos);

  // Rerun is byte-identical.
  CHECK(cmd_verify(opt) == 0);
  CHECK(slurp(out / "verdicts.jsonl") == report);

  // A fabricated sup series decaying like t^(-0.2) misses the -0.5 target.
  std::vector<std::vector<double>> slow;
  for (double t : {4.0, 8.0, 16.0, 32.0, 64.0})
    slow.push_back({t, 1.0, std::pow(t, -0.2), 2.0, 0.0});
  write_csv((out / "diagnostics.csv").string(), "t,mass,sup_norm,lu_l2,boundary_mass",
            slow);
  CHECK(cmd_verify(opt) == 0);
  report = slurp(out / "verdicts.jsonl");
  CHECK(report.find("\"id\":\"sup_decay_free\",\"pass\":false") != std::string::npos);

  // Optional artifacts add claims: a clean t^(-1) physical-difference series
  // passes its -1.0 target, a slow one fails.
  std::vector<std::vector<double>> rates;
  for (double t : {4.0, 8.0, 16.0, 32.0, 64.0})
    rates.push_back({t, std::pow(t, -1.02), std::pow(t, -0.8), std::pow(t, -0.55),
                     std::pow(t, -0.1)});
  write_csv((out / "rates.csv").string(),
            "t,diff_phys_l2,diff_phys_linf,diff_four_l2,diff_four_linf", rates);
  CHECK(cmd_verify(opt) == 0);
  report = slurp(out / "verdicts.jsonl");
  CHECK(report.find("\"id\":\"diff_phys_l2\",\"pass\":true") != std::string::npos);
  CHECK(report.find("\"id\":\"diff_phys_linf\",\"pass\":true") != std::string::npos);
  CHECK(report.find("\"id\":\"diff_four_l2\",\"pass\":true") != std::string::npos);
  CHECK(report.find("\"id\":\"diff_four_linf\",\"pass\":false") != std::string::npos);
}

TEST_CASE("cli driver maps errors to exit codes") {
  const fs::path dir = make_clean_dir("cli");
  const std::string out = (dir / "out").string();
  const std::string missing_cfg = (dir / "none.cfg").string();

  const auto run = [](std::vector<std::string> args) {
    std::vector<char*> argv;
    args.insert(args.begin(), "nlscat");
    for (std::string& a : args) argv.push_back(a.data());
    return run_cli(static_cast<int>(argv.size()), argv.data());
  };

  CHECK(run({"simulate", "--config", missing_cfg, "--out", out}) == 2);
  CHECK(run({"gamma", "--out", out}) == 4);
  CHECK(run({"--help"}) == 0);
  CHECK(run({"frobnicate"}) == 2);

  spit(dir / "tiny.cfg", "t_end = 0.5\ndt = 0.01\nn_points = 512\nhalf_length = 50\n");
  CHECK(run({"simulate", "--config", (dir / "tiny.cfg").string(), "--out", out}) == 0);
  CHECK(fs::exists(fs::path(out) / "checkpoints" / "chk_0000.bin"));
}
