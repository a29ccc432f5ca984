#include "nlscat/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "nlscat/errors.hpp"

namespace nlscat {

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.  Plans
// are cached per thread and per size, created under a global mutex, and always
// run on their own fftw_malloc'd buffer so alignment (hence the generated
// code path, hence bit-level determinism) never depends on the caller.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanSet {
  std::size_t n = 0;
  fftw_complex* buf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  explicit PlanSet(std::size_t n_) : n(n_) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    buf = fftw_alloc_complex(n);
    if (!buf) throw std::bad_alloc();
    fwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!fwd || !bwd) throw numerical_error("fftw plan creation failed");
  }
  ~PlanSet() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    if (buf) fftw_free(buf);
  }
  PlanSet(const PlanSet&) = delete;
  PlanSet& operator=(const PlanSet&) = delete;
};

PlanSet& plans_for(std::size_t n) {
  thread_local std::unordered_map<std::size_t, std::unique_ptr<PlanSet>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, std::make_unique<PlanSet>(n)).first;
  return *it->second;
}

void run_dft(std::vector<cplx>& data, bool forward) {
  PlanSet& p = plans_for(data.size());
  std::memcpy(p.buf, data.data(), data.size() * sizeof(cplx));
  fftw_execute(forward ? p.fwd : p.bwd);
  std::memcpy(data.data(), p.buf, data.size() * sizeof(cplx));
}

}  // namespace

void dft_forward_raw(std::vector<cplx>& data) { run_dft(data, true); }
void dft_inverse_raw(std::vector<cplx>& data) { run_dft(data, false); }

SpectralField fourier_forward(const ComplexField& f) {
  const Grid& g = *f.grid;
  const std::size_t n = g.n_points;
  if (f.values.size() != n) throw config_error("fourier_forward: field/grid size mismatch");

  std::vector<cplx> work = f.values;
  run_dft(work, true);

  SpectralField out;
  out.grid = f.grid;
  out.time = f.time;
  out.values.resize(n);
  const double scale = g.dx / std::sqrt(2.0 * M_PI);
  const std::size_t half = n / 2;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t m = (j + half) % n;        // xi index -> DFT bin
    const double sign = ((j + half) % 2 == 0) ? 1.0 : -1.0;  // e^{+i*half_length*xi_j}
    out.values[j] = scale * sign * work[m];
  }
  return out;
}

ComplexField fourier_inverse(const SpectralField& F) {
  const Grid& g = *F.grid;
  const std::size_t n = g.n_points;
  if (F.values.size() != n) throw config_error("fourier_inverse: field/grid size mismatch");

  std::vector<cplx> work(n);
  const std::size_t half = n / 2;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t m = (j + half) % n;
    const double sign = ((j + half) % 2 == 0) ? 1.0 : -1.0;  // e^{-i*half_length*xi_j}
    work[m] = sign * F.values[j];
  }
  run_dft(work, false);

  ComplexField out;
  out.grid = F.grid;
  out.time = F.time;
  out.values = std::move(work);
  const double scale = g.dxi / std::sqrt(2.0 * M_PI);
  for (auto& v : out.values) v *= scale;
  return out;
}

}  // namespace nlscat
