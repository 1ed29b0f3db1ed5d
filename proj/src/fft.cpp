#include "qft/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>
#include <vector>

namespace qft {

namespace {
// FFTW plan creation and destruction are not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
} // namespace

FftEngine::FftEngine(int n) : n_(n) {
  if (n < 2) throw std::invalid_argument("FftEngine: size must be >= 2");
  std::vector<std::complex<double>> scratch(static_cast<std::size_t>(n));
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  std::lock_guard<std::mutex> lock(planner_mutex());
  // FFTW_BACKWARD is the +i kernel. FFTW_UNALIGNED lets the plans execute on
  // any caller buffer via the new-array interface.
  plan_to_freq_ = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan_to_time_ = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plan_to_freq_ || !plan_to_time_) {
    throw std::runtime_error("FftEngine: plan creation failed");
  }
}

FftEngine::~FftEngine() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_to_freq_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_to_time_));
}

void FftEngine::to_freq(Eigen::ArrayXcd& field) const {
  if (field.size() != n_) throw std::invalid_argument("FftEngine: size mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(field.data());
  fftw_execute_dft(static_cast<fftw_plan>(plan_to_freq_), p, p);
}

void FftEngine::to_time(Eigen::ArrayXcd& spectrum) const {
  if (spectrum.size() != n_) throw std::invalid_argument("FftEngine: size mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(spectrum.data());
  fftw_execute_dft(static_cast<fftw_plan>(plan_to_time_), p, p);
  spectrum /= static_cast<double>(n_);
}

} // namespace qft
