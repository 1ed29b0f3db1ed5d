#pragma once

#include <Eigen/Dense>
#include <complex>

namespace qft {

// Discrete Fourier transforms with the sign convention used throughout this
// library: the time -> frequency direction uses the +i kernel,
//
//   spectrum[k] = sum_j field[j] * exp(+i * omega_k * t_j),
//
// so multiplying a spectrum by exp(+i * omega * d) delays the waveform by d.
// to_freq is unnormalized; to_time divides by n, making the pair an exact
// round trip.
//
// Plans are created with deterministic heuristics (no runtime timing), so
// results are reproducible across runs. An engine owns its scratch buffer;
// use one engine per thread.
class FftEngine {
 public:
  explicit FftEngine(int n);
  ~FftEngine();
  FftEngine(const FftEngine&) = delete;
  FftEngine& operator=(const FftEngine&) = delete;

  void to_freq(Eigen::ArrayXcd& field) const;     // in place, +i kernel
  void to_time(Eigen::ArrayXcd& spectrum) const;  // in place, -i kernel, / n

  int size() const { return n_; }

 private:
  int n_;
  void* plan_to_freq_;  // fftw_plan
  void* plan_to_time_;
};

} // namespace qft
