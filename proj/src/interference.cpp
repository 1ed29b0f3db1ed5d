#include "qft/interference.hpp"

#include <complex>
#include <utility>
#include <vector>

namespace qft {

namespace {

using Cplx = std::complex<double>;

// sum conj(a) b dt
Cplx inner(const TemporalMesh& mesh, const Eigen::ArrayXcd& a,
           const Eigen::ArrayXcd& b) {
  return (a.conjugate() * b).sum() * mesh.dt;
}

double p11_of(const TemporalMesh& mesh, const Eigen::ArrayXcd& gg,
              const Eigen::ArrayXcd& bg, const Eigen::ArrayXcd& gb,
              const Eigen::ArrayXcd& bb) {
  const double direct = pulse_energy(mesh, gg) * pulse_energy(mesh, bb);
  const double swapped = pulse_energy(mesh, gb) * pulse_energy(mesh, bg);
  const Cplx s1 = inner(mesh, gb, gg);
  const Cplx s2 = inner(mesh, bg, bb);
  return direct + swapped + 2.0 * (s1 * s2).real();
}

} // namespace

OutputComponents output_components(const TemporalMesh& mesh,
                                   const InteractionSetup& setup,
                                   const PumpRecord& pumps,
                                   const Eigen::ArrayXcd& input_green,
                                   const Eigen::ArrayXcd& input_blue,
                                   const SolverConfig& config) {
  OutputComponents comps;
  SignalState from_green{input_green, Eigen::ArrayXcd::Zero(mesh.n)};
  propagate_signals(mesh, setup, pumps, from_green, config);
  comps.gg = std::move(from_green.g);
  comps.bg = std::move(from_green.b);

  SignalState from_blue{Eigen::ArrayXcd::Zero(mesh.n), input_blue};
  propagate_signals(mesh, setup, pumps, from_blue, config);
  comps.gb = std::move(from_blue.g);
  comps.bb = std::move(from_blue.b);
  return comps;
}

double coincidence_probability(const TemporalMesh& mesh,
                               const OutputComponents& comps) {
  return p11_of(mesh, comps.gg, comps.bg, comps.gb, comps.bb);
}

BunchingProbabilities bunching_probabilities(const TemporalMesh& mesh,
                                             const OutputComponents& comps) {
  BunchingProbabilities probs;
  probs.p20 = std::norm(inner(mesh, comps.gg, comps.gb)) +
              pulse_energy(mesh, comps.gg) * pulse_energy(mesh, comps.gb);
  probs.p02 = std::norm(inner(mesh, comps.bb, comps.bg)) +
              pulse_energy(mesh, comps.bb) * pulse_energy(mesh, comps.bg);
  return probs;
}

HomCurve p11_vs_length(const TemporalMesh& mesh, const InteractionSetup& setup,
                       const PumpRecord& pumps, const Eigen::ArrayXcd& input_green,
                       const Eigen::ArrayXcd& input_blue,
                       const SolverConfig& config) {
  // First pass stores the green-input components at each sampled z; the
  // second pass streams against them.
  std::vector<std::pair<Eigen::ArrayXcd, Eigen::ArrayXcd>> stored;
  std::vector<double> z_samples;
  {
    SignalState state{input_green, Eigen::ArrayXcd::Zero(mesh.n)};
    const StepSink sink = [&](int, double z, const SignalState& s) {
      z_samples.push_back(z);
      stored.emplace_back(s.g, s.b);
    };
    propagate_signals(mesh, setup, pumps, state, config, &sink);
  }
  HomCurve curve;
  curve.z = Eigen::Map<const Eigen::ArrayXd>(z_samples.data(),
                                             static_cast<Eigen::Index>(z_samples.size()));
  curve.p11.resize(curve.z.size());
  {
    SignalState state{Eigen::ArrayXcd::Zero(mesh.n), input_blue};
    Eigen::Index k = 0;
    const StepSink sink = [&](int, double, const SignalState& s) {
      curve.p11(k) = p11_of(mesh, stored[k].first, stored[k].second, s.g, s.b);
      ++k;
    };
    propagate_signals(mesh, setup, pumps, state, config, &sink);
  }
  return curve;
}

} // namespace qft
