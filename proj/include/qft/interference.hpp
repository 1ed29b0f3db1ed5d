#pragma once

#include <Eigen/Dense>

#include "qft/mesh.hpp"
#include "qft/ssfm.hpp"

namespace qft {

// The four single-photon amplitudes behind two-photon interference: each
// input wavepacket (one per band, unit norm) propagated alone, keeping the
// component that stayed in its band and the component translated to the
// other band.
struct OutputComponents {
  Eigen::ArrayXcd gg, bg;  // from the green input: stayed green / became blue
  Eigen::ArrayXcd gb, bb;  // from the blue input: became green / stayed blue
};

OutputComponents output_components(const TemporalMesh& mesh,
                                   const InteractionSetup& setup,
                                   const PumpRecord& pumps,
                                   const Eigen::ArrayXcd& input_green,
                                   const Eigen::ArrayXcd& input_blue,
                                   const SolverConfig& config);

// Probability that one photon exits in each band (the coincidence
// probability whose dip is the two-photon interference signature):
//   P11 = ||A_gg||^2 ||A_bb||^2 + ||A_gb||^2 ||A_bg||^2
//         + 2 Re[ <A_gb, A_gg> <A_bg, A_bb> ]
double coincidence_probability(const TemporalMesh& mesh,
                               const OutputComponents& comps);

// Probabilities that both photons exit green (P20) or both blue (P02):
//   P20 = |<A_gg, A_gb>|^2 + ||A_gg||^2 ||A_gb||^2, P02 likewise with (bb, bg).
struct BunchingProbabilities {
  double p20 = 0.0, p02 = 0.0;
};
BunchingProbabilities bunching_probabilities(const TemporalMesh& mesh,
                                             const OutputComponents& comps);

struct HomCurve {
  Eigen::ArrayXd z;
  Eigen::ArrayXd p11;
};

// Coincidence probability versus propagated length, sampled every
// config.store_every steps.
HomCurve p11_vs_length(const TemporalMesh& mesh, const InteractionSetup& setup,
                       const PumpRecord& pumps, const Eigen::ArrayXcd& input_green,
                       const Eigen::ArrayXcd& input_blue,
                       const SolverConfig& config);

} // namespace qft
