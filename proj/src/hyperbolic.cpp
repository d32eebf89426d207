#include "qlrep/hyperbolic.hpp"

#include <cmath>

#include <fmt/format.h>

#include "qlrep/error.hpp"

namespace qlrep {

HyperbolicNumber hyp_exp(double theta) { return {std::cosh(theta), std::sinh(theta)}; }

HyperbolicAmplitude build_hyperbolic_amplitude(const ContextualData& data, const InterferenceProfile& profile) {
  if (profile.classification != Classification::Hyperbolic) {
    throw Error(ErrorKind::NotHyperbolic,
                fmt::format("context is {}; a split-complex amplitude needs |lambda| > 1 for both outcomes",
                            to_string(profile.classification)));
  }
  HyperbolicAmplitude amp;
  amp.phases = profile.phases;
  amp.signs = profile.signs;
  for (auto x : kOutcomes) {
    const Pair w = path_weights(data.pb(), data.P(), x);
    const HyperbolicNumber real_path{std::sqrt(w[0]), 0.0};
    amp.amplitudes[x] = real_path + (profile.signs[x] * std::sqrt(w[1])) * hyp_exp(profile.phases[x]);
  }
  return amp;
}

double hyp_born(const HyperbolicAmplitude& amp, Outcome x) { return amp.amplitudes[x].modulus2(); }

}  // namespace qlrep
