// Copyright 2026 The qinstr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Builds a qubit-measurement model with a 5% readout flip and a dephasing
// error on the idle qubit, prints its metrics and checks the exact diamond
// distance against the SDP oracle.

#include <cstdio>

#include "qinstr/qinstr.hpp"

int main() {
  using namespace qinstr;
  const UniformStochasticModel model(
      2, 2,
      {UniformEntry{0, 0, StochasticChannel::weyl(2, std::vector<double>{0.9, 0.05, 0.0, 0.0})},
       UniformEntry{0, 1, StochasticChannel::weyl(2, std::vector<double>{0.05, 0.0, 0.0, 0.0})}});

  const MetricsReport report = build_report(model);
  std::printf("%s\n", io::to_json(report).dump(2).c_str());

  const InstrumentImplementation impl = expand_uniform(model);
  const InstrumentImplementation ideal = ideal_instrument(2, 2);
  const DiamondNormResult oracle =
      diamond_norm(choi_from_kraus(full_channel(impl)) - choi_from_kraus(full_channel(ideal)));
  std::printf("closed form %.8f, oracle %.8f (gap %.1e)\n", *report.diamond_exact, oracle.value, oracle.gap);
  return 0;
}
