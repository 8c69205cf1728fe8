#pragma once

// Seeded draws of library objects shared by the unit tests and the
// acceptance runner.

#include <random>

#include "mutinfo.hpp"

namespace fixtures {

using namespace mutinfo;

/// Density operator with a spectrum bounded away from degeneracy.
inline DensityOperator nondegenerate_state(int d, Rng& rng) {
  for (;;) {
    const auto rho = random_density(d, rng);
    const auto& v = rho.eigenvalues();
    bool ok = true;
    for (int i = 1; i < d; ++i)
      if (v(i) - v(i - 1) < 1e-3) ok = false;
    if (ok && v(0) > 1e-3) return rho;
  }
}

inline Eigen::MatrixXd random_stochastic(int out, int in, Rng& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Eigen::MatrixXd t(out, in);
  for (int i = 0; i < in; ++i) {
    for (int j = 0; j < out; ++j) t(j, i) = u(rng);
    t.col(i) /= t.col(i).sum();
  }
  return t;
}

/// One of the shipped channel constructors, chosen and parameterized by `rng`.
inline QuantumChannel library_channel(int d, Rng& rng) {
  std::uniform_int_distribution<int> pick(0, 7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (pick(rng)) {
    case 0: return QuantumChannel::identity(d);
    case 1: return QuantumChannel::depolarizing(d, u(rng));
    case 2: return QuantumChannel::phase_damping(d, u(rng));
    case 3: return QuantumChannel::constant(d, random_density(d, rng));
    case 4: return QuantumChannel::classical(random_stochastic(d, d, rng));
    case 5: return QuantumChannel::unitary(haar_unitary(d, rng));
    case 6: return QuantumChannel::measurement(d);
    default: return random_channel(d, d, 1 + int(u(rng) * 3), rng);
  }
}

}  // namespace fixtures
