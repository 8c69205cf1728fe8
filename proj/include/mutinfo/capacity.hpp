#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mutinfo/channel.hpp"

namespace mutinfo {

/// Hilbert-Schmidt random mixed state: G G† / tr(G G†).
inline DensityOperator random_density(int dim, Rng& rng) {
  const Matrix g = ginibre(dim, dim, rng);
  const Matrix m = g * g.adjoint();
  return DensityOperator::from_trusted(m / m.trace().real());
}

inline DensityOperator random_pure_state(int dim, Rng& rng) {
  return DensityOperator::pure(haar_isometry(dim, 1, rng).col(0));
}

/// Diagonal state with flat-Dirichlet weights.
inline DensityOperator random_diagonal_state(int dim, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  RealVector w(dim);
  for (int i = 0; i < dim; ++i) w(i) = expo(rng);
  w /= w.sum();
  return DensityOperator::from_trusted(w.cast<Complex>().asDiagonal().toDenseMatrix());
}

/// The set of input states over which a capacity supremum runs.
struct StateFamily {
  enum class Kind { all_states, explicit_list, parameterized };
  enum class Generator { hilbert_schmidt, pure, diagonal };

  Kind kind = Kind::all_states;
  int dim = 0;
  std::vector<DensityOperator> states;
  Generator generator = Generator::hilbert_schmidt;
  int n_candidates = 0;
  std::uint64_t seed = 0;

  static StateFamily all_states(int dim) { return {Kind::all_states, dim, {}, Generator::hilbert_schmidt, 0, 0}; }

  static StateFamily explicit_list(std::vector<DensityOperator> states) {
    if (states.empty()) throw Error(ErrorCode::invalid_argument, "explicit state family is empty");
    const int d = states.front().dim();
    for (const auto& s : states)
      if (s.dim() != d) throw Error(ErrorCode::dimension_mismatch, "explicit family mixes state dimensions");
    return {Kind::explicit_list, d, std::move(states), Generator::hilbert_schmidt, 0, 0};
  }

  static StateFamily parameterized(int dim, Generator gen, int n, std::uint64_t seed) {
    if (n < 1) throw Error(ErrorCode::invalid_argument, "parameterized family needs at least one candidate");
    return {Kind::parameterized, dim, {}, gen, n, seed};
  }

  /// Materialized members for finite families.
  std::vector<DensityOperator> members() const {
    if (kind == Kind::explicit_list) return states;
    if (kind == Kind::all_states) throw Error(ErrorCode::invalid_argument, "the all-states family is not finite");
    Rng rng(seed);
    std::vector<DensityOperator> out;
    for (int i = 0; i < n_candidates; ++i) {
      switch (generator) {
        case Generator::hilbert_schmidt: out.push_back(random_density(dim, rng)); break;
        case Generator::pure: out.push_back(random_pure_state(dim, rng)); break;
        case Generator::diagonal: out.push_back(random_diagonal_state(dim, rng)); break;
      }
    }
    return out;
  }
};

struct OptimizerOptions {
  int random_starts = 256;
  int hill_steps = 100;
  double step = 0.5;
  double decay = 0.5;
  std::uint64_t seed = 0;
  /// Inner search over Schatten decompositions of degenerate candidates.
  DecompositionSearch inner = DecompositionSearch::sampled(8, 0);
};

struct CapacityReport {
  EntropyValue value;
  std::optional<DensityOperator> argmax;
  std::string argmax_description;
  BoundStatus status = BoundStatus::lower_bound;
  int evaluations = 0;
};

/// One evaluation of a capacity objective at a state.
struct ObjectiveValue {
  double nats = 0.0;
  bool exact = false;
  int evaluations = 1;
};

using StateObjective = std::function<ObjectiveValue(const DensityOperator&)>;

namespace detail {

/// rho = U diag(softmax(logits)) U†.
struct StatePoint {
  RealVector logits;
  Matrix unitary;

  DensityOperator state() const {
    RealVector p = (logits.array() - logits.maxCoeff()).exp();
    p /= p.sum();
    return DensityOperator::from_trusted(unitary * p.cast<Complex>().asDiagonal() * unitary.adjoint());
  }
};

}  // namespace detail

/// Maximizes `objective` over a state family. Finite families are
/// enumerated; the all-states family gets the simplex center plus
/// `random_starts` random points, then hill climbing from the best one on
/// the simplex (softmax logits) and the unitary orbit, shrinking the step by
/// `decay` after each rejected move. `warm_starts` join the start pool.
inline CapacityReport maximize_over_states(const StateFamily& family, const StateObjective& objective,
                                           const OptimizerOptions& opt, LogBase base,
                                           const std::vector<DensityOperator>& warm_starts = {}) {
  CapacityReport report{EntropyValue::from_nats(0.0, base), std::nullopt, "", BoundStatus::lower_bound, 0};
  double best = -1.0;
  bool all_exact = true;

  auto consider = [&](const DensityOperator& rho, const std::string& label) {
    const auto v = objective(rho);
    report.evaluations += v.evaluations;
    all_exact = all_exact && v.exact;
    if (v.nats > best) {
      best = v.nats;
      report.argmax = rho;
      report.argmax_description = label;
      return true;
    }
    return false;
  };

  if (family.kind != StateFamily::Kind::all_states) {
    const auto members = family.members();
    for (std::size_t i = 0; i < members.size(); ++i) consider(members[i], "member " + std::to_string(i));
    for (std::size_t i = 0; i < warm_starts.size(); ++i) consider(warm_starts[i], "warm start " + std::to_string(i));
    const bool finite_exact = family.kind == StateFamily::Kind::explicit_list && all_exact && warm_starts.empty();
    report.status = finite_exact ? BoundStatus::exact : BoundStatus::lower_bound;
    report.value = EntropyValue::from_nats(best, base);
    return report;
  }

  const int d = family.dim;
  Rng rng(opt.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);

  detail::StatePoint best_point{RealVector::Zero(d), Matrix::Identity(d, d)};
  consider(best_point.state(), "simplex center");
  for (int s = 0; s < opt.random_starts; ++s) {
    detail::StatePoint pt{RealVector(d), haar_unitary(d, rng)};
    for (int i = 0; i < d; ++i) pt.logits(i) = std::log(expo(rng));
    if (consider(pt.state(), "random start " + std::to_string(s))) best_point = pt;
  }
  for (std::size_t i = 0; i < warm_starts.size(); ++i) {
    const auto& w = warm_starts[i];
    detail::StatePoint pt{RealVector(d), w.eigenvectors()};
    for (int k = 0; k < d; ++k) pt.logits(k) = std::log(std::max(w.eigenvalues()(k), 1e-300));
    if (consider(w, "warm start " + std::to_string(i))) best_point = pt;
  }

  double step = opt.step;
  for (int it = 0; it < opt.hill_steps; ++it) {
    detail::StatePoint trial = best_point;
    for (int i = 0; i < d; ++i) trial.logits(i) += step * normal(rng);
    trial.unitary = random_unitary_near_identity(d, step, rng) * trial.unitary;
    if (consider(trial.state(), "hill climb step " + std::to_string(it)))
      best_point = trial;
    else
      step *= opt.decay;
  }
  report.status = BoundStatus::lower_bound;
  report.value = EntropyValue::from_nats(best, base);
  return report;
}

inline void check_family(const QuantumChannel& channel, const StateFamily& family) {
  if (family.dim != channel.input_dim())
    throw Error(ErrorCode::dimension_mismatch, "state family dim " + std::to_string(family.dim) +
                                                   " differs from channel input dim " +
                                                   std::to_string(channel.input_dim()));
}

/// C(Λ) = sup over the family of I(rho; Λ).
inline CapacityReport quantum_capacity(const QuantumChannel& channel, const StateFamily& family,
                                       const OptimizerOptions& opt = {}, LogBase base = LogBase::e) {
  check_family(channel, family);
  StateObjective objective = [&](const DensityOperator& rho) {
    const auto r = mutual_entropy(rho, channel, opt.inner);
    return ObjectiveValue{r.value.nats(), r.status == BoundStatus::exact, r.samples};
  };
  return maximize_over_states(family, objective, opt, base);
}

/// C_p(Λ): as `quantum_capacity` with the pseudo-mutual entropy objective.
/// The quantum optimizer's argmax is added as a warm start, so the result
/// never falls below the quantum capacity found with the same options.
inline CapacityReport pseudo_capacity(const QuantumChannel& channel, const StateFamily& family,
                                      const OptimizerOptions& opt = {}, FiniteDecompositionSearch search = {},
                                      LogBase base = LogBase::e) {
  check_family(channel, family);
  search.schatten = opt.inner;
  std::vector<DensityOperator> warm;
  if (family.kind == StateFamily::Kind::all_states) {
    const auto q = quantum_capacity(channel, family, opt, base);
    if (q.argmax) warm.push_back(*q.argmax);
  }
  StateObjective objective = [&](const DensityOperator& rho) {
    const auto r = pseudo_mutual_entropy(rho, channel, search);
    return ObjectiveValue{r.value.nats(), false, r.evaluations};
  };
  auto report = maximize_over_states(family, objective, opt, base, warm);
  report.status = BoundStatus::lower_bound;
  return report;
}

/// Quantum codes of the messages plus an optional decoder; a present decoder
/// is followed by a computational-basis measurement so the output is classical.
struct CodingScheme {
  std::vector<DensityOperator> letter_states;
  std::optional<QuantumChannel> decoder;
};

namespace detail {

inline std::vector<DensityOperator> cqc_outputs(const CodingScheme& scheme, const QuantumChannel& channel) {
  if (scheme.letter_states.empty()) throw Error(ErrorCode::invalid_argument, "coding scheme has no letters");
  std::optional<QuantumChannel> decode;
  if (scheme.decoder) {
    if (scheme.decoder->input_dim() != channel.output_dim())
      throw Error(ErrorCode::dimension_mismatch, "decoder input dim differs from channel output dim");
    decode = compose(QuantumChannel::measurement(scheme.decoder->output_dim()), *scheme.decoder);
  }
  std::vector<DensityOperator> outputs;
  for (const auto& s : scheme.letter_states) {
    if (s.dim() != channel.input_dim())
      throw Error(ErrorCode::dimension_mismatch, "letter state dim differs from channel input dim");
    Matrix out = channel.apply(s.matrix());
    if (decode) out = decode->apply(out);
    outputs.push_back(DensityOperator::from_trusted(out));
  }
  return outputs;
}

}  // namespace detail

/// I(p; decoder ∘ Γ ∘ coding) = sum_k p_k S(out_k, out) with its
/// entropy-difference form alongside.
inline DualFormEntropy cqc_mutual_entropy(const ProbabilityDistribution& p, const CodingScheme& scheme,
                                          const QuantumChannel& channel, LogBase base = LogBase::e) {
  if (p.size() != scheme.letter_states.size())
    throw Error(ErrorCode::length_mismatch, std::to_string(p.size()) + " message weights for " +
                                                std::to_string(scheme.letter_states.size()) + " letter states");
  return detail::letter_ensemble_entropy(p, detail::cqc_outputs(scheme, channel), base);
}

/// S(Γ σ) - sum_k p_k S(Γ σ_k).
inline EntropyValue holevo_bound(const ProbabilityDistribution& p, const std::vector<DensityOperator>& letters,
                                 const QuantumChannel& channel, LogBase base = LogBase::e) {
  if (p.size() != letters.size())
    throw Error(ErrorCode::length_mismatch, std::to_string(p.size()) + " weights for " +
                                                std::to_string(letters.size()) + " letter states");
  const int d = channel.output_dim();
  Matrix mix = Matrix::Zero(d, d);
  double mean_entropy = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (letters[k].dim() != channel.input_dim())
      throw Error(ErrorCode::dimension_mismatch, "letter state dim differs from channel input dim");
    const auto out = channel.apply(letters[k]);
    mix += p[k] * out.matrix();
    mean_entropy += p[k] * von_neumann_entropy(out).nats();
  }
  return EntropyValue::from_nats(von_neumann_entropy(DensityOperator::from_trusted(mix)).nats() - mean_entropy, base);
}

/// Letter states sampled on a grid with weights f(lambda_i) * Δ_i approximating
/// a density; the weights must integrate to one within 1e-6.
struct QuadratureGrid {
  std::vector<double> weights;
  std::vector<DensityOperator> states;
};

inline EntropyValue holevo_bound(const QuadratureGrid& grid, const QuantumChannel& channel,
                                 LogBase base = LogBase::e) {
  double total = 0.0;
  for (double w : grid.weights) {
    if (w < 0.0) throw Error(ErrorCode::invalid_distribution, "negative quadrature weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-6)
    throw Error(ErrorCode::invalid_distribution, "quadrature weights integrate to " + std::to_string(total));
  std::vector<double> normalized = grid.weights;
  for (double& w : normalized) w /= total;
  return holevo_bound(ProbabilityDistribution(std::move(normalized)), grid.states, channel, base);
}

struct CqcCapacityReport {
  CapacityReport fixed_coding;     // C^{P0}: coding and decoding frozen at the first family members
  CapacityReport coding_free;      // C_c^{P0}: supremum over codings too
  CapacityReport coding_decoding_free;  // C_cd^{P0}
};

/// The three nested C-Q-C capacities over finite families. Each level is a
/// maximum over a superset of the previous level's candidates.
inline CqcCapacityReport cqc_capacity(const QuantumChannel& channel,
                                      const std::vector<ProbabilityDistribution>& p_family,
                                      const std::vector<std::vector<DensityOperator>>& coding_family,
                                      std::vector<std::optional<QuantumChannel>> decoder_family,
                                      LogBase base = LogBase::e) {
  if (p_family.empty() || coding_family.empty())
    throw Error(ErrorCode::invalid_argument, "cqc capacity needs nonempty distribution and coding families");
  if (decoder_family.empty()) decoder_family.push_back(std::nullopt);
  for (const auto& p : p_family)
    for (const auto& letters : coding_family)
      if (p.size() != letters.size())
        throw Error(ErrorCode::length_mismatch, "distribution and coding sizes differ within the families");

  auto evaluate = [&](std::size_t pi, std::size_t ci, std::size_t di) {
    const CodingScheme scheme{coding_family[ci], decoder_family[di]};
    return cqc_mutual_entropy(p_family[pi], scheme, channel).value.nats();
  };
  auto run = [&](std::size_t n_coding, std::size_t n_decoder, BoundStatus status) {
    CapacityReport r{EntropyValue::from_nats(0.0, base), std::nullopt, "", status, 0};
    double best = -1.0;
    for (std::size_t di = 0; di < n_decoder; ++di)
      for (std::size_t ci = 0; ci < n_coding; ++ci)
        for (std::size_t pi = 0; pi < p_family.size(); ++pi) {
          const double v = evaluate(pi, ci, di);
          ++r.evaluations;
          if (v > best) {
            best = v;
            r.argmax_description = "p=" + std::to_string(pi) + " coding=" + std::to_string(ci) +
                                   " decoder=" + std::to_string(di);
          }
        }
    r.value = EntropyValue::from_nats(best, base);
    return r;
  };
  return {run(1, 1, BoundStatus::exact), run(coding_family.size(), 1, BoundStatus::lower_bound),
          run(coding_family.size(), decoder_family.size(), BoundStatus::lower_bound)};
}

}  // namespace mutinfo
