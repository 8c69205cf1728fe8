#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mutinfo/entropy.hpp"

namespace mutinfo {

namespace tolerance {
inline constexpr double trace_preserving = 1e-9;
}

/// Completely positive trace-preserving map from input_dim to output_dim,
/// held as a Kraus family; isometry-form channels also keep their
/// Stinespring isometry G -> F ⊗ K (noise index major).
class QuantumChannel {
 public:
  static QuantumChannel from_kraus(std::vector<Matrix> ops, std::string kind = "kraus") {
    if (ops.empty()) throw Error(ErrorCode::invalid_argument, "channel needs at least one Kraus operator");
    const auto out = ops.front().rows();
    const auto in = ops.front().cols();
    if (out < 1 || in < 1 || out > max_dim || in > max_dim)
      throw Error(ErrorCode::dimension_mismatch, "Kraus operator has unsupported shape");
    Matrix sum = Matrix::Zero(in, in);
    for (const auto& k : ops) {
      if (k.rows() != out || k.cols() != in)
        throw Error(ErrorCode::dimension_mismatch, "Kraus operators have inconsistent shapes");
      sum += k.adjoint() * k;
    }
    const double dev = max_abs_deviation(sum, Matrix::Identity(in, in));
    if (dev > tolerance::trace_preserving)
      throw Error(ErrorCode::not_trace_preserving,
                  "sum of K^dagger K deviates from identity by " + std::to_string(dev));
    QuantumChannel ch;
    ch.kraus_ = std::move(ops);
    ch.input_dim_ = static_cast<int>(in);
    ch.output_dim_ = static_cast<int>(out);
    ch.kind_ = std::move(kind);
    return ch;
  }

  /// Lambda*(rho) = tr_F(Υ rho Υ†) for an isometry Υ : C^in -> C^noise ⊗ C^out.
  static QuantumChannel from_isometry(const Matrix& upsilon, int noise_dim) {
    if (noise_dim < 1 || upsilon.rows() % noise_dim != 0)
      throw Error(ErrorCode::dimension_mismatch, "isometry rows are not a multiple of the noise dimension");
    const double dev = max_abs_deviation(upsilon.adjoint() * upsilon, Matrix::Identity(upsilon.cols(), upsilon.cols()));
    if (dev > tolerance::trace_preserving)
      throw Error(ErrorCode::not_trace_preserving,
                  "Υ^dagger Υ deviates from identity by " + std::to_string(dev));
    const int out = static_cast<int>(upsilon.rows() / noise_dim);
    std::vector<Matrix> ops;
    for (int i = 0; i < noise_dim; ++i) ops.push_back(upsilon.middleRows(Eigen::Index(i) * out, out));
    QuantumChannel ch = from_kraus(std::move(ops), "isometry");
    ch.isometry_ = upsilon;
    return ch;
  }

  static QuantumChannel identity(int dim) { return from_kraus({Matrix::Identity(dim, dim)}, "identity"); }

  /// rho -> (1 - p) rho + p I/d, as a Weyl-operator Kraus family.
  static QuantumChannel depolarizing(int dim, double p) {
    if (!(p >= 0.0 && p <= 1.0))
      throw Error(ErrorCode::invalid_argument, "depolarizing parameter must lie in [0,1]");
    const double d2 = double(dim) * dim;
    std::vector<Matrix> ops;
    Matrix shift = Matrix::Zero(dim, dim);
    Matrix clock = Matrix::Zero(dim, dim);
    for (int j = 0; j < dim; ++j) {
      shift((j + 1) % dim, j) = 1.0;
      clock(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * j / dim);
    }
    Matrix xa = Matrix::Identity(dim, dim);
    for (int a = 0; a < dim; ++a) {
      Matrix w = xa;
      for (int b = 0; b < dim; ++b) {
        const double weight = (a == 0 && b == 0) ? 1.0 - p + p / d2 : p / d2;
        if (weight > 0.0) ops.push_back(std::sqrt(weight) * w);
        w = w * clock;
      }
      xa = shift * xa;
    }
    return from_kraus(std::move(ops), "depolarizing");
  }

  /// rho -> tr(rho) sigma0.
  static QuantumChannel constant(int input_dim, const DensityOperator& sigma0) {
    std::vector<Matrix> ops;
    const int out = sigma0.dim();
    for (int j = 0; j < out; ++j) {
      const double mu = sigma0.eigenvalues()(j);
      if (mu <= 0.0) continue;
      for (int i = 0; i < input_dim; ++i) {
        Matrix k = Matrix::Zero(out, input_dim);
        k.col(i) = std::sqrt(mu) * sigma0.eigenvectors().col(j);
        ops.push_back(std::move(k));
      }
    }
    return from_kraus(std::move(ops), "constant");
  }

  /// Off-diagonal elements (computational basis) shrink by the factor 1 - gamma.
  static QuantumChannel phase_damping(int dim, double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0))
      throw Error(ErrorCode::invalid_argument, "phase damping parameter must lie in [0,1]");
    std::vector<Matrix> ops;
    if (gamma < 1.0) ops.push_back(std::sqrt(1.0 - gamma) * Matrix::Identity(dim, dim));
    if (gamma > 0.0)
      for (int j = 0; j < dim; ++j) {
        Matrix k = Matrix::Zero(dim, dim);
        k(j, j) = std::sqrt(gamma);
        ops.push_back(std::move(k));
      }
    return from_kraus(std::move(ops), "phase_damping");
  }

  /// Embeds a classical channel: transition(out, in) = P(out | in), columns
  /// summing to one. Diagonal inputs map to diagonal outputs.
  static QuantumChannel classical(const Eigen::MatrixXd& transition) {
    const auto out = transition.rows();
    const auto in = transition.cols();
    if (out < 1 || in < 1) throw Error(ErrorCode::dimension_mismatch, "empty transition matrix");
    for (Eigen::Index i = 0; i < in; ++i) {
      if (transition.col(i).minCoeff() < 0.0)
        throw Error(ErrorCode::invalid_argument, "transition matrix has a negative entry");
      if (std::abs(transition.col(i).sum() - 1.0) > tolerance::trace_preserving)
        throw Error(ErrorCode::not_trace_preserving, "transition column " + std::to_string(i) + " does not sum to 1");
    }
    std::vector<Matrix> ops;
    for (Eigen::Index j = 0; j < out; ++j)
      for (Eigen::Index i = 0; i < in; ++i) {
        if (transition(j, i) <= 0.0) continue;
        Matrix k = Matrix::Zero(out, in);
        k(j, i) = std::sqrt(transition(j, i));
        ops.push_back(std::move(k));
      }
    return from_kraus(std::move(ops), "classical");
  }

  static QuantumChannel unitary(const Matrix& u) { return from_kraus({u}, "unitary"); }

  /// Projective measurement in the computational basis; output is diagonal.
  static QuantumChannel measurement(int dim) {
    std::vector<Matrix> ops;
    for (int j = 0; j < dim; ++j) {
      Matrix k = Matrix::Zero(dim, dim);
      k(j, j) = 1.0;
      ops.push_back(std::move(k));
    }
    return from_kraus(std::move(ops), "measurement");
  }

  int input_dim() const noexcept { return input_dim_; }
  int output_dim() const noexcept { return output_dim_; }
  const std::vector<Matrix>& kraus() const noexcept { return kraus_; }
  const std::string& kind() const noexcept { return kind_; }
  bool has_isometry_form() const noexcept { return isometry_.has_value(); }

  int noise_dim() const noexcept { return static_cast<int>(kraus_.size()); }

  /// Stinespring isometry Υ = sum_i |i>_F ⊗ K_i.
  Matrix stinespring() const {
    if (isometry_) return *isometry_;
    Matrix u(Eigen::Index(noise_dim()) * output_dim_, input_dim_);
    for (int i = 0; i < noise_dim(); ++i) u.middleRows(Eigen::Index(i) * output_dim_, output_dim_) = kraus_[i];
    return u;
  }

  Matrix apply(const Matrix& rho) const {
    if (rho.rows() != input_dim_ || rho.cols() != input_dim_)
      throw Error(ErrorCode::dimension_mismatch, "channel input dim " + std::to_string(input_dim_) +
                                                     " applied to operator of dim " + std::to_string(rho.rows()));
    if (isometry_) return partial_trace(*isometry_ * rho * isometry_->adjoint(), noise_dim(), output_dim_, 1);
    Matrix out = Matrix::Zero(output_dim_, output_dim_);
    for (const auto& k : kraus_) out += k * rho * k.adjoint();
    return out;
  }

  DensityOperator apply(const DensityOperator& rho) const { return DensityOperator::from_trusted(apply(rho.matrix())); }

 private:
  QuantumChannel() = default;

  std::vector<Matrix> kraus_;
  std::optional<Matrix> isometry_;
  int input_dim_ = 0;
  int output_dim_ = 0;
  std::string kind_;
};

/// `second` after `first`.
inline QuantumChannel compose(const QuantumChannel& second, const QuantumChannel& first) {
  if (second.input_dim() != first.output_dim())
    throw Error(ErrorCode::dimension_mismatch, "cannot compose channels with mismatched dimensions");
  std::vector<Matrix> ops;
  for (const auto& b : second.kraus())
    for (const auto& a : first.kraus()) {
      Matrix k = b * a;
      if (k.norm() > 0.0) ops.push_back(std::move(k));
    }
  return QuantumChannel::from_kraus(std::move(ops), second.kind() + "*" + first.kind());
}

/// Random channel from a Haar isometry into noise ⊗ output.
inline QuantumChannel random_channel(int input_dim, int output_dim, int noise_dim, Rng& rng) {
  return QuantumChannel::from_isometry(haar_isometry(noise_dim * output_dim, input_dim, rng), noise_dim);
}

/// Joint input/output state theta_E = sum_k lambda_k E_k ⊗ Lambda* E_k.
struct CompoundState {
  DensityOperator theta;
  SchattenDecomposition decomposition;
  int input_dim = 0;
  int output_dim = 0;
};

inline void check_decomposes(const DensityOperator& rho, const SchattenDecomposition& e) {
  if (e.dim() != rho.dim())
    throw Error(ErrorCode::decomposition_mismatch, "decomposition dimension differs from the state");
  const double err = (e.recompose() - rho.matrix()).norm();
  if (err > tolerance::reconstruction)
    throw Error(ErrorCode::decomposition_mismatch,
                "decomposition does not reconstruct the state (Frobenius error " + std::to_string(err) + ")");
}

inline CompoundState compound_state(const DensityOperator& rho, const QuantumChannel& channel,
                                    const SchattenDecomposition& e) {
  if (rho.dim() != channel.input_dim())
    throw Error(ErrorCode::dimension_mismatch, "state dim differs from channel input dim");
  check_decomposes(rho, e);
  const int din = rho.dim();
  const int dout = channel.output_dim();
  Matrix theta = Matrix::Zero(Eigen::Index(din) * dout, Eigen::Index(din) * dout);
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (e.weights[k] <= 0.0) continue;
    const Matrix proj = e.projector(k);
    theta += e.weights[k] * tensor(proj, channel.apply(proj));
  }
  return {DensityOperator::from_trusted(theta), e, din, dout};
}

enum class BoundStatus { exact, lower_bound };

inline std::string_view to_string(BoundStatus s) noexcept {
  return s == BoundStatus::exact ? "exact" : "lower_bound";
}

/// How the supremum over Schatten decompositions is searched when the
/// spectrum is degenerate on the support.
struct DecompositionSearch {
  enum class Mode { exact_nondegenerate, sampled, refined };
  Mode mode = Mode::sampled;
  int samples = 16;
  std::uint64_t seed = 0;
  int local_iterations = 0;
  double step = 0.5;

  static DecompositionSearch exact() { return {Mode::exact_nondegenerate, 0, 0, 0, 0.5}; }
  static DecompositionSearch sampled(int n, std::uint64_t seed) { return {Mode::sampled, n, seed, 0, 0.5}; }
  static DecompositionSearch refined(int n, int iterations, std::uint64_t seed) {
    return {Mode::refined, n, seed, iterations, 0.5};
  }
};

struct MutualEntropyReport {
  EntropyValue value;
  BoundStatus status;
  int samples = 0;
  SchattenDecomposition decomposition;
};

namespace detail {

/// sum_k lambda_k S(Lambda* E_k, Lambda* rho) in nats.
inline double weighted_relative_nats(const SchattenDecomposition& e, const QuantumChannel& channel,
                                     const DensityOperator& output) {
  double total = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (e.weights[k] <= tolerance::support_floor) continue;
    const auto out_k = DensityOperator::from_trusted(channel.apply(e.projector(k)));
    total += e.weights[k] * quantum_relative_entropy(out_k, output).nats();
  }
  return total;
}

/// Searches rotations inside the degenerate eigenspaces of rho (those with
/// positive eigenvalue) to maximize `objective(decomposition)`.
template <typename Objective>
std::pair<SchattenDecomposition, double> search_schatten(const DensityOperator& rho, const DecompositionSearch& opt,
                                                         Objective&& objective, int& evaluations, bool& exact) {
  const auto spaces = eigenspaces(rho);
  std::vector<std::size_t> free_spaces;
  for (std::size_t s = 0; s < spaces.size(); ++s)
    if (spaces[s].value > tolerance::support_floor && spaces[s].rank() > 1) free_spaces.push_back(s);

  std::vector<Matrix> best_rot(spaces.size());
  SchattenDecomposition best = schatten_from_rotations(spaces, best_rot);
  double best_value = objective(best);
  evaluations = 1;
  exact = free_spaces.empty();
  if (exact || opt.mode == DecompositionSearch::Mode::exact_nondegenerate) return {best, best_value};

  Rng rng(opt.seed);
  for (int n = 0; n < opt.samples; ++n) {
    std::vector<Matrix> rot(spaces.size());
    for (auto s : free_spaces) rot[s] = haar_unitary(spaces[s].rank(), rng);
    auto candidate = schatten_from_rotations(spaces, rot);
    const double v = objective(candidate);
    ++evaluations;
    if (v > best_value) {
      best_value = v;
      best = std::move(candidate);
      best_rot = std::move(rot);
    }
  }
  if (opt.mode == DecompositionSearch::Mode::refined) {
    double step = opt.step;
    for (int it = 0; it < opt.local_iterations; ++it) {
      std::vector<Matrix> rot = best_rot;
      for (auto s : free_spaces) {
        const Matrix base = rot[s].size() > 0 ? rot[s] : Matrix::Identity(spaces[s].rank(), spaces[s].rank());
        rot[s] = base * random_unitary_near_identity(spaces[s].rank(), step, rng);
      }
      auto candidate = schatten_from_rotations(spaces, rot);
      const double v = objective(candidate);
      ++evaluations;
      if (v > best_value) {
        best_value = v;
        best = std::move(candidate);
        best_rot = std::move(rot);
      } else {
        step *= 0.5;
      }
    }
  }
  return {best, best_value};
}

}  // namespace detail

/// S(theta_E, rho ⊗ Lambda* rho) computed on the compound state itself.
inline EntropyValue compound_relative_entropy(const DensityOperator& rho, const QuantumChannel& channel,
                                              const SchattenDecomposition& e, LogBase base = LogBase::e) {
  const auto compound = compound_state(rho, channel, e);
  const auto product = DensityOperator::from_trusted(tensor(rho.matrix(), channel.apply(rho.matrix())));
  return quantum_relative_entropy(compound.theta, product, base);
}

/// sum_k lambda_k S(Lambda* E_k, Lambda* rho) for one fixed decomposition.
inline EntropyValue decomposition_mutual_entropy(const DensityOperator& rho, const QuantumChannel& channel,
                                                 const SchattenDecomposition& e, LogBase base = LogBase::e) {
  if (rho.dim() != channel.input_dim())
    throw Error(ErrorCode::dimension_mismatch, "state dim differs from channel input dim");
  check_decomposes(rho, e);
  return EntropyValue::from_nats(detail::weighted_relative_nats(e, channel, channel.apply(rho)), base);
}

/// Quantum mutual entropy I(rho; Lambda*): supremum over Schatten
/// decompositions of the weighted output relative entropy. Exact when the
/// spectrum on the support is nondegenerate, otherwise the best value found.
inline MutualEntropyReport mutual_entropy(const DensityOperator& rho, const QuantumChannel& channel,
                                          const DecompositionSearch& opt = {}, LogBase base = LogBase::e) {
  if (rho.dim() != channel.input_dim())
    throw Error(ErrorCode::dimension_mismatch, "state dim " + std::to_string(rho.dim()) +
                                                   " differs from channel input dim " +
                                                   std::to_string(channel.input_dim()));
  const auto output = channel.apply(rho);
  int evaluations = 0;
  bool exact = false;
  auto [best, nats] = detail::search_schatten(
      rho, opt, [&](const SchattenDecomposition& e) { return detail::weighted_relative_nats(e, channel, output); },
      evaluations, exact);
  return {EntropyValue::from_nats(nats, base), exact ? BoundStatus::exact : BoundStatus::lower_bound, evaluations,
          std::move(best)};
}

/// Entropy computed by two algebraic routes: the weighted relative-entropy
/// sum and, when finite, the entropy-difference form.
struct DualFormEntropy {
  EntropyValue value;
  std::optional<EntropyValue> difference_form;
};

namespace detail {

inline DualFormEntropy letter_ensemble_entropy(const ProbabilityDistribution& p,
                                               const std::vector<DensityOperator>& outputs, LogBase base) {
  const int d = outputs.front().dim();
  Matrix mix = Matrix::Zero(d, d);
  for (std::size_t k = 0; k < p.size(); ++k) mix += p[k] * outputs[k].matrix();
  const auto average = DensityOperator::from_trusted(mix);
  double weighted = 0.0;
  double mean_entropy = 0.0;
  bool infinite = false;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] <= 0.0) continue;
    const auto rel = quantum_relative_entropy(outputs[k], average);
    if (rel.is_infinite()) {
      infinite = true;
      break;
    }
    weighted += p[k] * rel.nats();
    mean_entropy += p[k] * von_neumann_entropy(outputs[k]).nats();
  }
  if (infinite) return {EntropyValue::infinite(base), std::nullopt};
  return {EntropyValue::from_nats(weighted, base),
          EntropyValue::from_nats(von_neumann_entropy(average).nats() - mean_entropy, base)};
}

}  // namespace detail

/// sum_k p_k S(Lambda* sigma_k, Lambda* sigma) with sigma = sum_k p_k sigma_k.
inline DualFormEntropy classical_input_mutual_entropy(const ProbabilityDistribution& p,
                                                      const std::vector<DensityOperator>& states,
                                                      const QuantumChannel& channel, LogBase base = LogBase::e) {
  if (p.size() != states.size())
    throw Error(ErrorCode::length_mismatch, std::to_string(p.size()) + " weights for " +
                                                std::to_string(states.size()) + " states");
  std::vector<DensityOperator> outputs;
  for (const auto& s : states) {
    if (s.dim() != channel.input_dim())
      throw Error(ErrorCode::dimension_mismatch, "letter state dim differs from channel input dim");
    outputs.push_back(channel.apply(s));
  }
  return detail::letter_ensemble_entropy(p, outputs, base);
}

/// A finite, not necessarily orthogonal, decomposition rho = sum_k w_k rho_k.
struct FiniteDecomposition {
  std::vector<double> weights;
  std::vector<DensityOperator> states;

  Matrix recompose() const {
    Matrix out = Matrix::Zero(states.front().dim(), states.front().dim());
    for (std::size_t k = 0; k < states.size(); ++k) out += weights[k] * states[k].matrix();
    return out;
  }
};

inline FiniteDecomposition to_finite(const SchattenDecomposition& e) {
  FiniteDecomposition f;
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (e.weights[k] <= 0.0) continue;
    f.weights.push_back(e.weights[k]);
    f.states.push_back(DensityOperator::pure(e.vectors[k]));
  }
  return f;
}

/// Random decomposition of rho into at most `components` pure states:
/// psi_k = sum_j U_kj sqrt(mu_j) |e_j> for a Haar isometry U.
inline FiniteDecomposition random_pure_decomposition(const DensityOperator& rho, int components, Rng& rng) {
  std::vector<int> support;
  for (int j = 0; j < rho.dim(); ++j)
    if (rho.eigenvalues()(j) > tolerance::support_floor) support.push_back(j);
  const int rank = static_cast<int>(support.size());
  const int m = std::max(components, rank);
  const Matrix u = haar_isometry(m, rank, rng);
  FiniteDecomposition f;
  for (int k = 0; k < m; ++k) {
    Vector psi = Vector::Zero(rho.dim());
    for (int j = 0; j < rank; ++j)
      psi += u(k, j) * std::sqrt(rho.eigenvalues()(support[j])) * rho.eigenvectors().col(support[j]);
    const double w = psi.squaredNorm();
    if (w <= 1e-14) continue;
    f.weights.push_back(w);
    f.states.push_back(DensityOperator::pure(psi));
  }
  return f;
}

struct FiniteDecompositionSearch {
  /// 0 selects 2 * dim.
  int max_components = 0;
  int candidates = 32;
  std::uint64_t seed = 0;
  /// Used to place the best Schatten decomposition in the family.
  DecompositionSearch schatten = {};
  std::vector<FiniteDecomposition> explicit_candidates;
};

struct PseudoMutualReport {
  EntropyValue value;
  BoundStatus status = BoundStatus::lower_bound;
  int evaluations = 0;
  FiniteDecomposition decomposition;
};

inline double finite_decomposition_nats(const FiniteDecomposition& f, const QuantumChannel& channel,
                                        const DensityOperator& output) {
  double total = 0.0;
  for (std::size_t k = 0; k < f.states.size(); ++k) {
    if (f.weights[k] <= tolerance::support_floor) continue;
    total += f.weights[k] * quantum_relative_entropy(channel.apply(f.states[k]), output).nats();
  }
  return total;
}

/// Pseudo-mutual entropy: best sum_k w_k S(Lambda* rho_k, Lambda* rho) over a
/// seeded family of finite decompositions that always contains the best
/// Schatten decomposition found by `mutual_entropy`.
inline PseudoMutualReport pseudo_mutual_entropy(const DensityOperator& rho, const QuantumChannel& channel,
                                                const FiniteDecompositionSearch& search = {},
                                                LogBase base = LogBase::e) {
  if (rho.dim() != channel.input_dim())
    throw Error(ErrorCode::dimension_mismatch, "state dim differs from channel input dim");
  const auto output = channel.apply(rho);
  const auto schatten = mutual_entropy(rho, channel, search.schatten);
  PseudoMutualReport report{schatten.value.in(base), BoundStatus::lower_bound, schatten.samples,
                            to_finite(schatten.decomposition)};
  double best = schatten.value.nats();

  auto consider = [&](FiniteDecomposition f) {
    const double v = finite_decomposition_nats(f, channel, output);
    ++report.evaluations;
    if (v > best) {
      best = v;
      report.decomposition = std::move(f);
    }
  };
  for (const auto& f : search.explicit_candidates) {
    if (f.states.empty() || f.weights.size() != f.states.size())
      throw Error(ErrorCode::decomposition_mismatch, "explicit decomposition is empty or misaligned");
    for (const auto& s : f.states)
      if (s.dim() != rho.dim()) throw Error(ErrorCode::dimension_mismatch, "decomposition state has wrong dim");
    const double err = (f.recompose() - rho.matrix()).norm();
    if (err > tolerance::reconstruction)
      throw Error(ErrorCode::decomposition_mismatch,
                  "explicit decomposition does not reconstruct the state (error " + std::to_string(err) + ")");
    consider(f);
  }
  const int cap = search.max_components > 0 ? search.max_components : 2 * rho.dim();
  Rng rng(search.seed);
  std::uniform_int_distribution<int> size_dist(1, cap);
  for (int n = 0; n < search.candidates; ++n) consider(random_pure_decomposition(rho, size_dist(rng), rng));
  report.value = EntropyValue::from_nats(best, base);
  return report;
}

}  // namespace mutinfo
