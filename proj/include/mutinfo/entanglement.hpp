#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mutinfo/capacity.hpp"

namespace mutinfo {

namespace tolerance {
inline constexpr double amplitude_norm = 1e-9;
inline constexpr double block_diagonal = 1e-9;
inline constexpr double commutator = 1e-8;
inline constexpr double marginal = 1e-8;
inline constexpr double orthonormal = 1e-9;
}  // namespace tolerance

/// Linear map kappa : G -> F ⊗ K (noise index major) with tr(kappa† kappa) = 1.
/// Column n is the vector kappa_n = kappa|n>.
class AmplitudeOperator {
 public:
  AmplitudeOperator(Matrix kappa, int noise_dim, int output_dim)
      : kappa_(std::move(kappa)), noise_dim_(noise_dim), output_dim_(output_dim) {
    if (noise_dim < 1 || output_dim < 1 || kappa_.rows() != Eigen::Index(noise_dim) * output_dim || kappa_.cols() < 1)
      throw Error(ErrorCode::dimension_mismatch, "amplitude operator rows must equal noise_dim * output_dim");
    const double norm = kappa_.squaredNorm();
    if (std::abs(norm - 1.0) > tolerance::amplitude_norm)
      throw Error(ErrorCode::not_unit_trace, "tr(kappa^dagger kappa) = " + std::to_string(norm));
  }

  int input_dim() const noexcept { return static_cast<int>(kappa_.cols()); }
  int noise_dim() const noexcept { return noise_dim_; }
  int output_dim() const noexcept { return output_dim_; }
  const Matrix& matrix() const noexcept { return kappa_; }

  /// tr_F kappa_n kappa_m† (an operator on K).
  Matrix block(int n, int m) const {
    Matrix out = Matrix::Zero(output_dim_, output_dim_);
    for (int f = 0; f < noise_dim_; ++f)
      out += kappa_.col(n).segment(Eigen::Index(f) * output_dim_, output_dim_) *
             kappa_.col(m).segment(Eigen::Index(f) * output_dim_, output_dim_).adjoint();
    return out;
  }

  /// phi(A) = sum_{m,n} |m> kappa_m† (I ⊗ A) kappa_n <n|, an operator on G.
  Matrix phi(const Matrix& a) const {
    const Matrix lifted = tensor(Matrix::Identity(noise_dim_, noise_dim_), a);
    const int g = input_dim();
    Matrix out(g, g);
    for (int m = 0; m < g; ++m)
      for (int n = 0; n < g; ++n) out(m, n) = kappa_.col(m).dot(lifted * kappa_.col(n));
    return out;
  }

  /// phi_*(B) = sum_{n,m} <n|B|m> tr_F kappa_n kappa_m†, an operator on K.
  Matrix phi_dual(const Matrix& b) const {
    const int g = input_dim();
    Matrix out = Matrix::Zero(output_dim_, output_dim_);
    for (int n = 0; n < g; ++n)
      for (int m = 0; m < g; ++m)
        if (b(n, m) != Complex(0.0)) out += b(n, m) * block(n, m);
    return out;
  }

 private:
  Matrix kappa_;
  int noise_dim_;
  int output_dim_;
};

struct AmplitudeMarginals {
  DensityOperator rho;    // kappa† kappa on G
  DensityOperator sigma;  // tr_F kappa kappa† on K
};

inline AmplitudeMarginals marginals(const AmplitudeOperator& kappa) {
  Matrix sigma = Matrix::Zero(kappa.output_dim(), kappa.output_dim());
  for (int n = 0; n < kappa.input_dim(); ++n) sigma += kappa.block(n, n);
  return {DensityOperator::from_trusted(kappa.matrix().adjoint() * kappa.matrix()),
          DensityOperator::from_trusted(sigma)};
}

/// kappa = sigma^{1/2} on G = K with a trivial noise space.
inline AmplitudeOperator standard_entangling(const DensityOperator& sigma) {
  return AmplitudeOperator(hermitian_sqrt(sigma.matrix()), 1, sigma.dim());
}

/// Entangling operator reproducing the state psi psi† on G ⊗ K, where
/// psi : E -> G ⊗ K has e columns; the noise space F is E.
inline AmplitudeOperator entangling_from_amplitude(const Matrix& psi, int input_dim, int output_dim) {
  if (psi.rows() != Eigen::Index(input_dim) * output_dim)
    throw Error(ErrorCode::dimension_mismatch, "amplitude rows must equal input_dim * output_dim");
  const int e = static_cast<int>(psi.cols());
  Matrix kappa(Eigen::Index(e) * output_dim, input_dim);
  for (int n = 0; n < input_dim; ++n)
    for (int f = 0; f < e; ++f)
      for (int b = 0; b < output_dim; ++b)
        kappa(Eigen::Index(f) * output_dim + b, n) = psi(Eigen::Index(n) * output_dim + b, f);
  return AmplitudeOperator(std::move(kappa), e, output_dim);
}

enum class CompoundClass { q, d, c };

inline std::string_view to_string(CompoundClass c) noexcept {
  switch (c) {
    case CompoundClass::q: return "q";
    case CompoundClass::d: return "d";
    case CompoundClass::c: return "c";
  }
  return "q";
}

/// Compound state on G ⊗ K written in the basis {|n>} of G held in the
/// columns of `basis`. The G-marginal is expressed in that basis.
struct EntangledCompoundState {
  DensityOperator theta;
  CompoundClass declared = CompoundClass::q;
  Matrix basis;
  int input_dim = 0;
  int output_dim = 0;
  /// max_{n != m} |tr kappa_n kappa_m†| for q-compounds built from kappa.
  double orthogonality_defect = 0.0;

  Matrix block(int n, int m) const {
    return theta.matrix().block(Eigen::Index(n) * output_dim, Eigen::Index(m) * output_dim, output_dim, output_dim);
  }
  Matrix rho_marginal() const { return partial_trace(theta.matrix(), input_dim, output_dim, 2); }
  Matrix sigma_marginal() const { return partial_trace(theta.matrix(), input_dim, output_dim, 1); }

  /// theta with the G factor rotated back to the standard basis.
  Matrix in_standard_basis() const {
    const Matrix u = tensor(basis, Matrix::Identity(output_dim, output_dim));
    return u * theta.matrix() * u.adjoint();
  }
};

inline void check_orthonormal(const Matrix& basis) {
  if (basis.rows() != basis.cols())
    throw Error(ErrorCode::basis_not_orthonormal, "basis matrix must be square");
  const double dev = max_abs_deviation(basis.adjoint() * basis, Matrix::Identity(basis.cols(), basis.cols()));
  if (dev > tolerance::orthonormal)
    throw Error(ErrorCode::basis_not_orthonormal, "basis deviates from orthonormal by " + std::to_string(dev));
}

/// theta_phi = sum_{m,n} |n><m| ⊗ tr_F kappa_n kappa_m† with kappa_n = kappa|b_n>.
inline EntangledCompoundState q_compound(const AmplitudeOperator& kappa, const Matrix& basis) {
  check_orthonormal(basis);
  if (basis.rows() != kappa.input_dim())
    throw Error(ErrorCode::dimension_mismatch, "basis dim differs from amplitude input dim");
  const AmplitudeOperator rotated(kappa.matrix() * basis, kappa.noise_dim(), kappa.output_dim());
  const int g = kappa.input_dim();
  const int k = kappa.output_dim();
  Matrix theta(Eigen::Index(g) * k, Eigen::Index(g) * k);
  double defect = 0.0;
  for (int n = 0; n < g; ++n)
    for (int m = 0; m < g; ++m) {
      theta.block(Eigen::Index(n) * k, Eigen::Index(m) * k, k, k) = rotated.block(n, m);
      if (n != m) defect = std::max(defect, std::abs(rotated.matrix().col(m).dot(rotated.matrix().col(n))));
    }
  return {DensityOperator::from_trusted(theta), CompoundClass::q, basis, g, k, defect};
}

inline EntangledCompoundState q_compound(const AmplitudeOperator& kappa) {
  return q_compound(kappa, Matrix::Identity(kappa.input_dim(), kappa.input_dim()));
}

/// theta = sum_n |n><n| ⊗ lambda_n Lambda* E_n in the basis of E.
inline EntangledCompoundState d_compound(const DensityOperator& rho, const QuantumChannel& channel,
                                         const SchattenDecomposition& e) {
  if (rho.dim() != channel.input_dim())
    throw Error(ErrorCode::dimension_mismatch, "state dim differs from channel input dim");
  check_decomposes(rho, e);
  const int g = rho.dim();
  const int k = channel.output_dim();
  Matrix theta = Matrix::Zero(Eigen::Index(g) * k, Eigen::Index(g) * k);
  for (std::size_t n = 0; n < e.size(); ++n)
    if (e.weights[n] > 0.0)
      theta.block(Eigen::Index(n) * k, Eigen::Index(n) * k, k, k) = e.weights[n] * channel.apply(e.projector(n));
  return {DensityOperator::from_trusted(theta), CompoundClass::d, e.basis(), g, k, 0.0};
}

namespace detail {

inline bool blocks_commute(const std::vector<Matrix>& blocks) {
  for (std::size_t a = 0; a < blocks.size(); ++a)
    for (std::size_t b = a + 1; b < blocks.size(); ++b)
      if ((blocks[a] * blocks[b] - blocks[b] * blocks[a]).norm() > tolerance::commutator) return false;
  return true;
}

}  // namespace detail

/// Finest class whose invariant holds: c ⊂ d ⊂ q.
inline CompoundClass classify(const EntangledCompoundState& theta) {
  const int g = theta.input_dim;
  for (int n = 0; n < g; ++n)
    for (int m = 0; m < g; ++m)
      if (n != m && theta.block(n, m).norm() > tolerance::block_diagonal) return CompoundClass::q;
  std::vector<Matrix> diag;
  for (int n = 0; n < g; ++n) diag.push_back(theta.block(n, n));
  return detail::blocks_commute(diag) ? CompoundClass::c : CompoundClass::d;
}

/// I_phi(rho, sigma) = S(theta, rho ⊗ sigma); `rho` is expressed in the
/// compound's basis.
inline EntropyValue entangled_mutual_entropy(const EntangledCompoundState& theta, const Matrix& rho,
                                             const Matrix& sigma, LogBase base = LogBase::e) {
  if (rho.rows() != theta.input_dim || sigma.rows() != theta.output_dim)
    throw Error(ErrorCode::marginal_mismatch, "marginal dimensions do not match the compound state");
  const double drho = (theta.rho_marginal() - rho).norm();
  const double dsigma = (theta.sigma_marginal() - sigma).norm();
  if (drho > tolerance::marginal || dsigma > tolerance::marginal)
    throw Error(ErrorCode::marginal_mismatch, "compound marginals deviate by " + std::to_string(drho) + " (G) and " +
                                                  std::to_string(dsigma) + " (K)");
  const auto product = DensityOperator::from_trusted(tensor(rho, sigma));
  return quantum_relative_entropy(theta.theta, product, base);
}

inline EntropyValue entangled_mutual_entropy(const EntangledCompoundState& theta, LogBase base = LogBase::e) {
  return entangled_mutual_entropy(theta, theta.rho_marginal(), theta.sigma_marginal(), base);
}

/// Search over entanglements with a fixed output marginal: the standard
/// entanglement plus seeded dilations kappa = sum_i |i>_F ⊗ sqrt(t_i) sigma^{1/2} V_i
/// with f up to `max_noise_dim` (0 = dim K).
struct QEntropySearch {
  int samples = 16;
  std::uint64_t seed = 0;
  int max_noise_dim = 0;
};

struct QEntropyReport {
  EntropyValue value;
  BoundStatus status = BoundStatus::lower_bound;
  int evaluations = 0;
  std::optional<EntangledCompoundState> best;
};

/// H_sigma = sup I_phi over entanglements with phi_*(I) = sigma. Exact once
/// a candidate reaches 2 S(sigma), the largest value any compound with
/// marginal sigma can have.
inline QEntropyReport q_entropy(const DensityOperator& sigma, const QEntropySearch& search = {},
                                LogBase base = LogBase::e) {
  const int k = sigma.dim();
  const Matrix root = hermitian_sqrt(sigma.matrix());
  QEntropyReport report{EntropyValue::from_nats(0.0, base), BoundStatus::lower_bound, 0, std::nullopt};
  double best = -1.0;
  auto consider = [&](const AmplitudeOperator& kappa) {
    auto theta = q_compound(kappa);
    const double v = entangled_mutual_entropy(theta).nats();
    ++report.evaluations;
    if (v > best) {
      best = v;
      report.best = std::move(theta);
    }
  };
  consider(standard_entangling(sigma));

  const int fmax = search.max_noise_dim > 0 ? search.max_noise_dim : k;
  Rng rng(search.seed);
  std::uniform_int_distribution<int> fdist(1, std::max(1, fmax));
  std::exponential_distribution<double> expo(1.0);
  for (int s = 0; s < search.samples; ++s) {
    const int f = fdist(rng);
    std::vector<double> t(f);
    double total = 0.0;
    for (auto& x : t) total += (x = expo(rng));
    Matrix kappa(Eigen::Index(f) * k, k);
    for (int i = 0; i < f; ++i) kappa.middleRows(Eigen::Index(i) * k, k) = std::sqrt(t[i] / total) * root * haar_unitary(k, rng);
    const double norm = kappa.norm();
    consider(AmplitudeOperator(kappa / norm, f, k));
  }
  const double ceiling = 2.0 * von_neumann_entropy(sigma).nats();
  report.status = best >= ceiling - 1e-9 ? BoundStatus::exact : BoundStatus::lower_bound;
  report.value = EntropyValue::from_nats(best, base);
  return report;
}

/// H_phi(B|A) = H_sigma - I_phi with sigma the K-marginal of theta.
inline EntropyValue q_conditional_entropy(const EntangledCompoundState& theta, const QEntropySearch& search = {},
                                          LogBase base = LogBase::e) {
  const auto sigma = DensityOperator::from_trusted(theta.sigma_marginal());
  const double h = q_entropy(sigma, search).value.nats();
  return EntropyValue::from_nats(h - entangled_mutual_entropy(theta).nats(), base);
}

/// D_phi = S(sigma) - I_phi, in nats or bits; may be negative.
inline double disentanglement_degree(const EntangledCompoundState& theta, LogBase base = LogBase::e) {
  const auto sigma = DensityOperator::from_trusted(theta.sigma_marginal());
  const double nats = von_neumann_entropy(sigma).nats() - entangled_mutual_entropy(theta).nats();
  return base == LogBase::two ? nats / std::numbers::ln2 : nats;
}

/// inf_phi D_phi = S(sigma) - H_sigma.
inline double chaos_degree(const DensityOperator& sigma, const QEntropySearch& search = {},
                           LogBase base = LogBase::e) {
  const double nats = von_neumann_entropy(sigma).nats() - q_entropy(sigma, search).value.nats();
  return base == LogBase::two ? nats / std::numbers::ln2 : nats;
}

/// Search family for the channel-induced q/d/c mutual entropies. Decompositions
/// of rho come from `schatten` (sampled mode keeps the class ordering exact);
/// each q candidate set holds the d-compound, the Stinespring compound and
/// `noise_samples` compounds with independent Haar rotations W_n of the noise
/// space dilated to max(f, dim K).
struct EntanglementSearch {
  DecompositionSearch schatten = DecompositionSearch::sampled(8, 0);
  int noise_samples = 8;
  std::uint64_t seed = 0;
};

struct EntangledMutualReport {
  EntropyValue value;
  BoundStatus status = BoundStatus::lower_bound;
  int evaluations = 0;
  std::optional<EntangledCompoundState> best;
};

namespace detail {

/// q-compound with diagonal blocks lambda_n Lambda* E_n and off-diagonal
/// coherences tr_F (W_n ⊗ I) Υ e_n e_m† Υ† (W_m† ⊗ I) sqrt(lambda_n lambda_m).
inline EntangledCompoundState channel_q_candidate(const SchattenDecomposition& e, const QuantumChannel& channel,
                                                  const std::vector<Matrix>& noise_rotations, int noise_dim) {
  const Matrix upsilon = channel.stinespring();
  const int k = channel.output_dim();
  const int g = static_cast<int>(e.size());
  Matrix padded = Matrix::Zero(Eigen::Index(noise_dim) * k, upsilon.cols());
  padded.topRows(upsilon.rows()) = upsilon;
  Matrix kappa(Eigen::Index(noise_dim) * k, g);
  for (int n = 0; n < g; ++n) {
    Vector col = std::sqrt(std::max(e.weights[n], 0.0)) * (padded * e.vectors[n]);
    if (!noise_rotations.empty() && noise_rotations[n].size() > 0)
      col = tensor(noise_rotations[n], Matrix::Identity(k, k)) * col;
    kappa.col(n) = col;
  }
  kappa /= kappa.norm();
  auto theta = q_compound(AmplitudeOperator(kappa, noise_dim, k));
  theta.basis = e.basis();
  return theta;
}

}  // namespace detail

/// I_q / I_d / I_c (rho, Λ): supremum of S(theta, rho ⊗ Λ* rho) over the
/// class's search family with marginals fixed to (rho, Λ* rho).
inline EntangledMutualReport channel_entangled_mutual(const DensityOperator& rho, const QuantumChannel& channel,
                                                      CompoundClass klass, const EntanglementSearch& search = {},
                                                      LogBase base = LogBase::e) {
  if (rho.dim() != channel.input_dim())
    throw Error(ErrorCode::dimension_mismatch, "state dim differs from channel input dim");
  const auto output = channel.apply(rho);
  const int k = channel.output_dim();
  const int dilated = std::max(channel.noise_dim(), k);
  Rng noise_rng(search.seed);

  EntangledMutualReport report{EntropyValue::from_nats(0.0, base), BoundStatus::lower_bound, 0, std::nullopt};
  double best = -1.0;
  bool commuting_found = false;

  auto d_value = [&](const SchattenDecomposition& e) { return detail::weighted_relative_nats(e, channel, output); };
  auto keep = [&](double v, auto&& make_state) {
    if (v > best) {
      best = v;
      report.best = make_state();
    }
  };

  auto objective = [&](const SchattenDecomposition& e) -> double {
    double local = -1.0;
    if (klass == CompoundClass::c) {
      std::vector<Matrix> blocks;
      for (std::size_t n = 0; n < e.size(); ++n) blocks.push_back(e.weights[n] * channel.apply(e.projector(n)));
      if (!detail::blocks_commute(blocks)) return -1.0;
      commuting_found = true;
    }
    const double dv = d_value(e);
    ++report.evaluations;
    local = dv;
    keep(dv, [&] {
      auto t = d_compound(rho, channel, e);
      if (klass == CompoundClass::c) t.declared = CompoundClass::c;
      return t;
    });
    if (klass != CompoundClass::q) return local;

    std::vector<std::vector<Matrix>> rotation_sets;
    rotation_sets.emplace_back();
    for (int s = 0; s < search.noise_samples; ++s) {
      std::vector<Matrix> rot(e.size());
      for (std::size_t n = 1; n < e.size(); ++n) rot[n] = haar_unitary(dilated, noise_rng);
      rotation_sets.push_back(std::move(rot));
    }
    for (const auto& rot : rotation_sets) {
      auto theta = detail::channel_q_candidate(e, channel, rot, dilated);
      const double v = quantum_relative_entropy(
                           theta.theta, DensityOperator::from_trusted(tensor(theta.rho_marginal(), output.matrix())))
                           .nats();
      ++report.evaluations;
      local = std::max(local, v);
      keep(v, [&] { return theta; });
    }
    return local;
  };

  int evaluations = 0;
  bool exact = false;
  detail::search_schatten(rho, search.schatten, objective, evaluations, exact);

  if (klass == CompoundClass::c && best < 0.0) {
    // no commuting d-compound found: the product state is the only c-candidate
    best = 0.0;
    Matrix basis = Matrix::Identity(rho.dim(), rho.dim());
    report.best = EntangledCompoundState{DensityOperator::from_trusted(tensor(rho.matrix(), output.matrix())),
                                         CompoundClass::c, basis, rho.dim(), k, 0.0};
  }
  switch (klass) {
    case CompoundClass::d: report.status = exact ? BoundStatus::exact : BoundStatus::lower_bound; break;
    case CompoundClass::c:
      report.status = exact && commuting_found ? BoundStatus::exact : BoundStatus::lower_bound;
      break;
    case CompoundClass::q: {
      const double ceiling =
          2.0 * std::min(von_neumann_entropy(rho).nats(), von_neumann_entropy(output).nats());
      report.status = best >= ceiling - 1e-9 ? BoundStatus::exact : BoundStatus::lower_bound;
      break;
    }
  }
  report.value = EntropyValue::from_nats(best, base);
  return report;
}

/// C_q / C_d / C_c (Λ): supremum of the class mutual entropy over a state family.
inline CapacityReport channel_entangled_capacity(const QuantumChannel& channel, CompoundClass klass,
                                                 const StateFamily& family, const OptimizerOptions& opt = {},
                                                 EntanglementSearch search = {}, LogBase base = LogBase::e) {
  check_family(channel, family);
  search.schatten = opt.inner;
  StateObjective objective = [&](const DensityOperator& rho) {
    const auto r = channel_entangled_mutual(rho, channel, klass, search);
    return ObjectiveValue{r.value.nats(), r.status == BoundStatus::exact, r.evaluations};
  };
  return maximize_over_states(family, objective, opt, base);
}

}  // namespace mutinfo
