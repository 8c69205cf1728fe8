#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "mutinfo/operator.hpp"

namespace mutinfo {

enum class LogBase { e, two };

inline std::string_view to_string(LogBase base) noexcept { return base == LogBase::two ? "2" : "e"; }

inline LogBase parse_log_base(std::string_view text) {
  if (text == "2") return LogBase::two;
  if (text == "e") return LogBase::e;
  throw Error(ErrorCode::parse_error, "log base must be \"2\" or \"e\", got \"" + std::string(text) + "\"");
}

namespace tolerance {
/// Eigenvalues / probabilities at or below this are outside the support.
inline constexpr double support_floor = 1e-10;
/// Minimum squared norm of a support vector after projection onto range(sigma).
inline constexpr double support_projection = 1e-8;
inline constexpr double classical_support = 1e-12;
inline constexpr double distribution_sum = 1e-10;
inline constexpr double entropy_clamp = 1e-12;
}  // namespace tolerance

/// Scalar entropy result, possibly +infinity, tagged with its logarithm base.
class EntropyValue {
 public:
  /// `nats` is a value computed with natural logarithms.
  static EntropyValue from_nats(double nats, LogBase base) {
    if (nats < 0.0 && nats >= -tolerance::entropy_clamp) nats = 0.0;
    return EntropyValue(base == LogBase::two ? nats / std::numbers::ln2 : nats, false, base);
  }
  static EntropyValue infinite(LogBase base) { return EntropyValue(0.0, true, base); }

  /// Value in this object's base; +inf when infinite.
  double value() const noexcept {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }
  bool is_infinite() const noexcept { return infinite_; }
  LogBase base() const noexcept { return base_; }

  double nats() const noexcept {
    if (infinite_) return std::numeric_limits<double>::infinity();
    return base_ == LogBase::two ? value_ * std::numbers::ln2 : value_;
  }

  EntropyValue in(LogBase target) const {
    return infinite_ ? infinite(target) : from_nats(nats(), target);
  }

 private:
  EntropyValue(double v, bool inf, LogBase base) : value_(v), infinite_(inf), base_(base) {}

  double value_;
  bool infinite_;
  LogBase base_;
};

inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

class ProbabilityDistribution {
 public:
  explicit ProbabilityDistribution(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw Error(ErrorCode::invalid_distribution, "distribution has no events");
    double sum = 0.0;
    for (std::size_t k = 0; k < weights_.size(); ++k) {
      const double w = weights_[k];
      if (!(w >= 0.0 && w <= 1.0))
        throw Error(ErrorCode::invalid_distribution,
                    "weight " + std::to_string(k) + " = " + std::to_string(w) + " outside [0,1]");
      sum += w;
    }
    if (std::abs(sum - 1.0) > tolerance::distribution_sum)
      throw Error(ErrorCode::invalid_distribution,
                  "weights sum to " + std::to_string(sum) + ", deviation " + std::to_string(std::abs(sum - 1.0)));
  }

  static ProbabilityDistribution uniform(std::size_t n) {
    return ProbabilityDistribution(std::vector<double>(n, 1.0 / double(n)));
  }

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t k) const { return weights_[k]; }
  const std::vector<double>& weights() const noexcept { return weights_; }

 private:
  std::vector<double> weights_;
};

/// Joint distribution r_{jk}; marginals p_j = sum_k r_{jk} (rows) and
/// q_k = sum_j r_{jk} (columns).
class JointDistribution {
 public:
  explicit JointDistribution(Eigen::MatrixXd r) : r_(std::move(r)) {
    if (r_.size() == 0) throw Error(ErrorCode::invalid_distribution, "joint distribution is empty");
    if (r_.minCoeff() < 0.0)
      throw Error(ErrorCode::invalid_distribution, "joint distribution has a negative entry");
    const double sum = r_.sum();
    if (std::abs(sum - 1.0) > tolerance::distribution_sum)
      throw Error(ErrorCode::invalid_distribution, "joint distribution sums to " + std::to_string(sum));
  }

  /// Also checks declared marginals against the row and column sums.
  JointDistribution(Eigen::MatrixXd r, const ProbabilityDistribution& p, const ProbabilityDistribution& q)
      : JointDistribution(std::move(r)) {
    if (p.size() != std::size_t(r_.rows()) || q.size() != std::size_t(r_.cols()))
      throw Error(ErrorCode::length_mismatch, "declared marginals do not match joint shape");
    const auto rows = row_marginal();
    const auto cols = column_marginal();
    for (std::size_t j = 0; j < p.size(); ++j)
      if (std::abs(rows[j] - p[j]) > tolerance::distribution_sum)
        throw Error(ErrorCode::invalid_distribution, "row sum " + std::to_string(j) + " differs from p");
    for (std::size_t k = 0; k < q.size(); ++k)
      if (std::abs(cols[k] - q[k]) > tolerance::distribution_sum)
        throw Error(ErrorCode::invalid_distribution, "column sum " + std::to_string(k) + " differs from q");
  }

  const Eigen::MatrixXd& matrix() const noexcept { return r_; }
  Eigen::Index rows() const noexcept { return r_.rows(); }
  Eigen::Index cols() const noexcept { return r_.cols(); }

  std::vector<double> row_marginal() const {
    std::vector<double> p(r_.rows(), 0.0);
    for (Eigen::Index j = 0; j < r_.rows(); ++j) p[j] = r_.row(j).sum();
    return p;
  }
  std::vector<double> column_marginal() const {
    std::vector<double> q(r_.cols(), 0.0);
    for (Eigen::Index k = 0; k < r_.cols(); ++k) q[k] = r_.col(k).sum();
    return q;
  }

 private:
  Eigen::MatrixXd r_;
};

namespace detail {

inline double shannon_nats(const std::vector<double>& p) {
  double s = 0.0;
  for (double x : p) s -= xlogx(x);
  return s;
}

inline double relative_nats(const std::vector<double>& mu, const std::vector<double>& nu, bool& infinite) {
  double s = 0.0;
  infinite = false;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    if (mu[k] <= 0.0) continue;
    if (nu[k] <= tolerance::classical_support) {
      if (mu[k] > tolerance::classical_support) {
        infinite = true;
        return 0.0;
      }
      continue;
    }
    s += mu[k] * std::log(mu[k] / nu[k]);
  }
  return s;
}

}  // namespace detail

inline EntropyValue von_neumann_entropy(const DensityOperator& rho, LogBase base = LogBase::e) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < rho.eigenvalues().size(); ++k) s -= xlogx(rho.eigenvalues()(k));
  return EntropyValue::from_nats(s, base);
}

/// Umegaki relative entropy tr rho (log rho - log sigma); +inf unless
/// supp(rho) ⊆ supp(sigma).
inline EntropyValue quantum_relative_entropy(const DensityOperator& rho, const DensityOperator& sigma,
                                             LogBase base = LogBase::e) {
  if (rho.dim() != sigma.dim())
    throw Error(ErrorCode::dimension_mismatch, "relative entropy of states with dims " +
                                                   std::to_string(rho.dim()) + " and " + std::to_string(sigma.dim()));
  const int d = rho.dim();
  const RealVector& lam = rho.eigenvalues();
  const RealVector& mu = sigma.eigenvalues();
  // |<u_i|w_j>|^2 between eigenvectors of rho and sigma
  const Eigen::MatrixXd overlap = (rho.eigenvectors().adjoint() * sigma.eigenvectors()).cwiseAbs2();

  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    if (lam(i) <= tolerance::support_floor) continue;
    double in_range = 0.0;
    for (int j = 0; j < d; ++j)
      if (mu(j) > tolerance::support_floor) in_range += overlap(i, j);
    if (in_range < 1.0 - tolerance::support_projection) return EntropyValue::infinite(base);
    double cross = 0.0;
    for (int j = 0; j < d; ++j)
      if (mu(j) > tolerance::support_floor) cross += overlap(i, j) * std::log(mu(j));
    s += lam(i) * std::log(lam(i)) - lam(i) * cross;
  }
  return EntropyValue::from_nats(s, base);
}

inline EntropyValue shannon_entropy(const ProbabilityDistribution& p, LogBase base = LogBase::e) {
  return EntropyValue::from_nats(detail::shannon_nats(p.weights()), base);
}

inline EntropyValue classical_relative_entropy(const ProbabilityDistribution& mu, const ProbabilityDistribution& nu,
                                               LogBase base = LogBase::e) {
  if (mu.size() != nu.size())
    throw Error(ErrorCode::length_mismatch, "relative entropy of distributions with " + std::to_string(mu.size()) +
                                                " and " + std::to_string(nu.size()) + " events");
  bool infinite = false;
  const double s = detail::relative_nats(mu.weights(), nu.weights(), infinite);
  return infinite ? EntropyValue::infinite(base) : EntropyValue::from_nats(s, base);
}

/// I = sum_{jk} r_{jk} log(r_{jk} / (p_j q_k)) with marginals taken from r.
inline EntropyValue classical_mutual_entropy(const JointDistribution& r, LogBase base = LogBase::e) {
  const auto p = r.row_marginal();
  const auto q = r.column_marginal();
  double s = 0.0;
  for (Eigen::Index j = 0; j < r.rows(); ++j)
    for (Eigen::Index k = 0; k < r.cols(); ++k) {
      const double x = r.matrix()(j, k);
      if (x > 0.0) s += x * std::log(x / (p[j] * q[k]));
    }
  return EntropyValue::from_nats(s, base);
}

}  // namespace mutinfo
