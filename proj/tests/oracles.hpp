#pragma once

// Reference computations used by the tests. They take deliberately different
// routes from the library (explicit index loops, full matrix logarithms,
// exhaustive enumeration) so agreement is meaningful.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

/// Element-wise partial trace: keep = 1 keeps the first factor.
inline Matrix partial_trace(const Matrix& m, int d1, int d2, int keep) {
  if (keep == 1) {
    Matrix out = Matrix::Zero(d1, d1);
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d1; ++j)
        for (int k = 0; k < d2; ++k) out(i, j) += m(i * d2 + k, j * d2 + k);
    return out;
  }
  Matrix out = Matrix::Zero(d2, d2);
  for (int k = 0; k < d2; ++k)
    for (int l = 0; l < d2; ++l)
      for (int i = 0; i < d1; ++i) out(k, l) += m(i * d2 + k, i * d2 + l);
  return out;
}

/// log of a positive definite matrix via its eigendecomposition.
inline Matrix logm(const Matrix& h) {
  Eigen::ComplexEigenSolver<Matrix> es(h);
  Matrix v = es.eigenvectors();
  Eigen::VectorXcd lam = es.eigenvalues();
  for (Eigen::Index i = 0; i < lam.size(); ++i) lam(i) = std::log(lam(i).real());
  return v * lam.asDiagonal() * v.inverse();
}

/// -tr rho log rho from the characteristic spectrum (general eigen solver).
inline double von_neumann(const Matrix& rho) {
  Eigen::ComplexEigenSolver<Matrix> es(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double x = es.eigenvalues()(i).real();
    if (x > 1e-300) s -= x * std::log(x);
  }
  return s;
}

/// tr rho (log rho - log sigma) for full-rank rho and sigma.
inline double umegaki_full_rank(const Matrix& rho, const Matrix& sigma) {
  return (rho * (logm(rho) - logm(sigma))).trace().real();
}

inline double shannon(const std::vector<double>& p) {
  double s = 0.0;
  for (double x : p)
    if (x > 0.0) s -= x * std::log(x);
  return s;
}

/// I = H(p) + H(q) - H(r).
inline double mutual_from_entropies(const Eigen::MatrixXd& r) {
  std::vector<double> p(r.rows(), 0.0), q(r.cols(), 0.0), flat;
  for (Eigen::Index j = 0; j < r.rows(); ++j)
    for (Eigen::Index k = 0; k < r.cols(); ++k) {
      p[j] += r(j, k);
      q[k] += r(j, k);
      flat.push_back(r(j, k));
    }
  return shannon(p) + shannon(q) - shannon(flat);
}

/// Hilbert-Schmidt random state, own generator.
inline Matrix random_state(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = Complex(n(rng), n(rng));
  Matrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

/// Best global alignment score by enumerating every alignment.
inline int best_alignment_score(const std::string& a, const std::string& b, int match, int mismatch, int gap) {
  std::function<int(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> int {
    if (i == a.size() && j == b.size()) return 0;
    int best = std::numeric_limits<int>::min();
    if (i < a.size() && j < b.size()) best = std::max(best, (a[i] == b[j] ? match : mismatch) + go(i + 1, j + 1));
    if (i < a.size()) best = std::max(best, gap + go(i + 1, j));
    if (j < b.size()) best = std::max(best, gap + go(i, j + 1));
    return best;
  };
  return go(0, 0);
}

inline int alignment_score(const std::string& a, const std::string& b, int match, int mismatch, int gap) {
  int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == '*' || b[i] == '*') s += gap;
    else s += a[i] == b[i] ? match : mismatch;
  }
  return s;
}

/// GF(4) product by carry-less multiplication reduced modulo x^2 + x + 1.
inline int gf4_mul(int a, int b) {
  int prod = 0;
  for (int i = 0; i < 2; ++i)
    if (b & (1 << i)) prod ^= a << i;
  if (prod & 4) prod ^= 0b111;
  return prod;
}

inline std::string random_string(std::mt19937_64& rng, const std::string& alphabet, std::size_t min_len,
                                 std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::string s(len(rng), ' ');
  for (auto& c : s) c = alphabet[pick(rng)];
  return s;
}

/// Standard genetic code, forward translation.
inline char translate(const std::string& codon) {
  static const std::map<std::string, char> table = [] {
    const std::string bases = "TCAG";
    const std::string aminos = "FFLLSSSSYY**CC*WLLLLPPPPHHQQRRRRIIIMTTTTNNKKSSRRVVVVAAAADDEEGGGG";
    std::map<std::string, char> t;
    int n = 0;
    for (char x : bases)
      for (char y : bases)
        for (char z : bases) t[std::string{x, y, z}] = aminos[n++];
    return t;
  }();
  return table.at(codon);
}

}  // namespace oracle
