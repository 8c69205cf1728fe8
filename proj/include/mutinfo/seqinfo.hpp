#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mutinfo/entropy.hpp"

namespace mutinfo {

inline constexpr char gap_symbol = '*';

enum class Alphabet { base, amino };

inline std::string_view alphabet_symbols(Alphabet a) noexcept {
  return a == Alphabet::base ? std::string_view("ACGT") : std::string_view("ACDEFGHIKLMNPQRSTVWY");
}

inline std::string_view to_string(Alphabet a) noexcept { return a == Alphabet::base ? "base" : "amino"; }

/// Ungapped sequence over the base or amino-acid alphabet (uppercase).
class BioSequence {
 public:
  BioSequence(Alphabet alphabet, std::string symbols, std::string id = {})
      : alphabet_(alphabet), symbols_(std::move(symbols)), id_(std::move(id)) {
    if (symbols_.empty()) throw Error(ErrorCode::invalid_symbol, "sequence '" + id_ + "' is empty");
    const auto allowed = alphabet_symbols(alphabet_);
    for (std::size_t i = 0; i < symbols_.size(); ++i)
      if (allowed.find(symbols_[i]) == std::string_view::npos)
        throw Error(ErrorCode::invalid_symbol, "sequence '" + id_ + "' has symbol '" + std::string(1, symbols_[i]) +
                                                   "' outside the " + std::string(to_string(alphabet_)) +
                                                   " alphabet at position " + std::to_string(i + 1));
  }

  Alphabet alphabet() const noexcept { return alphabet_; }
  const std::string& symbols() const noexcept { return symbols_; }
  const std::string& id() const noexcept { return id_; }
  std::size_t size() const noexcept { return symbols_.size(); }

 private:
  Alphabet alphabet_;
  std::string symbols_;
  std::string id_;
};

/// Global alignment scores. The default triple reproduces the textbook
/// "acbacd" / "adbcacb" alignment with a single gap.
struct Scoring {
  int match = 1;
  int mismatch = -1;
  int gap = -2;
};

struct AlignedPair {
  std::string a_gapped;
  std::string b_gapped;
  int score = 0;

  std::size_t size() const noexcept { return a_gapped.size(); }
};

inline std::string strip_gaps(std::string_view s) {
  std::string out;
  for (char c : s)
    if (c != gap_symbol) out.push_back(c);
  return out;
}

/// Needleman-Wunsch global alignment of raw symbol strings. Traceback
/// prefers the diagonal, then up (gap in b), then left (gap in a).
inline AlignedPair align(std::string_view a, std::string_view b, const Scoring& scoring = {}) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<long> score((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> long& { return score[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = long(i) * scoring.gap;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = long(j) * scoring.gap;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j) {
      const long diag = at(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? scoring.match : scoring.mismatch);
      const long up = at(i - 1, j) + scoring.gap;
      const long left = at(i, j - 1) + scoring.gap;
      at(i, j) = std::max({diag, up, left});
    }

  AlignedPair out;
  out.score = static_cast<int>(at(n, m));
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 &&
        at(i, j) == at(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? scoring.match : scoring.mismatch)) {
      out.a_gapped.push_back(a[--i]);
      out.b_gapped.push_back(b[--j]);
    } else if (i > 0 && at(i, j) == at(i - 1, j) + scoring.gap) {
      out.a_gapped.push_back(a[--i]);
      out.b_gapped.push_back(gap_symbol);
    } else {
      out.a_gapped.push_back(gap_symbol);
      out.b_gapped.push_back(b[--j]);
    }
  }
  std::reverse(out.a_gapped.begin(), out.a_gapped.end());
  std::reverse(out.b_gapped.begin(), out.b_gapped.end());
  return out;
}

inline AlignedPair align(const BioSequence& a, const BioSequence& b, const Scoring& scoring = {}) {
  if (a.alphabet() != b.alphabet())
    throw Error(ErrorCode::alphabet_mismatch, "cannot align " + std::string(to_string(a.alphabet())) + " sequence '" +
                                                  a.id() + "' with " + std::string(to_string(b.alphabet())) +
                                                  " sequence '" + b.id() + "'");
  return align(a.symbols(), b.symbols(), scoring);
}

/// Marginal and joint symbol distributions of an aligned pair. Event 0 is
/// the gap; the remaining events are the symbols in `events` order.
struct SequenceEventSystem {
  std::string events;
  std::vector<long> joint_counts;  // events.size()^2, row = symbol of a
  long columns = 0;

  std::size_t event_count() const noexcept { return events.size(); }

  JointDistribution joint() const {
    const auto e = static_cast<Eigen::Index>(events.size());
    Eigen::MatrixXd r(e, e);
    for (Eigen::Index j = 0; j < e; ++j)
      for (Eigen::Index k = 0; k < e; ++k) r(j, k) = double(joint_counts[j * e + k]) / double(columns);
    return JointDistribution(std::move(r));
  }
  ProbabilityDistribution p() const { return marginal(true); }
  ProbabilityDistribution q() const { return marginal(false); }

 private:
  ProbabilityDistribution marginal(bool rows) const {
    const std::size_t e = events.size();
    std::vector<double> w(e, 0.0);
    for (std::size_t x = 0; x < e; ++x) {
      long count = 0;
      for (std::size_t y = 0; y < e; ++y) count += rows ? joint_counts[x * e + y] : joint_counts[y * e + x];
      w[x] = double(count) / double(columns);
    }
    return ProbabilityDistribution(std::move(w));
  }
};

/// Column counting over an aligned pair. With no `alphabet`, the events are
/// the gap plus the symbols that occur, sorted; absent events carry no entropy.
inline SequenceEventSystem event_system(const AlignedPair& pair, std::string_view alphabet = {}) {
  if (pair.a_gapped.size() != pair.b_gapped.size() || pair.a_gapped.empty())
    throw Error(ErrorCode::length_mismatch, "aligned rows must be nonempty and of equal length");
  std::string events(1, gap_symbol);
  if (!alphabet.empty()) {
    events += alphabet;
  } else {
    std::string seen = pair.a_gapped + pair.b_gapped;
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (char c : seen)
      if (c != gap_symbol) events.push_back(c);
  }
  const std::size_t e = events.size();
  SequenceEventSystem sys{events, std::vector<long>(e * e, 0), long(pair.size())};
  for (std::size_t i = 0; i < pair.size(); ++i) {
    const auto j = events.find(pair.a_gapped[i]);
    const auto k = events.find(pair.b_gapped[i]);
    if (j == std::string::npos || k == std::string::npos)
      throw Error(ErrorCode::invalid_symbol, "aligned symbol outside the event alphabet at column " + std::to_string(i + 1));
    if (j == 0 && k == 0) throw Error(ErrorCode::invalid_argument, "gap-versus-gap column " + std::to_string(i + 1));
    ++sys.joint_counts[j * e + k];
  }
  return sys;
}

/// Entropies of an aligned pair and the rates built from them.
struct EvolutionRate {
  double entropy_a = 0.0;
  double entropy_b = 0.0;
  double mutual = 0.0;
  double ratio = 0.0;  // r(A,B) = (I/S(A) + I/S(B)) / 2
  double rho = 0.0;    // 1 - r
  double rho_prime = 0.0;  // 1 - I / (S(A) + S(B) - I)
  AlignedPair alignment;
};

namespace tolerance {
inline constexpr double degenerate_entropy = 1e-12;
}

/// Align, count, and compute S(A), S(B), I(A,B), r, rho and rho'. The pair is
/// processed in lexicographic order so that rate(A,B) and rate(B,A) agree
/// exactly; entropies and the alignment are reported in argument order.
inline EvolutionRate entropy_evolution_rate(std::string_view a, std::string_view b, const Scoring& scoring = {},
                                            LogBase base = LogBase::two) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::invalid_argument, "sequences must be nonempty");
  const bool swapped = b < a;
  const std::string_view first = swapped ? b : a;
  const std::string_view second = swapped ? a : b;

  auto pair = align(first, second, scoring);
  const auto sys = event_system(pair);
  const double s1 = shannon_entropy(sys.p(), base).value();
  const double s2 = shannon_entropy(sys.q(), base).value();
  if (s1 <= tolerance::degenerate_entropy || s2 <= tolerance::degenerate_entropy)
    throw Error(ErrorCode::degenerate_entropy, "aligned sequence entropy is zero (S(A) = " + std::to_string(swapped ? s2 : s1) +
                                                   ", S(B) = " + std::to_string(swapped ? s1 : s2) +
                                                   "); the entropy ratio is undefined");
  const double mutual = classical_mutual_entropy(sys.joint(), base).value();
  const double ratio = 0.5 * (mutual / s1 + mutual / s2);

  EvolutionRate out;
  out.entropy_a = swapped ? s2 : s1;
  out.entropy_b = swapped ? s1 : s2;
  out.mutual = mutual;
  out.ratio = ratio;
  out.rho = 1.0 - ratio;
  out.rho_prime = 1.0 - mutual / (s1 + s2 - mutual);
  if (swapped) std::swap(pair.a_gapped, pair.b_gapped);
  out.alignment = std::move(pair);
  return out;
}

inline EvolutionRate entropy_evolution_rate(const BioSequence& a, const BioSequence& b, const Scoring& scoring = {},
                                            LogBase base = LogBase::two) {
  if (a.alphabet() != b.alphabet())
    throw Error(ErrorCode::alphabet_mismatch, "sequences '" + a.id() + "' and '" + b.id() + "' use different alphabets");
  return entropy_evolution_rate(a.symbols(), b.symbols(), scoring, base);
}

/// rho'(A,B) = 1 - I / (S(A) + S(B) - I).
inline double alt_rate(std::string_view a, std::string_view b, const Scoring& scoring = {},
                       LogBase base = LogBase::two) {
  return entropy_evolution_rate(a, b, scoring, base).rho_prime;
}

/// Symmetric matrix of pairwise rho values; degenerate pairs are empty.
struct GeneticMatrix {
  std::vector<std::string> labels;
  std::vector<std::optional<double>> distances;  // row-major n x n

  std::size_t size() const noexcept { return labels.size(); }
  const std::optional<double>& at(std::size_t i, std::size_t j) const { return distances[i * size() + j]; }
  std::optional<double>& at(std::size_t i, std::size_t j) { return distances[i * size() + j]; }
  std::size_t missing_count() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = i + 1; j < size(); ++j)
        if (!at(i, j)) ++n;
    return n;
  }
};

/// Raw-symbol version: each unordered pair is computed once.
inline GeneticMatrix genetic_matrix(const std::vector<std::string>& labels, const std::vector<std::string>& seqs,
                                    const Scoring& scoring = {}, LogBase base = LogBase::two) {
  if (seqs.size() < 2) throw Error(ErrorCode::invalid_argument, "a genetic matrix needs at least two sequences");
  if (labels.size() != seqs.size()) throw Error(ErrorCode::length_mismatch, "labels and sequences differ in count");
  const std::size_t n = seqs.size();
  GeneticMatrix m{labels, std::vector<std::optional<double>>(n * n)};
  for (std::size_t i = 0; i < n; ++i) {
    m.at(i, i) = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      try {
        const double rho = entropy_evolution_rate(seqs[i], seqs[j], scoring, base).rho;
        m.at(i, j) = rho;
        m.at(j, i) = rho;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::degenerate_entropy) throw;
      }
    }
  }
  return m;
}

inline GeneticMatrix genetic_matrix(const std::vector<BioSequence>& seqs, const Scoring& scoring = {},
                                    LogBase base = LogBase::two) {
  std::vector<std::string> labels, raw;
  for (const auto& s : seqs) {
    if (s.alphabet() != seqs.front().alphabet())
      throw Error(ErrorCode::alphabet_mismatch, "sequence '" + s.id() + "' uses a different alphabet");
    labels.push_back(s.id());
    raw.push_back(s.symbols());
  }
  return genetic_matrix(labels, raw, scoring, base);
}

}  // namespace mutinfo
