#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "mutinfo/seqinfo.hpp"

namespace mutinfo {

/// Element of GF(4) = GF(2)[x]/(x^2 + x + 1). The two bits are the
/// coefficients of 1 and x, so 0, 1, alpha = x -> 2, alpha^2 = x + 1 -> 3.
class GF4 {
 public:
  constexpr GF4() = default;
  constexpr explicit GF4(std::uint8_t v) : v_(v) {
    if (v > 3) throw Error(ErrorCode::invalid_symbol, "GF(4) element out of range: " + std::to_string(int(v)));
  }

  static constexpr GF4 zero() { return GF4(0); }
  static constexpr GF4 one() { return GF4(1); }
  static constexpr GF4 alpha() { return GF4(2); }
  static constexpr GF4 alpha2() { return GF4(3); }

  constexpr std::uint8_t value() const noexcept { return v_; }
  constexpr bool is_zero() const noexcept { return v_ == 0; }

  friend constexpr GF4 operator+(GF4 a, GF4 b) noexcept { return from_bits(a.v_ ^ b.v_); }
  friend constexpr GF4 operator-(GF4 a, GF4 b) noexcept { return a + b; }
  constexpr GF4 operator-() const noexcept { return *this; }
  friend constexpr GF4 operator*(GF4 a, GF4 b) noexcept {
    if (a.v_ == 0 || b.v_ == 0) return GF4();
    return from_bits(exp_[(log_[a.v_] + log_[b.v_]) % 3]);
  }
  constexpr GF4 inverse() const {
    if (v_ == 0) throw Error(ErrorCode::invalid_argument, "zero has no inverse in GF(4)");
    return from_bits(exp_[(3 - log_[v_]) % 3]);
  }
  friend constexpr GF4 operator/(GF4 a, GF4 b) { return a * b.inverse(); }
  GF4& operator+=(GF4 b) noexcept { return *this = *this + b; }
  GF4& operator-=(GF4 b) noexcept { return *this = *this - b; }
  GF4& operator*=(GF4 b) noexcept { return *this = *this * b; }
  friend constexpr bool operator==(GF4, GF4) = default;

  std::string name() const {
    static constexpr std::array<const char*, 4> names{"0", "1", "a", "a^2"};
    return names[v_];
  }

  static constexpr std::array<GF4, 4> elements() { return {GF4(0), GF4(1), GF4(2), GF4(3)}; }

 private:
  static constexpr GF4 from_bits(int v) noexcept {
    GF4 g;
    g.v_ = static_cast<std::uint8_t>(v);
    return g;
  }
  static constexpr std::array<int, 4> log_{-1, 0, 1, 2};
  static constexpr std::array<int, 3> exp_{1, 2, 3};

  std::uint8_t v_ = 0;
};

using SymbolSequence = std::vector<GF4>;

/// Polynomials over GF(4), coefficient i multiplies x^i.
namespace poly {

inline void trim(SymbolSequence& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

inline int degree(SymbolSequence p) {
  trim(p);
  return static_cast<int>(p.size()) - 1;
}

inline SymbolSequence mod(SymbolSequence a, SymbolSequence g) {
  trim(a);
  trim(g);
  if (g.empty()) throw Error(ErrorCode::invalid_code, "division by the zero polynomial");
  const GF4 lead_inv = g.back().inverse();
  while (a.size() >= g.size()) {
    const GF4 c = a.back() * lead_inv;
    const std::size_t shift = a.size() - g.size();
    for (std::size_t i = 0; i < g.size(); ++i) a[shift + i] -= c * g[i];
    trim(a);
  }
  return a;
}

}  // namespace poly

/// Bijective base -> symbol assignment; symbol v maps back to bases[v].
class BaseMap {
 public:
  BaseMap() : BaseMap(std::array<char, 4>{'A', 'C', 'G', 'T'}) {}
  explicit BaseMap(std::array<char, 4> bases) : bases_(bases) {
    std::string sorted(bases.begin(), bases.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted != "ACGT")
      throw Error(ErrorCode::invalid_argument,
                  "base map must be a permutation of ACGT, got \"" + std::string(bases.begin(), bases.end()) + "\"");
  }

  GF4 to_symbol(char base) const {
    for (std::uint8_t v = 0; v < 4; ++v)
      if (bases_[v] == base) return GF4(v);
    throw Error(ErrorCode::invalid_base, "not a base: '" + std::string(1, base) + "'");
  }
  char to_base(GF4 s) const noexcept { return bases_[s.value()]; }
  const std::array<char, 4>& bases() const noexcept { return bases_; }

 private:
  std::array<char, 4> bases_;
};

inline SymbolSequence base_to_symbols(std::string_view bases, const BaseMap& map = {}) {
  SymbolSequence out;
  out.reserve(bases.size());
  for (std::size_t i = 0; i < bases.size(); ++i) {
    if (bases[i] == gap_symbol) continue;
    try {
      out.push_back(map.to_symbol(bases[i]));
    } catch (const Error&) {
      throw Error(ErrorCode::invalid_base,
                  "not a base: '" + std::string(1, bases[i]) + "' at position " + std::to_string(i + 1));
    }
  }
  return out;
}

inline SymbolSequence base_to_symbols(const BioSequence& seq, const BaseMap& map = {}) {
  if (seq.alphabet() != Alphabet::base)
    throw Error(ErrorCode::alphabet_mismatch, "sequence '" + seq.id() + "' is not a base sequence");
  return base_to_symbols(seq.symbols(), map);
}

inline std::string symbols_to_bases(const SymbolSequence& symbols, const BaseMap& map = {}) {
  std::string out;
  out.reserve(symbols.size());
  for (GF4 s : symbols) out.push_back(map.to_base(s));
  return out;
}

struct EncodedSequence {
  SymbolSequence symbols;
  std::size_t pad = 0;  // zero symbols appended to the information
};

struct BlockFailure {
  std::size_t block = 0;
  SymbolSequence syndrome;
};

struct DecodeResult {
  SymbolSequence info;
  std::size_t corrections = 0;
  std::vector<BlockFailure> uncorrectable;

  const SymbolSequence& require_clean() const {
    if (!uncorrectable.empty()) {
      std::string s;
      for (GF4 g : uncorrectable.front().syndrome) s += g.name() + " ";
      throw Error(ErrorCode::uncorrectable_block, std::to_string(uncorrectable.size()) +
                                                      " uncorrectable block(s); first is block " +
                                                      std::to_string(uncorrectable.front().block) + " with syndrome " + s);
    }
    return info;
  }
};

/// Systematic linear code over GF(4). Block codes carry a parity matrix P
/// (codeword = (i, iP)); convolutional codes are rate 1/2 with parity
/// p_t = sum over taps a of u_{t-a}, transmitted interleaved as u_0 p_0 u_1 p_1 ...
class SystematicCode {
 public:
  enum class Kind { block, convolutional };

  /// General systematic block code; `parity` is k rows of n - k entries.
  static SystematicCode linear(int n, int k, std::vector<SymbolSequence> parity, std::string id = "linear") {
    if (k < 1 || n < k || n > 64)
      throw Error(ErrorCode::invalid_code, "block code needs 1 <= k <= n <= 64, got n = " + std::to_string(n) +
                                               ", k = " + std::to_string(k));
    if (parity.size() != std::size_t(k))
      throw Error(ErrorCode::invalid_code, "parity matrix needs " + std::to_string(k) + " rows");
    for (const auto& row : parity)
      if (row.size() != std::size_t(n - k))
        throw Error(ErrorCode::invalid_code, "parity rows need " + std::to_string(n - k) + " entries");
    SystematicCode c(Kind::block, n, k, std::move(id));
    c.parity_ = std::move(parity);
    c.build_syndrome_table();
    return c;
  }

  /// Cyclic code from generator g (coefficients low degree first), which must
  /// divide x^n - 1. Information symbol i_1 is the coefficient of x^{n-1}.
  static SystematicCode cyclic(int n, int k, SymbolSequence generator, std::string id = "cyclic") {
    poly::trim(generator);
    if (generator.empty()) throw Error(ErrorCode::invalid_code, "generator polynomial is zero");
    if (poly::degree(generator) != n - k)
      throw Error(ErrorCode::invalid_code, "generator degree " + std::to_string(poly::degree(generator)) +
                                               " differs from n - k = " + std::to_string(n - k));
    SymbolSequence xn1(std::size_t(n) + 1);
    xn1[0] = GF4::one();
    xn1[std::size_t(n)] = GF4::one();
    if (!poly::mod(xn1, generator).empty())
      throw Error(ErrorCode::invalid_code, "generator does not divide x^" + std::to_string(n) + " - 1");
    std::vector<SymbolSequence> parity(std::size_t(k), SymbolSequence(std::size_t(n - k)));
    for (int j = 0; j < k; ++j) {
      // remainder of x^{n-1-j} modulo g; parity symbol p_m sits at degree n-k-1-m
      SymbolSequence mono(std::size_t(n - j));
      mono.back() = GF4::one();
      auto r = poly::mod(mono, generator);
      r.resize(std::size_t(n - k));
      for (int m = 0; m < n - k; ++m) parity[j][m] = r[std::size_t(n - k - 1 - m)];
    }
    auto c = linear(n, k, std::move(parity), std::move(id));
    c.generator_ = std::move(generator);
    return c;
  }

  static SystematicCode identity() { return linear(1, 1, {SymbolSequence{}}, "identity"); }

  /// (n, 1) repetition code, cyclic with generator 1 + x + ... + x^{n-1}.
  static SystematicCode repetition(int n) {
    if (n < 1) throw Error(ErrorCode::invalid_code, "repetition length must be positive");
    return cyclic(n, 1, SymbolSequence(std::size_t(n), GF4::one()), "repetition" + std::to_string(n));
  }

  /// Rate 1/2 self-orthogonal code: taps must be distinct, nonnegative, include
  /// 0, and have pairwise distinct differences.
  static SystematicCode convolutional(std::vector<int> taps, std::string id = "conv") {
    std::sort(taps.begin(), taps.end());
    if (taps.empty() || taps.front() != 0)
      throw Error(ErrorCode::invalid_code, "convolutional taps must include 0");
    if (std::adjacent_find(taps.begin(), taps.end()) != taps.end())
      throw Error(ErrorCode::invalid_code, "convolutional taps must be distinct");
    std::vector<int> diffs;
    for (std::size_t a = 0; a < taps.size(); ++a)
      for (std::size_t b = a + 1; b < taps.size(); ++b) diffs.push_back(taps[b] - taps[a]);
    std::sort(diffs.begin(), diffs.end());
    if (std::adjacent_find(diffs.begin(), diffs.end()) != diffs.end())
      throw Error(ErrorCode::invalid_code, "taps are not self-orthogonal (repeated difference)");
    SystematicCode c(Kind::convolutional, 2, 1, std::move(id));
    c.taps_ = std::move(taps);
    return c;
  }

  Kind kind() const noexcept { return kind_; }
  int n() const noexcept { return n_; }
  int k() const noexcept { return k_; }
  const std::string& id() const noexcept { return id_; }
  const std::vector<SymbolSequence>& parity() const noexcept { return parity_; }
  const std::optional<SymbolSequence>& generator() const noexcept { return generator_; }
  const std::vector<int>& taps() const noexcept { return taps_; }
  /// Minimum distance (block codes with k <= 10; 0 if not enumerated).
  int min_distance() const noexcept { return d_min_; }
  /// Guaranteed correctable symbol errors per block, or per constraint span.
  int correctable() const noexcept {
    return kind_ == Kind::block ? t_ : static_cast<int>(taps_.size()) / 2;
  }

  std::size_t encoded_length(std::size_t info_length) const {
    return (info_length + std::size_t(k_) - 1) / std::size_t(k_) * std::size_t(n_);
  }

  SymbolSequence encode_block(const SymbolSequence& info) const {
    SymbolSequence out(info);
    for (int m = 0; m < n_ - k_; ++m) {
      GF4 p;
      for (int j = 0; j < k_; ++j) p += info[std::size_t(j)] * parity_[std::size_t(j)][std::size_t(m)];
      out.push_back(p);
    }
    return out;
  }

  EncodedSequence encode(SymbolSequence info) const {
    EncodedSequence out;
    out.pad = (std::size_t(k_) - info.size() % std::size_t(k_)) % std::size_t(k_);
    info.resize(info.size() + out.pad);
    if (kind_ == Kind::convolutional) {
      for (std::size_t t = 0; t < info.size(); ++t) {
        out.symbols.push_back(info[t]);
        out.symbols.push_back(conv_parity(info, t));
      }
      return out;
    }
    for (std::size_t b = 0; b < info.size(); b += std::size_t(k_)) {
      const SymbolSequence block(info.begin() + std::ptrdiff_t(b), info.begin() + std::ptrdiff_t(b) + k_);
      const auto word = encode_block(block);
      out.symbols.insert(out.symbols.end(), word.begin(), word.end());
    }
    return out;
  }

  DecodeResult decode(const SymbolSequence& received, std::size_t pad = 0) const {
    if (received.size() % std::size_t(n_) != 0)
      throw Error(ErrorCode::length_mismatch, "received length " + std::to_string(received.size()) +
                                                  " is not a multiple of n = " + std::to_string(n_));
    DecodeResult out = kind_ == Kind::block ? decode_blocks(received) : decode_conv(received);
    if (pad > out.info.size()) throw Error(ErrorCode::length_mismatch, "pad exceeds decoded length");
    out.info.resize(out.info.size() - pad);
    return out;
  }

 private:
  SystematicCode(Kind kind, int n, int k, std::string id) : kind_(kind), n_(n), k_(k), id_(std::move(id)) {}

  GF4 conv_parity(const SymbolSequence& u, std::size_t t) const {
    GF4 p;
    for (int a : taps_)
      if (t >= std::size_t(a)) p += u[t - std::size_t(a)];
    return p;
  }

  SymbolSequence syndrome(const SymbolSequence& word) const {
    SymbolSequence s(std::size_t(n_ - k_));
    for (int m = 0; m < n_ - k_; ++m) {
      GF4 v = word[std::size_t(k_ + m)];
      for (int j = 0; j < k_; ++j) v -= word[std::size_t(j)] * parity_[std::size_t(j)][std::size_t(m)];
      s[std::size_t(m)] = v;
    }
    return s;
  }

  static std::uint64_t key(const SymbolSequence& s) {
    std::uint64_t h = 0;
    for (GF4 g : s) h = h * 4 + g.value();
    return h;
  }

  void build_syndrome_table() {
    d_min_ = 0;
    t_ = 0;
    if (n_ == k_) return;
    if (k_ <= 10) {
      // minimum weight over nonzero codewords
      const std::uint64_t words = std::uint64_t(1) << (2 * k_);
      int best = n_;
      for (std::uint64_t w = 1; w < words; ++w) {
        SymbolSequence info(static_cast<std::size_t>(k_));
        for (int j = 0; j < k_; ++j) info[std::size_t(j)] = GF4(std::uint8_t((w >> (2 * j)) & 3));
        const auto c = encode_block(info);
        best = std::min(best, int(std::count_if(c.begin(), c.end(), [](GF4 g) { return !g.is_zero(); })));
      }
      d_min_ = best;
      t_ = (best - 1) / 2;
    }
    // error patterns of weight <= t, lowest weight registered first
    std::vector<int> positions;
    std::function<void(int, int)> rec = [&](int start, int left) {
      if (left == 0) {
        std::size_t combos = 1;
        for (std::size_t p = 0; p < positions.size(); ++p) combos *= 3;
        for (std::size_t v = 0; v < combos; ++v) {
          SymbolSequence e(static_cast<std::size_t>(n_));
          std::size_t rest = v;
          for (int pos : positions) {
            e[std::size_t(pos)] = GF4(std::uint8_t(1 + rest % 3));
            rest /= 3;
          }
          table_.emplace(key(syndrome(e)), e);
        }
        return;
      }
      for (int i = start; i < n_; ++i) {
        positions.push_back(i);
        rec(i + 1, left - 1);
        positions.pop_back();
      }
    };
    for (int w = 1; w <= t_; ++w) rec(0, w);
  }

  DecodeResult decode_blocks(const SymbolSequence& received) const {
    DecodeResult out;
    for (std::size_t b = 0; b * std::size_t(n_) < received.size(); ++b) {
      SymbolSequence word(received.begin() + std::ptrdiff_t(b * std::size_t(n_)),
                          received.begin() + std::ptrdiff_t((b + 1) * std::size_t(n_)));
      const auto s = syndrome(word);
      if (std::any_of(s.begin(), s.end(), [](GF4 g) { return !g.is_zero(); })) {
        const auto it = table_.find(key(s));
        if (it == table_.end()) {
          out.uncorrectable.push_back({b, s});
        } else {
          for (int i = 0; i < n_; ++i) word[std::size_t(i)] -= it->second[std::size_t(i)];
          ++out.corrections;
        }
      }
      out.info.insert(out.info.end(), word.begin(), word.begin() + k_);
    }
    return out;
  }

  // Majority-logic decoding with syndrome feedback. The checks on u_t are the
  // syndromes s_{t+a}; u_t is corrected by v when more than half of all J
  // checks equal v, so a truncated tail is never miscorrected.
  DecodeResult decode_conv(const SymbolSequence& received) const {
    DecodeResult out;
    const std::size_t len = received.size() / 2;
    SymbolSequence u(len), p(len);
    for (std::size_t t = 0; t < len; ++t) {
      u[t] = received[2 * t];
      p[t] = received[2 * t + 1];
    }
    SymbolSequence s(len);
    for (std::size_t t = 0; t < len; ++t) s[t] = p[t] - conv_parity(u, t);
    const std::size_t J = taps_.size();
    for (std::size_t t = 0; t < len; ++t) {
      std::array<std::size_t, 4> votes{};
      for (int a : taps_)
        if (t + std::size_t(a) < len) ++votes[s[t + std::size_t(a)].value()];
      for (std::uint8_t v = 1; v < 4; ++v)
        if (2 * votes[v] > J) {
          const GF4 e(v);
          u[t] -= e;
          for (int a : taps_)
            if (t + std::size_t(a) < len) s[t + std::size_t(a)] -= e;
          ++out.corrections;
          break;
        }
    }
    out.info = std::move(u);
    return out;
  }

  Kind kind_;
  int n_;
  int k_;
  std::string id_;
  std::vector<SymbolSequence> parity_;
  std::optional<SymbolSequence> generator_;
  std::vector<int> taps_;
  int d_min_ = 0;
  int t_ = 0;
  std::map<std::uint64_t, SymbolSequence> table_;
};

/// Base sequence -> symbols -> codewords -> bases.
inline std::string coding_pipeline(std::string_view bases, const SystematicCode& code, const BaseMap& map = {}) {
  return symbols_to_bases(code.encode(base_to_symbols(bases, map)).symbols, map);
}

inline BioSequence coding_pipeline(const BioSequence& seq, const SystematicCode& code, const BaseMap& map = {}) {
  if (seq.alphabet() != Alphabet::base)
    throw Error(ErrorCode::alphabet_mismatch, "sequence '" + seq.id() + "' is not a base sequence");
  return BioSequence(Alphabet::base, coding_pipeline(seq.symbols(), code, map), seq.id());
}

/// One codon per amino acid for back-translation.
class CodonTable {
 public:
  CodonTable() = default;
  explicit CodonTable(std::map<char, std::string> codons) {
    for (auto& [amino, codon] : codons) set(amino, codon);
  }

  /// Most frequent human codon for each amino acid.
  static CodonTable human_most_frequent() {
    return CodonTable({{'A', "GCC"}, {'R', "AGA"}, {'N', "AAC"}, {'D', "GAC"}, {'C', "TGC"},
                       {'Q', "CAG"}, {'E', "GAG"}, {'G', "GGC"}, {'H', "CAC"}, {'I', "ATC"},
                       {'L', "CTG"}, {'K', "AAG"}, {'M', "ATG"}, {'F', "TTC"}, {'P', "CCC"},
                       {'S', "AGC"}, {'T', "ACC"}, {'W', "TGG"}, {'Y', "TAC"}, {'V', "GTG"}});
  }

  void set(char amino, const std::string& codon) {
    if (alphabet_symbols(Alphabet::amino).find(amino) == std::string_view::npos)
      throw Error(ErrorCode::invalid_symbol, "not an amino acid: '" + std::string(1, amino) + "'");
    if (codon.size() != 3 || codon.find_first_not_of("ACGT") != std::string::npos)
      throw Error(ErrorCode::invalid_argument, "codon for '" + std::string(1, amino) + "' must be three bases, got \"" +
                                                   codon + "\"");
    codons_[amino] = codon;
  }

  const std::string& codon(char amino) const {
    const auto it = codons_.find(amino);
    if (it == codons_.end())
      throw Error(ErrorCode::missing_codon, "no codon configured for amino acid '" + std::string(1, amino) + "'");
    return it->second;
  }

  const std::map<char, std::string>& entries() const noexcept { return codons_; }

 private:
  std::map<char, std::string> codons_;
};

inline std::string amino_to_base(std::string_view aminos, const CodonTable& table = CodonTable::human_most_frequent()) {
  std::string out;
  out.reserve(3 * aminos.size());
  for (char a : aminos) out += table.codon(a);
  return out;
}

inline BioSequence amino_to_base(const BioSequence& seq, const CodonTable& table = CodonTable::human_most_frequent()) {
  if (seq.alphabet() != Alphabet::amino)
    throw Error(ErrorCode::alphabet_mismatch, "sequence '" + seq.id() + "' is not an amino-acid sequence");
  return BioSequence(Alphabet::base, amino_to_base(seq.symbols(), table), seq.id());
}

inline constexpr char stop_symbol = 'X';

/// Standard genetic code. Stop codons become 'X'; a trailing partial codon
/// is dropped.
inline std::string base_to_amino(std::string_view bases) {
  static constexpr std::string_view table = "FFLLSSSSYYXXCCXWLLLLPPPPHHQQRRRRIIIMTTTTNNKKSSRRVVVVAAAADDEEGGGG";
  auto index = [](char b) -> int {
    switch (b) {
      case 'T': return 0;
      case 'C': return 1;
      case 'A': return 2;
      case 'G': return 3;
      default: throw Error(ErrorCode::invalid_symbol, "not a base: '" + std::string(1, b) + "'");
    }
  };
  std::string out;
  for (std::size_t i = 0; i + 3 <= bases.size(); i += 3)
    out.push_back(table[std::size_t(16 * index(bases[i]) + 4 * index(bases[i + 1]) + index(bases[i + 2]))]);
  return out;
}

/// Coded form of a sequence. Amino sequences are back-translated, coded, and
/// translated forward again.
inline std::string coded_sequence(const BioSequence& seq, const SystematicCode& code, const BaseMap& map = {},
                                  const CodonTable& table = CodonTable::human_most_frequent()) {
  if (seq.alphabet() == Alphabet::base) return coding_pipeline(seq.symbols(), code, map);
  return base_to_amino(coding_pipeline(amino_to_base(seq.symbols(), table), code, map));
}

struct StructureIndexReport {
  double d_c = 0.0;
  std::vector<double> pair_terms;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t excluded = 0;  // pairs with zero entropy before or after coding
  std::string code_id;
};

/// Mean over sequence pairs of |rho(A_i, A_j) - rho(A_i^C, A_j^C)|. Coded
/// sequences are aligned afresh.
inline StructureIndexReport structure_index(const std::vector<BioSequence>& seqs, const SystematicCode& code,
                                            const Scoring& scoring = {}, LogBase base = LogBase::two,
                                            const BaseMap& map = {},
                                            const CodonTable& table = CodonTable::human_most_frequent()) {
  if (seqs.size() < 2) throw Error(ErrorCode::invalid_argument, "structure index needs at least two sequences");
  for (const auto& s : seqs)
    if (s.alphabet() != seqs.front().alphabet())
      throw Error(ErrorCode::alphabet_mismatch, "sequence '" + s.id() + "' uses a different alphabet");
  std::vector<std::string> coded;
  for (const auto& s : seqs) coded.push_back(coded_sequence(s, code, map, table));

  StructureIndexReport out;
  out.code_id = code.id();
  for (std::size_t i = 0; i < seqs.size(); ++i)
    for (std::size_t j = i + 1; j < seqs.size(); ++j) {
      try {
        const double before = entropy_evolution_rate(seqs[i].symbols(), seqs[j].symbols(), scoring, base).rho;
        const double after = entropy_evolution_rate(coded[i], coded[j], scoring, base).rho;
        out.pair_terms.push_back(std::abs(before - after));
        out.pairs.emplace_back(i, j);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::degenerate_entropy) throw;
        ++out.excluded;
      }
    }
  if (out.pair_terms.empty())
    throw Error(ErrorCode::degenerate_entropy, "every sequence pair has zero entropy; the structure index is undefined");
  out.d_c = std::accumulate(out.pair_terms.begin(), out.pair_terms.end(), 0.0) / double(out.pair_terms.size());
  return out;
}

}  // namespace mutinfo
