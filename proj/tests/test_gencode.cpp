#include <gtest/gtest.h>

#include <numeric>

#include "mutinfo.hpp"
#include "oracles.hpp"

using namespace mutinfo;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::invalid_argument;
}

GF4 sym(int v) { return GF4(static_cast<std::uint8_t>(v)); }

// Polynomials as int coefficient lists, low degree first.
using IntPoly = std::vector<int>;

int gf4_inv(int a) {
  for (int b = 1; b < 4; ++b)
    if (oracle::gf4_mul(a, b) == 1) return b;
  return -1;
}

// Remainder of a modulo g by long division.
IntPoly remainder(IntPoly a, const IntPoly& g) {
  const int dg = int(g.size()) - 1;
  const int lead_inv = gf4_inv(g.back());
  for (int i = int(a.size()) - 1; i >= dg; --i) {
    if (a[std::size_t(i)] == 0) continue;
    const int f = oracle::gf4_mul(a[std::size_t(i)], lead_inv);
    for (int j = 0; j <= dg; ++j) a[std::size_t(i - dg + j)] ^= oracle::gf4_mul(f, g[std::size_t(j)]);
  }
  a.resize(std::size_t(std::max(dg, 0)));
  return a;
}

bool is_zero(const IntPoly& p) {
  return std::all_of(p.begin(), p.end(), [](int c) { return c == 0; });
}

// Every monic divisor of x^n - 1 with degree n - k.
std::vector<IntPoly> cyclic_generators(int n, int k) {
  IntPoly xn1(std::size_t(n) + 1, 0);
  xn1.front() = xn1.back() = 1;
  std::vector<IntPoly> out;
  const int free = n - k;
  for (int w = 0; w < (1 << (2 * free)); ++w) {
    IntPoly g(std::size_t(free) + 1, 0);
    for (int j = 0; j < free; ++j) g[std::size_t(j)] = (w >> (2 * j)) & 3;
    g.back() = 1;
    if (is_zero(remainder(xn1, g))) out.push_back(g);
  }
  return out;
}

SymbolSequence to_symbols(const IntPoly& p) {
  SymbolSequence s;
  for (int c : p) s.push_back(sym(c));
  return s;
}

SymbolSequence word_of(std::uint64_t w, int len) {
  SymbolSequence s(static_cast<std::size_t>(len));
  for (int j = 0; j < len; ++j) s[std::size_t(j)] = sym(int((w >> (2 * j)) & 3));
  return s;
}

int weight(const SymbolSequence& s) {
  return int(std::count_if(s.begin(), s.end(), [](GF4 g) { return !g.is_zero(); }));
}

}  // namespace

TEST(GF4, TablesMatchCarrylessOracle) {
  for (auto a : GF4::elements())
    for (auto b : GF4::elements()) {
      EXPECT_EQ((a + b).value(), a.value() ^ b.value());
      EXPECT_EQ((a - b).value(), a.value() ^ b.value());
      EXPECT_EQ((a * b).value(), oracle::gf4_mul(a.value(), b.value()));
    }
  EXPECT_EQ((GF4::alpha() * GF4::alpha()).value(), GF4::alpha2().value());
  EXPECT_EQ(GF4::alpha2().name(), "a^2");
}

TEST(GF4, FieldAxiomsExhaustive) {
  const auto el = GF4::elements();
  for (auto a : el) {
    EXPECT_EQ(a + GF4::zero(), a);
    EXPECT_EQ(a * GF4::one(), a);
    EXPECT_EQ(a + (-a), GF4::zero());
    if (!a.is_zero()) EXPECT_EQ(a * a.inverse(), GF4::one());
    for (auto b : el) {
      EXPECT_EQ(a + b, b + a);
      EXPECT_EQ(a * b, b * a);
      if (!b.is_zero()) EXPECT_EQ((a / b) * b, a);
      for (auto c : el) {
        EXPECT_EQ((a + b) + c, a + (b + c));
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
      }
    }
  }
  EXPECT_EQ(code_of([] { GF4::zero().inverse(); }), ErrorCode::invalid_argument);
}

TEST(BaseMap, DefaultMapping) {
  const auto s = base_to_symbols("ACGT");
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s[0], GF4::zero());
  EXPECT_EQ(s[1], GF4::one());
  EXPECT_EQ(s[2], GF4::alpha());
  EXPECT_EQ(s[3], GF4::alpha2());
  EXPECT_EQ(symbols_to_bases(s), "ACGT");
}

TEST(BaseMap, EveryPermutationRoundTrips) {
  std::mt19937_64 gen(1);
  std::array<char, 4> perm{'A', 'C', 'G', 'T'};
  int count = 0;
  do {
    const BaseMap map(perm);
    for (int trial = 0; trial < 5; ++trial) {
      const auto seq = oracle::random_string(gen, "ACGT", 1, 60);
      EXPECT_EQ(symbols_to_bases(base_to_symbols(seq, map), map), seq);
    }
    for (std::uint8_t v = 0; v < 4; ++v) EXPECT_EQ(map.to_symbol(perm[v]).value(), v);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  EXPECT_EQ(count, 24);
}

TEST(BaseMap, InvalidInputs) {
  EXPECT_EQ(code_of([] { BaseMap(std::array<char, 4>{'A', 'A', 'G', 'T'}); }), ErrorCode::invalid_argument);
  try {
    base_to_symbols("ACNT");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_base);
    EXPECT_NE(std::string(e.what()).find("position 3"), std::string::npos);
  }
  EXPECT_EQ(base_to_symbols("A*C").size(), 2u);
}

TEST(IdentityCode, EncodeAndDecodeAreIdentity) {
  const auto code = SystematicCode::identity();
  std::mt19937_64 gen(2);
  const auto info = base_to_symbols(oracle::random_string(gen, "ACGT", 1, 40));
  const auto enc = code.encode(info);
  EXPECT_EQ(enc.symbols, info);
  EXPECT_EQ(enc.pad, 0u);
  EXPECT_EQ(code.decode(enc.symbols).require_clean(), info);
}

TEST(CyclicCode, OracleGeneratorsExist) {
  // x^3 - 1 = (x + 1)(x + a)(x + a^2) over GF(4)
  EXPECT_EQ(cyclic_generators(3, 2).size(), 3u);
  EXPECT_EQ(cyclic_generators(3, 1).size(), 3u);
  EXPECT_FALSE(cyclic_generators(5, 3).empty());
}

TEST(CyclicCode, SystematicRoundTripAndDivisibilityExhaustive) {
  int codes = 0;
  for (int n = 2; n <= 6; ++n)
    for (int k = 1; k <= std::min(4, n - 1); ++k)
      for (const auto& g : cyclic_generators(n, k)) {
        const auto code = SystematicCode::cyclic(n, k, to_symbols(g));
        ++codes;
        IntPoly xn1(std::size_t(n) + 1, 0);
        xn1.front() = xn1.back() = 1;
        int d_min = n;
        for (std::uint64_t w = 0; w < (std::uint64_t(1) << (2 * k)); ++w) {
          const auto info = word_of(w, k);
          const auto word = code.encode_block(info);
          ASSERT_EQ(word.size(), std::size_t(n));
          EXPECT_TRUE(std::equal(info.begin(), info.end(), word.begin()));
          // word symbol j is the coefficient of x^{n-1-j}
          IntPoly c(static_cast<std::size_t>(n));
          for (int j = 0; j < n; ++j) c[std::size_t(n - 1 - j)] = word[std::size_t(j)].value();
          EXPECT_TRUE(is_zero(remainder(c, g)));
          EXPECT_EQ(code.decode(word).require_clean(), info);
          if (w) d_min = std::min(d_min, weight(word));
        }
        EXPECT_EQ(code.min_distance(), d_min);
        EXPECT_EQ(code.correctable(), (d_min - 1) / 2);
      }
  EXPECT_GT(codes, 10);
}

TEST(CyclicCode, CorrectsUpToDesignedErrorsExhaustive) {
  for (int n = 3; n <= 5; ++n)
    for (int k = 1; k <= n - 2; ++k)
      for (const auto& g : cyclic_generators(n, k)) {
        const auto code = SystematicCode::cyclic(n, k, to_symbols(g));
        if (code.correctable() < 1) continue;
        for (std::uint64_t w = 0; w < (std::uint64_t(1) << (2 * k)); ++w) {
          const auto info = word_of(w, k);
          const auto word = code.encode_block(info);
          for (int pos = 0; pos < n; ++pos)
            for (int v = 1; v < 4; ++v) {
              auto bad = word;
              bad[std::size_t(pos)] += sym(v);
              const auto r = code.decode(bad);
              EXPECT_EQ(r.require_clean(), info);
              EXPECT_EQ(r.corrections, 1u);
            }
        }
      }
}

TEST(RepetitionCode, SingleErrorCorrectionExhaustive) {
  const auto code = SystematicCode::repetition(3);
  EXPECT_EQ(code.min_distance(), 3);
  EXPECT_EQ(code.correctable(), 1);
  for (auto i : GF4::elements()) {
    const auto word = code.encode_block({i});
    EXPECT_EQ(word, (SymbolSequence{i, i, i}));
    for (int pos = 0; pos < 3; ++pos)
      for (auto e : GF4::elements()) {
        auto bad = word;
        bad[std::size_t(pos)] += e;
        EXPECT_EQ(code.decode(bad).require_clean(), SymbolSequence{i});
      }
  }
}

TEST(RepetitionCode, DoubleErrorsAreReportedPerBlock) {
  const auto code = SystematicCode::repetition(4);  // d = 4, t = 1
  SymbolSequence bad{GF4::zero(), GF4::zero(), GF4::zero(), GF4::zero(), GF4::one(), GF4::one(), GF4::zero(),
                     GF4::zero()};
  const auto r = code.decode(bad);
  ASSERT_EQ(r.uncorrectable.size(), 1u);
  EXPECT_EQ(r.uncorrectable[0].block, 1u);
  EXPECT_EQ(code_of([&] { r.require_clean(); }), ErrorCode::uncorrectable_block);
}

TEST(LinearCode, ZeroParityInterleavesSymbolZero) {
  const auto code = SystematicCode::linear(2, 1, {SymbolSequence{GF4::zero()}});
  EXPECT_EQ(coding_pipeline("CGTA", code), "CAGATAAA");
}

TEST(LinearCode, ShapeValidation) {
  EXPECT_EQ(code_of([] { SystematicCode::linear(3, 2, {SymbolSequence{GF4::one()}}); }), ErrorCode::invalid_code);
  EXPECT_EQ(code_of([] { SystematicCode::linear(2, 3, {}); }), ErrorCode::invalid_code);
  EXPECT_EQ(code_of([] { SystematicCode::cyclic(4, 2, {GF4::one(), GF4::one()}); }), ErrorCode::invalid_code);
  // x^2 + x + 1 has degree 2 but does not divide x^4 - 1
  EXPECT_EQ(code_of([] { SystematicCode::cyclic(4, 2, {GF4::one(), GF4::one(), GF4::one()}); }),
            ErrorCode::invalid_code);
  EXPECT_EQ(code_of([] { SystematicCode::convolutional({1, 2}); }), ErrorCode::invalid_code);
  EXPECT_EQ(code_of([] { SystematicCode::convolutional({0, 1, 2}); }), ErrorCode::invalid_code);
}

TEST(Pipeline, LengthLawAndPaddedRoundTrip) {
  std::mt19937_64 gen(3);
  const std::vector<SystematicCode> codes{SystematicCode::identity(), SystematicCode::repetition(3),
                                          SystematicCode::cyclic(3, 2, {GF4::one(), GF4::one()}),
                                          SystematicCode::cyclic(5, 3, to_symbols(cyclic_generators(5, 3).front())),
                                          SystematicCode::convolutional({0, 1, 3})};
  for (const auto& code : codes)
    for (int trial = 0; trial < 40; ++trial) {
      const auto seq = oracle::random_string(gen, "ACGT", 1, 50);
      const auto coded = coding_pipeline(seq, code);
      const std::size_t k = std::size_t(code.k()), n = std::size_t(code.n());
      EXPECT_EQ(coded.size(), (seq.size() + k - 1) / k * n) << code.id();
      const auto enc = code.encode(base_to_symbols(seq));
      EXPECT_EQ(symbols_to_bases(enc.symbols), coded);
      const auto back = code.decode(base_to_symbols(coded), enc.pad);
      EXPECT_EQ(symbols_to_bases(back.require_clean()), seq) << code.id();
      EXPECT_EQ(back.corrections, 0u);
    }
}

TEST(ConvolutionalCode, ParityFollowsTaps) {
  const auto code = SystematicCode::convolutional({0, 1, 3});
  const SymbolSequence u{GF4::one(), GF4::zero(), GF4::zero(), GF4::zero(), GF4::zero()};
  const auto enc = code.encode(u).symbols;
  // an impulse at t = 0 yields parity at t = 0, 1, 3
  const SymbolSequence parity{enc[1], enc[3], enc[5], enc[7], enc[9]};
  EXPECT_EQ(parity, (SymbolSequence{GF4::one(), GF4::one(), GF4::zero(), GF4::one(), GF4::zero()}));
}

TEST(ConvolutionalCode, MajorityLogicCorrectsIsolatedErrors) {
  const auto code = SystematicCode::convolutional({0, 1, 3});
  EXPECT_EQ(code.correctable(), 1);
  std::mt19937_64 gen(4);
  std::uniform_int_distribution<int> any(0, 3), nz(1, 3);
  for (int trial = 0; trial < 200; ++trial) {
    SymbolSequence u(40);
    for (auto& x : u) x = sym(any(gen));
    auto word = code.encode(u).symbols;
    // one information-symbol error per 8-step window, away from the tail
    std::size_t errors = 0;
    for (std::size_t t = std::size_t(trial % 8); t + 4 < u.size(); t += 8) {
      word[2 * t] += sym(nz(gen));
      ++errors;
    }
    const auto r = code.decode(word);
    EXPECT_EQ(r.info, u);
    EXPECT_EQ(r.corrections, errors);
  }
}

TEST(ConvolutionalCode, ParityErrorsLeaveInformationIntact) {
  const auto code = SystematicCode::convolutional({0, 1, 3});
  std::mt19937_64 gen(5);
  SymbolSequence u(30);
  for (auto& x : u) x = sym(int(gen() % 4));
  for (std::size_t t = 0; t < u.size(); ++t) {
    auto word = code.encode(u).symbols;
    word[2 * t + 1] += GF4::one();
    EXPECT_EQ(code.decode(word).info, u);
  }
}

TEST(CodonTable, MethionineAndForwardTranslation) {
  EXPECT_EQ(amino_to_base("M"), "ATG");
  const auto table = CodonTable::human_most_frequent();
  EXPECT_EQ(table.entries().size(), 20u);
  for (const auto& [amino, codon] : table.entries()) EXPECT_EQ(oracle::translate(codon), amino);
  std::mt19937_64 gen(6);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = oracle::random_string(gen, "ACDEFGHIKLMNPQRSTVWY", 1, 30);
    const auto b = amino_to_base(a);
    EXPECT_EQ(b.size(), 3 * a.size());
    EXPECT_EQ(base_to_amino(b), a);
  }
}

TEST(CodonTable, ForwardTranslationMatchesStandardCode) {
  const std::string bases = "ACGT";
  for (char x : bases)
    for (char y : bases)
      for (char z : bases) {
        const std::string codon{x, y, z};
        const char expected = oracle::translate(codon);
        EXPECT_EQ(base_to_amino(codon), std::string(1, expected == '*' ? stop_symbol : expected));
      }
  EXPECT_EQ(base_to_amino("ATGAA"), "M");
}

TEST(CodonTable, MissingEntryRaises) {
  CodonTable t;
  t.set('M', "ATG");
  EXPECT_EQ(amino_to_base("M", t), "ATG");
  EXPECT_EQ(code_of([&] { amino_to_base("MW", t); }), ErrorCode::missing_codon);
  EXPECT_EQ(code_of([&] { t.set('M', "AUG"); }), ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([&] { t.set('B', "ATG"); }), ErrorCode::invalid_symbol);
}

TEST(StructureIndex, IdentityCodeIsExactlyZero) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<BioSequence> seqs;
    const bool amino = trial % 2;
    for (int i = 0; i < 4; ++i)
      seqs.emplace_back(amino ? Alphabet::amino : Alphabet::base,
                        oracle::random_string(gen, amino ? "ACDEFGHIKLMNPQRSTVWY" : "ACGT", 5, 30),
                        "s" + std::to_string(i));
    const auto r = structure_index(seqs, SystematicCode::identity());
    EXPECT_EQ(r.d_c, 0.0);
    EXPECT_EQ(r.pair_terms.size() + r.excluded, 6u);
  }
}

TEST(StructureIndex, MatchesRecomputationOracle) {
  std::mt19937_64 gen(8);
  const std::vector<SystematicCode> codes{SystematicCode::repetition(2), SystematicCode::repetition(3),
                                          SystematicCode::cyclic(3, 2, {GF4::one(), GF4::one()}),
                                          SystematicCode::convolutional({0, 1, 3})};
  for (const auto& code : codes)
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<BioSequence> seqs;
      for (int i = 0; i < 3; ++i)
        seqs.emplace_back(Alphabet::base, oracle::random_string(gen, "ACGT", 8, 30), "s" + std::to_string(i));
      const auto r = structure_index(seqs, code);
      double sum = 0.0;
      int pairs = 0;
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j) {
          const double before = entropy_evolution_rate(seqs[i], seqs[j]).rho;
          const double after =
              entropy_evolution_rate(coding_pipeline(seqs[i].symbols(), code), coding_pipeline(seqs[j].symbols(), code)).rho;
          sum += std::abs(before - after);
          ++pairs;
        }
      EXPECT_NEAR(r.d_c, sum / pairs, 1e-12) << code.id();
      EXPECT_GE(r.d_c, 0.0);
      EXPECT_EQ(r.excluded, 0u);
      EXPECT_NEAR(r.d_c, std::accumulate(r.pair_terms.begin(), r.pair_terms.end(), 0.0) / 3.0, 1e-12);
    }
}

TEST(StructureIndex, DuplicatePairContributesZero) {
  const std::vector<BioSequence> seqs{BioSequence(Alphabet::base, "ACGTTGCAAC", "a"),
                                      BioSequence(Alphabet::base, "ACGTTGCAAC", "b"),
                                      BioSequence(Alphabet::base, "AGGTCGCATC", "c")};
  const auto r = structure_index(seqs, SystematicCode::convolutional({0, 1, 3}));
  ASSERT_EQ(r.pairs.front(), (std::pair<std::size_t, std::size_t>{0, 1}));
  EXPECT_EQ(r.pair_terms.front(), 0.0);
}

TEST(StructureIndex, DegenerateCorpusRejected) {
  const std::vector<BioSequence> seqs{BioSequence(Alphabet::base, "AAAA", "a"), BioSequence(Alphabet::base, "CCCC", "b")};
  EXPECT_EQ(code_of([&] { structure_index(seqs, SystematicCode::identity()); }), ErrorCode::degenerate_entropy);
  EXPECT_EQ(code_of([&] { structure_index({seqs[0]}, SystematicCode::identity()); }), ErrorCode::invalid_argument);
}
