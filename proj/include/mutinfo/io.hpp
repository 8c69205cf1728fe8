#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "mutinfo/capacity.hpp"
#include "mutinfo/entanglement.hpp"
#include "mutinfo/gencode.hpp"
#include "mutinfo/phylo.hpp"

namespace mutinfo::io {

using nlohmann::json;

namespace detail {

[[noreturn]] inline void fail(const std::string& what) { throw Error(ErrorCode::parse_error, what); }

inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(where + ": missing field \"" + key + "\"");
  return j.at(key);
}

template <class T>
T get(const json& j, const char* key, const std::string& where) {
  try {
    return field(j, key, where).get<T>();
  } catch (const json::exception& e) {
    fail(where + ": field \"" + key + "\" has the wrong type (" + e.what() + ")");
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return get<T>(j, key, where);
}

inline Eigen::MatrixXd real_rows(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where + ": expected a nonempty array of rows");
  const auto rows = Eigen::Index(j.size());
  if (!j.front().is_array() || j.front().empty()) fail(where + ": rows must be nonempty arrays");
  const auto cols = Eigen::Index(j.front().size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[std::size_t(r)];
    if (!row.is_array() || Eigen::Index(row.size()) != cols) fail(where + ": ragged row " + std::to_string(r));
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (!row[std::size_t(c)].is_number()) fail(where + ": non-numeric entry in row " + std::to_string(r));
      m(r, c) = row[std::size_t(c)].get<double>();
    }
  }
  return m;
}

inline std::vector<double> real_list(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : j) {
    if (!x.is_number()) fail(where + ": non-numeric entry");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace detail

/// {"re": [[...]], "im": [[...]]}; "im" may be omitted.
inline Matrix matrix_from_json(const json& j, const std::string& where = "matrix") {
  const Eigen::MatrixXd re = detail::real_rows(detail::field(j, "re", where), where + ".re");
  Eigen::MatrixXd im = Eigen::MatrixXd::Zero(re.rows(), re.cols());
  if (j.contains("im")) {
    im = detail::real_rows(j.at("im"), where + ".im");
    if (im.rows() != re.rows() || im.cols() != re.cols()) detail::fail(where + ": re and im shapes differ");
  }
  if (j.contains("dim") && (re.rows() != re.cols() || detail::get<int>(j, "dim", where) != re.rows()))
    detail::fail(where + ": declared dim does not match the matrix shape");
  Matrix m(re.rows(), re.cols());
  m.real() = re;
  m.imag() = im;
  return m;
}

inline json matrix_to_json(const Matrix& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json rr = json::array(), ir = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ir.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return {{"re", std::move(re)}, {"im", std::move(im)}};
}

inline Vector vector_from_json(const json& j, const std::string& where) {
  const auto re = detail::real_list(detail::field(j, "re", where), where + ".re");
  std::vector<double> im(re.size(), 0.0);
  if (j.contains("im")) im = detail::real_list(j.at("im"), where + ".im");
  if (im.size() != re.size()) detail::fail(where + ": re and im lengths differ");
  Vector v(Eigen::Index(re.size()));
  for (std::size_t i = 0; i < re.size(); ++i) v(Eigen::Index(i)) = Complex(re[i], im[i]);
  return v;
}

/// A density matrix, or {"kind": "maximally_mixed" | "pure" | "diagonal", ...}.
inline DensityOperator state_from_json(const json& j, const std::string& where = "state") {
  if (!j.is_object()) detail::fail(where + ": expected an object");
  if (!j.contains("kind")) return validate_density(matrix_from_json(j, where));
  const auto kind = detail::get<std::string>(j, "kind", where);
  if (kind == "matrix") return validate_density(matrix_from_json(detail::field(j, "matrix", where), where));
  if (kind == "maximally_mixed") return DensityOperator::maximally_mixed(detail::get<int>(j, "dim", where));
  if (kind == "pure") {
    const Vector psi = vector_from_json(detail::field(j, "amplitudes", where), where + ".amplitudes");
    if (std::abs(psi.norm() - 1.0) > 1e-9) throw Error(ErrorCode::not_unit_trace, where + ": amplitudes are not normalized");
    return DensityOperator::pure(psi);
  }
  if (kind == "diagonal") {
    const ProbabilityDistribution p(detail::real_list(detail::field(j, "weights", where), where + ".weights"));
    Matrix m = Matrix::Zero(Eigen::Index(p.size()), Eigen::Index(p.size()));
    for (std::size_t i = 0; i < p.size(); ++i) m(Eigen::Index(i), Eigen::Index(i)) = p[i];
    return validate_density(m);
  }
  detail::fail(where + ": unknown state kind \"" + kind + "\"");
}

inline QuantumChannel channel_from_json(const json& j, const std::string& where = "channel") {
  const auto kind = detail::get<std::string>(j, "kind", where);
  if (kind == "identity") return QuantumChannel::identity(detail::get<int>(j, "dim", where));
  if (kind == "depolarizing")
    return QuantumChannel::depolarizing(detail::get<int>(j, "dim", where), detail::get<double>(j, "p", where));
  if (kind == "phase_damping")
    return QuantumChannel::phase_damping(detail::get<int>(j, "dim", where), detail::get<double>(j, "gamma", where));
  if (kind == "measurement") return QuantumChannel::measurement(detail::get<int>(j, "dim", where));
  if (kind == "constant")
    return QuantumChannel::constant(detail::get<int>(j, "input_dim", where),
                                    state_from_json(detail::field(j, "state", where), where + ".state"));
  if (kind == "classical")
    return QuantumChannel::classical(detail::real_rows(detail::field(j, "transition", where), where + ".transition"));
  if (kind == "unitary") return QuantumChannel::unitary(matrix_from_json(detail::field(j, "matrix", where), where));
  if (kind == "kraus") {
    const auto& ops = detail::field(j, "operators", where);
    if (!ops.is_array() || ops.empty()) detail::fail(where + ": \"operators\" must be a nonempty array");
    std::vector<Matrix> kraus;
    for (std::size_t i = 0; i < ops.size(); ++i)
      kraus.push_back(matrix_from_json(ops[i], where + ".operators[" + std::to_string(i) + "]"));
    return QuantumChannel::from_kraus(std::move(kraus));
  }
  if (kind == "isometry")
    return QuantumChannel::from_isometry(matrix_from_json(detail::field(j, "matrix", where), where),
                                         detail::get<int>(j, "noise_dim", where));
  if (kind == "random") {
    Rng rng(detail::get_or<std::uint64_t>(j, "seed", 0, where));
    return random_channel(detail::get<int>(j, "input_dim", where), detail::get<int>(j, "output_dim", where),
                          detail::get_or<int>(j, "noise_dim", 2, where), rng);
  }
  detail::fail(where + ": unknown channel kind \"" + kind + "\"");
}

/// {"kind": "all_states", "dim"} | {"kind": "explicit", "states": [...]} |
/// {"kind": "parameterized", "dim", "generator", "n", "seed"}.
inline StateFamily family_from_json(const json& j, const std::string& where = "family") {
  const auto kind = detail::get<std::string>(j, "kind", where);
  if (kind == "all_states") return StateFamily::all_states(detail::get<int>(j, "dim", where));
  if (kind == "explicit") {
    const auto& states = detail::field(j, "states", where);
    if (!states.is_array()) detail::fail(where + ": \"states\" must be an array");
    std::vector<DensityOperator> list;
    for (std::size_t i = 0; i < states.size(); ++i)
      list.push_back(state_from_json(states[i], where + ".states[" + std::to_string(i) + "]"));
    return StateFamily::explicit_list(std::move(list));
  }
  if (kind == "parameterized") {
    const auto gen = detail::get_or<std::string>(j, "generator", "hilbert_schmidt", where);
    StateFamily::Generator g;
    if (gen == "hilbert_schmidt") g = StateFamily::Generator::hilbert_schmidt;
    else if (gen == "pure") g = StateFamily::Generator::pure;
    else if (gen == "diagonal") g = StateFamily::Generator::diagonal;
    else detail::fail(where + ": unknown generator \"" + gen + "\"");
    return StateFamily::parameterized(detail::get<int>(j, "dim", where), g, detail::get<int>(j, "n", where),
                                      detail::get_or<std::uint64_t>(j, "seed", 0, where));
  }
  detail::fail(where + ": unknown family kind \"" + kind + "\"");
}

inline OptimizerOptions optimizer_from_json(const json& j, OptimizerOptions opt, const std::string& where = "optimizer") {
  if (j.is_null()) return opt;
  opt.random_starts = detail::get_or(j, "random_starts", opt.random_starts, where);
  opt.hill_steps = detail::get_or(j, "hill_steps", opt.hill_steps, where);
  opt.step = detail::get_or(j, "step", opt.step, where);
  opt.decay = detail::get_or(j, "decay", opt.decay, where);
  return opt;
}

/// GF(4) symbol from 0..3 or one of "0", "1", "a", "a^2".
inline GF4 symbol_from_json(const json& j, const std::string& where) {
  if (j.is_number_integer()) {
    const int v = j.get<int>();
    if (v < 0 || v > 3) detail::fail(where + ": GF(4) symbol must be 0..3");
    return GF4(std::uint8_t(v));
  }
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    for (GF4 g : GF4::elements())
      if (g.name() == s) return g;
  }
  detail::fail(where + ": not a GF(4) symbol");
}

inline SymbolSequence symbols_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) detail::fail(where + ": expected an array of GF(4) symbols");
  SymbolSequence out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(symbol_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline SystematicCode code_from_json(const json& j, const std::string& where = "code") {
  const auto kind = detail::get<std::string>(j, "kind", where);
  const auto id = detail::get_or<std::string>(j, "id", kind, where);
  if (kind == "identity") return SystematicCode::identity();
  if (kind == "repetition") return SystematicCode::repetition(detail::get<int>(j, "n", where));
  if (kind == "cyclic")
    return SystematicCode::cyclic(detail::get<int>(j, "n", where), detail::get<int>(j, "k", where),
                                  symbols_from_json(detail::field(j, "generator", where), where + ".generator"), id);
  if (kind == "linear") {
    const auto& rows = detail::field(j, "parity", where);
    if (!rows.is_array()) detail::fail(where + ": \"parity\" must be an array of rows");
    std::vector<SymbolSequence> parity;
    for (std::size_t r = 0; r < rows.size(); ++r)
      parity.push_back(symbols_from_json(rows[r], where + ".parity[" + std::to_string(r) + "]"));
    return SystematicCode::linear(detail::get<int>(j, "n", where), detail::get<int>(j, "k", where), std::move(parity),
                                  id);
  }
  if (kind == "conv") {
    const auto rate = detail::get_or<std::string>(j, "rate", "1/2", where);
    if (rate != "1/2") detail::fail(where + ": only rate 1/2 convolutional codes are supported");
    return SystematicCode::convolutional(detail::get<std::vector<int>>(j, "taps", where), id);
  }
  detail::fail(where + ": unknown code kind \"" + kind + "\"");
}

inline CodonTable codon_table_from_json(const json& j, const std::string& where = "codon table") {
  if (!j.is_object()) detail::fail(where + ": expected an object mapping amino acids to codons");
  std::map<char, std::string> codons;
  for (const auto& [key, value] : j.items()) {
    if (key.size() != 1 || !value.is_string()) detail::fail(where + ": entries must be \"X\": \"CODON\"");
    codons[key[0]] = value.get<std::string>();
  }
  return CodonTable(std::move(codons));
}

inline json entropy_to_json(const EntropyValue& v) {
  json out;
  if (v.is_infinite()) out["value"] = "inf";
  else out["value"] = v.value();
  out["base"] = std::string(to_string(v.base()));
  return out;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) detail::fail("cannot open \"" + path + "\"");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    detail::fail(path + ": " + e.what());
  }
}

enum class AlphabetChoice { automatic, base, amino };

/// FASTA records; headers up to the first blank become ids. Symbols are
/// uppercased; anything outside the alphabet is rejected with its position.
/// With `automatic`, the file is a base file when every symbol is one of ACGT.
inline std::vector<BioSequence> parse_fasta(std::istream& in, AlphabetChoice choice = AlphabetChoice::automatic,
                                            const std::string& source = "fasta") {
  struct Record {
    std::string id;
    std::string symbols;
    std::vector<std::pair<std::size_t, std::size_t>> origin;  // line, column of each symbol
  };
  std::vector<Record> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == ';') continue;
    if (line[0] == '>') {
      std::string id = line.substr(1);
      const auto end = id.find_first_of(" \t");
      if (end != std::string::npos) id.resize(end);
      if (id.empty()) detail::fail(source + ":" + std::to_string(line_no) + ": empty FASTA header");
      records.push_back({id, {}, {}});
      continue;
    }
    if (records.empty()) detail::fail(source + ":" + std::to_string(line_no) + ": sequence data before the first header");
    for (std::size_t c = 0; c < line.size(); ++c) {
      const char ch = line[c];
      if (ch == ' ' || ch == '\t') continue;
      records.back().symbols.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
      records.back().origin.emplace_back(line_no, c + 1);
    }
  }
  if (records.empty()) detail::fail(source + ": no FASTA records");

  Alphabet alphabet = Alphabet::amino;
  if (choice == AlphabetChoice::base) {
    alphabet = Alphabet::base;
  } else if (choice == AlphabetChoice::automatic) {
    alphabet = Alphabet::base;
    for (const auto& r : records)
      if (r.symbols.find_first_not_of("ACGT") != std::string::npos) alphabet = Alphabet::amino;
  }
  const auto allowed = alphabet_symbols(alphabet);
  std::vector<BioSequence> out;
  for (const auto& r : records) {
    if (r.symbols.empty()) detail::fail(source + ": record '" + r.id + "' has no sequence");
    for (std::size_t i = 0; i < r.symbols.size(); ++i)
      if (allowed.find(r.symbols[i]) == std::string_view::npos)
        detail::fail(source + ":" + std::to_string(r.origin[i].first) + ":" + std::to_string(r.origin[i].second) +
                     ": symbol '" + std::string(1, r.symbols[i]) + "' is not in the " +
                     std::string(to_string(alphabet)) + " alphabet (record '" + r.id + "')");
    out.emplace_back(alphabet, r.symbols, r.id);
  }
  return out;
}

inline std::vector<BioSequence> read_fasta_file(const std::string& path,
                                                AlphabetChoice choice = AlphabetChoice::automatic) {
  std::ifstream in(path);
  if (!in) detail::fail("cannot open \"" + path + "\"");
  return parse_fasta(in, choice, path);
}

/// Header row of labels, then one row per label; missing entries are "NA".
inline std::string genetic_matrix_csv(const GeneticMatrix& m, int precision = 12) {
  std::string out = "label";
  for (const auto& l : m.labels) out += "," + l;
  out += "\n";
  char buf[64];
  for (std::size_t i = 0; i < m.size(); ++i) {
    out += m.labels[i];
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (const auto& v = m.at(i, j)) {
        std::snprintf(buf, sizeof buf, "%.*f", precision, *v);
        out += std::string(",") + buf;
      } else {
        out += ",NA";
      }
    }
    out += "\n";
  }
  return out;
}

}  // namespace mutinfo::io
