// mutinfo: command-line front end for the mutual entropy library.
//
// Reports are JSON lines on stdout; --pretty prints aligned key/value tables
// instead. Errors go to stderr as {"error": code, "detail": message} with exit
// status 2 for unreadable input and 3 for failed computations.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mutinfo.hpp"
#include "mutinfo/io.hpp"

namespace {

using mutinfo::Error;
using mutinfo::ErrorCode;
using mutinfo::io::json;

struct Common {
  std::uint64_t seed = 0;
  int samples = 16;
  std::string base = "";
  bool pretty = false;
};

struct SequenceFlags {
  int match = 1;
  int mismatch = -1;
  int gap = -2;
  std::string alphabet = "auto";

  mutinfo::Scoring scoring() const { return {match, mismatch, gap}; }
  mutinfo::io::AlphabetChoice choice() const {
    if (alphabet == "base") return mutinfo::io::AlphabetChoice::base;
    if (alphabet == "amino") return mutinfo::io::AlphabetChoice::amino;
    if (alphabet == "auto") return mutinfo::io::AlphabetChoice::automatic;
    throw Error(ErrorCode::parse_error, "--alphabet must be auto, base or amino");
  }
};

mutinfo::LogBase resolve_base(const Common& c, mutinfo::LogBase fallback) {
  return c.base.empty() ? fallback : mutinfo::parse_log_base(c.base);
}

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void emit(const json& report, const Common& c) {
  if (!c.pretty) {
    std::cout << report.dump() << '\n';
    return;
  }
  std::size_t width = 0;
  for (const auto& [key, value] : report.items()) width = std::max(width, key.size());
  for (const auto& [key, value] : report.items()) {
    std::cout << key << std::string(width - key.size() + 2, ' ');
    if (value.is_array() && !value.empty() && value.front().is_array()) {
      std::cout << '\n';
      for (const auto& row : value) {
        std::cout << "    ";
        for (const auto& x : row) std::cout << scalar_text(x) << ' ';
        std::cout << '\n';
      }
    } else {
      std::cout << scalar_text(value) << '\n';
    }
  }
  std::cout << '\n';
}

void write_text(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::parse_error, "cannot write \"" + path + "\"");
  out << text;
}

json entropy_fields(const mutinfo::EntropyValue& v) { return mutinfo::io::entropy_to_json(v); }

json capacity_fields(const mutinfo::CapacityReport& r) {
  json out = entropy_fields(r.value);
  out["status"] = std::string(mutinfo::to_string(r.status));
  out["evaluations"] = r.evaluations;
  if (r.argmax) out["argmax"] = mutinfo::io::matrix_to_json(r.argmax->matrix());
  return out;
}

mutinfo::CompoundClass parse_class(const std::string& s) {
  if (s == "q") return mutinfo::CompoundClass::q;
  if (s == "d") return mutinfo::CompoundClass::d;
  if (s == "c") return mutinfo::CompoundClass::c;
  throw Error(ErrorCode::parse_error, "compound class must be q, d or c, got \"" + s + "\"");
}

void run_entropy(const std::string& state_path, const Common& c) {
  const auto rho = mutinfo::io::state_from_json(mutinfo::io::read_json_file(state_path));
  json out{{"command", "entropy"}};
  out.update(entropy_fields(mutinfo::von_neumann_entropy(rho, resolve_base(c, mutinfo::LogBase::e))));
  emit(out, c);
}

void run_mutual(const std::string& state_path, const std::string& channel_path, bool pseudo, const Common& c) {
  const auto rho = mutinfo::io::state_from_json(mutinfo::io::read_json_file(state_path));
  const auto channel = mutinfo::io::channel_from_json(mutinfo::io::read_json_file(channel_path));
  const auto base = resolve_base(c, mutinfo::LogBase::e);
  const auto search = mutinfo::DecompositionSearch::sampled(c.samples, c.seed);
  json out{{"command", "mutual"}};
  if (pseudo) {
    mutinfo::FiniteDecompositionSearch fs;
    fs.candidates = c.samples;
    fs.seed = c.seed;
    fs.schatten = search;
    const auto r = mutinfo::pseudo_mutual_entropy(rho, channel, fs, base);
    out["objective"] = "pseudo";
    out.update(entropy_fields(r.value));
    out["status"] = std::string(mutinfo::to_string(r.status));
    out["evaluations"] = r.evaluations;
  } else {
    const auto r = mutinfo::mutual_entropy(rho, channel, search, base);
    out["objective"] = "quantum";
    out.update(entropy_fields(r.value));
    out["status"] = std::string(mutinfo::to_string(r.status));
    out["evaluations"] = r.samples;
  }
  emit(out, c);
}

mutinfo::CqcCapacityReport run_cqc_job(const json& job, const mutinfo::QuantumChannel& channel, mutinfo::LogBase base) {
  namespace mio = mutinfo::io;
  const auto& dists = mio::detail::field(job, "distributions", "job");
  const auto& codings = mio::detail::field(job, "codings", "job");
  if (!dists.is_array() || !codings.is_array()) throw Error(ErrorCode::parse_error, "job: cqc families must be arrays");
  std::vector<mutinfo::ProbabilityDistribution> p_family;
  for (std::size_t i = 0; i < dists.size(); ++i)
    p_family.emplace_back(mio::detail::real_list(dists[i], "job.distributions[" + std::to_string(i) + "]"));
  std::vector<std::vector<mutinfo::DensityOperator>> coding_family;
  for (std::size_t i = 0; i < codings.size(); ++i) {
    if (!codings[i].is_array()) throw Error(ErrorCode::parse_error, "job.codings entries must be arrays of states");
    std::vector<mutinfo::DensityOperator> letters;
    for (std::size_t k = 0; k < codings[i].size(); ++k)
      letters.push_back(mio::state_from_json(codings[i][k], "job.codings[" + std::to_string(i) + "][" +
                                                                std::to_string(k) + "]"));
    coding_family.push_back(std::move(letters));
  }
  std::vector<std::optional<mutinfo::QuantumChannel>> decoders;
  if (job.contains("decoders")) {
    for (std::size_t i = 0; i < job.at("decoders").size(); ++i) {
      const auto& d = job.at("decoders")[i];
      if (d.is_null()) decoders.emplace_back(std::nullopt);
      else decoders.emplace_back(mio::channel_from_json(d, "job.decoders[" + std::to_string(i) + "]"));
    }
  }
  return mutinfo::cqc_capacity(channel, p_family, coding_family, decoders, base);
}

void run_capacity(const std::string& job_path, int starts, const Common& c) {
  namespace mio = mutinfo::io;
  const auto job = mio::read_json_file(job_path);
  const auto channel = mio::channel_from_json(mio::detail::field(job, "channel", "job"), "job.channel");
  const auto objective = mio::detail::get_or<std::string>(job, "objective", "quantum", "job");
  mutinfo::LogBase base = mutinfo::LogBase::e;
  if (job.contains("base")) base = mutinfo::parse_log_base(mio::detail::get<std::string>(job, "base", "job"));
  base = resolve_base(c, base);

  json out{{"command", "capacity"}, {"objective", objective}};
  if (objective == "cqc") {
    const auto r = run_cqc_job(job, channel, base);
    out["fixed_coding"] = capacity_fields(r.fixed_coding);
    out["coding_free"] = capacity_fields(r.coding_free);
    out["coding_decoding_free"] = capacity_fields(r.coding_decoding_free);
    emit(out, c);
    return;
  }

  const auto family = mio::family_from_json(mio::detail::field(job, "family", "job"), "job.family");
  mutinfo::OptimizerOptions opt;
  opt.seed = c.seed;
  opt.inner = mutinfo::DecompositionSearch::sampled(c.samples, c.seed);
  opt = mio::optimizer_from_json(job.contains("optimizer") ? job.at("optimizer") : json(), opt, "job.optimizer");
  if (starts >= 0) opt.random_starts = starts;

  auto solve = [&]() -> mutinfo::CapacityReport {
    if (objective == "quantum") return mutinfo::quantum_capacity(channel, family, opt, base);
    if (objective == "pseudo") {
      mutinfo::FiniteDecompositionSearch fs;
      fs.candidates = c.samples;
      fs.seed = c.seed;
      return mutinfo::pseudo_capacity(channel, family, opt, fs, base);
    }
    if (objective == "q" || objective == "d" || objective == "c") {
      mutinfo::EntanglementSearch es;
      es.noise_samples = c.samples;
      es.seed = c.seed;
      return mutinfo::channel_entangled_capacity(channel, parse_class(objective), family, opt, es, base);
    }
    throw Error(ErrorCode::parse_error, "job: unknown objective \"" + objective + "\"");
  };
  const auto r = solve();
  out.update(capacity_fields(r));
  emit(out, c);
}

void run_entangle(const std::string& state_path, const std::string& channel_path, const Common& c) {
  namespace mio = mutinfo::io;
  const auto rho = mio::state_from_json(mio::read_json_file(state_path));
  const auto base = resolve_base(c, mutinfo::LogBase::e);
  json out{{"command", "entangle"}};
  if (channel_path.empty()) {
    // standard entanglement of rho with itself
    const auto theta = mutinfo::q_compound(mutinfo::standard_entangling(rho));
    out["class"] = std::string(mutinfo::to_string(mutinfo::classify(theta)));
    out["mutual"] = entropy_fields(mutinfo::entangled_mutual_entropy(theta, base));
    out["disentanglement_degree"] = mutinfo::disentanglement_degree(theta, base);
    out["entropy"] = entropy_fields(mutinfo::von_neumann_entropy(rho, base));
    out["pure_compound"] = mutinfo::von_neumann_entropy(theta.theta).nats() <= 1e-9;
    emit(out, c);
    return;
  }
  const auto channel = mio::channel_from_json(mio::read_json_file(channel_path));
  mutinfo::EntanglementSearch search;
  search.schatten = mutinfo::DecompositionSearch::sampled(c.samples, c.seed);
  search.noise_samples = c.samples;
  search.seed = c.seed;
  for (auto klass : {mutinfo::CompoundClass::q, mutinfo::CompoundClass::d, mutinfo::CompoundClass::c}) {
    const auto r = mutinfo::channel_entangled_mutual(rho, channel, klass, search, base);
    json entry = entropy_fields(r.value);
    entry["status"] = std::string(mutinfo::to_string(r.status));
    entry["evaluations"] = r.evaluations;
    out[std::string("I_") + std::string(mutinfo::to_string(klass))] = entry;
  }
  emit(out, c);
}

void run_genrate(const std::string& fasta, const SequenceFlags& s, const Common& c) {
  const auto seqs = mutinfo::io::read_fasta_file(fasta, s.choice());
  if (seqs.size() < 2) throw Error(ErrorCode::parse_error, fasta + ": genrate needs at least two records");
  const auto base = resolve_base(c, mutinfo::LogBase::two);
  for (std::size_t i = 0; i < seqs.size(); ++i)
    for (std::size_t j = i + 1; j < seqs.size(); ++j) {
      const auto r = mutinfo::entropy_evolution_rate(seqs[i], seqs[j], s.scoring(), base);
      json out{{"command", "genrate"},
               {"a", seqs[i].id()},
               {"b", seqs[j].id()},
               {"base", std::string(mutinfo::to_string(base))},
               {"S_a", r.entropy_a},
               {"S_b", r.entropy_b},
               {"I", r.mutual},
               {"r", r.ratio},
               {"rho", r.rho},
               {"rho_prime", r.rho_prime},
               {"aligned_a", r.alignment.a_gapped},
               {"aligned_b", r.alignment.b_gapped},
               {"score", r.alignment.score}};
      emit(out, c);
    }
}

void run_matrix(const std::string& fasta, const std::string& out_path, const SequenceFlags& s, const Common& c) {
  const auto seqs = mutinfo::io::read_fasta_file(fasta, s.choice());
  const auto m = mutinfo::genetic_matrix(seqs, s.scoring(), resolve_base(c, mutinfo::LogBase::two));
  write_text(mutinfo::io::genetic_matrix_csv(m), out_path);
  if (!out_path.empty())
    emit({{"command", "matrix"}, {"labels", m.labels}, {"missing", m.missing_count()}, {"out", out_path}}, c);
}

void run_tree(const std::string& fasta, const std::string& method, const std::string& out_path,
              const SequenceFlags& s, const Common& c) {
  const auto seqs = mutinfo::io::read_fasta_file(fasta, s.choice());
  const auto m = mutinfo::genetic_matrix(seqs, s.scoring(), resolve_base(c, mutinfo::LogBase::two));
  const auto tree = mutinfo::build_tree(m, mutinfo::parse_tree_method(method));
  write_text(tree.newick() + "\n", out_path);
  if (!out_path.empty()) emit({{"command", "tree"}, {"method", method}, {"out", out_path}}, c);
}

void run_code_index(const std::string& code_path, const std::string& fasta, const std::string& codon_path,
                    const std::string& base_map, const SequenceFlags& s, const Common& c) {
  namespace mio = mutinfo::io;
  const auto code = mio::code_from_json(mio::read_json_file(code_path));
  const auto seqs = mio::read_fasta_file(fasta, s.choice());
  const auto table = codon_path.empty() ? mutinfo::CodonTable::human_most_frequent()
                                        : mio::codon_table_from_json(mio::read_json_file(codon_path));
  if (base_map.size() != 4) throw Error(ErrorCode::parse_error, "--base-map needs four bases, e.g. ACGT");
  const mutinfo::BaseMap map({base_map[0], base_map[1], base_map[2], base_map[3]});
  const auto base = resolve_base(c, mutinfo::LogBase::two);
  const auto r = mutinfo::structure_index(seqs, code, s.scoring(), base, map, table);
  json pairs = json::array();
  for (std::size_t i = 0; i < r.pairs.size(); ++i)
    pairs.push_back({{"a", seqs[r.pairs[i].first].id()}, {"b", seqs[r.pairs[i].second].id()}, {"term", r.pair_terms[i]}});
  emit({{"command", "code-index"},
        {"code", r.code_id},
        {"d_c", r.d_c},
        {"pairs", r.pair_terms.size()},
        {"excluded", r.excluded},
        {"base", std::string(mutinfo::to_string(base))},
        {"terms", pairs}},
       c);
}

int report_error(const std::string& code, const std::string& detail, int status) {
  std::cerr << json{{"error", code}, {"detail", detail}}.dump() << '\n';
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mutual entropy toolkit: quantum channels and entropy-based sequence comparison"};
  app.require_subcommand(1);
  Common common;
  SequenceFlags seq;

  auto add_common = [&](CLI::App* sub, const char* base_default) {
    sub->add_option("--seed", common.seed, "Seed for randomized searches")->default_val(0);
    sub->add_option("--samples", common.samples, "Samples per randomized search")->default_val(16);
    sub->add_option("--base", common.base, std::string("Logarithm base, 2 or e (default ") + base_default + ")");
    sub->add_flag("--pretty", common.pretty, "Print aligned tables instead of JSON lines");
  };
  auto add_sequence = [&](CLI::App* sub) {
    sub->add_option("--match", seq.match, "Alignment match score")->default_val(1);
    sub->add_option("--mismatch", seq.mismatch, "Alignment mismatch score")->default_val(-1);
    sub->add_option("--gap", seq.gap, "Alignment gap score")->default_val(-2);
    sub->add_option("--alphabet", seq.alphabet, "auto, base or amino")->default_val("auto");
  };

  std::string state, channel, job, fasta, method = "upgma", out_path, code, codon_table, base_map = "ACGT";
  bool pseudo = false;
  int starts = -1;

  auto* entropy = app.add_subcommand("entropy", "Von Neumann entropy of a state");
  entropy->add_option("--state", state, "State JSON")->required();
  add_common(entropy, "e");

  auto* mutual = app.add_subcommand("mutual", "Quantum mutual entropy I(rho; channel)");
  mutual->add_option("--state", state, "State JSON")->required();
  mutual->add_option("--channel", channel, "Channel JSON")->required();
  mutual->add_flag("--pseudo", pseudo, "Admit non-orthogonal decompositions (pseudo-mutual entropy)");
  add_common(mutual, "e");

  auto* capacity = app.add_subcommand("capacity", "Capacity of a channel over a state family");
  capacity->add_option("--job", job, "Job JSON with channel, family, objective, optimizer")->required();
  capacity->add_option("--starts", starts, "Random optimizer starts (default 256)");
  add_common(capacity, "e");

  auto* entangle = app.add_subcommand("entangle", "Entangled compound states and q/d/c mutual entropies");
  entangle->add_option("--state", state, "State JSON")->required();
  entangle->add_option("--channel", channel, "Channel JSON; without it the standard entanglement is reported");
  add_common(entangle, "e");

  auto* genrate = app.add_subcommand("genrate", "Entropy evolution rate for every pair of FASTA records");
  genrate->add_option("--fasta", fasta, "FASTA file")->required();
  add_sequence(genrate);
  add_common(genrate, "2");

  auto* matrix = app.add_subcommand("matrix", "Genetic distance matrix as CSV");
  matrix->add_option("--fasta", fasta, "FASTA file")->required();
  matrix->add_option("--out", out_path, "Write the CSV here instead of stdout");
  add_sequence(matrix);
  add_common(matrix, "2");

  auto* tree = app.add_subcommand("tree", "Phylogenetic tree in Newick format");
  tree->add_option("--fasta", fasta, "FASTA file")->required();
  tree->add_option("--method", method, "upgma or nj")->default_val("upgma");
  tree->add_option("--out", out_path, "Write the Newick text here instead of stdout");
  add_sequence(tree);
  add_common(tree, "2");

  auto* code_index = app.add_subcommand("code-index", "Code-structure index D_C of a sequence group");
  code_index->add_option("--code", code, "Code spec JSON")->required();
  code_index->add_option("--fasta", fasta, "FASTA file")->required();
  code_index->add_option("--codon-table", codon_table, "Back-translation table JSON for amino input");
  code_index->add_option("--base-map", base_map, "Bases assigned to 0, 1, a, a^2")->default_val("ACGT");
  add_sequence(code_index);
  add_common(code_index, "2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("ParseError", e.what(), 2);
  }

  try {
    if (*entropy) run_entropy(state, common);
    else if (*mutual) run_mutual(state, channel, pseudo, common);
    else if (*capacity) run_capacity(job, starts, common);
    else if (*entangle) run_entangle(state, channel, common);
    else if (*genrate) run_genrate(fasta, seq, common);
    else if (*matrix) run_matrix(fasta, out_path, seq, common);
    else if (*tree) run_tree(fasta, method, out_path, seq, common);
    else if (*code_index) run_code_index(code, fasta, codon_table, base_map, seq, common);
  } catch (const Error& e) {
    return report_error(std::string(e.name()), e.what(), e.code() == ErrorCode::parse_error ? 2 : 3);
  } catch (const std::exception& e) {
    return report_error("ComputationError", e.what(), 3);
  }
  return 0;
}
