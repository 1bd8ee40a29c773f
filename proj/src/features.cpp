#include "minijudge/features.hpp"

#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

namespace minijudge {

std::vector<Token> anonymize(std::vector<Token> tokens) {
  for (auto& t : tokens)
    if (t.kind == TokenKind::Ident) t.text = "ID";
  return tokens;
}

std::vector<Token> program_tokens(const Program& program) { return tokenize(render(program)); }

namespace {

void collect_grams(const std::vector<Token>& anon, int n,
                   const std::function<void(NGram&&)>& sink) {
  if (static_cast<int>(anon.size()) < n) return;
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= anon.size(); ++i) {
    NGram g;
    g.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) g.push_back(anon[i + static_cast<std::size_t>(k)].text);
    sink(std::move(g));
  }
}

}  // namespace

FeatureVocab build_vocab_from_sequences(const std::vector<std::vector<Token>>& sequences, int n) {
  if (n < 1) throw std::invalid_argument("gram length must be at least 1");
  FeatureVocab vocab;
  vocab.n = n;
  for (const auto& seq : sequences) {
    collect_grams(anonymize(seq), n, [&](NGram&& g) {
      if (vocab.index.emplace(g, vocab.grams.size()).second) vocab.grams.push_back(std::move(g));
    });
  }
  if (vocab.grams.empty()) throw EmptyVocab();
  return vocab;
}

FeatureVector encode_sequence(const std::vector<Token>& tokens, const FeatureVocab& vocab) {
  FeatureVector bits(vocab.size(), 0);
  collect_grams(anonymize(tokens), vocab.n, [&](NGram&& g) {
    auto it = vocab.index.find(g);
    if (it != vocab.index.end()) bits[it->second] = 1;  // unseen grams are dropped
  });
  return bits;
}

FeatureVocab build_vocab(const std::vector<Program>& programs, int n) {
  std::vector<std::vector<Token>> seqs;
  seqs.reserve(programs.size());
  for (const auto& p : programs) seqs.push_back(program_tokens(p));
  return build_vocab_from_sequences(seqs, n);
}

FeatureVector encode(const Program& program, const FeatureVocab& vocab) {
  return encode_sequence(program_tokens(program), vocab);
}

void save_vocab(const FeatureVocab& vocab, std::ostream& out) {
  out << "n\t" << vocab.n << "\n";
  for (const auto& g : vocab.grams) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (i) out << "\t";
      out << g[i];
    }
    out << "\n";
  }
}

FeatureVocab load_vocab(std::istream& in) {
  FeatureVocab vocab;
  std::string line;
  if (!std::getline(in, line) || line.rfind("n\t", 0) != 0)
    throw std::runtime_error("vocabulary file missing gram-length header");
  vocab.n = std::stoi(line.substr(2));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    NGram g;
    std::size_t start = 0;
    for (;;) {
      std::size_t tab = line.find('\t', start);
      if (tab == std::string::npos) {
        g.push_back(line.substr(start));
        break;
      }
      g.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    if (static_cast<int>(g.size()) != vocab.n)
      throw std::runtime_error("vocabulary line has wrong gram length");
    if (vocab.index.emplace(g, vocab.grams.size()).second) vocab.grams.push_back(std::move(g));
  }
  return vocab;
}

}  // namespace minijudge
