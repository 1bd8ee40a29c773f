#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "minijudge/minilang.hpp"

namespace minijudge {

// One n-gram is the texts of n consecutive tokens after identifier anonymization.
using NGram = std::vector<std::string>;

struct FeatureVocab {
  int n = 3;
  std::vector<NGram> grams;  // distinct, first-occurrence order, frozen after construction
  std::map<NGram, std::size_t> index;

  std::size_t size() const { return grams.size(); }
};

// Presence bits, one per vocabulary gram.
using FeatureVector = std::vector<std::uint8_t>;

struct EmptyVocab : std::runtime_error {
  EmptyVocab() : std::runtime_error("no token sequence is long enough to contribute an n-gram") {}
};

// Replaces every identifier token's text with the single class "ID".
// Idempotent; all other tokens pass through untouched.
std::vector<Token> anonymize(std::vector<Token> tokens);

// Token sequence of a program as seen by the feature extractor.
std::vector<Token> program_tokens(const Program& program);

// Sequence-level core. build_vocab_from_sequences anonymizes internally.
FeatureVocab build_vocab_from_sequences(const std::vector<std::vector<Token>>& sequences, int n);
FeatureVector encode_sequence(const std::vector<Token>& tokens, const FeatureVocab& vocab);

// Program-level wrappers used by the judging pipeline.
FeatureVocab build_vocab(const std::vector<Program>& programs, int n);
FeatureVector encode(const Program& program, const FeatureVocab& vocab);

// One gram per line, token texts joined by tabs. The first line records n
// so an empty vocabulary round-trips.
void save_vocab(const FeatureVocab& vocab, std::ostream& out);
FeatureVocab load_vocab(std::istream& in);

}  // namespace minijudge
