// src/text.cc

// Copyright 2026  The prosokit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "prosokit/text.h"

#include <algorithm>

#include "prosokit/error.h"
#include "prosokit/random.h"

namespace prosokit::text {

Tokens Tokenize(std::string_view line) {
  Tokens out;
  std::size_t i = 0;
  auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
           c == '\f';
  };
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string Join(const Tokens &tokens) {
  std::string out;
  for (const std::string &t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

const char *TokenClassName(TokenClass c) {
  switch (c) {
    case TokenClass::kEnglish: return "english";
    case TokenClass::kUnk: return "unk";
    case TokenClass::kFiller: return "filler";
    case TokenClass::kFalseStart: return "false-start";
  }
  return "unknown";
}

void TokenFilterRules::Validate() const {
  if (unk_tokens.empty()) throw ConfigError("token rules: empty unk set");
  if (filler_prefix == '\0' || false_start_suffix == '\0')
    throw ConfigError("token rules: filler/false-start markers must be set");
}

TokenClass ClassifyToken(std::string_view token,
                         const TokenFilterRules &rules) {
  if (token.empty()) throw ConfigError("classify: empty token");
  if (rules.unk_tokens.contains(std::string(token))) return TokenClass::kUnk;
  if (token.front() == rules.filler_prefix) return TokenClass::kFiller;
  if (token.size() >= 2 && token.back() == rules.false_start_suffix)
    return TokenClass::kFalseStart;
  return TokenClass::kEnglish;
}

bool IsEnglish(std::string_view token, const TokenFilterRules &rules) {
  return ClassifyToken(token, rules) == TokenClass::kEnglish;
}

Tokens FilterTokens(const Tokens &tokens, const TokenFilterRules &rules) {
  Tokens out;
  out.reserve(tokens.size());
  for (const std::string &t : tokens)
    if (IsEnglish(t, rules)) out.push_back(t);
  return out;
}

void NoiseConfig::Validate() const {
  if (!(word_probability >= 0.0 && word_probability <= 1.0))
    throw ConfigError("noise: word_probability must be in [0, 1]");
  if (min_word_length < 3)
    throw ConfigError("noise: min_word_length must be >= 3");
}

namespace {

bool IsContinuationByte(char c) {
  return (static_cast<unsigned char>(c) & 0xC0) == 0x80;
}

// Byte offset of the code point with the given index.
std::size_t ByteOffset(std::string_view word, std::size_t code_point) {
  std::size_t seen = 0;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (IsContinuationByte(word[i])) continue;
    if (seen == code_point) return i;
    ++seen;
  }
  return word.size();
}

}  // namespace

std::size_t CodePointLength(std::string_view word) {
  return static_cast<std::size_t>(
      std::count_if(word.begin(), word.end(),
                    [](char c) { return !IsContinuationByte(c); }));
}

Tokens SplitWord(std::string_view word, std::size_t split,
                 char false_start_suffix) {
  const std::size_t len = CodePointLength(word);
  if (split < 1 || split >= len)
    throw ConfigError("split position must be in [1, length - 1]");
  std::string prefix(word.substr(0, ByteOffset(word, split)));
  prefix.push_back(false_start_suffix);
  return {std::move(prefix), std::string(word)};
}

Tokens InjectPartialWords(const Tokens &line, const NoiseConfig &config,
                          std::uint64_t line_index,
                          const TokenFilterRules &rules) {
  config.Validate();
  Rng rng = Rng::ForStream(config.seed, line_index);
  Tokens out;
  out.reserve(line.size());
  for (const std::string &word : line) {
    const std::size_t len = CodePointLength(word);
    const bool eligible =
        len >= static_cast<std::size_t>(config.min_word_length) &&
        IsEnglish(word, rules);
    // Draw only for eligible words so the stream does not depend on the
    // ineligible tokens around them.
    if (!eligible || !rng.Bernoulli(config.word_probability)) {
      out.push_back(word);
      continue;
    }
    const auto split = static_cast<std::size_t>(
        rng.UniformInt(1, static_cast<std::int64_t>(len) - 1));
    Tokens pair = SplitWord(word, split, rules.false_start_suffix);
    out.push_back(std::move(pair[0]));
    out.push_back(std::move(pair[1]));
  }
  return out;
}

SpellingRules::SpellingRules(std::vector<SpellingRule> rules)
    : rules_(std::move(rules)) {
  for (const SpellingRule &r : rules_)
    if (r.match.empty()) throw ConfigError("spelling rule with empty match");
}

SpellingRules SpellingRules::Defaults() {
  return SpellingRules({{{"favorite"}, {"favourite"}},
                        {{"coca-cola"}, {"coca", "cola"}}});
}

SpellingRules SpellingRules::Parse(std::istream &in) {
  std::vector<SpellingRule> rules;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Tokenize(line).empty() || line.front() == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw FormatError("spelling rules line " + std::to_string(line_no) +
                        ": expected match<TAB>replacement");
    SpellingRule rule{Tokenize(line.substr(0, tab)),
                      Tokenize(line.substr(tab + 1))};
    if (rule.match.empty())
      throw FormatError("spelling rules line " + std::to_string(line_no) +
                        ": empty match");
    rules.push_back(std::move(rule));
  }
  return SpellingRules(std::move(rules));
}

Tokens SpellingRules::Apply(const Tokens &tokens) const {
  Tokens out;
  out.reserve(tokens.size());
  std::size_t i = 0;
  while (i < tokens.size()) {
    const SpellingRule *best = nullptr;
    for (const SpellingRule &rule : rules_) {
      const std::size_t n = rule.match.size();
      if (i + n > tokens.size()) continue;
      if (best != nullptr && n <= best->match.size()) continue;
      if (std::equal(rule.match.begin(), rule.match.end(),
                     tokens.begin() + static_cast<std::ptrdiff_t>(i)))
        best = &rule;
    }
    if (best == nullptr) {
      out.push_back(tokens[i++]);
      continue;
    }
    out.insert(out.end(), best->replacement.begin(), best->replacement.end());
    i += best->match.size();
  }
  return out;
}

}  // namespace prosokit::text
