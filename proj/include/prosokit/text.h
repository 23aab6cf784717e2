// include/prosokit/text.h

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

#ifndef PROSOKIT_TEXT_H_
#define PROSOKIT_TEXT_H_

#include <cstdint>
#include <istream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace prosokit::text {

using Tokens = std::vector<std::string>;

/// Whitespace tokenization.
Tokens Tokenize(std::string_view line);
std::string Join(const Tokens &tokens);

enum class TokenClass { kEnglish, kUnk, kFiller, kFalseStart };

const char *TokenClassName(TokenClass c);

/// Which tokens the task's metric discards before scoring.
struct TokenFilterRules {
  std::set<std::string> unk_tokens{"<unk>", "<unk-it>", "<unk-de>"};
  char filler_prefix = '@';
  char false_start_suffix = '-';

  void Validate() const;
};

/// Unk > Filler > FalseStart > English. Throws ConfigError on "".
TokenClass ClassifyToken(std::string_view token, const TokenFilterRules &rules);
bool IsEnglish(std::string_view token, const TokenFilterRules &rules);

/// Keeps the English tokens, in order.
Tokens FilterTokens(const Tokens &tokens, const TokenFilterRules &rules);

struct NoiseConfig {
  double word_probability = 0.1;
  int min_word_length = 3;  // characters (UTF-8 code points)
  std::uint64_t seed = 0;

  void Validate() const;
};

/// Picks each eligible word independently with word_probability and
/// replaces it by a false start followed by the word itself:
/// "program" -> "prog- program". The split point is uniform over
/// [1, length - 1] code points. Words shorter than min_word_length and
/// tokens already classified non-English pass through.
///
/// The random stream is derived from (config.seed, line_index) so lines can
/// be processed in any order.
Tokens InjectPartialWords(const Tokens &line, const NoiseConfig &config,
                          std::uint64_t line_index = 0,
                          const TokenFilterRules &rules = {});

/// The same operation with the split position chosen by the caller. `split`
/// counts code points and must lie in [1, length - 1].
Tokens SplitWord(std::string_view word, std::size_t split,
                 char false_start_suffix = '-');

std::size_t CodePointLength(std::string_view word);

struct SpellingRule {
  Tokens match;
  Tokens replacement;
};

class SpellingRules {
 public:
  SpellingRules() = default;
  explicit SpellingRules(std::vector<SpellingRule> rules);

  /// favorite -> favourite, coca-cola -> coca cola.
  static SpellingRules Defaults();

  /// One rule per line, `match<TAB>replacement`, each side a
  /// space-separated token sequence. Blank lines and lines starting with
  /// '#' are ignored.
  static SpellingRules Parse(std::istream &in);

  const std::vector<SpellingRule> &rules() const { return rules_; }

  /// Scans left to right; at each position the longest matching rule wins
  /// (file order breaks ties) and scanning resumes after the match.
  Tokens Apply(const Tokens &tokens) const;

 private:
  std::vector<SpellingRule> rules_;
};

inline Tokens NormalizeSpelling(const Tokens &tokens,
                                const SpellingRules &rules) {
  return rules.Apply(tokens);
}

}  // namespace prosokit::text

#endif  // PROSOKIT_TEXT_H_
