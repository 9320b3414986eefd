#ifndef NAVHINT_LEXICON_HPP
#define NAVHINT_LEXICON_HPP

#include <string>
#include <unordered_set>
#include <vector>

namespace navhint {

// Object vocabulary shared by the world generator, the landmark chunker and
// the analyses. Compiled in; `version` bumps whenever the word lists change.
struct Lexicon {
  int version = 1;
  std::vector<std::string> nouns;       // head nouns, singular form
  std::vector<std::string> attributes;  // modifiers usable before a noun

  std::unordered_set<std::string> noun_set;
  std::unordered_set<std::string> attribute_set;

  bool is_noun(const std::string& token) const;
  bool is_attribute(const std::string& token) const {
    return attribute_set.count(token) > 0;
  }
};

const Lexicon& default_lexicon();

// Direction/motion words that must never become landmarks.
bool is_direction_word(const std::string& token);

// Suffix-rule singularization: "-ies" -> "-y", strip trailing "s" unless the
// lexicon form ends in "ss".
std::string singularize(const std::string& token);

std::vector<std::string> split_tokens(const std::string& text);
std::string join_tokens(const std::vector<std::string>& tokens);

}  // namespace navhint

#endif
