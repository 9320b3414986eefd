#include "navhint/lexicon.hpp"

#include <sstream>

namespace navhint {

namespace {

const char* kNouns[] = {
    "hallway",   "table",     "chair",      "sofa",       "lamp",
    "door",      "window",    "stove",      "countertop", "refrigerator",
    "sink",      "mirror",    "painting",   "rug",        "bed",
    "dresser",   "wardrobe",  "bookshelf",  "desk",       "couch",
    "television","fireplace", "staircase",  "railing",    "plant",
    "vase",      "clock",     "cabinet",    "shelf",      "bench",
    "stool",     "ottoman",   "curtain",    "blanket",    "pillow",
    "nightstand","armchair",  "piano",      "sideboard",  "chandelier",
    "doorway",   "archway",   "column",     "statue",     "fountain",
    "wall",      "floor",     "ceiling",    "carpet",     "tile",
    "counter",   "island",    "pantry",     "oven",       "microwave",
    "dishwasher","toilet",    "bathtub",    "shower",     "towel",
    "basket",    "hamper",    "ladder",     "banister",   "balcony",
    "closet",    "drawer",    "headboard",  "footstool",  "recliner",
    "loveseat",  "barstool",  "easel",      "globe",      "trunk",
    "chest",     "crib",      "highchair",  "treadmill",  "aquarium",
};

const char* kAttributes[] = {
    "wooden", "marble",  "glass",   "metal",   "leather", "blue",
    "red",    "green",   "white",   "black",   "gray",    "brown",
    "yellow", "small",   "large",   "round",   "square",  "tall",
    "short",  "antique", "modern",  "dining",  "ornate",  "plain",
    "striped","velvet",  "wicker",  "stone",   "golden",  "rustic",
};

const char* kDirectionWords[] = {
    "left", "right", "straight", "around", "forward", "back",
    "up",   "down",  "ahead",
};

Lexicon build_default() {
  Lexicon lex;
  for (const char* n : kNouns) lex.nouns.emplace_back(n);
  for (const char* a : kAttributes) lex.attributes.emplace_back(a);
  lex.noun_set.insert(lex.nouns.begin(), lex.nouns.end());
  lex.attribute_set.insert(lex.attributes.begin(), lex.attributes.end());
  return lex;
}

}  // namespace

const Lexicon& default_lexicon() {
  static const Lexicon lex = build_default();
  return lex;
}

bool Lexicon::is_noun(const std::string& token) const {
  if (noun_set.count(token)) return true;
  return noun_set.count(singularize(token)) > 0;
}

bool is_direction_word(const std::string& token) {
  for (const char* w : kDirectionWords)
    if (token == w) return true;
  return false;
}

std::string singularize(const std::string& token) {
  auto n = token.size();
  if (n > 3 && token.compare(n - 3, 3, "ies") == 0)
    return token.substr(0, n - 3) + "y";
  if (n > 1 && token.back() == 's' && !(n > 2 && token[n - 2] == 's'))
    return token.substr(0, n - 1);
  return token;
}

std::vector<std::string> split_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

}  // namespace navhint

