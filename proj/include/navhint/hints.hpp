#ifndef NAVHINT_HINTS_HPP
#define NAVHINT_HINTS_HPP

#include <map>
#include <string>
#include <vector>

#include "navhint/world.hpp"

namespace navhint {

enum class AmbiguityCategory {
  TargetLandmarks,
  MultipleLandmarks,
  MissingLandmarks,
  InvisibleLandmarks,
  NoLandmarks,
};

const char* category_name(AmbiguityCategory c);
AmbiguityCategory category_from_name(const std::string& name);

struct LandmarkPhrase {
  std::string head_noun;                // surface token (may be plural)
  std::vector<std::string> attributes;  // tokens preceding the noun
  int span_start = 0;                   // token range within sub-instruction
  int span_end = 0;

  std::string phrase() const;
  bool operator==(const LandmarkPhrase&) const = default;
};

struct HintRecord {
  std::string episode_id;
  int step_index = 0;
  std::vector<std::string> sub_instruction;
  std::map<AmbiguityCategory, std::vector<LandmarkPhrase>> landmark_groups;
  std::vector<std::string> distinctive_objects;  // phrases, at most 3
  AmbiguityCategory step_category = AmbiguityCategory::NoLandmarks;
  std::string rendered;

  bool operator==(const HintRecord&) const = default;
};

struct RenderOptions {
  bool include_sub = true;
  bool include_ambiguity = true;
  bool include_distinctive = true;
  bool single_clause = false;  // only the precedence-winning ambiguity clause
};

std::vector<LandmarkPhrase> extract_landmarks(
    const std::vector<std::string>& sub_instruction,
    const Lexicon& lex = default_lexicon());

bool landmark_visible(const LandmarkPhrase& landmark, const CandidateView& view);

struct AmbiguityResult {
  std::vector<AmbiguityCategory> per_landmark;
  AmbiguityCategory step_category = AmbiguityCategory::NoLandmarks;
};

AmbiguityResult classify_ambiguity(const std::vector<LandmarkPhrase>& landmarks,
                                   const std::vector<CandidateView>& views,
                                   std::size_t target_idx);

std::vector<std::string> select_distinctive_objects(
    const std::vector<CandidateView>& views, std::size_t target_idx,
    std::size_t max_count = 3);

std::string render_hint(const HintRecord& record,
                        const RenderOptions& opts = {});

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::size_t offset_)
      : std::runtime_error(what), offset(offset_) {}
  std::size_t offset;
};

struct ParsedHint {
  std::vector<std::string> sub_instruction;
  std::map<AmbiguityCategory, std::vector<LandmarkPhrase>> landmark_groups;
  std::vector<std::string> distinctive_objects;
  bool ambiguity_valid = true;
  bool distinctive_valid = true;
};

// Inverse of render_hint on the template grammar; malformed ambiguity or
// distinctive clauses are flagged rather than fatal. A broken sub-instruction
// clause throws ParseError with the clause offset.
ParsedHint parse_hint(const std::string& text,
                      const Lexicon& lex = default_lexicon());

struct HintDataset {
  std::vector<HintRecord> records;
};

HintDataset build_hint_dataset(const std::vector<Episode>& episodes,
                               const std::map<std::string, World>& worlds,
                               const RenderOptions& opts = {},
                               const Lexicon& lex = default_lexicon());

HintRecord build_hint_record(const Episode& episode, const World& world,
                             int step_index, const RenderOptions& opts = {},
                             const Lexicon& lex = default_lexicon());

std::map<AmbiguityCategory, int> dataset_stats(const HintDataset& dataset);

std::string hint_record_to_json(const HintRecord& record);
HintRecord hint_record_from_json(const std::string& line);

}  // namespace navhint

#endif
