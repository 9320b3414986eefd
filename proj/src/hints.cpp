#include "navhint/hints.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

namespace navhint {

const char* category_name(AmbiguityCategory c) {
  switch (c) {
    case AmbiguityCategory::TargetLandmarks: return "target";
    case AmbiguityCategory::MultipleLandmarks: return "multiple";
    case AmbiguityCategory::MissingLandmarks: return "missing";
    case AmbiguityCategory::InvisibleLandmarks: return "invisible";
    case AmbiguityCategory::NoLandmarks: return "no_landmarks";
  }
  return "no_landmarks";
}

AmbiguityCategory category_from_name(const std::string& name) {
  if (name == "target") return AmbiguityCategory::TargetLandmarks;
  if (name == "multiple") return AmbiguityCategory::MultipleLandmarks;
  if (name == "missing") return AmbiguityCategory::MissingLandmarks;
  if (name == "invisible") return AmbiguityCategory::InvisibleLandmarks;
  if (name == "no_landmarks") return AmbiguityCategory::NoLandmarks;
  throw ValidationError("unknown ambiguity category: " + name);
}

std::string LandmarkPhrase::phrase() const {
  std::string out;
  for (const auto& a : attributes) {
    out += a;
    out += ' ';
  }
  out += head_noun;
  return out;
}

std::vector<LandmarkPhrase> extract_landmarks(
    const std::vector<std::string>& sub, const Lexicon& lex) {
  std::vector<LandmarkPhrase> out;
  std::set<std::string> seen;
  const int l = static_cast<int>(sub.size());
  for (int i = 0; i < l; ++i) {
    if (!lex.is_noun(sub[i]) || is_direction_word(sub[i])) continue;
    // Maximal [attribute* noun] chunk ending at i.
    int start = i;
    while (start > 0 && lex.is_attribute(sub[start - 1])) --start;
    LandmarkPhrase lm;
    lm.head_noun = sub[i];
    lm.attributes.assign(sub.begin() + start, sub.begin() + i);
    lm.span_start = start;
    lm.span_end = i + 1;
    if (seen.insert(lm.phrase()).second) out.push_back(lm);
  }
  return out;
}

bool landmark_visible(const LandmarkPhrase& landmark,
                      const CandidateView& view) {
  std::string want = singularize(landmark.head_noun);
  for (const auto& o : view.objects)
    if (singularize(o.head_noun) == want) return true;
  return false;
}

AmbiguityResult classify_ambiguity(const std::vector<LandmarkPhrase>& landmarks,
                                   const std::vector<CandidateView>& views,
                                   std::size_t target_idx) {
  if (target_idx >= views.size())
    throw LookupError("classify_ambiguity: target index out of range");
  AmbiguityResult result;
  if (landmarks.empty()) {
    result.step_category = AmbiguityCategory::NoLandmarks;
    return result;
  }
  bool has_missing = false, has_multiple = false, has_target = false;
  for (const auto& lm : landmarks) {
    bool in_target = landmark_visible(lm, views[target_idx]);
    bool in_other = false;
    for (std::size_t i = 0; i < views.size(); ++i)
      if (i != target_idx && landmark_visible(lm, views[i])) in_other = true;
    AmbiguityCategory c;
    if (in_target && in_other) {
      c = AmbiguityCategory::MultipleLandmarks;
      has_multiple = true;
    } else if (in_target) {
      c = AmbiguityCategory::TargetLandmarks;
      has_target = true;
    } else if (in_other) {
      c = AmbiguityCategory::MissingLandmarks;
      has_missing = true;
    } else {
      c = AmbiguityCategory::InvisibleLandmarks;
    }
    result.per_landmark.push_back(c);
  }
  // Precedence: Missing > Multiple > Target > Invisible.
  if (has_missing)
    result.step_category = AmbiguityCategory::MissingLandmarks;
  else if (has_multiple)
    result.step_category = AmbiguityCategory::MultipleLandmarks;
  else if (has_target)
    result.step_category = AmbiguityCategory::TargetLandmarks;
  else
    result.step_category = AmbiguityCategory::InvisibleLandmarks;
  return result;
}

std::vector<std::string> select_distinctive_objects(
    const std::vector<CandidateView>& views, std::size_t target_idx,
    std::size_t max_count) {
  if (target_idx >= views.size())
    throw LookupError("select_distinctive_objects: target index out of range");
  std::set<std::string> other_nouns;
  for (std::size_t i = 0; i < views.size(); ++i) {
    if (i == target_idx) continue;
    for (const auto& o : views[i].objects)
      other_nouns.insert(singularize(o.head_noun));
  }
  std::vector<std::string> out;
  for (const auto& o : views[target_idx].objects) {
    if (out.size() >= max_count) break;
    if (!other_nouns.count(singularize(o.head_noun)))
      out.push_back(o.phrase());
  }
  return out;
}

namespace {

constexpr AmbiguityCategory kClauseOrder[] = {
    AmbiguityCategory::TargetLandmarks,
    AmbiguityCategory::MultipleLandmarks,
    AmbiguityCategory::MissingLandmarks,
    AmbiguityCategory::InvisibleLandmarks,
};

std::string clause_suffix(AmbiguityCategory c) {
  switch (c) {
    case AmbiguityCategory::TargetLandmarks: return " are observed.";
    case AmbiguityCategory::MultipleLandmarks:
      return " are observed in multiple viewpoints.";
    case AmbiguityCategory::MissingLandmarks: return " are misleading.";
    case AmbiguityCategory::InvisibleLandmarks: return " are not observed.";
    default: return "";
  }
}

std::string comma_join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out;
}

std::vector<std::string> comma_split(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find(", ", pos);
    if (next == std::string::npos) {
      if (pos < text.size()) out.push_back(text.substr(pos));
      break;
    }
    out.push_back(text.substr(pos, next - pos));
    pos = next + 2;
  }
  return out;
}

}  // namespace

std::string render_hint(const HintRecord& record, const RenderOptions& opts) {
  std::vector<std::string> clauses;
  if (opts.include_sub)
    clauses.push_back("The " + join_tokens(record.sub_instruction) +
                      " needs to be executed.");
  if (opts.include_ambiguity) {
    for (AmbiguityCategory c : kClauseOrder) {
      if (opts.single_clause && c != record.step_category) continue;
      auto it = record.landmark_groups.find(c);
      if (it == record.landmark_groups.end() || it->second.empty()) continue;
      std::vector<std::string> phrases;
      for (const auto& lm : it->second) phrases.push_back(lm.phrase());
      clauses.push_back("The " + comma_join(phrases) + clause_suffix(c));
    }
  }
  if (opts.include_distinctive && !record.distinctive_objects.empty())
    clauses.push_back("However, " + comma_join(record.distinctive_objects) +
                      " are in the targeted view.");
  std::string out;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    if (i) out += ' ';
    out += clauses[i];
  }
  return out;
}

namespace {

bool strip_affixes(const std::string& clause, const std::string& prefix,
                   const std::string& suffix, std::string& middle) {
  if (clause.size() < prefix.size() + suffix.size()) return false;
  if (clause.compare(0, prefix.size(), prefix) != 0) return false;
  if (clause.compare(clause.size() - suffix.size(), suffix.size(), suffix) != 0)
    return false;
  middle = clause.substr(prefix.size(),
                         clause.size() - prefix.size() - suffix.size());
  return !middle.empty();
}

// Re-chunks a rendered landmark phrase: trailing token is the head noun,
// everything before it the attributes; the source span is the first match of
// the phrase inside the sub-instruction.
LandmarkPhrase landmark_from_phrase(const std::string& phrase,
                                    const std::vector<std::string>& sub) {
  auto tokens = split_tokens(phrase);
  LandmarkPhrase lm;
  if (tokens.empty()) return lm;
  lm.head_noun = tokens.back();
  lm.attributes.assign(tokens.begin(), tokens.end() - 1);
  const int tn = static_cast<int>(tokens.size());
  const int l = static_cast<int>(sub.size());
  for (int start = 0; start + tn <= l; ++start) {
    if (std::equal(tokens.begin(), tokens.end(), sub.begin() + start)) {
      lm.span_start = start;
      lm.span_end = start + tn;
      break;
    }
  }
  return lm;
}

}  // namespace

ParsedHint parse_hint(const std::string& text, const Lexicon&) {
  ParsedHint out;
  std::size_t pos = 0;
  bool first = true;
  while (pos < text.size()) {
    std::size_t dot = text.find('.', pos);
    bool complete = dot != std::string::npos;
    std::string clause =
        complete ? text.substr(pos, dot - pos) : text.substr(pos);
    std::size_t clause_offset = pos;
    pos = complete ? dot + 1 : text.size();
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (clause.empty()) continue;

    std::string middle;
    if (first) {
      if (!complete ||
          !strip_affixes(clause, "The ", " needs to be executed", middle))
        throw ParseError("unparseable sub-instruction clause", clause_offset);
      out.sub_instruction = split_tokens(middle);
      first = false;
      continue;
    }
    if (clause.rfind("However, ", 0) == 0) {
      if (complete &&
          strip_affixes(clause, "However, ", " are in the targeted view",
                        middle)) {
        out.distinctive_objects = comma_split(middle);
      } else {
        out.distinctive_valid = false;
      }
      continue;
    }
    AmbiguityCategory cat;
    bool matched = false;
    if (complete) {
      // Longest suffix first: plain "are observed" is a suffix of the
      // multiple-viewpoints template.
      if (strip_affixes(clause, "The ",
                        " are observed in multiple viewpoints", middle)) {
        cat = AmbiguityCategory::MultipleLandmarks;
        matched = true;
      } else if (strip_affixes(clause, "The ", " are not observed", middle)) {
        cat = AmbiguityCategory::InvisibleLandmarks;
        matched = true;
      } else if (strip_affixes(clause, "The ", " are misleading", middle)) {
        cat = AmbiguityCategory::MissingLandmarks;
        matched = true;
      } else if (strip_affixes(clause, "The ", " are observed", middle)) {
        cat = AmbiguityCategory::TargetLandmarks;
        matched = true;
      }
    }
    if (!matched) {
      out.ambiguity_valid = false;
      continue;
    }
    auto& group = out.landmark_groups[cat];
    for (const auto& phrase : comma_split(middle))
      group.push_back(landmark_from_phrase(phrase, out.sub_instruction));
  }
  if (first) throw ParseError("missing sub-instruction clause", 0);
  return out;
}

HintRecord build_hint_record(const Episode& episode, const World& world,
                             int step_index, const RenderOptions& opts,
                             const Lexicon& lex) {
  const auto& span = episode.spans.at(step_index);
  HintRecord rec;
  rec.episode_id = episode.id;
  rec.step_index = step_index;
  rec.sub_instruction.assign(episode.instruction.begin() + span.start_token,
                             episode.instruction.begin() + span.end_token);
  NodeId node = episode.path.at(span.hop_index);
  NodeId next = episode.path.at(span.hop_index + 1);
  const auto& views = world.views.at(node);
  std::size_t target_idx = 0;
  for (std::size_t i = 0; i < views.size(); ++i)
    if (views[i].neighbor == next) target_idx = i;

  auto landmarks = extract_landmarks(rec.sub_instruction, lex);
  auto ambiguity = classify_ambiguity(landmarks, views, target_idx);
  rec.step_category = ambiguity.step_category;
  for (std::size_t i = 0; i < landmarks.size(); ++i)
    rec.landmark_groups[ambiguity.per_landmark[i]].push_back(landmarks[i]);

  // No extra distinctive objects when the landmark already pins the target,
  // and none for landmark-free motion steps.
  if (rec.step_category != AmbiguityCategory::TargetLandmarks &&
      rec.step_category != AmbiguityCategory::NoLandmarks)
    rec.distinctive_objects = select_distinctive_objects(views, target_idx);

  rec.rendered = render_hint(rec, opts);
  return rec;
}

HintDataset build_hint_dataset(const std::vector<Episode>& episodes,
                               const std::map<std::string, World>& worlds,
                               const RenderOptions& opts, const Lexicon& lex) {
  HintDataset dataset;
  for (const auto& ep : episodes) {
    auto it = worlds.find(ep.world_id);
    if (it == worlds.end())
      throw LookupError("build_hint_dataset: unknown world " + ep.world_id);
    for (int step = 0; step < static_cast<int>(ep.spans.size()); ++step)
      dataset.records.push_back(
          build_hint_record(ep, it->second, step, opts, lex));
  }
  std::stable_sort(dataset.records.begin(), dataset.records.end(),
                   [](const HintRecord& a, const HintRecord& b) {
                     if (a.episode_id != b.episode_id)
                       return a.episode_id < b.episode_id;
                     return a.step_index < b.step_index;
                   });
  return dataset;
}

std::map<AmbiguityCategory, int> dataset_stats(const HintDataset& dataset) {
  std::map<AmbiguityCategory, int> hist;
  for (const auto& rec : dataset.records) ++hist[rec.step_category];
  return hist;
}

using nlohmann::json;

std::string hint_record_to_json(const HintRecord& rec) {
  json groups = json::object();
  for (const auto& [cat, landmarks] : rec.landmark_groups) {
    json list = json::array();
    for (const auto& lm : landmarks)
      list.push_back({{"head_noun", lm.head_noun},
                      {"attributes", lm.attributes},
                      {"span_start", lm.span_start},
                      {"span_end", lm.span_end}});
    groups[category_name(cat)] = std::move(list);
  }
  json j{{"schema_version", 1},
         {"episode_id", rec.episode_id},
         {"step_index", rec.step_index},
         {"sub_instruction", rec.sub_instruction},
         {"landmark_groups", std::move(groups)},
         {"distinctive_objects", rec.distinctive_objects},
         {"step_category", category_name(rec.step_category)},
         {"rendered", rec.rendered}};
  return j.dump();
}

HintRecord hint_record_from_json(const std::string& line) {
  json j = json::parse(line);
  if (j.at("schema_version").get<int>() != 1)
    throw ValidationError("hint record: unknown schema version");
  HintRecord rec;
  rec.episode_id = j.at("episode_id").get<std::string>();
  rec.step_index = j.at("step_index").get<int>();
  rec.sub_instruction =
      j.at("sub_instruction").get<std::vector<std::string>>();
  for (auto it = j.at("landmark_groups").begin();
       it != j.at("landmark_groups").end(); ++it) {
    auto& group = rec.landmark_groups[category_from_name(it.key())];
    for (const auto& l : it.value()) {
      LandmarkPhrase lm;
      lm.head_noun = l.at("head_noun").get<std::string>();
      lm.attributes = l.at("attributes").get<std::vector<std::string>>();
      lm.span_start = l.at("span_start").get<int>();
      lm.span_end = l.at("span_end").get<int>();
      group.push_back(lm);
    }
  }
  rec.distinctive_objects =
      j.at("distinctive_objects").get<std::vector<std::string>>();
  rec.step_category = category_from_name(j.at("step_category").get<std::string>());
  rec.rendered = j.at("rendered").get<std::string>();
  return rec;
}

}  // namespace navhint
