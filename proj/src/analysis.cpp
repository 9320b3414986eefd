#include "navhint/analysis.hpp"

#include <algorithm>
#include <cstdio>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "navhint/metrics.hpp"

namespace navhint {

namespace {

// Ground truth for one generated step: the views at the step's node plus the
// indices of the teacher's and the agent's chosen views.
struct StepContext {
  const std::vector<CandidateView>* views = nullptr;
  std::size_t target_idx = 0;    // teacher's view
  std::size_t selected_idx = 0;  // agent's view
  bool has_selected = false;
  bool right_action = false;
};

int view_index(const std::vector<CandidateView>& views, NodeId neighbor) {
  for (std::size_t i = 0; i < views.size(); ++i)
    if (views[i].neighbor == neighbor) return static_cast<int>(i);
  return -1;
}

// Steps whose teacher action is STOP have no target view and are excluded
// from every analysis.
std::optional<StepContext> resolve_step(
    const GeneratedStep& step,
    const std::map<std::string, const World*>& world_by_episode) {
  auto it = world_by_episode.find(step.episode_id);
  if (it == world_by_episode.end())
    throw LookupError("analysis: unknown episode " + step.episode_id);
  const World& world = *it->second;
  if (step.teacher_neighbor < 0) return std::nullopt;
  StepContext ctx;
  ctx.views = &world.views.at(step.node);
  int t = view_index(*ctx.views, step.teacher_neighbor);
  if (t < 0) throw ValidationError("analysis: teacher view not found");
  ctx.target_idx = static_cast<std::size_t>(t);
  if (step.selected_neighbor >= 0) {
    int s = view_index(*ctx.views, step.selected_neighbor);
    if (s < 0) throw ValidationError("analysis: selected view not found");
    ctx.selected_idx = static_cast<std::size_t>(s);
    ctx.has_selected = true;
    ctx.right_action = ctx.selected_idx == ctx.target_idx;
  }
  return ctx;
}

std::map<std::string, const World*> index_worlds(
    const std::vector<Episode>& episodes,
    const std::map<std::string, World>& worlds) {
  std::map<std::string, const World*> out;
  for (const auto& ep : episodes) {
    auto wit = worlds.find(ep.world_id);
    if (wit == worlds.end())
      throw LookupError("analysis: unknown world " + ep.world_id);
    out[ep.id] = &wit->second;
  }
  return out;
}

bool phrase_in_view(const CandidateView& view, const std::string& phrase) {
  for (const auto& o : view.objects)
    if (o.phrase() == phrase) return true;
  return false;
}

bool noun_in_view(const CandidateView& view, const std::string& noun) {
  for (const auto& o : view.objects)
    if (singularize(o.head_noun) == noun) return true;
  return false;
}

// The claim is correct when the phrase (or its head noun) appears in the
// agent's selected view and nowhere else.
bool exclusive_to_view(const std::vector<CandidateView>& views,
                       std::size_t selected, const std::string& claim,
                       bool object_mode) {
  std::string noun;
  if (object_mode) {
    auto tokens = split_tokens(claim);
    if (tokens.empty()) return false;
    noun = singularize(tokens.back());
  }
  auto present = [&](const CandidateView& v) {
    return object_mode ? noun_in_view(v, noun) : phrase_in_view(v, claim);
  };
  if (!present(views[selected])) return false;
  for (std::size_t i = 0; i < views.size(); ++i)
    if (i != selected && present(views[i])) return false;
  return true;
}

}  // namespace

double AmbiguityAccuracy::overall() const {
  int total = invalid, correct = 0;
  for (const auto& [cat, acc] : per_category) {
    total += acc.total;
    correct += acc.correct;
  }
  return total == 0 ? 0.0 : double(correct) / total;
}

std::pair<double, double> sub_instruction_bleu(
    const std::vector<GeneratedStep>& steps) {
  std::vector<std::vector<std::string>> candidates, references;
  for (const auto& step : steps) {
    if (step.teacher_neighbor < 0) continue;
    references.push_back(parse_hint(step.gold_text).sub_instruction);
    std::vector<std::string> cand;
    try {
      cand = parse_hint(step.text).sub_instruction;
    } catch (const ParseError&) {
      // Unparseable sub clause scores as an empty candidate.
    }
    candidates.push_back(std::move(cand));
  }
  if (candidates.empty()) return {0.0, 0.0};
  return {bleu(1, candidates, references), bleu(4, candidates, references)};
}

AmbiguityAccuracy ambiguity_accuracy(const std::vector<GeneratedStep>& steps,
                                     const std::vector<Episode>& episodes,
                                     const std::map<std::string, World>& worlds,
                                     const AnalysisOptions& options) {
  auto by_episode = index_worlds(episodes, worlds);
  AmbiguityAccuracy out;
  for (const auto& step : steps) {
    auto ctx = resolve_step(step, by_episode);
    if (!ctx) continue;
    ParsedHint parsed;
    try {
      parsed = parse_hint(step.text);
    } catch (const ParseError&) {
      ++out.invalid;  // a malformed hint is a grounding failure
      continue;
    }
    if (!parsed.ambiguity_valid) {
      ++out.invalid;
      continue;
    }
    for (const auto& [claimed, landmarks] : parsed.landmark_groups) {
      auto& bucket = out.per_category[claimed];
      ++bucket.total;
      auto gt = classify_ambiguity(landmarks, *ctx->views, ctx->target_idx);
      int matches = 0;
      for (auto cat : gt.per_landmark)
        if (cat == claimed) ++matches;
      bool ok = options.any_true
                    ? matches > 0
                    : matches == static_cast<int>(landmarks.size());
      if (ok) ++bucket.correct;
    }
  }
  return out;
}

DistinctiveAccuracy distinctive_accuracy(
    const std::vector<GeneratedStep>& steps,
    const std::vector<Episode>& episodes,
    const std::map<std::string, World>& worlds) {
  auto by_episode = index_worlds(episodes, worlds);
  DistinctiveAccuracy out;
  for (const auto& step : steps) {
    auto ctx = resolve_step(step, by_episode);
    if (!ctx || !ctx->has_selected) continue;
    auto& exact = ctx->right_action ? out.exact_right : out.exact_wrong;
    auto& object = ctx->right_action ? out.object_right : out.object_wrong;
    ParsedHint parsed;
    bool parse_ok = true;
    try {
      parsed = parse_hint(step.text);
    } catch (const ParseError&) {
      parse_ok = false;
    }
    if (parse_ok && parsed.distinctive_valid && parsed.distinctive_objects.empty())
      continue;  // no distinctive claim at this step
    ++exact.total;
    ++object.total;
    if (!parse_ok || !parsed.distinctive_valid) continue;  // counts as false
    bool exact_ok = true, object_ok = true;
    for (const auto& claim : parsed.distinctive_objects) {
      exact_ok = exact_ok && exclusive_to_view(*ctx->views, ctx->selected_idx,
                                               claim, false);
      object_ok = object_ok && exclusive_to_view(*ctx->views, ctx->selected_idx,
                                                 claim, true);
    }
    if (exact_ok) ++exact.correct;
    if (object_ok) ++object.correct;
  }
  return out;
}

HintQualityReport analyze_hints(const std::vector<GeneratedStep>& steps,
                                const std::vector<Episode>& episodes,
                                const std::map<std::string, World>& worlds,
                                const AnalysisOptions& options) {
  HintQualityReport report;
  std::tie(report.bleu1, report.bleu4) = sub_instruction_bleu(steps);
  report.ambiguity = ambiguity_accuracy(steps, episodes, worlds, options);
  report.distinctive = distinctive_accuracy(steps, episodes, worlds);
  for (const auto& step : steps) {
    if (step.teacher_neighbor < 0) continue;
    ++report.steps_evaluated;
    try {
      parse_hint(step.text);
    } catch (const ParseError&) {
      ++report.parse_failures;
    }
  }
  return report;
}

using nlohmann::json;

namespace {

json bucket_json(const CategoryAccuracy& b) {
  return json{{"total", b.total}, {"correct", b.correct},
              {"fraction", b.fraction()}};
}

CategoryAccuracy bucket_from_json(const json& j) {
  CategoryAccuracy b;
  b.total = j.at("total").get<int>();
  b.correct = j.at("correct").get<int>();
  return b;
}

}  // namespace

std::string hint_quality_report_to_json(const HintQualityReport& report) {
  json ambiguity = json::object();
  for (const auto& [cat, acc] : report.ambiguity.per_category)
    ambiguity[category_name(cat)] = bucket_json(acc);
  json j{{"schema_version", 1},
         {"bleu1", report.bleu1},
         {"bleu4", report.bleu4},
         {"ambiguity", ambiguity},
         {"ambiguity_invalid", report.ambiguity.invalid},
         {"ambiguity_overall", report.ambiguity.overall()},
         {"distinctive",
          {{"exact_right", bucket_json(report.distinctive.exact_right)},
           {"exact_wrong", bucket_json(report.distinctive.exact_wrong)},
           {"object_right", bucket_json(report.distinctive.object_right)},
           {"object_wrong", bucket_json(report.distinctive.object_wrong)}}},
         {"steps_evaluated", report.steps_evaluated},
         {"parse_failures", report.parse_failures}};
  return j.dump(2) + "\n";
}

HintQualityReport hint_quality_report_from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.at("schema_version").get<int>() != 1)
    throw ValidationError("hint quality report: unknown schema version");
  HintQualityReport r;
  r.bleu1 = j.at("bleu1").get<double>();
  r.bleu4 = j.at("bleu4").get<double>();
  for (const auto& [name, acc] : j.at("ambiguity").items())
    r.ambiguity.per_category[category_from_name(name)] = bucket_from_json(acc);
  r.ambiguity.invalid = j.at("ambiguity_invalid").get<int>();
  const json& d = j.at("distinctive");
  r.distinctive.exact_right = bucket_from_json(d.at("exact_right"));
  r.distinctive.exact_wrong = bucket_from_json(d.at("exact_wrong"));
  r.distinctive.object_right = bucket_from_json(d.at("object_right"));
  r.distinctive.object_wrong = bucket_from_json(d.at("object_wrong"));
  r.steps_evaluated = j.at("steps_evaluated").get<int>();
  r.parse_failures = j.at("parse_failures").get<int>();
  return r;
}

namespace {

std::string svg_bars(const std::vector<std::pair<std::string, double>>& bars,
                     const std::string& title) {
  const int bar_w = 60, gap = 30, height = 200, base = 230;
  int width = gap + static_cast<int>(bars.size()) * (bar_w + gap);
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"290\">\n";
  out << "  <text x=\"" << width / 2
      << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title
      << "</text>\n";
  int x = gap;
  char buf[32];
  for (const auto& [label, value] : bars) {
    int h = static_cast<int>(value * height + 0.5);
    out << "  <rect x=\"" << x << "\" y=\"" << base - h << "\" width=\""
        << bar_w << "\" height=\"" << h << "\" fill=\"#4878a8\"/>\n";
    std::snprintf(buf, sizeof buf, "%.3f", value);
    out << "  <text x=\"" << x + bar_w / 2 << "\" y=\"" << base - h - 6
        << "\" text-anchor=\"middle\" font-size=\"11\">" << buf << "</text>\n";
    out << "  <text x=\"" << x + bar_w / 2 << "\" y=\"" << base + 18
        << "\" text-anchor=\"middle\" font-size=\"11\">" << label
        << "</text>\n";
    x += bar_w + gap;
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace

std::string ambiguity_accuracy_svg(const AmbiguityAccuracy& acc) {
  std::vector<std::pair<std::string, double>> bars;
  for (auto cat :
       {AmbiguityCategory::TargetLandmarks, AmbiguityCategory::MultipleLandmarks,
        AmbiguityCategory::MissingLandmarks,
        AmbiguityCategory::InvisibleLandmarks}) {
    auto it = acc.per_category.find(cat);
    bars.emplace_back(category_name(cat),
                      it == acc.per_category.end() ? 0.0 : it->second.fraction());
  }
  return svg_bars(bars, "landmark ambiguity accuracy");
}

std::string distinctive_accuracy_svg(const DistinctiveAccuracy& acc) {
  return svg_bars({{"exact/right", acc.exact_right.fraction()},
                   {"exact/wrong", acc.exact_wrong.fraction()},
                   {"object/right", acc.object_right.fraction()},
                   {"object/wrong", acc.object_wrong.fraction()}},
                  "distinctive object accuracy");
}

}  // namespace navhint
