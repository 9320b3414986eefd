#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>
#include <string>
#include <vector>

#include "navhint/hints.hpp"
#include "navhint/world.hpp"

using namespace navhint;

namespace {

CandidateView make_view(NodeId neighbor, std::vector<std::string> nouns) {
  CandidateView v;
  v.neighbor = neighbor;
  for (auto& n : nouns) v.objects.push_back({std::move(n), {}});
  return v;
}

LandmarkPhrase make_landmark(std::string noun,
                             std::vector<std::string> attrs = {}) {
  LandmarkPhrase lm;
  lm.head_noun = std::move(noun);
  lm.attributes = std::move(attrs);
  return lm;
}

// A corpus big enough for the 10k-record grammar fuzz below.
std::pair<std::vector<Episode>, std::map<std::string, World>> fuzz_corpus() {
  std::vector<Episode> episodes;
  std::map<std::string, World> worlds;
  EpisodeConfig ecfg;
  for (std::uint64_t ws = 0; ws < 12; ++ws) {
    World w = generate_world(1000 + ws, WorldConfig{});
    for (std::uint64_t es = 0; es < 320; ++es) {
      Episode ep = generate_episode(w, es, ecfg);
      ep.id = w.id + "_" + std::to_string(es);
      ep.world_id = w.id;
      episodes.push_back(std::move(ep));
    }
    worlds.emplace(w.id, std::move(w));
  }
  return {std::move(episodes), std::move(worlds)};
}

}  // namespace

TEST_CASE("category names round trip") {
  for (auto c : {AmbiguityCategory::TargetLandmarks,
                 AmbiguityCategory::MultipleLandmarks,
                 AmbiguityCategory::MissingLandmarks,
                 AmbiguityCategory::InvisibleLandmarks,
                 AmbiguityCategory::NoLandmarks})
    CHECK(category_from_name(category_name(c)) == c);
  CHECK_THROWS_AS(category_from_name("bogus"), ValidationError);
}

TEST_CASE("extract_landmarks chunks attribute-noun phrases") {
  const auto& lex = default_lexicon();
  REQUIRE(lex.nouns.size() >= 2);
  REQUIRE(!lex.attributes.empty());
  const std::string& noun_a = lex.nouns[0];
  const std::string& noun_b = lex.nouns[1];
  const std::string& attr = lex.attributes[0];

  std::vector<std::string> sub = {"walk",  "towards", "the", attr,
                                  noun_a, "then",    "the", noun_b};
  auto lms = extract_landmarks(sub);
  REQUIRE(lms.size() == 2);
  CHECK(lms[0].head_noun == noun_a);
  CHECK(lms[0].attributes == std::vector<std::string>{attr});
  CHECK(lms[0].span_start == 3);
  CHECK(lms[0].span_end == 5);
  CHECK(lms[1].head_noun == noun_b);
  CHECK(lms[1].attributes.empty());

  // Duplicate phrases collapse to the first occurrence.
  std::vector<std::string> dup = {"the", noun_a, "past", "the", noun_a};
  CHECK(extract_landmarks(dup).size() == 1);

  // Direction words never become landmarks even if they look like nouns.
  CHECK(extract_landmarks({"turn", "left", "and", "go", "straight"}).empty());
}

TEST_CASE("classify_ambiguity covers all five categories") {
  std::vector<CandidateView> views = {
      make_view(1, {"sofa", "lamp"}),
      make_view(2, {"lamp", "piano"}),
      make_view(3, {"rug"}),
  };

  SUBCASE("target: visible only in the targeted view") {
    auto r = classify_ambiguity({make_landmark("sofa")}, views, 0);
    CHECK(r.step_category == AmbiguityCategory::TargetLandmarks);
    CHECK(r.per_landmark ==
          std::vector{AmbiguityCategory::TargetLandmarks});
  }
  SUBCASE("multiple: visible in the target and elsewhere") {
    auto r = classify_ambiguity({make_landmark("lamp")}, views, 0);
    CHECK(r.step_category == AmbiguityCategory::MultipleLandmarks);
  }
  SUBCASE("missing: visible elsewhere but not in the target") {
    auto r = classify_ambiguity({make_landmark("piano")}, views, 0);
    CHECK(r.step_category == AmbiguityCategory::MissingLandmarks);
  }
  SUBCASE("invisible: in no candidate view") {
    auto r = classify_ambiguity({make_landmark("fountain")}, views, 0);
    CHECK(r.step_category == AmbiguityCategory::InvisibleLandmarks);
  }
  SUBCASE("no landmarks") {
    auto r = classify_ambiguity({}, views, 0);
    CHECK(r.step_category == AmbiguityCategory::NoLandmarks);
    CHECK(r.per_landmark.empty());
  }
  SUBCASE("plural surface forms match singular objects") {
    auto r = classify_ambiguity({make_landmark("sofas")}, views, 0);
    CHECK(r.step_category == AmbiguityCategory::TargetLandmarks);
  }
  SUBCASE("step precedence is missing > multiple > target") {
    auto r = classify_ambiguity(
        {make_landmark("sofa"), make_landmark("lamp"), make_landmark("piano")},
        views, 0);
    CHECK(r.step_category == AmbiguityCategory::MissingLandmarks);
    CHECK(r.per_landmark ==
          std::vector{AmbiguityCategory::TargetLandmarks,
                      AmbiguityCategory::MultipleLandmarks,
                      AmbiguityCategory::MissingLandmarks});
  }
  SUBCASE("out-of-range target throws") {
    CHECK_THROWS_AS(classify_ambiguity({}, views, 3), LookupError);
  }
}

TEST_CASE("select_distinctive_objects picks target-exclusive nouns") {
  std::vector<CandidateView> views = {
      make_view(1, {"sofa", "lamp", "vase", "mirror", "clock"}),
      make_view(2, {"lamp", "piano"}),
  };
  auto picks = select_distinctive_objects(views, 0);
  CHECK(picks.size() == 3);  // capped at three
  for (const auto& p : picks) CHECK(p != "lamp");

  CHECK(select_distinctive_objects(views, 0, 1) ==
        std::vector<std::string>{"sofa"});
  CHECK_THROWS_AS(select_distinctive_objects(views, 5), LookupError);
}

TEST_CASE("render and parse invert each other on hand-built records") {
  HintRecord rec;
  rec.sub_instruction = {"walk", "to", "the", "red", "sofa"};
  rec.landmark_groups[AmbiguityCategory::MultipleLandmarks] = {
      make_landmark("sofa", {"red"})};
  rec.distinctive_objects = {"tall lamp", "vase"};
  std::string text = render_hint(rec);

  auto parsed = parse_hint(text);
  CHECK(parsed.sub_instruction == rec.sub_instruction);
  CHECK(parsed.distinctive_objects == rec.distinctive_objects);
  CHECK(parsed.ambiguity_valid);
  CHECK(parsed.distinctive_valid);
  REQUIRE(parsed.landmark_groups.count(AmbiguityCategory::MultipleLandmarks));
  const auto& group =
      parsed.landmark_groups.at(AmbiguityCategory::MultipleLandmarks);
  REQUIRE(group.size() == 1);
  CHECK(group[0].head_noun == "sofa");
  CHECK(group[0].attributes == std::vector<std::string>{"red"});
  CHECK(group[0].span_start == 3);
  CHECK(group[0].span_end == 5);
}

TEST_CASE("render options ablate clauses") {
  HintRecord rec;
  rec.sub_instruction = {"go", "to", "the", "sofa"};
  rec.step_category = AmbiguityCategory::InvisibleLandmarks;
  rec.landmark_groups[AmbiguityCategory::InvisibleLandmarks] = {
      make_landmark("sofa")};
  rec.landmark_groups[AmbiguityCategory::MissingLandmarks] = {
      make_landmark("lamp")};
  rec.distinctive_objects = {"vase"};

  RenderOptions nav_only;
  nav_only.include_ambiguity = false;
  nav_only.include_distinctive = false;
  CHECK(render_hint(rec, nav_only) ==
        "The go to the sofa needs to be executed.");

  RenderOptions no_sub;
  no_sub.include_sub = false;
  std::string text = render_hint(rec, no_sub);
  CHECK(text.find("needs to be executed") == std::string::npos);
  CHECK(text.find("are not observed") != std::string::npos);

  RenderOptions single;
  single.single_clause = true;
  std::string one = render_hint(rec, single);
  CHECK(one.find("are not observed") != std::string::npos);
  CHECK(one.find("are misleading") == std::string::npos);
}

TEST_CASE("parse_hint flags malformed optional clauses") {
  auto parsed = parse_hint(
      "The go left needs to be executed. The sofa floats mysteriously.");
  CHECK(!parsed.ambiguity_valid);
  CHECK(parsed.landmark_groups.empty());

  parsed = parse_hint(
      "The go left needs to be executed. However, something went wrong");
  CHECK(!parsed.distinctive_valid);

  CHECK_THROWS_AS(parse_hint("complete gibberish"), ParseError);
  CHECK_THROWS_AS(parse_hint(""), ParseError);
}

TEST_CASE("grammar round trip and exclusivity on a 10k-record corpus") {
  auto [episodes, worlds] = fuzz_corpus();
  HintDataset dataset = build_hint_dataset(episodes, worlds);
  REQUIRE(dataset.records.size() >= 10000);

  std::map<std::string, const Episode*> by_id;
  for (const auto& e : episodes) by_id[e.id] = &e;

  int target_records = 0;
  for (const auto& rec : dataset.records) {
    // Grammar round trip.
    ParsedHint parsed = parse_hint(rec.rendered);
    REQUIRE(parsed.ambiguity_valid);
    REQUIRE(parsed.distinctive_valid);
    REQUIRE(parsed.sub_instruction == rec.sub_instruction);
    REQUIRE(parsed.landmark_groups == rec.landmark_groups);
    REQUIRE(parsed.distinctive_objects == rec.distinctive_objects);

    // Independent exclusivity check: every distinctive phrase must name an
    // object present in the targeted view and absent from every other view.
    REQUIRE(by_id.count(rec.episode_id));
    const Episode* ep = by_id.at(rec.episode_id);
    const World& w = worlds.at(ep->world_id);
    NodeId node = ep->path.at(rec.step_index);
    NodeId next = ep->path.at(rec.step_index + 1);
    const auto& views = w.views.at(node);
    std::size_t target_idx = views.size();
    for (std::size_t i = 0; i < views.size(); ++i)
      if (views[i].neighbor == next) target_idx = i;
    REQUIRE(target_idx < views.size());

    for (const auto& phrase : rec.distinctive_objects) {
      auto toks = split_tokens(phrase);
      REQUIRE(!toks.empty());
      std::string noun = singularize(toks.back());
      bool in_target = false;
      for (const auto& o : views[target_idx].objects)
        if (singularize(o.head_noun) == noun) in_target = true;
      REQUIRE(in_target);
      for (std::size_t i = 0; i < views.size(); ++i) {
        if (i == target_idx) continue;
        for (const auto& o : views[i].objects)
          REQUIRE(singularize(o.head_noun) != noun);
      }
    }

    // A landmark that already pins the target needs no extra objects.
    if (rec.step_category == AmbiguityCategory::TargetLandmarks) {
      ++target_records;
      REQUIRE(rec.distinctive_objects.empty());
    }
    if (rec.step_category == AmbiguityCategory::NoLandmarks)
      REQUIRE(rec.distinctive_objects.empty());
  }
  CHECK(target_records > 0);

  auto stats = dataset_stats(dataset);
  int total = 0;
  for (const auto& [cat, count] : stats) total += count;
  CHECK(total == static_cast<int>(dataset.records.size()));
}

TEST_CASE("hint record JSON round trip") {
  World w = generate_world(5, WorldConfig{});
  Episode ep = generate_episode(w, 3, EpisodeConfig{});
  ep.id = "ep3";
  HintRecord rec = build_hint_record(ep, w, 0);
  HintRecord back = hint_record_from_json(hint_record_to_json(rec));
  CHECK(back == rec);
}
