// End-to-end acceptance gate. Runs every release criterion against the
// library and the CLI binary (argv[1]) and prints one PASS/FAIL line per
// criterion. Exits nonzero if any criterion fails.
//
// The training criteria run real multi-minute training jobs; expect the whole
// gate to take roughly half an hour.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "navhint/analysis.hpp"
#include "navhint/hints.hpp"
#include "navhint/metrics.hpp"
#include "navhint/model.hpp"
#include "navhint/train.hpp"
#include "navhint/world.hpp"

using namespace navhint;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string g_cli;
fs::path g_work;
std::vector<std::string> g_notes;

void note(const std::string& text) { g_notes.push_back(text); }

void require(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error("check failed: " + what);
}

void run_cli(const std::string& args) {
  std::string cmd = g_cli + " " + args + " >> " +
                    (g_work / "cli.log").string() + " 2>&1";
  int rc = std::system(cmd.c_str());
  if (rc != 0)
    throw std::runtime_error("command failed (" + std::to_string(rc) +
                             "): " + args);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

json slurp_json(const fs::path& path) { return json::parse(slurp(path)); }

double wall_of(const std::function<void()>& fn) {
  auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

// ---------------------------------------------------------------------------
// Criterion 1: metric implementations against exhaustive oracles.

double enumerate_alignments(const std::vector<NodeId>& p,
                            const std::vector<NodeId>& r,
                            const DistanceTable& dist, std::size_t i,
                            std::size_t j) {
  double cost = dist(p[i], r[j]);
  if (i + 1 == p.size() && j + 1 == r.size()) return cost;
  double best = std::numeric_limits<double>::infinity();
  if (i + 1 < p.size())
    best = std::min(best, enumerate_alignments(p, r, dist, i + 1, j));
  if (j + 1 < r.size())
    best = std::min(best, enumerate_alignments(p, r, dist, i, j + 1));
  if (i + 1 < p.size() && j + 1 < r.size())
    best = std::min(best, enumerate_alignments(p, r, dist, i + 1, j + 1));
  return cost + best;
}

void brute_paths(const World& w, const std::vector<std::vector<NodeId>>& adj,
                 NodeId node, NodeId goal, double cost, std::vector<bool>& vis,
                 double& best) {
  if (node == goal) {
    best = std::min(best, cost);
    return;
  }
  if (cost >= best) return;
  for (NodeId nb : adj[node]) {
    if (vis[nb]) continue;
    vis[nb] = true;
    brute_paths(w, adj, nb, goal, cost + w.edge_length(node, nb), vis, best);
    vis[nb] = false;
  }
}

void criterion_metric_oracles() {
  double secs = wall_of([] {
    WorldConfig cfg;
    cfg.node_count = 10;
    World w = generate_world(2718, cfg);
    DistanceTable dist(w);

    // Path pool: the unique shortest path between every ordered node pair,
    // truncated views of those paths, and single nodes -- everything with
    // length <= 5.
    std::vector<std::vector<NodeId>> pool;
    for (NodeId a = 0; a < w.node_count(); ++a) {
      pool.push_back({a});
      for (NodeId b = 0; b < w.node_count(); ++b) {
        auto path = shortest_path(w, a, b);
        if (path.size() > 5) path.resize(5);
        pool.push_back(path);
      }
    }
    long long checked = 0;
    for (const auto& p : pool)
      for (const auto& r : pool) {
        PathPair pair{p, r, &w, 3.0};
        double got = ndtw(pair, dist);
        double total = enumerate_alignments(p, r, dist, 0, 0);
        double want =
            std::exp(-total / (static_cast<double>(r.size()) * 3.0));
        require(std::abs(got - want) <= 1e-9, "ndtw oracle mismatch");
        ++checked;
      }
    note("ndtw pairs checked: " + std::to_string(checked));

    // navigation_error against exhaustive simple-path enumeration.
    for (std::uint64_t seed : {11ULL, 12ULL}) {
      WorldConfig small;
      small.node_count = 9;
      World sw = generate_world(seed, small);
      DistanceTable sd(sw);
      std::vector<std::vector<NodeId>> adj(sw.nodes.size());
      for (auto [a, b] : sw.edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
      }
      for (NodeId a = 0; a < sw.node_count(); ++a)
        for (NodeId b = 0; b < sw.node_count(); ++b) {
          std::vector<bool> vis(sw.nodes.size(), false);
          vis[a] = true;
          double best = std::numeric_limits<double>::infinity();
          brute_paths(sw, adj, a, b, 0.0, vis, best);
          PathPair pair{{0, a}, {0, b}, &sw, 3.0};
          require(std::abs(navigation_error(pair, sd) - best) <= 1e-9,
                  "navigation_error oracle mismatch");
        }
    }
  });
  require(secs < 10.0, "metric oracle runtime under 10 s");
}

// ---------------------------------------------------------------------------
// Criterion 2: ground-truth rollouts score perfectly.

void criterion_teacher_sanity() {
  int episodes = 0;
  for (std::uint64_t ws = 0; ws < 2; ++ws) {
    World w = generate_world(600 + ws, WorldConfig{});
    DistanceTable dist(w);
    for (std::uint64_t es = 0; es < 260; ++es) {
      Episode ep = generate_episode(w, es, EpisodeConfig{});
      PathPair pair{ep.path, ep.path, &w, 3.0};
      require(navigation_error(pair, dist) == 0.0, "NE exactly 0");
      require(success(pair, dist) == 1.0, "SR exactly 1");
      require(spl(pair, dist) == 1.0, "SPL exactly 1");
      require(ndtw(pair, dist) == 1.0, "nDTW exactly 1");
      require(sdtw(pair, dist) == 1.0, "sDTW exactly 1");
      ++episodes;
    }
  }
  require(episodes >= 500, "at least 500 episodes");
  note("ground-truth episodes scored: " + std::to_string(episodes));
}

// ---------------------------------------------------------------------------
// Criterion 3: hint grammar round trip and exclusivity on >= 10k records.

void criterion_grammar_round_trip() {
  std::vector<Episode> episodes;
  std::map<std::string, World> worlds;
  for (std::uint64_t ws = 0; ws < 12; ++ws) {
    World w = generate_world(1000 + ws, WorldConfig{});
    for (std::uint64_t es = 0; es < 320; ++es) {
      Episode ep = generate_episode(w, es, EpisodeConfig{});
      ep.id = w.id + "_" + std::to_string(es);
      ep.world_id = w.id;
      episodes.push_back(std::move(ep));
    }
    worlds.emplace(w.id, std::move(w));
  }
  std::map<std::string, const Episode*> by_id;
  for (const auto& e : episodes) by_id[e.id] = &e;

  HintDataset dataset = build_hint_dataset(episodes, worlds);
  require(dataset.records.size() >= 10000, "at least 10k records");
  for (const auto& rec : dataset.records) {
    ParsedHint parsed = parse_hint(rec.rendered);
    require(parsed.ambiguity_valid && parsed.distinctive_valid,
            "clauses parse cleanly");
    require(parsed.sub_instruction == rec.sub_instruction,
            "sub-instruction round trip");
    require(parsed.landmark_groups == rec.landmark_groups,
            "landmark groups round trip");
    require(parsed.distinctive_objects == rec.distinctive_objects,
            "distinctive objects round trip");

    const Episode* ep = by_id.at(rec.episode_id);
    const World& w = worlds.at(ep->world_id);
    const auto& views = w.views.at(ep->path.at(rec.step_index));
    NodeId next = ep->path.at(rec.step_index + 1);
    std::size_t target_idx = views.size();
    for (std::size_t i = 0; i < views.size(); ++i)
      if (views[i].neighbor == next) target_idx = i;
    require(target_idx < views.size(), "target view exists");

    for (const auto& phrase : rec.distinctive_objects) {
      auto toks = split_tokens(phrase);
      std::string noun = singularize(toks.back());
      bool in_target = false;
      for (const auto& o : views[target_idx].objects)
        if (singularize(o.head_noun) == noun) in_target = true;
      require(in_target, "distinctive object present in target view");
      for (std::size_t i = 0; i < views.size(); ++i) {
        if (i == target_idx) continue;
        for (const auto& o : views[i].objects)
          require(singularize(o.head_noun) != noun,
                  "distinctive object absent elsewhere");
      }
    }
    if (rec.step_category == AmbiguityCategory::TargetLandmarks)
      require(rec.distinctive_objects.empty(),
              "target-pinning steps carry no extra objects");
  }
  note("records round-tripped: " + std::to_string(dataset.records.size()));
}

// ---------------------------------------------------------------------------
// Criterion 4: corpus histogram ranks invisible and multiple on top.
// Also builds the worlds/episodes/hints used by the training criteria.

void criterion_histogram() {
  run_cli("world gen --seed 200 --out " + (g_work / "worlds").string() +
          " --count 24");
  run_cli("episodes gen --worlds " + (g_work / "worlds").string() +
          " --seed 7 --out " + (g_work / "episodes").string() +
          " --train 2000 --seen 200 --unseen 200 --holdout 4");
  run_cli("hints build --episodes " +
          (g_work / "episodes" / "train.jsonl").string() + " --worlds " +
          (g_work / "worlds").string() + " --out " +
          (g_work / "hints.jsonl").string());
  run_cli("hints stats --in " + (g_work / "hints.jsonl").string() + " --out " +
          (g_work / "stats.json").string());

  json stats = slurp_json(g_work / "stats.json");
  std::vector<std::pair<int, std::string>> ranked;
  for (const auto& [name, count] : stats.at("histogram").items())
    ranked.emplace_back(count.get<int>(), name);
  std::sort(ranked.rbegin(), ranked.rend());
  require(ranked.size() == 5, "five categories in the histogram");
  std::string top2 = ranked[0].second + "+" + ranked[1].second;
  note("top categories: " + top2);
  require((ranked[0].second == "invisible" && ranked[1].second == "multiple") ||
              (ranked[0].second == "multiple" &&
               ranked[1].second == "invisible"),
          "invisible and multiple are the two largest categories");
}

// ---------------------------------------------------------------------------
// Criterion 5: reverse-mode gradients against finite differences.

void criterion_gradients() {
  double worst = 0;
  int checked_min = std::numeric_limits<int>::max();
  double secs = wall_of([&] {
    ModelConfig cfg;
    cfg.d = 16;
    cfg.prefix_len = 6;
    ModelParams params = ModelParams::init(cfg, 24, 9);
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
      auto report = grad_check(params, seed, 500);
      worst = std::max(worst, report.max_rel_error);
      checked_min = std::min(checked_min, report.checked);
      require(report.ok(1e-4), "max relative error <= 1e-4 (worst at " +
                                   report.worst_param + ")");
    }
  });
  require(checked_min >= 500, "at least 500 parameters per seed");
  require(secs < 60.0, "gradient check under 60 s");
  std::ostringstream msg;
  msg << "max rel error " << worst << " over >= " << checked_min
      << " params in " << secs << " s";
  note(msg.str());
}

// ---------------------------------------------------------------------------
// Training criteria share one config recipe over the criterion-4 data.

std::string write_train_config(const std::string& name, std::uint64_t seed,
                               int epochs, int episode_cap, bool hints) {
  std::ostringstream cfg;
  cfg << "seed = " << seed << "\n"
      << "lambda = 0.2\n"
      << "epochs = " << epochs << "\n"
      << "lr = 0.002\n"
      << "episode_cap = " << episode_cap << "\n"
      << "worlds_dir = " << (g_work / "worlds").string() << "\n"
      << "train_split = " << (g_work / "episodes" / "train.jsonl").string()
      << "\n"
      << "seen_split = " << (g_work / "episodes" / "seen.jsonl").string()
      << "\n"
      << "unseen_split = " << (g_work / "episodes" / "unseen.jsonl").string()
      << "\n";
  if (!hints)
    cfg << "hint_sub = false\nhint_ambiguity = false\n"
        << "hint_distinctive = false\n";
  fs::path path = g_work / name;
  std::ofstream(path) << cfg.str();
  return path.string();
}

MetricReport eval_checkpoint(const std::string& run, const std::string& split,
                             const std::string& extra = "",
                             const std::string& tag = "") {
  fs::path out = g_work / (run + "_" + split + tag + ".json");
  run_cli("eval --checkpoint " + (g_work / run / "model.json").string() +
          " --episodes " + (g_work / "episodes" / (split + ".jsonl")).string() +
          " --worlds " + (g_work / "worlds").string() + " --out " +
          out.string() + (extra.empty() ? "" : " " + extra));
  return metric_report_from_json(slurp(out));
}

// Criterion 6: joint training reaches the desk-scale targets over 3 seeds.

void criterion_joint_training() {
  double train_sr = 0, unseen_sr = 0;
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    std::string run = "joint_s" + std::to_string(seed);
    std::string cfg = write_train_config(run + ".cfg", seed, 48, 0, true);
    double secs = wall_of(
        [&] { run_cli("train --config " + cfg + " --out " +
                      (g_work / run).string()); });
    require(secs < 900.0, "one training run under 15 CPU-minutes");
    train_sr += eval_checkpoint(run, "train").sr;
    unseen_sr += eval_checkpoint(run, "unseen").sr;
  }
  train_sr /= 3;
  unseen_sr /= 3;
  std::ostringstream msg;
  msg << "mean SR train " << train_sr << ", unseen " << unseen_sr;
  note(msg.str());
  require(train_sr >= 0.90, "mean training SR >= 0.90");
  require(unseen_sr >= 0.60, "mean held-out-world SR >= 0.60");
}

// Criterion 7: the full-hint configuration beats the nav-only baseline.

void criterion_ablation() {
  double full_sr = 0, full_ndtw = 0, nav_sr = 0, nav_ndtw = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (bool hints : {true, false}) {
      std::string run =
          std::string(hints ? "abl_full_" : "abl_nav_") + std::to_string(seed);
      std::string cfg =
          write_train_config(run + ".cfg", seed, 12, 600, hints);
      run_cli("train --config " + cfg + " --out " + (g_work / run).string());
      MetricReport r = eval_checkpoint(run, "unseen");
      (hints ? full_sr : nav_sr) += r.sr / 5;
      (hints ? full_ndtw : nav_ndtw) += r.ndtw / 5;
    }
  }
  std::ostringstream msg;
  msg << "full SR " << full_sr << " vs nav-only " << nav_sr << "; full nDTW "
      << full_ndtw << " vs " << nav_ndtw;
  note(msg.str());
  require(full_sr >= nav_sr - 0.02, "full-hint SR within slack of baseline");
  require(full_ndtw >= nav_ndtw - 0.02,
          "full-hint nDTW within slack of baseline");
  require(full_sr > nav_sr, "full-hint mean SR strictly greater");
}

// Criterion 8: hint quality analogs on held-out worlds.

HintQualityReport analyze(const std::string& hints, const std::string& out) {
  run_cli("analyze --hints " + (g_work / hints).string() + " --episodes " +
          (g_work / "episodes" / "unseen.jsonl").string() + " --worlds " +
          (g_work / "worlds").string() + " --out " + (g_work / out).string());
  return hint_quality_report_from_json(slurp(g_work / out));
}

void criterion_hint_quality() {
  // Generated hints from the criterion-6 seed-1 model.
  eval_checkpoint("joint_s1", "unseen",
                  "--hints-out " + (g_work / "gen_hints.jsonl").string(),
                  "_hintgen");
  HintQualityReport gen = analyze("gen_hints.jsonl", "gen_analysis.json");
  std::ostringstream msg;
  msg << "generated BLEU-1 " << gen.bleu1;
  note(msg.str());
  require(gen.bleu1 >= 0.70, "sub-instruction BLEU-1 >= 0.70 on unseen");
  require(gen.distinctive.object_right.fraction() >=
              gen.distinctive.exact_right.fraction(),
          "object mode >= exact mode (right-action bucket)");
  require(gen.distinctive.object_wrong.fraction() >=
              gen.distinctive.exact_wrong.fraction(),
          "object mode >= exact mode (wrong-action bucket)");

  // Gold hints along teacher rollouts close the loop at 100%.
  eval_checkpoint("joint_s1", "unseen",
                  "--policy teacher --hints-out " +
                      (g_work / "gold_hints.jsonl").string(),
                  "_teacher");
  HintQualityReport gold = analyze("gold_hints.jsonl", "gold_analysis.json");
  require(gold.parse_failures == 0, "gold hints all parse");
  require(gold.ambiguity.invalid == 0, "gold ambiguity clauses well-formed");
  require(gold.bleu1 == 1.0, "gold BLEU-1 is exactly 1");
  require(gold.ambiguity.overall() == 1.0, "gold ambiguity accuracy 100%");
  for (const auto& [cat, acc] : gold.ambiguity.per_category)
    require(acc.correct == acc.total, "gold per-category accuracy 100%");
  require(gold.distinctive.exact_right.total > 0 &&
              gold.distinctive.exact_right.fraction() == 1.0,
          "gold exact distinctive accuracy 100%");
  require(gold.distinctive.object_right.fraction() == 1.0,
          "gold object distinctive accuracy 100%");
}

// ---------------------------------------------------------------------------
// Criterion 9: byte-identical reruns of every pipeline stage.

void compare_trees(const fs::path& a, const fs::path& b) {
  for (const auto& entry : fs::directory_iterator(a)) {
    std::string name = entry.path().filename().string();
    if (name.find("manifest") != std::string::npos) continue;  // has timings
    require(slurp(entry.path()) == slurp(b / name),
            "byte-identical rerun of " + name);
  }
}

void criterion_determinism() {
  run_cli("world gen --seed 200 --out " + (g_work / "worlds_b").string() +
          " --count 24");
  compare_trees(g_work / "worlds", g_work / "worlds_b");

  run_cli("episodes gen --worlds " + (g_work / "worlds_b").string() +
          " --seed 7 --out " + (g_work / "episodes_b").string() +
          " --train 2000 --seen 200 --unseen 200 --holdout 4");
  compare_trees(g_work / "episodes", g_work / "episodes_b");

  run_cli("hints build --episodes " +
          (g_work / "episodes_b" / "train.jsonl").string() + " --worlds " +
          (g_work / "worlds_b").string() + " --out " +
          (g_work / "hints_b.jsonl").string());
  require(slurp(g_work / "hints.jsonl") == slurp(g_work / "hints_b.jsonl"),
          "byte-identical hint dataset");

  // Short but complete training jobs with identical seed/config.
  std::string cfg = write_train_config("det.cfg", 4, 2, 50, true);
  run_cli("train --config " + cfg + " --out " + (g_work / "det_a").string());
  run_cli("train --config " + cfg + " --out " + (g_work / "det_b").string());
  require(slurp(g_work / "det_a" / "model.json") ==
              slurp(g_work / "det_b" / "model.json"),
          "byte-identical checkpoint");
  require(slurp(g_work / "det_a" / "loss.csv") ==
              slurp(g_work / "det_b" / "loss.csv"),
          "byte-identical loss curve");

  MetricReport ra = eval_checkpoint("det_a", "seen");
  MetricReport rb = eval_checkpoint("det_a", "seen");
  require(metric_report_to_json(ra) == metric_report_to_json(rb),
          "byte-identical evaluation");
}

struct Criterion {
  std::string name;
  std::function<void()> fn;
};

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path-to-cli>\n";
    return 2;
  }
  g_cli = argv[1];
  g_work = fs::current_path() / "acceptance_work";
  fs::remove_all(g_work);
  fs::create_directories(g_work);

  const std::vector<Criterion> criteria = {
      {"metric oracle equivalence", criterion_metric_oracles},
      {"teacher-policy sanity", criterion_teacher_sanity},
      {"hint grammar round trip", criterion_grammar_round_trip},
      {"dataset category histogram", criterion_histogram},
      {"gradient verification", criterion_gradients},
      {"desk-scale joint training", criterion_joint_training},
      {"hint ablation direction", criterion_ablation},
      {"hint quality analogs", criterion_hint_quality},
      {"pipeline determinism", criterion_determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    g_notes.clear();
    std::string status = "PASS";
    std::string detail;
    try {
      criteria[i].fn();
    } catch (const std::exception& e) {
      status = "FAIL";
      detail = e.what();
      ++failures;
    }
    std::cout << status << "  " << (i + 1) << ". " << criteria[i].name;
    for (const auto& n : g_notes) std::cout << " [" << n << "]";
    if (!detail.empty()) std::cout << " -- " << detail;
    std::cout << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
