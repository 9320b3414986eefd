// navhint: command-line front end for the navigation-hint pipeline.
//
// Exit codes: 0 success, 1 validation/runtime failure, 2 usage error.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "navhint/analysis.hpp"
#include "navhint/hints.hpp"
#include "navhint/manifest.hpp"
#include "navhint/metrics.hpp"
#include "navhint/model.hpp"
#include "navhint/rng.hpp"
#include "navhint/train.hpp"
#include "navhint/world.hpp"

namespace fs = std::filesystem;
using namespace navhint;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  if (fs::path(path).has_parent_path())
    fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path);
  out << bytes;
}

std::map<std::string, World> load_worlds(const std::string& dir) {
  if (!fs::is_directory(dir))
    throw ValidationError("worlds directory not found: " + dir);
  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".json" &&
        entry.path().filename().string().find("manifest") == std::string::npos)
      paths.push_back(entry.path().string());
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) throw ValidationError("no world files in " + dir);
  std::map<std::string, World> worlds;
  for (const auto& p : paths) {
    World w = world_from_json(read_file(p));
    validate_world(w);
    worlds.emplace(w.id, std::move(w));
  }
  return worlds;
}

std::vector<Episode> load_episodes(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("episodes file not found: " + path);
  std::vector<Episode> episodes;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    episodes.push_back(episode_from_json(line));
  }
  if (episodes.empty()) throw ValidationError("no episodes in " + path);
  return episodes;
}

// Collects inputs/outputs while a subcommand runs, then writes the manifest.
class ManifestScope {
 public:
  ManifestScope(std::string command, std::uint64_t seed)
      : start_(std::chrono::steady_clock::now()) {
    manifest_.command = std::move(command);
    manifest_.seed = seed;
  }
  void config(const std::string& bytes) {
    manifest_.config_digest = digest_bytes(bytes);
  }
  void input(const std::string& path) {
    manifest_.input_digests[path] = digest_file(path);
  }
  void input_dir(const std::string& dir) {
    std::vector<std::string> paths;
    for (const auto& e : fs::directory_iterator(dir))
      if (e.path().extension() == ".json") paths.push_back(e.path().string());
    std::sort(paths.begin(), paths.end());
    for (const auto& p : paths) input(p);
  }
  void output(const std::string& path) {
    manifest_.output_digests[path] = digest_file(path);
  }
  void write(const std::string& path) {
    manifest_.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    write_file(path, manifest_.to_json());
  }

 private:
  RunManifest manifest_;
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

WorldConfig world_config_from_file(const std::string& path) {
  WorldConfig cfg;
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key == "node_count") cfg.node_count = std::stoi(value);
    else if (key == "knn") cfg.knn = std::stoi(value);
    else if (key == "box_xy") cfg.box_xy = std::stod(value);
    else if (key == "box_z") cfg.box_z = std::stod(value);
    else if (key == "min_objects_per_view") cfg.min_objects_per_view = std::stoi(value);
    else if (key == "max_objects_per_view") cfg.max_objects_per_view = std::stoi(value);
    else if (key == "max_retries") cfg.max_retries = std::stoi(value);
    else throw ValidationError("world config: unknown key " + key);
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Subcommands. Each returns normally on success and throws on failure.

struct WorldGenArgs {
  std::uint64_t seed = 1;
  std::string config, out;
  int count = 1;
};

void run_world_gen(const WorldGenArgs& a) {
  ManifestScope scope("world gen", a.seed);
  WorldConfig cfg;
  if (!a.config.empty()) {
    scope.config(read_file(a.config));
    cfg = world_config_from_file(a.config);
  }
  for (int i = 0; i < a.count; ++i) {
    World world = generate_world(a.seed + static_cast<std::uint64_t>(i), cfg);
    std::string path = (fs::path(a.out) / (world.id + ".json")).string();
    write_file(path, world_to_json(world));
    scope.output(path);
  }
  scope.write((fs::path(a.out) / "world-gen.manifest.json").string());
}

struct EpisodesGenArgs {
  std::string worlds, out;
  std::uint64_t seed = 1;
  int train = 200, seen = 50, unseen = 50;
  int holdout = 0;  // 0 = one quarter of the worlds, at least one
  int min_hops = 2, max_hops = 4;
};

void run_episodes_gen(const EpisodesGenArgs& a) {
  ManifestScope scope("episodes gen", a.seed);
  scope.input_dir(a.worlds);
  auto worlds = load_worlds(a.worlds);
  std::vector<const World*> ordered;
  for (const auto& [id, w] : worlds) ordered.push_back(&w);
  int holdout = a.holdout > 0
                    ? a.holdout
                    : std::max(1, static_cast<int>(ordered.size()) / 4);
  if (holdout >= static_cast<int>(ordered.size()))
    throw ValidationError("episodes gen: holdout leaves no training worlds");
  std::vector<const World*> train_worlds(ordered.begin(),
                                         ordered.end() - holdout);
  std::vector<const World*> unseen_worlds(ordered.end() - holdout,
                                          ordered.end());

  EpisodeConfig ecfg;
  ecfg.min_hops = a.min_hops;
  ecfg.max_hops = a.max_hops;

  auto generate_split = [&](const std::string& name, int count,
                            const std::vector<const World*>& pool) {
    std::vector<Episode> episodes;
    std::uint64_t base = derive_seed(a.seed, "episodes-" + name);
    for (int i = 0; i < count; ++i) {
      const World& world = *pool[i % pool.size()];
      episodes.push_back(
          generate_episode(world, base + static_cast<std::uint64_t>(i), ecfg));
    }
    std::sort(episodes.begin(), episodes.end(),
              [](const Episode& x, const Episode& y) {
                return std::tie(x.world_id, x.id) < std::tie(y.world_id, y.id);
              });
    std::ostringstream out;
    for (const auto& ep : episodes) out << episode_to_json(ep) << "\n";
    std::string path = (fs::path(a.out) / (name + ".jsonl")).string();
    write_file(path, out.str());
    scope.output(path);
  };
  generate_split("train", a.train, train_worlds);
  generate_split("seen", a.seen, train_worlds);
  generate_split("unseen", a.unseen, unseen_worlds);
  scope.write((fs::path(a.out) / "episodes-gen.manifest.json").string());
}

struct HintsBuildArgs {
  std::string episodes, worlds, out;
  bool no_sub = false, no_ambiguity = false, no_distinctive = false;
  bool single_clause = false;
};

void run_hints_build(const HintsBuildArgs& a) {
  ManifestScope scope("hints build", 0);
  scope.input(a.episodes);
  scope.input_dir(a.worlds);
  auto episodes = load_episodes(a.episodes);
  auto worlds = load_worlds(a.worlds);
  RenderOptions opts;
  opts.include_sub = !a.no_sub;
  opts.include_ambiguity = !a.no_ambiguity;
  opts.include_distinctive = !a.no_distinctive;
  opts.single_clause = a.single_clause;
  HintDataset dataset = build_hint_dataset(episodes, worlds, opts);
  std::ostringstream out;
  for (const auto& r : dataset.records) out << hint_record_to_json(r) << "\n";
  write_file(a.out, out.str());
  scope.output(a.out);
  scope.write(a.out + ".manifest.json");
}

struct HintsStatsArgs {
  std::string in, out;
};

void run_hints_stats(const HintsStatsArgs& a) {
  HintDataset dataset;
  std::ifstream in(a.in);
  if (!in) throw ValidationError("hints file not found: " + a.in);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) dataset.records.push_back(hint_record_from_json(line));
  auto stats = dataset_stats(dataset);
  int total = 0;
  for (const auto& [cat, n] : stats) total += n;
  json j{{"schema_version", 1}, {"total", total}};
  for (auto cat : {AmbiguityCategory::TargetLandmarks,
                   AmbiguityCategory::MultipleLandmarks,
                   AmbiguityCategory::MissingLandmarks,
                   AmbiguityCategory::InvisibleLandmarks,
                   AmbiguityCategory::NoLandmarks}) {
    int n = stats.count(cat) ? stats[cat] : 0;
    j["histogram"][category_name(cat)] = n;
    std::cout << category_name(cat) << "\t" << n << "\t"
              << fmt(total ? double(n) / total : 0.0) << "\n";
  }
  std::cout << "total\t" << total << "\n";
  if (!a.out.empty()) write_file(a.out, j.dump(2) + "\n");
}

struct TrainArgs {
  std::string config, out;
};

void run_train(const TrainArgs& a) {
  std::string config_bytes = read_file(a.config);
  TrainConfig cfg = TrainConfig::from_file(a.config);
  ManifestScope scope("train", cfg.seed);
  scope.config(config_bytes);
  scope.input(a.config);
  scope.input(cfg.train_split);
  scope.input_dir(cfg.worlds_dir);
  auto worlds = load_worlds(cfg.worlds_dir);
  auto episodes = load_episodes(cfg.train_split);

  TrainedModel model = init_model(cfg, episodes, worlds);
  Adam opt;
  opt.lr = cfg.lr;
  std::ostringstream losses;
  losses << "epoch,episode,loss\n";
  std::string checkpoint_path = (fs::path(a.out) / "model.json").string();
  std::string loss_path = (fs::path(a.out) / "loss.csv").string();
  bool aborted = false;
  std::string abort_reason;
  for (int epoch = 0; epoch < cfg.epochs && !aborted; ++epoch) {
    try {
      EpochResult result = train_epoch(cfg, model, opt, episodes, worlds, epoch);
      for (std::size_t i = 0; i < result.losses.size(); ++i)
        losses << epoch << "," << i << "," << fmt(result.losses[i]) << "\n";
    } catch (const std::runtime_error& e) {
      aborted = true;  // params hold the last good state
      abort_reason = e.what();
    }
    write_file(checkpoint_path, model.to_json());
  }
  write_file(loss_path, losses.str());
  scope.output(checkpoint_path);
  scope.output(loss_path);
  scope.write((fs::path(a.out) / "train.manifest.json").string());
  if (aborted)
    throw ValidationError("training aborted (checkpoint kept): " + abort_reason);
}

struct EvalArgs {
  std::string checkpoint, episodes, worlds, out;
  std::string trajectories;  // metrics-only mode
  std::string hints_out, rollouts_out, csv;
  std::string policy = "greedy";
  int step_slack = 4;
};

std::string rollout_to_json(const RolloutRecord& r) {
  return json{{"schema_version", 1},
              {"episode_id", r.episode_id},
              {"path", r.path},
              {"truncated", r.truncated}}
      .dump();
}

void run_eval(const EvalArgs& a) {
  ManifestScope scope("eval", 0);
  scope.input(a.episodes);
  scope.input_dir(a.worlds);
  auto episodes = load_episodes(a.episodes);
  auto worlds = load_worlds(a.worlds);
  auto world_of = [&](const Episode& ep) -> const World& {
    auto it = worlds.find(ep.world_id);
    if (it == worlds.end()) throw LookupError("unknown world " + ep.world_id);
    return it->second;
  };

  MetricReport report;
  if (!a.trajectories.empty()) {
    scope.input(a.trajectories);
    std::map<std::string, std::vector<NodeId>> paths;
    std::ifstream in(a.trajectories);
    if (!in) throw ValidationError("trajectories not found: " + a.trajectories);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      json j = json::parse(line);
      paths[j.at("episode_id").get<std::string>()] =
          j.at("path").get<std::vector<NodeId>>();
    }
    std::vector<PathPair> pairs;
    std::vector<DistanceTable> tables;
    tables.reserve(episodes.size());
    std::vector<const DistanceTable*> table_ptrs;
    std::map<std::string, std::size_t> table_idx;
    for (const auto& ep : episodes) {
      auto it = paths.find(ep.id);
      if (it == paths.end())
        throw ValidationError("no trajectory for episode " + ep.id);
      const World& world = world_of(ep);
      if (!table_idx.count(ep.world_id)) {
        table_idx[ep.world_id] = tables.size();
        tables.emplace_back(world);
      }
      pairs.push_back(PathPair{it->second, ep.path, &world, 3.0});
      table_ptrs.push_back(&tables[table_idx[ep.world_id]]);
    }
    report = aggregate_metrics(pairs, table_ptrs);
  } else {
    if (a.checkpoint.empty())
      throw ValidationError("eval: need --checkpoint or --trajectories");
    scope.input(a.checkpoint);
    TrainedModel model = TrainedModel::from_json(read_file(a.checkpoint));
    TrainConfig cfg;
    cfg.step_slack = a.step_slack;
    EvalOutput out;
    if (a.policy != "greedy" && a.policy != "teacher")
      throw ValidationError("eval: unknown policy " + a.policy);
    RolloutMode mode =
        a.policy == "teacher" ? RolloutMode::Teacher : RolloutMode::Greedy;
    out = evaluate_split(cfg, model, episodes, worlds, !a.hints_out.empty(),
                         mode);
    report = out.report;
    if (!a.rollouts_out.empty()) {
      std::ostringstream lines;
      for (const auto& r : out.rollouts) lines << rollout_to_json(r) << "\n";
      write_file(a.rollouts_out, lines.str());
      scope.output(a.rollouts_out);
    }
    if (!a.hints_out.empty()) {
      std::ostringstream lines;
      for (const auto& s : out.steps) lines << generated_step_to_json(s) << "\n";
      write_file(a.hints_out, lines.str());
      scope.output(a.hints_out);
    }
  }
  write_file(a.out, metric_report_to_json(report));
  scope.output(a.out);
  if (!a.csv.empty()) {
    std::ostringstream csv;
    csv << "ne,sr,spl,cls,ndtw,sdtw,count\n"
        << fmt(report.ne) << "," << fmt(report.sr) << "," << fmt(report.spl)
        << "," << fmt(report.cls) << "," << fmt(report.ndtw) << ","
        << fmt(report.sdtw) << "," << report.count << "\n";
    write_file(a.csv, csv.str());
    scope.output(a.csv);
  }
  scope.write(a.out + ".manifest.json");
}

struct AnalyzeArgs {
  std::string hints, rollouts, episodes, worlds, out, svg_dir;
  bool any_true = false;
};

void run_analyze(const AnalyzeArgs& a) {
  ManifestScope scope("analyze", 0);
  scope.input(a.hints);
  scope.input(a.episodes);
  scope.input_dir(a.worlds);
  if (!a.rollouts.empty()) scope.input(a.rollouts);
  std::vector<GeneratedStep> steps;
  {
    std::ifstream in(a.hints);
    if (!in) throw ValidationError("hints file not found: " + a.hints);
    std::string line;
    while (std::getline(in, line))
      if (!line.empty()) steps.push_back(generated_step_from_json(line));
  }
  auto episodes = load_episodes(a.episodes);
  auto worlds = load_worlds(a.worlds);
  AnalysisOptions opts;
  opts.any_true = a.any_true;
  HintQualityReport report = analyze_hints(steps, episodes, worlds, opts);
  write_file(a.out, hint_quality_report_to_json(report));
  scope.output(a.out);
  if (!a.svg_dir.empty()) {
    std::string amb = (fs::path(a.svg_dir) / "ambiguity.svg").string();
    std::string dis = (fs::path(a.svg_dir) / "distinctive.svg").string();
    write_file(amb, ambiguity_accuracy_svg(report.ambiguity));
    write_file(dis, distinctive_accuracy_svg(report.distinctive));
    scope.output(amb);
    scope.output(dis);
  }
  scope.write(a.out + ".manifest.json");
}

struct GradcheckArgs {
  std::string config;
  std::uint64_t seed = 1;
  int samples = 500;
};

void run_gradcheck(const GradcheckArgs& a) {
  ModelConfig mc;
  if (!a.config.empty()) {
    TrainConfig cfg = TrainConfig::from_file(a.config);
    mc.d = cfg.d;
    mc.prefix_len = cfg.prefix_len;
    mc.max_hint_tokens = cfg.max_hint_tokens;
  }
  ModelParams params = ModelParams::init(mc, 16, a.seed);
  GradCheckReport report = grad_check(params, a.seed, a.samples);
  std::cout << "checked " << report.checked << " parameters; max rel error "
            << report.max_rel_error << " (worst: " << report.worst_param
            << ")\n";
  if (!report.ok()) throw ValidationError("gradient check failed");
}

struct ReportArgs {
  std::vector<std::string> evals;
  std::string analysis, out;
};

void run_report(const ReportArgs& a) {
  ManifestScope scope("report", 0);
  std::ostringstream csv;
  csv << "label,ne,sr,spl,cls,ndtw,sdtw,count\n";
  for (const auto& path : a.evals) {
    scope.input(path);
    MetricReport r = metric_report_from_json(read_file(path));
    csv << fs::path(path).stem().string() << "," << fmt(r.ne) << ","
        << fmt(r.sr) << "," << fmt(r.spl) << "," << fmt(r.cls) << ","
        << fmt(r.ndtw) << "," << fmt(r.sdtw) << "," << r.count << "\n";
  }
  if (!a.analysis.empty()) {
    scope.input(a.analysis);
    HintQualityReport h = hint_quality_report_from_json(read_file(a.analysis));
    csv << "\nmetric,value\n";
    csv << "bleu1," << fmt(h.bleu1) << "\n";
    csv << "bleu4," << fmt(h.bleu4) << "\n";
    csv << "ambiguity_overall," << fmt(h.ambiguity.overall()) << "\n";
    for (const auto& [cat, acc] : h.ambiguity.per_category)
      csv << "ambiguity_" << category_name(cat) << "," << fmt(acc.fraction())
          << "\n";
    csv << "distinctive_exact_right," << fmt(h.distinctive.exact_right.fraction())
        << "\n";
    csv << "distinctive_exact_wrong," << fmt(h.distinctive.exact_wrong.fraction())
        << "\n";
    csv << "distinctive_object_right,"
        << fmt(h.distinctive.object_right.fraction()) << "\n";
    csv << "distinctive_object_wrong,"
        << fmt(h.distinctive.object_wrong.fraction()) << "\n";
    std::string amb = (fs::path(a.out) / "ambiguity.svg").string();
    std::string dis = (fs::path(a.out) / "distinctive.svg").string();
    write_file(amb, ambiguity_accuracy_svg(h.ambiguity));
    write_file(dis, distinctive_accuracy_svg(h.distinctive));
    scope.output(amb);
    scope.output(dis);
  } else {
    std::cout << "no analysis report given; plots skipped\n";
  }
  std::string csv_path = (fs::path(a.out) / "report.csv").string();
  write_file(csv_path, csv.str());
  scope.output(csv_path);
  scope.write((fs::path(a.out) / "report.manifest.json").string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"navigation-hint pipeline"};
  app.require_subcommand(1);

  WorldGenArgs wg;
  EpisodesGenArgs eg;
  HintsBuildArgs hb;
  HintsStatsArgs hs;
  TrainArgs tr;
  EvalArgs ev;
  AnalyzeArgs an;
  GradcheckArgs gc;
  ReportArgs rp;

  auto* world = app.add_subcommand("world", "world tools")->require_subcommand(1);
  auto* world_gen = world->add_subcommand("gen", "generate worlds");
  world_gen->add_option("--seed", wg.seed, "root seed")->required();
  world_gen->add_option("--config", wg.config, "world config file");
  world_gen->add_option("--out", wg.out, "output directory")->required();
  world_gen->add_option("--count", wg.count, "number of worlds");

  auto* episodes =
      app.add_subcommand("episodes", "episode tools")->require_subcommand(1);
  auto* episodes_gen = episodes->add_subcommand("gen", "generate episode splits");
  episodes_gen->add_option("--worlds", eg.worlds, "worlds directory")->required();
  episodes_gen->add_option("--seed", eg.seed, "root seed")->required();
  episodes_gen->add_option("--out", eg.out, "output directory")->required();
  episodes_gen->add_option("--train", eg.train, "train episode count");
  episodes_gen->add_option("--seen", eg.seen, "seen episode count");
  episodes_gen->add_option("--unseen", eg.unseen, "unseen episode count");
  episodes_gen->add_option("--holdout", eg.holdout, "worlds held out for unseen");
  episodes_gen->add_option("--min-hops", eg.min_hops, "minimum hops");
  episodes_gen->add_option("--max-hops", eg.max_hops, "maximum hops");

  auto* hints = app.add_subcommand("hints", "hint tools")->require_subcommand(1);
  auto* hints_build = hints->add_subcommand("build", "build the hint dataset");
  hints_build->add_option("--episodes", hb.episodes, "episodes JSONL")->required();
  hints_build->add_option("--worlds", hb.worlds, "worlds directory")->required();
  hints_build->add_option("--out", hb.out, "output JSONL")->required();
  hints_build->add_flag("--no-sub", hb.no_sub, "omit sub-instruction clauses");
  hints_build->add_flag("--no-ambiguity", hb.no_ambiguity,
                        "omit ambiguity clauses");
  hints_build->add_flag("--no-distinctive", hb.no_distinctive,
                        "omit distinctive clauses");
  hints_build->add_flag("--single-clause", hb.single_clause,
                        "render only the precedence-winning ambiguity clause");
  auto* hints_stats = hints->add_subcommand("stats", "category histogram");
  hints_stats->add_option("--in", hs.in, "hint dataset JSONL")->required();
  hints_stats->add_option("--out", hs.out, "optional JSON output");

  auto* train_cmd = app.add_subcommand("train", "train the joint model");
  train_cmd->add_option("--config", tr.config, "train config file")->required();
  train_cmd->add_option("--out", tr.out, "output directory")->required();

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a model or trajectories");
  eval_cmd->add_option("--checkpoint", ev.checkpoint, "trained model JSON");
  eval_cmd->add_option("--trajectories", ev.trajectories,
                       "precomputed rollouts JSONL (metrics-only mode)");
  eval_cmd->add_option("--episodes", ev.episodes, "episodes JSONL")->required();
  eval_cmd->add_option("--worlds", ev.worlds, "worlds directory")->required();
  eval_cmd->add_option("--out", ev.out, "metric report JSON")->required();
  eval_cmd->add_option("--hints-out", ev.hints_out, "generated hints JSONL");
  eval_cmd->add_option("--rollouts-out", ev.rollouts_out, "rollouts JSONL");
  eval_cmd->add_option("--csv", ev.csv, "optional metrics CSV");
  eval_cmd->add_option("--policy", ev.policy, "greedy|teacher");
  eval_cmd->add_option("--step-slack", ev.step_slack, "extra steps before STOP");

  auto* analyze = app.add_subcommand("analyze", "hint quality analysis");
  analyze->add_option("--hints", an.hints, "generated hints JSONL")->required();
  analyze->add_option("--rollouts", an.rollouts, "rollouts JSONL (provenance)");
  analyze->add_option("--episodes", an.episodes, "episodes JSONL")->required();
  analyze->add_option("--worlds", an.worlds, "worlds directory")->required();
  analyze->add_option("--out", an.out, "report JSON")->required();
  analyze->add_option("--svg-dir", an.svg_dir, "directory for SVG plots");
  analyze->add_flag("--any-true", an.any_true,
                    "multi-landmark clause true if any landmark matches");

  auto* gradcheck = app.add_subcommand("gradcheck", "verify gradients");
  gradcheck->add_option("--config", gc.config, "train config file");
  gradcheck->add_option("--seed", gc.seed, "seed");
  gradcheck->add_option("--samples", gc.samples, "sampled parameters");

  auto* report = app.add_subcommand("report", "merge eval/analyze reports");
  report->add_option("--eval", rp.evals, "metric report JSON (repeatable)")
      ->required();
  report->add_option("--analysis", rp.analysis, "hint quality report JSON");
  report->add_option("--out", rp.out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (world_gen->parsed()) run_world_gen(wg);
    else if (episodes_gen->parsed()) run_episodes_gen(eg);
    else if (hints_build->parsed()) run_hints_build(hb);
    else if (hints_stats->parsed()) run_hints_stats(hs);
    else if (train_cmd->parsed()) run_train(tr);
    else if (eval_cmd->parsed()) run_eval(ev);
    else if (analyze->parsed()) run_analyze(an);
    else if (gradcheck->parsed()) run_gradcheck(gc);
    else if (report->parsed()) run_report(rp);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
