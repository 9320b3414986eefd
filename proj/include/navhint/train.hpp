#ifndef NAVHINT_TRAIN_HPP
#define NAVHINT_TRAIN_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "navhint/hints.hpp"
#include "navhint/metrics.hpp"
#include "navhint/model.hpp"

namespace navhint {

struct TrainConfig {
  std::uint64_t seed = 1;
  double lambda = 0.2;  // RL mixing weight
  int epochs = 3;
  double lr = 1e-3;
  bool hint_sub = true;
  bool hint_ambiguity = true;
  bool hint_distinctive = true;
  int d = 32;
  int prefix_len = 10;
  int max_hint_tokens = 80;
  int episode_cap = 0;  // 0 = whole split
  int step_slack = 4;   // extra steps beyond ground-truth length
  double rl_discount = 0.9;
  std::string worlds_dir;
  std::string train_split, seen_split, unseen_split;

  bool hint_head_enabled() const {
    return hint_sub || hint_ambiguity || hint_distinctive;
  }
  RenderOptions render_options() const {
    RenderOptions o;
    o.include_sub = hint_sub;
    o.include_ambiguity = hint_ambiguity;
    o.include_distinctive = hint_distinctive;
    return o;
  }

  // Flat `key = value` config file; unknown keys are rejected.
  static TrainConfig from_file(const std::string& path);
};

enum class RolloutMode { Teacher, Sample, Greedy };

struct RolloutStep {
  NodeId node = -1;
  std::vector<NodeId> candidates;      // stored view order; STOP is index n
  std::vector<double> action_probs;    // n+1 entries
  int teacher_action = -1;
  int sampled_action = -1;
  int taken_action = -1;
  double reward = 0;
};

struct RolloutRecord {
  std::string episode_id;
  std::vector<RolloutStep> steps;
  std::vector<NodeId> path;
  bool truncated = false;
};

RolloutRecord rollout(const Episode& episode, const World& world,
                      ModelParams& params, const Vocab& vocab,
                      RolloutMode mode, std::uint64_t seed,
                      int step_slack = 4);

// -sum log p(teacher) - lambda * sum A_t log p(sampled); the advantage enters
// as a fixed weight (REINFORCE with constant advantages).
Tape::Id nav_loss(Tape& tape, const std::vector<Tape::Id>& teacher_ce,
                  const std::vector<Tape::Id>& sampled_ce,
                  const std::vector<double>& advantages, double lambda);

Tape::Id total_loss(Tape& tape, std::optional<Tape::Id> hint,
                    std::optional<Tape::Id> nav);

std::vector<double> discounted_returns(const std::vector<double>& rewards,
                                       double discount);

struct TrainedModel {
  ModelParams params;
  Vocab vocab;

  std::string to_json() const;
  static TrainedModel from_json(const std::string& text);
};

TrainedModel init_model(const TrainConfig& cfg,
                        const std::vector<Episode>& train_episodes,
                        const std::map<std::string, World>& worlds);

struct EpochResult {
  std::vector<double> losses;  // one entry per episode
};

EpochResult train_epoch(const TrainConfig& cfg, TrainedModel& model,
                        Adam& opt, const std::vector<Episode>& episodes,
                        const std::map<std::string, World>& worlds,
                        int epoch_index);

struct GeneratedStep {
  std::string episode_id;
  int step_index = 0;
  NodeId node = -1;
  NodeId selected_neighbor = -1;  // -1 when STOP was taken
  NodeId teacher_neighbor = -1;
  std::string text;       // generated hint
  std::string gold_text;  // full-parts gold hint at this step
};

struct EvalOutput {
  MetricReport report;
  std::vector<RolloutRecord> rollouts;
  std::vector<GeneratedStep> steps;
};

// Greedy mode decodes hints from the model when `generate_hints` is set;
// Teacher mode follows the oracle actions and emits the reference hint as
// each step's text, which makes `eval --policy teacher` + `analyze` a
// closed-loop sanity check.
EvalOutput evaluate_split(const TrainConfig& cfg, TrainedModel& model,
                          const std::vector<Episode>& episodes,
                          const std::map<std::string, World>& worlds,
                          bool generate_hints,
                          RolloutMode mode = RolloutMode::Greedy);

std::string generated_step_to_json(const GeneratedStep& step);
GeneratedStep generated_step_from_json(const std::string& line);

}  // namespace navhint

#endif
