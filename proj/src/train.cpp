#include "navhint/train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "navhint/rng.hpp"

namespace navhint {

struct TrainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

TrainConfig TrainConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path);
  TrainConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw ValidationError("config: bad line " + std::to_string(line_no));
      continue;
    }
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r\"");
      auto e = s.find_last_not_of(" \t\r\"");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    auto as_bool = [&] {
      if (value == "true" || value == "1") return true;
      if (value == "false" || value == "0") return false;
      throw ValidationError("config: bad bool for " + key);
    };
    if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "lambda") cfg.lambda = std::stod(value);
    else if (key == "epochs") cfg.epochs = std::stoi(value);
    else if (key == "lr") cfg.lr = std::stod(value);
    else if (key == "hint_sub") cfg.hint_sub = as_bool();
    else if (key == "hint_ambiguity") cfg.hint_ambiguity = as_bool();
    else if (key == "hint_distinctive") cfg.hint_distinctive = as_bool();
    else if (key == "d") cfg.d = std::stoi(value);
    else if (key == "prefix_len") cfg.prefix_len = std::stoi(value);
    else if (key == "max_hint_tokens") cfg.max_hint_tokens = std::stoi(value);
    else if (key == "episode_cap") cfg.episode_cap = std::stoi(value);
    else if (key == "step_slack") cfg.step_slack = std::stoi(value);
    else if (key == "rl_discount") cfg.rl_discount = std::stod(value);
    else if (key == "worlds_dir") cfg.worlds_dir = value;
    else if (key == "train_split") cfg.train_split = value;
    else if (key == "seen_split") cfg.seen_split = value;
    else if (key == "unseen_split") cfg.unseen_split = value;
    else throw ValidationError("config: unknown key " + key);
  }
  if (cfg.lambda < 0) throw ValidationError("config: lambda must be >= 0");
  if (cfg.prefix_len < 1) throw ValidationError("config: prefix_len must be >= 1");
  return cfg;
}

namespace {

std::vector<int> token_ids(const Vocab& vocab,
                           const std::vector<std::string>& tokens) {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(vocab.id(t));
  return ids;
}

std::vector<EncodedView> observe(const World& world, NodeId node,
                                 double arrival_heading, const Vocab& vocab) {
  std::vector<EncodedView> out;
  for (const auto& cv : world.views.at(node)) {
    EncodedView ev;
    ev.heading = wrap_angle(bearing(world.nodes[node], world.nodes[cv.neighbor]) -
                            arrival_heading);
    ev.elevation = cv.elevation;
    for (const auto& o : cv.objects)
      ev.noun_ids.push_back(vocab.id(singularize(o.head_noun)));
    out.push_back(std::move(ev));
  }
  return out;
}

int teacher_action_index(const World& world, const DistanceTable& dist,
                         NodeId node, NodeId goal,
                         const std::vector<NodeId>& candidates) {
  if (node == goal) return static_cast<int>(candidates.size());  // STOP
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    double d = world.edge_length(node, candidates[i]) + dist(candidates[i], goal);
    if (d < best_d - 1e-12) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

struct EpisodeRun {
  RolloutRecord record;
  std::vector<Tape::Id> ce;        // CE of the supervised/sampled action
  std::vector<Tape::Id> prefixes;  // per-step prefix nodes (optional)
  std::vector<int> instr_ids;
};

EpisodeRun run_episode(Tape& tape, ModelGraph& graph, const Episode& episode,
                       const World& world, const DistanceTable& dist,
                       const Vocab& vocab, RolloutMode mode, Rng* sampler,
                       int step_slack, bool want_prefix) {
  EpisodeRun run;
  run.record.episode_id = episode.id;
  run.instr_ids = token_ids(vocab, episode.instruction);

  std::vector<int> span_ids(run.instr_ids.size(), 0);
  for (const auto& span : episode.spans)
    for (int i = span.start_token; i < span.end_token; ++i)
      span_ids[i] = span.hop_index;
  Tape::Id x = graph.encode_instruction(run.instr_ids, span_ids);

  NodeId node = episode.path.front();
  // Start heading is fixed to the direction of the first ground-truth hop.
  double heading = bearing(world.nodes[episode.path[0]],
                           world.nodes[episode.path[1]]);
  run.record.path.push_back(node);
  const int max_steps =
      static_cast<int>(episode.path.size()) - 1 + step_slack;

  // The state carries a step positional code plus the encoding of the
  // sub-instruction the agent should currently be executing.
  const std::size_t d = graph.params().cfg.d;
  Tensor step_pe = positional_encoding(max_steps + 1, d);
  auto pe_row = [&](int step) {
    Tensor row(1, d);
    std::copy(step_pe.v.begin() + step * d, step_pe.v.begin() + (step + 1) * d,
              row.v.begin());
    return row;
  };
  // Past the last span the clause signal goes to zero: "nothing left to
  // execute" is what cues STOP.
  auto clause_mean = [&](int step) {
    const auto& spans = episode.spans;
    if (step >= static_cast<int>(spans.size()))
      return tape.constant(Tensor(1, d));
    const auto& span = spans[step];
    return tape.mean_rows(tape.slice_rows(x, span.start_token, span.end_token));
  };
  Tape::Id state = tape.add(
      tape.add(graph.initial_state(), tape.constant(pe_row(0))),
      clause_mean(0));

  for (int step = 0;; ++step) {
    if (step >= max_steps) {
      run.record.truncated = true;
      if (!run.record.steps.empty()) run.record.steps.back().reward += -2.0;
      break;
    }
    RolloutStep rs;
    rs.node = node;
    const auto& views = world.views.at(node);
    for (const auto& cv : views) rs.candidates.push_back(cv.neighbor);
    const int n = static_cast<int>(views.size());

    Tape::Id vision = graph.encode_vision(observe(world, node, heading, vocab));
    auto cm = graph.cross_modal_step(x, state, vision);
    auto act = graph.action_attention(cm.s_ctx, cm.v_ctx);
    const Tensor& probs = tape.val(act.action_probs);
    rs.action_probs.assign(probs.v.begin(), probs.v.end());

    rs.teacher_action = teacher_action_index(world, dist, node, episode.goal,
                                             rs.candidates);
    if (mode == RolloutMode::Sample) {
      double r = sampler->uniform();
      double acc = 0;
      rs.sampled_action = n;  // STOP fallback against rounding
      for (int i = 0; i <= n; ++i) {
        acc += rs.action_probs[i];
        if (r < acc) {
          rs.sampled_action = i;
          break;
        }
      }
    }
    switch (mode) {
      case RolloutMode::Teacher: rs.taken_action = rs.teacher_action; break;
      case RolloutMode::Sample: rs.taken_action = rs.sampled_action; break;
      case RolloutMode::Greedy: {
        int best = 0;
        for (int i = 1; i <= n; ++i)
          if (rs.action_probs[i] > rs.action_probs[best]) best = i;
        rs.taken_action = best;
        break;
      }
    }

    int supervised = mode == RolloutMode::Sample ? rs.sampled_action
                                                 : rs.teacher_action;
    run.ce.push_back(tape.cross_entropy(act.scores, supervised));
    if (want_prefix)
      run.prefixes.push_back(
          graph.map_prefix(graph.weighted_vision(act.scores, cm.v_ctx)));

    bool stop = rs.taken_action == n;
    if (stop) {
      rs.reward = dist(node, episode.goal) <= 3.0 ? 2.0 : -2.0;
      run.record.steps.push_back(std::move(rs));
      break;
    }
    NodeId next = rs.candidates[rs.taken_action];
    const int taken = rs.taken_action;
    rs.reward = dist(node, episode.goal) - dist(next, episode.goal);
    run.record.steps.push_back(std::move(rs));
    heading = bearing(world.nodes[node], world.nodes[next]);
    node = next;
    run.record.path.push_back(node);
    // Commit the state to the view actually taken rather than the
    // probability-weighted mixture; mid-rollout states stay clean even while
    // the action distribution is diffuse.
    // The step task is Markov given (node, current clause): carrying the
    // previous view forward only adds interference, so the state is rebuilt
    // from the step code and clause alone.
    (void)taken;
    state = tape.add(tape.constant(pe_row(step + 1)), clause_mean(step + 1));
  }
  return run;
}

const World& world_of(const std::map<std::string, World>& worlds,
                      const Episode& episode) {
  auto it = worlds.find(episode.world_id);
  if (it == worlds.end())
    throw LookupError("unknown world " + episode.world_id);
  return it->second;
}

}  // namespace

RolloutRecord rollout(const Episode& episode, const World& world,
                      ModelParams& params, const Vocab& vocab,
                      RolloutMode mode, std::uint64_t seed, int step_slack) {
  Tape tape;
  ModelGraph graph(tape, params);
  DistanceTable dist(world);
  Rng sampler(derive_seed(seed, "rollout-sample"));
  return run_episode(tape, graph, episode, world, dist, vocab, mode, &sampler,
                     step_slack, false)
      .record;
}

Tape::Id nav_loss(Tape& tape, const std::vector<Tape::Id>& teacher_ce,
                  const std::vector<Tape::Id>& sampled_ce,
                  const std::vector<double>& advantages, double lambda) {
  if (teacher_ce.empty() && sampled_ce.empty())
    throw ValidationError("nav_loss: empty rollout");
  if (sampled_ce.size() != advantages.size())
    throw ValidationError("nav_loss: advantage count mismatch");
  std::vector<Tape::Id> terms;
  std::vector<double> weights;
  for (Tape::Id ce : teacher_ce) {
    terms.push_back(ce);
    weights.push_back(1.0);
  }
  for (std::size_t i = 0; i < sampled_ce.size(); ++i) {
    terms.push_back(sampled_ce[i]);
    weights.push_back(lambda * advantages[i]);
  }
  return tape.weighted_sum(terms, weights);
}

Tape::Id total_loss(Tape& tape, std::optional<Tape::Id> hint,
                    std::optional<Tape::Id> nav) {
  std::vector<Tape::Id> terms;
  for (auto id : {hint, nav})
    if (id) {
      if (!std::isfinite(tape.scalar(*id)))
        throw TrainError("total_loss: non-finite loss component");
      terms.push_back(*id);
    }
  if (terms.empty()) throw ValidationError("total_loss: nothing to combine");
  return tape.weighted_sum(terms, std::vector<double>(terms.size(), 1.0));
}

std::vector<double> discounted_returns(const std::vector<double>& rewards,
                                       double discount) {
  std::vector<double> returns(rewards.size());
  double acc = 0;
  for (int i = static_cast<int>(rewards.size()) - 1; i >= 0; --i) {
    acc = rewards[i] + discount * acc;
    returns[i] = acc;
  }
  return returns;
}

TrainedModel init_model(const TrainConfig& cfg,
                        const std::vector<Episode>& train_episodes,
                        const std::map<std::string, World>& worlds) {
  std::vector<std::vector<std::string>> corpora;
  RenderOptions full;  // vocab always covers full hints so ablations share it
  for (const auto& ep : train_episodes) {
    corpora.push_back(ep.instruction);
    const World& world = world_of(worlds, ep);
    for (int step = 0; step < static_cast<int>(ep.spans.size()); ++step) {
      auto rec = build_hint_record(ep, world, step, full);
      corpora.push_back(split_tokens(rec.rendered));
    }
  }
  TrainedModel model;
  model.vocab = Vocab::build(corpora);
  ModelConfig mc;
  mc.d = cfg.d;
  mc.prefix_len = cfg.prefix_len;
  mc.max_hint_tokens = cfg.max_hint_tokens;
  model.params = ModelParams::init(mc, model.vocab.size(), cfg.seed);
  return model;
}

EpochResult train_epoch(const TrainConfig& cfg, TrainedModel& model,
                        Adam& opt, const std::vector<Episode>& episodes,
                        const std::map<std::string, World>& worlds,
                        int epoch_index) {
  EpochResult result;
  const bool hints_on = cfg.hint_head_enabled();
  const RenderOptions opts = cfg.render_options();
  std::map<std::string, DistanceTable> tables;

  int count = static_cast<int>(episodes.size());
  if (cfg.episode_cap > 0) count = std::min(count, cfg.episode_cap);

  ModelParams last_good = model.params;
  for (int idx = 0; idx < count; ++idx) {
    const Episode& ep = episodes[idx];
    const World& world = world_of(worlds, ep);
    auto table_it = tables.find(ep.world_id);
    if (table_it == tables.end())
      table_it = tables.emplace(ep.world_id, DistanceTable(world)).first;
    const DistanceTable& dist = table_it->second;

    model.params.zero_grad();
    double episode_loss = 0;

    {
      // IL pass (teacher rollout) plus hint supervision.
      Tape tape;
      ModelGraph graph(tape, model.params);
      auto run = run_episode(tape, graph, ep, world, dist, model.vocab,
                             RolloutMode::Teacher, nullptr, cfg.step_slack,
                             hints_on);
      std::optional<Tape::Id> hint_id;
      if (hints_on) {
        std::vector<Tape::Id> hint_terms;
        for (std::size_t step = 0; step < ep.spans.size(); ++step) {
          auto rec = build_hint_record(ep, world, static_cast<int>(step), opts);
          auto gold = token_ids(model.vocab, split_tokens(rec.rendered));
          gold.push_back(Vocab::kEoh);
          hint_terms.push_back(
              graph.hint_loss(run.prefixes.at(step), run.instr_ids, gold));
        }
        hint_id = tape.weighted_sum(
            hint_terms, std::vector<double>(hint_terms.size(), 1.0));
      }
      Tape::Id nav_id = nav_loss(tape, run.ce, {}, {}, cfg.lambda);
      Tape::Id total = total_loss(tape, hint_id, nav_id);
      episode_loss += tape.scalar(total);
      tape.backward(total);
    }

    if (cfg.lambda > 0) {
      // RL pass (sampled rollout), separate from the IL pass.
      Tape tape;
      ModelGraph graph(tape, model.params);
      Rng sampler(derive_seed(cfg.seed, "train-sample") +
                  static_cast<std::uint64_t>(epoch_index) * 1000003ULL +
                  static_cast<std::uint64_t>(idx));
      auto run = run_episode(tape, graph, ep, world, dist, model.vocab,
                             RolloutMode::Sample, &sampler, cfg.step_slack,
                             false);
      std::vector<double> rewards;
      for (const auto& s : run.record.steps) rewards.push_back(s.reward);
      auto advantages = discounted_returns(rewards, cfg.rl_discount);
      Tape::Id rl = nav_loss(tape, {}, run.ce, advantages, cfg.lambda);
      episode_loss += tape.scalar(rl);
      tape.backward(rl);
    }

    if (!std::isfinite(episode_loss) || !model.params.all_finite()) {
      model.params = last_good;
      throw TrainError("train_epoch: non-finite loss at episode " + ep.id);
    }
    opt.step(model.params);
    result.losses.push_back(episode_loss);
    last_good = model.params;
  }
  return result;
}

EvalOutput evaluate_split(const TrainConfig& cfg, TrainedModel& model,
                          const std::vector<Episode>& episodes,
                          const std::map<std::string, World>& worlds,
                          bool generate_hints, RolloutMode mode) {
  if (mode == RolloutMode::Sample)
    throw ValidationError("evaluate_split: sampling policy not supported");
  EvalOutput out;
  std::map<std::string, DistanceTable> tables;
  std::vector<PathPair> pairs;
  std::vector<const DistanceTable*> pair_tables;
  RenderOptions full;

  for (const auto& ep : episodes) {
    const World& world = world_of(worlds, ep);
    auto table_it = tables.find(ep.world_id);
    if (table_it == tables.end())
      table_it = tables.emplace(ep.world_id, DistanceTable(world)).first;
    const DistanceTable& dist = table_it->second;

    Tape tape;
    ModelGraph graph(tape, model.params);
    const bool decode = generate_hints && mode != RolloutMode::Teacher;
    auto run = run_episode(tape, graph, ep, world, dist, model.vocab, mode,
                           nullptr, cfg.step_slack, decode);
    for (std::size_t step = 0; step < run.record.steps.size(); ++step) {
      const auto& rs = run.record.steps[step];
      GeneratedStep gs;
      gs.episode_id = ep.id;
      gs.step_index = static_cast<int>(step);
      gs.node = rs.node;
      gs.selected_neighbor =
          rs.taken_action < static_cast<int>(rs.candidates.size())
              ? rs.candidates[rs.taken_action]
              : -1;
      gs.teacher_neighbor =
          rs.teacher_action < static_cast<int>(rs.candidates.size())
              ? rs.candidates[rs.teacher_action]
              : -1;
      int gold_step = std::min<int>(static_cast<int>(step),
                                    static_cast<int>(ep.spans.size()) - 1);
      gs.gold_text = build_hint_record(ep, world, gold_step, full).rendered;
      if (generate_hints && mode == RolloutMode::Teacher) {
        gs.text = gs.gold_text;
      } else if (decode) {
        auto ids = decode_hint_greedy(model.params,
                                      tape.val(run.prefixes.at(step)),
                                      run.instr_ids);
        std::vector<std::string> words;
        for (int id : ids) words.push_back(model.vocab.tokens.at(id));
        gs.text = join_tokens(words);
      }
      out.steps.push_back(std::move(gs));
    }
    out.rollouts.push_back(run.record);
    pairs.push_back(PathPair{run.record.path, ep.path, &world, 3.0});
    pair_tables.push_back(&dist);
  }
  out.report = aggregate_metrics(pairs, pair_tables);
  return out;
}

using nlohmann::json;

std::string TrainedModel::to_json() const {
  json j{{"schema_version", 1},
         {"model", json::parse(params.to_checkpoint_json())},
         {"vocab", vocab.tokens}};
  return j.dump();
}

TrainedModel TrainedModel::from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.at("schema_version").get<int>() != 1)
    throw ValidationError("trained model: unknown schema version");
  TrainedModel m;
  m.params = ModelParams::from_checkpoint_json(j.at("model").dump());
  m.vocab.tokens = j.at("vocab").get<std::vector<std::string>>();
  for (int i = 0; i < m.vocab.size(); ++i) m.vocab.index[m.vocab.tokens[i]] = i;
  if (m.vocab.size() != m.params.vocab_size)
    throw ValidationError("trained model: vocab/params size mismatch");
  return m;
}

std::string generated_step_to_json(const GeneratedStep& s) {
  json j{{"schema_version", 1},
         {"episode_id", s.episode_id},
         {"step_index", s.step_index},
         {"node", s.node},
         {"selected_neighbor", s.selected_neighbor},
         {"teacher_neighbor", s.teacher_neighbor},
         {"text", s.text},
         {"gold_text", s.gold_text}};
  return j.dump();
}

GeneratedStep generated_step_from_json(const std::string& line) {
  json j = json::parse(line);
  GeneratedStep s;
  s.episode_id = j.at("episode_id").get<std::string>();
  s.step_index = j.at("step_index").get<int>();
  s.node = j.at("node").get<NodeId>();
  s.selected_neighbor = j.at("selected_neighbor").get<NodeId>();
  s.teacher_neighbor = j.at("teacher_neighbor").get<NodeId>();
  s.text = j.at("text").get<std::string>();
  s.gold_text = j.at("gold_text").get<std::string>();
  return s;
}

}  // namespace navhint
