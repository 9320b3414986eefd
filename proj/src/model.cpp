#include "navhint/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "navhint/rng.hpp"

namespace navhint {

Vocab Vocab::build(const std::vector<std::vector<std::string>>& corpora) {
  Vocab v;
  v.tokens = {"<unk>", "<eoh>"};
  std::set<std::string> seen(v.tokens.begin(), v.tokens.end());
  std::set<std::string> words;
  for (const auto& seq : corpora)
    for (const auto& tok : seq)
      if (!seen.count(tok)) words.insert(tok);
  for (const auto& w : words) v.tokens.push_back(w);
  for (int i = 0; i < v.size(); ++i) v.index[v.tokens[i]] = i;
  return v;
}

int Vocab::id(const std::string& token) const {
  auto it = index.find(token);
  return it == index.end() ? kUnk : it->second;
}

namespace {

Tensor random_tensor(std::size_t r, std::size_t c, Rng& rng, double scale) {
  Tensor t(r, c);
  for (auto& x : t.v) x = rng.normal() * scale;
  return t;
}

}  // namespace

ModelParams ModelParams::init(const ModelConfig& cfg, int vocab_size,
                              std::uint64_t seed) {
  Rng rng(derive_seed(seed, "model-init"));
  const std::size_t d = cfg.d, v = vocab_size, k = cfg.prefix_len;
  ModelParams p;
  p.cfg = cfg;
  p.vocab_size = vocab_size;
  const double s = 0.08;
  p.embedding = random_tensor(v, d, rng, s);
  p.vision_w = random_tensor(d + 4, d, rng, s);
  p.vision_b = Tensor(1, d);
  // Near-identity cross-attention init: attention starts out as similarity
  // retrieval in the shared embedding space, which makes landmark-noun
  // grounding learnable quickly at this scale.
  auto near_identity = [&](std::size_t n) {
    Tensor t = random_tensor(n, n, rng, s);
    for (std::size_t i = 0; i < n; ++i) t.at(i, i) += 1.0;
    return t;
  };
  p.q_sv = near_identity(d);
  p.k_sv = near_identity(d);
  p.v_sv = near_identity(d);
  p.q_x = near_identity(d);
  p.k_x = near_identity(d);
  p.v_x = near_identity(d);
  p.stop_key = random_tensor(1, d, rng, s);
  p.prefix_w = random_tensor(d, k * d, rng, s);
  p.prefix_b = Tensor(1, k * d);
  p.dec_q = random_tensor(d, d, rng, s);
  p.dec_k = random_tensor(d, d, rng, s);
  p.dec_v = random_tensor(d, d, rng, s);
  p.dec_o = random_tensor(d, d, rng, s);
  p.ffn_w1 = random_tensor(d, 2 * d, rng, s);
  p.ffn_b1 = Tensor(1, 2 * d);
  p.ffn_w2 = random_tensor(2 * d, d, rng, s);
  p.ffn_b2 = Tensor(1, d);
  p.out_w = random_tensor(d, v, rng, s);
  p.out_b = Tensor(1, v);
  return p;
}

std::vector<std::pair<std::string, Tensor*>> ModelParams::named() {
  return {{"embedding", &embedding}, {"vision_w", &vision_w},
          {"vision_b", &vision_b},   {"q_sv", &q_sv},
          {"k_sv", &k_sv},           {"v_sv", &v_sv},
          {"q_x", &q_x},             {"k_x", &k_x},
          {"v_x", &v_x},             {"stop_key", &stop_key},
          {"prefix_w", &prefix_w},   {"prefix_b", &prefix_b},
          {"dec_q", &dec_q},         {"dec_k", &dec_k},
          {"dec_v", &dec_v},         {"dec_o", &dec_o},
          {"ffn_w1", &ffn_w1},       {"ffn_b1", &ffn_b1},
          {"ffn_w2", &ffn_w2},       {"ffn_b2", &ffn_b2},
          {"out_w", &out_w},         {"out_b", &out_b}};
}

void ModelParams::zero_grad() {
  for (auto& [name, t] : named()) t->zero_grad();
}

bool ModelParams::all_finite() const {
  for (auto& [name, t] : const_cast<ModelParams*>(this)->named())
    for (double x : t->v)
      if (!std::isfinite(x)) return false;
  return true;
}

using nlohmann::json;

std::string ModelParams::to_checkpoint_json() const {
  json tensors = json::object();
  for (auto& [name, t] : const_cast<ModelParams*>(this)->named())
    tensors[name] = {{"rows", t->rows}, {"cols", t->cols}, {"values", t->v}};
  json j{{"schema_version", 1},
         {"config",
          {{"d", cfg.d},
           {"prefix_len", cfg.prefix_len},
           {"max_hint_tokens", cfg.max_hint_tokens}}},
         {"vocab_size", vocab_size},
         {"tensors", std::move(tensors)}};
  return j.dump();
}

ModelParams ModelParams::from_checkpoint_json(const std::string& text) {
  json j = json::parse(text);
  if (j.at("schema_version").get<int>() != 1)
    throw ValidationError("checkpoint: unknown schema version");
  ModelConfig cfg;
  cfg.d = j.at("config").at("d").get<int>();
  cfg.prefix_len = j.at("config").at("prefix_len").get<int>();
  cfg.max_hint_tokens = j.at("config").at("max_hint_tokens").get<int>();
  ModelParams p = ModelParams::init(cfg, j.at("vocab_size").get<int>(), 0);
  for (auto& [name, t] : p.named()) {
    const auto& src = j.at("tensors").at(name);
    if (src.at("rows").get<std::size_t>() != t->rows ||
        src.at("cols").get<std::size_t>() != t->cols)
      throw ValidationError("checkpoint: shape mismatch for " + name);
    t->v = src.at("values").get<std::vector<double>>();
    t->zero_grad();
  }
  return p;
}

Tensor positional_encoding(std::size_t len, std::size_t d) {
  Tensor pe(len, d);
  for (std::size_t pos = 0; pos < len; ++pos)
    for (std::size_t j = 0; j < d; ++j) {
      double freq = std::pow(10000.0, -2.0 * (j / 2) / static_cast<double>(d));
      pe.at(pos, j) = (j % 2 == 0) ? std::sin(pos * freq) : std::cos(pos * freq);
    }
  return pe;
}

ModelGraph::ModelGraph(Tape& tape, ModelParams& params)
    : tape_(tape), params_(params) {}

Tape::Id ModelGraph::leaf(Tensor& t) {
  auto it = leaves_.find(&t);
  if (it != leaves_.end()) return it->second;
  Tape::Id id = tape_.leaf(&t);
  leaves_[&t] = id;
  return id;
}

Tape::Id ModelGraph::encode_instruction(const std::vector<int>& ids,
                                        const std::vector<int>& span_ids) {
  if (ids.empty())
    throw ValidationError("encode_instruction: empty instruction");
  if (!span_ids.empty() && span_ids.size() != ids.size())
    throw ValidationError("encode_instruction: span id count mismatch");
  Tensor pos = positional_encoding(ids.size(), params_.cfg.d);
  if (!span_ids.empty()) {
    int max_span = *std::max_element(span_ids.begin(), span_ids.end());
    Tensor span_pos = positional_encoding(max_span + 1, params_.cfg.d);
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = 0; j < pos.cols; ++j)
        pos.at(i, j) += span_pos.at(span_ids[i], j);
  }
  Tape::Id x = tape_.embedding_rows(leaf(params_.embedding), ids);
  return tape_.add(x, tape_.constant(std::move(pos)));
}

Tape::Id ModelGraph::encode_vision(const std::vector<EncodedView>& views) {
  if (views.empty()) throw ValidationError("encode_vision: no views");
  std::vector<Tape::Id> rows;
  for (const auto& view : views) {
    if (view.noun_ids.empty())
      throw ValidationError("encode_vision: view without objects");
    Tape::Id nouns = tape_.embedding_rows(leaf(params_.embedding), view.noun_ids);
    Tape::Id pooled = tape_.mean_rows(nouns);
    Tensor orient(1, 4);
    orient.v = {std::sin(view.heading), std::cos(view.heading),
                std::sin(view.elevation), std::cos(view.elevation)};
    rows.push_back(tape_.concat_cols(pooled, tape_.constant(orient)));
  }
  Tape::Id stacked = tape_.concat_rows(rows);
  Tape::Id projected = tape_.matmul(stacked, leaf(params_.vision_w));
  projected = tape_.add_row_broadcast(projected, leaf(params_.vision_b));
  return tape_.tanh_op(projected);
}

Tape::Id ModelGraph::initial_state() {
  return tape_.constant(Tensor(1, params_.cfg.d));
}

ModelGraph::CrossModalOut ModelGraph::cross_modal_step(Tape::Id x,
                                                       Tape::Id state,
                                                       Tape::Id vision) {
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(params_.cfg.d));
  Tape::Id sv = tape_.concat_rows({state, vision});

  Tape::Id q1 = tape_.matmul(sv, leaf(params_.q_sv));
  Tape::Id k1 = tape_.matmul(x, leaf(params_.k_sv));
  Tape::Id a1 = tape_.softmax_rows(tape_.scale(tape_.matmul_nt(q1, k1),
                                               inv_sqrt_d));
  Tape::Id sv_ctx =
      tape_.add(sv, tape_.matmul(a1, tape_.matmul(x, leaf(params_.v_sv))));

  Tape::Id q2 = tape_.matmul(x, leaf(params_.q_x));
  Tape::Id k2 = tape_.matmul(sv, leaf(params_.k_x));
  Tape::Id a2 = tape_.softmax_rows(tape_.scale(tape_.matmul_nt(q2, k2),
                                               inv_sqrt_d));
  Tape::Id x_ctx =
      tape_.add(x, tape_.matmul(a2, tape_.matmul(sv, leaf(params_.v_x))));

  std::size_t n = tape_.val(vision).rows;
  CrossModalOut out;
  out.x_ctx = x_ctx;
  out.s_ctx = tape_.slice_rows(sv_ctx, 0, 1);
  out.v_ctx = tape_.slice_rows(sv_ctx, 1, n + 1);
  return out;
}

ModelGraph::ActionOut ModelGraph::action_attention(Tape::Id s_ctx,
                                                   Tape::Id v_ctx) {
  if (tape_.val(v_ctx).rows == 0)
    throw ValidationError("action_attention: no candidates");
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(params_.cfg.d));
  Tape::Id rows = tape_.concat_rows({v_ctx, leaf(params_.stop_key)});
  ActionOut out;
  out.scores = tape_.scale(tape_.matmul_nt(s_ctx, rows), inv_sqrt_d);
  out.action_probs = tape_.softmax_rows(out.scores);
  out.next_state = tape_.matmul(out.action_probs, rows);
  return out;
}

Tape::Id ModelGraph::weighted_vision(Tape::Id scores, Tape::Id v_ctx) {
  std::size_t n = tape_.val(v_ctx).rows;
  // Softmax over the candidate slice == dropping STOP mass and renormalizing.
  Tape::Id cand = tape_.softmax_rows(tape_.slice_cols(scores, 0, n));
  return tape_.scale_rows(v_ctx, cand);
}

Tape::Id ModelGraph::map_prefix(Tape::Id weighted_v) {
  Tape::Id pooled = tape_.mean_rows(weighted_v);
  Tape::Id flat = tape_.matmul(pooled, leaf(params_.prefix_w));
  flat = tape_.add_row_broadcast(flat, leaf(params_.prefix_b));
  return tape_.reshape(flat, params_.cfg.prefix_len, params_.cfg.d);
}

Tape::Id ModelGraph::decoder_logits(Tape::Id prefix,
                                    const std::vector<int>& instruction_ids,
                                    const std::vector<int>& hint_ids) {
  const std::size_t d = params_.cfg.d;
  std::vector<Tape::Id> parts = {prefix};
  parts.push_back(
      tape_.embedding_rows(leaf(params_.embedding), instruction_ids));
  if (!hint_ids.empty())
    parts.push_back(tape_.embedding_rows(leaf(params_.embedding), hint_ids));
  Tape::Id seq = tape_.concat_rows(parts);
  std::size_t len = tape_.val(seq).rows;
  seq = tape_.add(seq, tape_.constant(positional_encoding(len, d)));

  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
  Tape::Id q = tape_.matmul(seq, leaf(params_.dec_q));
  Tape::Id k = tape_.matmul(seq, leaf(params_.dec_k));
  Tape::Id v = tape_.matmul(seq, leaf(params_.dec_v));
  Tensor mask(len, len);
  for (std::size_t i = 0; i < len; ++i)
    for (std::size_t j = i + 1; j < len; ++j) mask.at(i, j) = -1e9;
  Tape::Id scores = tape_.add(tape_.scale(tape_.matmul_nt(q, k), inv_sqrt_d),
                              tape_.constant(std::move(mask)));
  Tape::Id attended = tape_.matmul(tape_.softmax_rows(scores), v);
  Tape::Id h = tape_.add(seq, tape_.matmul(attended, leaf(params_.dec_o)));

  Tape::Id ff = tape_.matmul(h, leaf(params_.ffn_w1));
  ff = tape_.tanh_op(tape_.add_row_broadcast(ff, leaf(params_.ffn_b1)));
  ff = tape_.matmul(ff, leaf(params_.ffn_w2));
  ff = tape_.add_row_broadcast(ff, leaf(params_.ffn_b2));
  h = tape_.add(h, ff);

  Tape::Id logits = tape_.matmul(h, leaf(params_.out_w));
  return tape_.add_row_broadcast(logits, leaf(params_.out_b));
}

Tape::Id ModelGraph::hint_loss(Tape::Id prefix,
                               const std::vector<int>& instruction_ids,
                               const std::vector<int>& gold_hint_ids) {
  if (gold_hint_ids.empty() || gold_hint_ids.back() != Vocab::kEoh)
    throw ValidationError("hint_loss: gold must end with end-of-hint marker");
  const int max_tokens = params_.cfg.max_hint_tokens;
  std::vector<int> gold = gold_hint_ids;
  if (static_cast<int>(gold.size()) > max_tokens) {
    gold.resize(max_tokens);
    gold.back() = Vocab::kEoh;
  }
  // Inputs are all gold tokens but the last; prediction for gold[i] sits at
  // the row of its preceding element.
  std::vector<int> inputs(gold.begin(), gold.end() - 1);
  Tape::Id logits = decoder_logits(prefix, instruction_ids, inputs);
  const std::size_t base =
      params_.cfg.prefix_len + instruction_ids.size() - 1;
  std::vector<Tape::Id> losses;
  std::vector<double> weights;
  // Mean rather than sum so long hints do not drown the per-step navigation
  // cross-entropy in the joint objective.
  for (std::size_t i = 0; i < gold.size(); ++i) {
    Tape::Id row = tape_.slice_rows(logits, base + i, base + i + 1);
    losses.push_back(tape_.cross_entropy(row, gold[i]));
    weights.push_back(1.0 / static_cast<double>(gold.size()));
  }
  return tape_.weighted_sum(losses, weights);
}

// Plain incremental decoder used by greedy inference; mirrors decoder_logits
// without tape overhead. Equivalence is covered by tests.
namespace {

struct PlainDecoder {
  const ModelParams& p;
  std::size_t d;
  std::vector<std::vector<double>> rows;  // embedded sequence with PE
  Tensor pe;

  PlainDecoder(const ModelParams& params, std::size_t max_len)
      : p(params), d(params.cfg.d), pe(positional_encoding(max_len, params.cfg.d)) {}

  static std::vector<double> matvec_rowT(const Tensor& w,
                                         const std::vector<double>& x) {
    // x (1,w.rows) * w -> (1,w.cols)
    std::vector<double> out(w.cols, 0.0);
    for (std::size_t i = 0; i < w.rows; ++i)
      for (std::size_t j = 0; j < w.cols; ++j)
        out[j] += x[i] * w.at(i, j);
    return out;
  }

  void push_row(std::vector<double> row) {
    std::size_t pos = rows.size();
    for (std::size_t j = 0; j < d; ++j) row[j] += pe.at(pos, j);
    rows.push_back(std::move(row));
  }

  std::vector<double> logits_last() const {
    // Causal self-attention for the last position over all rows.
    const std::size_t len = rows.size();
    std::vector<double> q = matvec_rowT(p.dec_q, rows[len - 1]);
    double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
    std::vector<double> scores(len);
    double mx = -1e300;
    std::vector<std::vector<double>> ks(len), vs(len);
    for (std::size_t i = 0; i < len; ++i) {
      ks[i] = matvec_rowT(p.dec_k, rows[i]);
      vs[i] = matvec_rowT(p.dec_v, rows[i]);
      double dot = 0;
      for (std::size_t j = 0; j < d; ++j) dot += q[j] * ks[i][j];
      scores[i] = dot * inv_sqrt_d;
      mx = std::max(mx, scores[i]);
    }
    double sum = 0;
    for (auto& s : scores) {
      s = std::exp(s - mx);
      sum += s;
    }
    std::vector<double> attended(d, 0.0);
    for (std::size_t i = 0; i < len; ++i)
      for (std::size_t j = 0; j < d; ++j)
        attended[j] += (scores[i] / sum) * vs[i][j];
    std::vector<double> h = matvec_rowT(p.dec_o, attended);
    for (std::size_t j = 0; j < d; ++j) h[j] += rows[len - 1][j];

    std::vector<double> ff = matvec_rowT(p.ffn_w1, h);
    for (std::size_t j = 0; j < ff.size(); ++j)
      ff[j] = std::tanh(ff[j] + p.ffn_b1.v[j]);
    std::vector<double> ff2 = matvec_rowT(p.ffn_w2, ff);
    for (std::size_t j = 0; j < d; ++j) h[j] += ff2[j] + p.ffn_b2.v[j];

    std::vector<double> logits = matvec_rowT(p.out_w, h);
    for (std::size_t j = 0; j < logits.size(); ++j) logits[j] += p.out_b.v[j];
    return logits;
  }
};

}  // namespace

std::vector<int> decode_hint_greedy(ModelParams& params,
                                    const Tensor& prefix_values,
                                    const std::vector<int>& instruction_ids) {
  const std::size_t d = params.cfg.d;
  const std::size_t max_len = params.cfg.prefix_len + instruction_ids.size() +
                              params.cfg.max_hint_tokens + 1;
  PlainDecoder dec(params, max_len);
  for (std::size_t i = 0; i < prefix_values.rows; ++i)
    dec.push_row({prefix_values.v.begin() + i * d,
                  prefix_values.v.begin() + (i + 1) * d});
  for (int id : instruction_ids)
    dec.push_row({params.embedding.v.begin() + id * d,
                  params.embedding.v.begin() + (id + 1) * d});

  std::vector<int> out;
  for (int step = 0; step < params.cfg.max_hint_tokens; ++step) {
    auto logits = dec.logits_last();
    int best = 0;
    for (std::size_t j = 1; j < logits.size(); ++j)
      if (logits[j] > logits[best]) best = static_cast<int>(j);
    if (best == Vocab::kEoh) break;
    out.push_back(best);
    dec.push_row({params.embedding.v.begin() + best * d,
                  params.embedding.v.begin() + (best + 1) * d});
  }
  return out;
}

namespace {

// Probe batch for gradient verification: one two-candidate step with a short
// instruction and hint, touching every parameter group.
double probe_loss(ModelParams& p) {
  int v = p.vocab_size;
  std::vector<int> instr = {2 % v, 3 % v, 4 % v};
  std::vector<int> hint = {5 % v, 6 % v, Vocab::kEoh};
  std::vector<EncodedView> views = {{{2 % v, 7 % v}, 0.4, 0.0},
                                    {{8 % v}, -1.2, 0.5236}};
  Tape tape;
  ModelGraph g(tape, p);
  Tape::Id x = g.encode_instruction(instr);
  Tape::Id vis = g.encode_vision(views);
  auto cm = g.cross_modal_step(x, g.initial_state(), vis);
  auto act = g.action_attention(cm.s_ctx, cm.v_ctx);
  Tape::Id nav = tape.cross_entropy(act.scores, 1);
  Tape::Id wv = g.weighted_vision(act.scores, cm.v_ctx);
  Tape::Id prefix = g.map_prefix(wv);
  Tape::Id hint_l = g.hint_loss(prefix, instr, hint);
  Tape::Id total = tape.weighted_sum({nav, hint_l}, {1.0, 1.0});
  return tape.scalar(total);
}

void probe_backward(ModelParams& p) {
  int v = p.vocab_size;
  std::vector<int> instr = {2 % v, 3 % v, 4 % v};
  std::vector<int> hint = {5 % v, 6 % v, Vocab::kEoh};
  std::vector<EncodedView> views = {{{2 % v, 7 % v}, 0.4, 0.0},
                                    {{8 % v}, -1.2, 0.5236}};
  Tape tape;
  ModelGraph g(tape, p);
  Tape::Id x = g.encode_instruction(instr);
  Tape::Id vis = g.encode_vision(views);
  auto cm = g.cross_modal_step(x, g.initial_state(), vis);
  auto act = g.action_attention(cm.s_ctx, cm.v_ctx);
  Tape::Id nav = tape.cross_entropy(act.scores, 1);
  Tape::Id wv = g.weighted_vision(act.scores, cm.v_ctx);
  Tape::Id prefix = g.map_prefix(wv);
  Tape::Id hint_l = g.hint_loss(prefix, instr, hint);
  Tape::Id total = tape.weighted_sum({nav, hint_l}, {1.0, 1.0});
  tape.backward(total);
}

}  // namespace

GradCheckReport grad_check(ModelParams& params, std::uint64_t seed,
                           int samples) {
  const double h = 1e-5;
  params.zero_grad();
  probe_backward(params);

  Rng rng(derive_seed(seed, "grad-check"));
  GradCheckReport report;
  auto groups = params.named();
  int per_group = std::max(
      1, (samples + static_cast<int>(groups.size()) - 1) /
             static_cast<int>(groups.size()));
  // Small groups (biases) may not fill their quota; the shortfall is made up
  // from the largest group so at least `samples` scalars are checked.
  std::vector<int> budgets;
  int planned = 0;
  std::size_t largest = 0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    budgets.push_back(
        std::min<int>(per_group, static_cast<int>(groups[i].second->size())));
    planned += budgets.back();
    if (groups[i].second->size() > groups[largest].second->size()) largest = i;
  }
  if (planned < samples)
    budgets[largest] =
        std::min<int>(budgets[largest] + (samples - planned),
                      static_cast<int>(groups[largest].second->size()));
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    auto& [name, t] = groups[gi];
    int budget = budgets[gi];
    std::set<std::size_t> picked;
    while (static_cast<int>(picked.size()) < budget)
      picked.insert(rng.uniform_int(t->size()));
    for (std::size_t idx : picked) {
      double saved = t->v[idx];
      t->v[idx] = saved + h;
      double up = probe_loss(params);
      t->v[idx] = saved - h;
      double down = probe_loss(params);
      t->v[idx] = saved;
      double fd = (up - down) / (2 * h);
      double analytic = t->g[idx];
      // The floor absorbs central-difference roundoff (~1e-10 absolute on a
      // loss of magnitude ~10) for near-zero gradients; below it the two
      // estimates are numerically indistinguishable.
      double denom = std::max({std::abs(fd), std::abs(analytic), 1e-5});
      double rel = std::abs(fd - analytic) / denom;
      ++report.checked;
      if (rel > report.max_rel_error) {
        report.max_rel_error = rel;
        report.worst_param = name;
      }
    }
  }
  return report;
}

void Adam::step(ModelParams& params) {
  ++t;
  double norm_sq = 0;
  for (auto& [name, tensor] : params.named())
    for (double g : tensor->g) norm_sq += g * g;
  double scale_factor = 1.0;
  double norm = std::sqrt(norm_sq);
  if (norm > clip_norm && norm > 0) scale_factor = clip_norm / norm;

  double bc1 = 1.0 - std::pow(beta1, t);
  double bc2 = 1.0 - std::pow(beta2, t);
  for (auto& [name, tensor] : params.named()) {
    auto& [m, v] = state[tensor];
    if (m.size() != tensor->size()) {
      m.assign(tensor->size(), 0.0);
      v.assign(tensor->size(), 0.0);
    }
    for (std::size_t i = 0; i < tensor->size(); ++i) {
      double g = tensor->g[i] * scale_factor;
      m[i] = beta1 * m[i] + (1 - beta1) * g;
      v[i] = beta2 * v[i] + (1 - beta2) * g * g;
      tensor->v[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps);
    }
  }
}

}  // namespace navhint
