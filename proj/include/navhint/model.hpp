#ifndef NAVHINT_MODEL_HPP
#define NAVHINT_MODEL_HPP

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "navhint/tensor.hpp"
#include "navhint/world.hpp"

namespace navhint {

struct Vocab {
  std::vector<std::string> tokens;
  std::unordered_map<std::string, int> index;

  static constexpr int kUnk = 0;
  static constexpr int kEoh = 1;  // end-of-hint marker

  static Vocab build(const std::vector<std::vector<std::string>>& corpora);
  int id(const std::string& token) const;
  int size() const { return static_cast<int>(tokens.size()); }
};

struct ModelConfig {
  int d = 32;
  int prefix_len = 10;
  int max_hint_tokens = 80;
};

struct ModelParams {
  ModelConfig cfg;
  int vocab_size = 0;

  Tensor embedding;            // (V, d), shared by encoder and decoder
  Tensor vision_w, vision_b;   // (d+4, d), (1, d)
  Tensor q_sv, k_sv, v_sv;     // state/vision queries into text
  Tensor q_x, k_x, v_x;        // text queries into state/vision
  Tensor stop_key;             // (1, d) learned STOP pseudo-candidate
  Tensor prefix_w, prefix_b;   // (d, k*d), (1, k*d) -- the mapper F
  Tensor dec_q, dec_k, dec_v, dec_o;  // decoder self-attention
  Tensor ffn_w1, ffn_b1, ffn_w2, ffn_b2;
  Tensor out_w, out_b;         // (d, V), (1, V)

  static ModelParams init(const ModelConfig& cfg, int vocab_size,
                          std::uint64_t seed);

  std::vector<std::pair<std::string, Tensor*>> named();
  void zero_grad();
  bool all_finite() const;

  std::string to_checkpoint_json() const;
  static ModelParams from_checkpoint_json(const std::string& text);
};

// Per-view input to the vision encoder: head-noun token ids plus relative
// orientation.
struct EncodedView {
  std::vector<int> noun_ids;
  double heading = 0;
  double elevation = 0;
};

Tensor positional_encoding(std::size_t len, std::size_t d);

// One forward graph over a tape; parameter leaves are created once per graph.
class ModelGraph {
 public:
  ModelGraph(Tape& tape, ModelParams& params);

  // `span_ids`, when given (one per token), adds a second positional code
  // identifying each token's sub-instruction span; the rollout state carries
  // the matching step code.
  Tape::Id encode_instruction(const std::vector<int>& token_ids,
                              const std::vector<int>& span_ids = {});
  Tape::Id encode_vision(const std::vector<EncodedView>& views);
  Tape::Id initial_state();  // zero S_0, (1, d)

  struct CrossModalOut {
    Tape::Id x_ctx, s_ctx, v_ctx;
  };
  CrossModalOut cross_modal_step(Tape::Id x, Tape::Id state, Tape::Id vision);

  struct ActionOut {
    Tape::Id scores;        // (1, n+1), STOP last
    Tape::Id action_probs;  // softmax of scores
    Tape::Id next_state;    // (1, d)
  };
  ActionOut action_attention(Tape::Id s_ctx, Tape::Id v_ctx);

  // Candidate-only probabilities (STOP mass dropped and renormalized) applied
  // row-wise to the contextual vision.
  Tape::Id weighted_vision(Tape::Id scores, Tape::Id v_ctx);

  Tape::Id map_prefix(Tape::Id weighted_v);  // (k, d)

  // Teacher-forced decoder loss over gold hint tokens (which must end with
  // the end-of-hint id).
  Tape::Id hint_loss(Tape::Id prefix, const std::vector<int>& instruction_ids,
                     const std::vector<int>& gold_hint_ids);

  // One decoder forward; returns logits rows for every sequence position.
  Tape::Id decoder_logits(Tape::Id prefix,
                          const std::vector<int>& instruction_ids,
                          const std::vector<int>& hint_ids_so_far);

  Tape& tape() { return tape_; }
  const ModelParams& params() const { return params_; }

 private:
  Tape& tape_;
  ModelParams& params_;
  std::unordered_map<const Tensor*, Tape::Id> leaves_;
  Tape::Id leaf(Tensor& t);
};

// Greedy argmax decode (ties to the lowest token id) until end-of-hint or the
// token cap. `prefix_values` is the prefix tensor from a prior forward pass.
std::vector<int> decode_hint_greedy(ModelParams& params,
                                    const Tensor& prefix_values,
                                    const std::vector<int>& instruction_ids);

struct GradCheckReport {
  double max_rel_error = 0;
  int checked = 0;
  std::string worst_param;
  bool ok(double tol = 1e-4) const { return max_rel_error <= tol; }
};

// Reverse-mode vs central finite differences (h = 1e-5) on >= `samples`
// randomly chosen scalar parameters spanning every parameter group.
GradCheckReport grad_check(ModelParams& params, std::uint64_t seed,
                           int samples = 500);

struct Adam {
  double lr = 1e-3;
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  double clip_norm = 5.0;
  int t = 0;
  std::unordered_map<const Tensor*, std::pair<std::vector<double>,
                                              std::vector<double>>> state;

  void step(ModelParams& params);
};

}  // namespace navhint

#endif
