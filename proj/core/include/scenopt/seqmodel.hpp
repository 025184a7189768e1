#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scenopt/scenario.hpp"

namespace scenopt {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// One LSTM direction: W* act on the input, U* on the previous hidden
// state, b* are gate biases (f = forget, i = input, c = candidate,
// o = output).
struct LstmWeights {
  Mat Wf, Uf, Wi, Ui, Wc, Uc, Wo, Uo;
  Vec bf, bi, bc, bo;
};

// BiLSTM encoder + attention decoder with per-item sigmoid outputs.
// All sizes are per-step, so a trained model accepts any horizon.
struct SeqModelParams {
  int input_width = 0;  // encoder feature width F; decoder input is F + items
  int items = 0;        // output width d
  int hidden = 0;       // H; encoder states have width 2H
  LstmWeights enc_fwd, enc_bwd;  // input width F
  LstmWeights dec;               // input width F + items
  Mat attn;   // H x 2H bilinear score (decoder state vs encoder state)
  Mat out_w;  // items x 3H acting on [decoder state; attention context]
  Vec out_b;  // items
};

// uniform(-1/sqrt(H), 1/sqrt(H)) entries, forget-gate biases +1
SeqModelParams init_params(int input_width, int items, int hidden,
                           std::uint64_t seed);

// Iterates every tensor in a fixed order (used by the optimizer, the
// checkpoint format, and the finite-difference tests).
void visit_tensors(SeqModelParams& p,
                   const std::function<void(const std::string&, double*,
                                            int rows, int cols)>& fn);

struct LstmCellState {
  Vec h, c;
};

LstmCellState lstm_cell(const Vec& x, const Vec& h_prev, const Vec& c_prev,
                        const LstmWeights& w);

// Per-stage concatenated [forward; backward] states, width 2H.
std::vector<Vec> bilstm_encode(const SeqModelParams& p,
                               const std::vector<Vec>& sequence);

// Scenario-group mean of encoder states within each information bundle.
// The average is computed once per bundle and assigned to every member,
// so outputs are bit-identical across a bundle.
std::vector<std::vector<Vec>> neda_average(
    const std::vector<std::vector<Vec>>& states,  // [scenario][stage] (2H)
    const std::vector<std::vector<ScenarioBundle>>& bundles_by_stage);

struct AttentionResult {
  Vec weights;  // sums to 1
  Vec context;
};

// Bilinear (general) score scaled by 1/sqrt(key width), softmax weights,
// weighted value sum. Keys double as values.
AttentionResult attention(const Vec& query, const std::vector<Vec>& keys,
                          const Mat& score_w);

struct ForwardTrace;  // backprop caches, defined in the implementation

struct ForwardResult {
  // probabilities [scenario][stage], each of width `items`
  std::vector<std::vector<Vec>> probs;
  std::shared_ptr<ForwardTrace> trace;
};

// Runs encoder (+ NEDA averaging when `tree` is given), then the
// attention decoder over stages. The decoder attends only to averaged
// states of stages <= t, so predictions cannot depend on information not
// yet revealed. `teacher` supplies ground-truth previous decisions during
// training; without it the model feeds back its own thresholded
// predictions (threshold 0.5).
ForwardResult forward(const SeqModelParams& p,
                      const std::vector<std::vector<Vec>>& features,
                      const ScenarioTree* tree = nullptr,
                      const std::vector<std::vector<Vec>>* teacher = nullptr,
                      bool want_trace = false);

struct TrainingSample {
  std::vector<std::vector<Vec>> features;  // [scenario][stage] (F)
  std::vector<std::vector<Vec>> targets;   // [scenario][stage] (d), node-consistent
  ScenarioTree tree;                       // chain for deterministic samples
};

// Mean binary cross-entropy over (stage, bundle representative, item);
// log arguments clamped at 1e-12.
double loss(const ForwardResult& fwd,
            const std::vector<std::vector<Vec>>& targets,
            const std::vector<std::vector<ScenarioBundle>>& bundles_by_stage);

// Analytic gradients for every parameter tensor via backpropagation
// through time (the averaging step distributes 1/|bundle| to each member).
SeqModelParams backward(const SeqModelParams& p, const ForwardResult& fwd,
                        const std::vector<std::vector<Vec>>& targets,
                        const std::vector<std::vector<ScenarioBundle>>& bundles_by_stage);

std::vector<std::vector<ScenarioBundle>> bundles_for(const ScenarioTree& tree);

struct TrainConfig {
  int epochs = 200;
  int hidden = 32;
  double learning_rate = 1e-3;
  std::uint64_t seed = 1;
};

// Adam over full-instance batches, deterministic for a fixed seed.
// Throws std::runtime_error with a diagnostic if the loss goes non-finite.
SeqModelParams train(const std::vector<TrainingSample>& dataset,
                     const TrainConfig& config,
                     std::vector<double>* loss_history = nullptr);

// Checkpoint: line-delimited JSON of named tensors with shape headers and
// 17-digit decimals; carries a version field.
void save_model(const SeqModelParams& p, std::ostream& out);
SeqModelParams load_model(std::istream& in);

}  // namespace scenopt
