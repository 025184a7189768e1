#include "scenopt/seqmodel.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "scenopt/jsonio.hpp"
#include "scenopt/rng.hpp"

namespace scenopt {

namespace {

Vec sigmoid(const Vec& a) {
  return a.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

struct CellCache {
  Vec x, h_prev, c_prev;
  Vec f, i, g, o, c, tanhc, h;
};

CellCache cell_forward(const Vec& x, const Vec& h_prev, const Vec& c_prev,
                       const LstmWeights& w) {
  CellCache cc;
  cc.x = x;
  cc.h_prev = h_prev;
  cc.c_prev = c_prev;
  cc.f = sigmoid(w.Wf * x + w.Uf * h_prev + w.bf);
  cc.i = sigmoid(w.Wi * x + w.Ui * h_prev + w.bi);
  cc.g = (w.Wc * x + w.Uc * h_prev + w.bc).array().tanh();
  cc.o = sigmoid(w.Wo * x + w.Uo * h_prev + w.bo);
  cc.c = cc.f.cwiseProduct(c_prev) + cc.i.cwiseProduct(cc.g);
  cc.tanhc = cc.c.array().tanh();
  cc.h = cc.o.cwiseProduct(cc.tanhc);
  return cc;
}

void cell_backward(const LstmWeights& w, const CellCache& cc, const Vec& dh,
                   const Vec& dc_in, LstmWeights& gw, Vec* dx, Vec& dh_prev,
                   Vec& dc_prev) {
  const Vec d_o = dh.cwiseProduct(cc.tanhc);
  const Vec dc =
      dc_in + dh.cwiseProduct(cc.o).cwiseProduct(
                  (1.0 - cc.tanhc.array().square()).matrix());
  const Vec d_f = dc.cwiseProduct(cc.c_prev);
  const Vec d_i = dc.cwiseProduct(cc.g);
  const Vec d_g = dc.cwiseProduct(cc.i);
  dc_prev = dc.cwiseProduct(cc.f);

  const Vec a_f = d_f.cwiseProduct(cc.f).cwiseProduct((1.0 - cc.f.array()).matrix());
  const Vec a_i = d_i.cwiseProduct(cc.i).cwiseProduct((1.0 - cc.i.array()).matrix());
  const Vec a_g = d_g.cwiseProduct((1.0 - cc.g.array().square()).matrix());
  const Vec a_o = d_o.cwiseProduct(cc.o).cwiseProduct((1.0 - cc.o.array()).matrix());

  gw.Wf += a_f * cc.x.transpose();
  gw.Uf += a_f * cc.h_prev.transpose();
  gw.bf += a_f;
  gw.Wi += a_i * cc.x.transpose();
  gw.Ui += a_i * cc.h_prev.transpose();
  gw.bi += a_i;
  gw.Wc += a_g * cc.x.transpose();
  gw.Uc += a_g * cc.h_prev.transpose();
  gw.bc += a_g;
  gw.Wo += a_o * cc.x.transpose();
  gw.Uo += a_o * cc.h_prev.transpose();
  gw.bo += a_o;

  if (dx)
    *dx = w.Wf.transpose() * a_f + w.Wi.transpose() * a_i +
          w.Wc.transpose() * a_g + w.Wo.transpose() * a_o;
  dh_prev = w.Uf.transpose() * a_f + w.Ui.transpose() * a_i +
            w.Uc.transpose() * a_g + w.Uo.transpose() * a_o;
}

LstmWeights make_lstm(int input, int hidden) {
  LstmWeights w;
  w.Wf = w.Wi = w.Wc = w.Wo = Mat::Zero(hidden, input);
  w.Uf = w.Ui = w.Uc = w.Uo = Mat::Zero(hidden, hidden);
  w.bf = w.bi = w.bc = w.bo = Vec::Zero(hidden);
  return w;
}

SeqModelParams zeros_like(const SeqModelParams& p) {
  SeqModelParams g;
  g.input_width = p.input_width;
  g.items = p.items;
  g.hidden = p.hidden;
  g.enc_fwd = make_lstm(p.input_width, p.hidden);
  g.enc_bwd = make_lstm(p.input_width, p.hidden);
  g.dec = make_lstm(p.input_width + p.items, p.hidden);
  g.attn = Mat::Zero(p.hidden, 2 * p.hidden);
  g.out_w = Mat::Zero(p.items, 3 * p.hidden);
  g.out_b = Vec::Zero(p.items);
  return g;
}

void visit_lstm(const std::string& prefix, LstmWeights& w,
                const std::function<void(const std::string&, double*, int, int)>& fn) {
  auto mat = [&](const char* n, Mat& m) {
    fn(prefix + n, m.data(), static_cast<int>(m.rows()),
       static_cast<int>(m.cols()));
  };
  auto vec = [&](const char* n, Vec& v) {
    fn(prefix + n, v.data(), static_cast<int>(v.size()), 1);
  };
  mat("Wf", w.Wf); mat("Uf", w.Uf); vec("bf", w.bf);
  mat("Wi", w.Wi); mat("Ui", w.Ui); vec("bi", w.bi);
  mat("Wc", w.Wc); mat("Uc", w.Uc); vec("bc", w.bc);
  mat("Wo", w.Wo); mat("Uo", w.Uo); vec("bo", w.bo);
}

}  // namespace

void visit_tensors(SeqModelParams& p,
                   const std::function<void(const std::string&, double*, int,
                                            int)>& fn) {
  visit_lstm("enc_fwd.", p.enc_fwd, fn);
  visit_lstm("enc_bwd.", p.enc_bwd, fn);
  visit_lstm("dec.", p.dec, fn);
  fn("attn", p.attn.data(), static_cast<int>(p.attn.rows()),
     static_cast<int>(p.attn.cols()));
  fn("out_w", p.out_w.data(), static_cast<int>(p.out_w.rows()),
     static_cast<int>(p.out_w.cols()));
  fn("out_b", p.out_b.data(), static_cast<int>(p.out_b.size()), 1);
}

SeqModelParams init_params(int input_width, int items, int hidden,
                           std::uint64_t seed) {
  if (input_width < 1 || items < 1 || hidden < 1)
    throw std::invalid_argument("init_params: dimensions must be positive");
  SeqModelParams p = zeros_like([&] {
    SeqModelParams shape;
    shape.input_width = input_width;
    shape.items = items;
    shape.hidden = hidden;
    return shape;
  }());
  Rng rng(Rng::mix(seed, 0x7365716dULL));
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  visit_tensors(p, [&](const std::string&, double* data, int rows, int cols) {
    for (int k = 0; k < rows * cols; ++k)
      data[k] = rng.uniform(-bound, bound);
  });
  p.enc_fwd.bf.array() += 1.0;
  p.enc_bwd.bf.array() += 1.0;
  p.dec.bf.array() += 1.0;
  return p;
}

LstmCellState lstm_cell(const Vec& x, const Vec& h_prev, const Vec& c_prev,
                        const LstmWeights& w) {
  const CellCache cc = cell_forward(x, h_prev, c_prev, w);
  return {cc.h, cc.c};
}

std::vector<Vec> bilstm_encode(const SeqModelParams& p,
                               const std::vector<Vec>& sequence) {
  const int T = static_cast<int>(sequence.size());
  const int H = p.hidden;
  std::vector<Vec> fwd(T), bwd(T);
  Vec h = Vec::Zero(H), c = Vec::Zero(H);
  for (int t = 0; t < T; ++t) {
    const auto s = lstm_cell(sequence[t], h, c, p.enc_fwd);
    h = s.h;
    c = s.c;
    fwd[t] = h;
  }
  h = Vec::Zero(H);
  c = Vec::Zero(H);
  for (int t = T - 1; t >= 0; --t) {
    const auto s = lstm_cell(sequence[t], h, c, p.enc_bwd);
    h = s.h;
    c = s.c;
    bwd[t] = h;
  }
  std::vector<Vec> out(T);
  for (int t = 0; t < T; ++t) {
    out[t] = Vec(2 * H);
    out[t] << fwd[t], bwd[t];
  }
  return out;
}

std::vector<std::vector<ScenarioBundle>> bundles_for(const ScenarioTree& tree) {
  std::vector<std::vector<ScenarioBundle>> out(tree.horizon);
  for (int t = 1; t <= tree.horizon; ++t)
    out[t - 1] = bundle_partition(tree, t);
  return out;
}

std::vector<std::vector<Vec>> neda_average(
    const std::vector<std::vector<Vec>>& states,
    const std::vector<std::vector<ScenarioBundle>>& bundles_by_stage) {
  const int S = static_cast<int>(states.size());
  const int T = static_cast<int>(bundles_by_stage.size());
  std::vector<std::vector<Vec>> out(S, std::vector<Vec>(T));
  for (int t = 0; t < T; ++t) {
    for (const auto& bundle : bundles_by_stage[t]) {
      Vec avg = Vec::Zero(states[0][t].size());
      for (int s : bundle.members) avg += states[s][t];
      avg /= static_cast<double>(bundle.members.size());
      for (int s : bundle.members) out[s][t] = avg;
    }
  }
  return out;
}

AttentionResult attention(const Vec& query, const std::vector<Vec>& keys,
                          const Mat& score_w) {
  if (keys.empty()) throw std::invalid_argument("attention: no keys");
  const int n = static_cast<int>(keys.size());
  const double scale = 1.0 / std::sqrt(static_cast<double>(keys[0].size()));
  Vec scores(n);
  for (int k = 0; k < n; ++k)
    scores[k] = scale * query.dot(score_w * keys[k]);
  const double mx = scores.maxCoeff();
  Vec w = (scores.array() - mx).exp();
  w /= w.sum();
  Vec context = Vec::Zero(keys[0].size());
  for (int k = 0; k < n; ++k) context += w[k] * keys[k];
  return {w, context};
}

struct StageAttnCache {
  Vec weights;
  Vec context;
};

struct ForwardTrace {
  int S = 0, T = 0;
  std::vector<std::vector<CellCache>> enc_fwd, enc_bwd;  // [s][t]
  std::vector<std::vector<Vec>> enc_states;              // [s][t] (2H)
  std::vector<std::vector<Vec>> averaged;                // [s][t] (2H)
  std::vector<std::vector<CellCache>> dec;               // [s][t]
  std::vector<std::vector<StageAttnCache>> attn;         // [s][t]
  bool stochastic = false;
};

ForwardResult forward(const SeqModelParams& p,
                      const std::vector<std::vector<Vec>>& features,
                      const ScenarioTree* tree,
                      const std::vector<std::vector<Vec>>* teacher,
                      bool want_trace) {
  const int S = static_cast<int>(features.size());
  if (S == 0) throw std::invalid_argument("forward: no scenarios");
  const int T = static_cast<int>(features[0].size());
  const int H = p.hidden;
  for (const auto& seq : features)
    for (const auto& f : seq)
      if (static_cast<int>(f.size()) != p.input_width)
        throw std::invalid_argument("forward: feature width mismatch");
  if (tree && tree->num_scenarios() != S)
    throw std::invalid_argument("forward: scenario count mismatch");

  auto trace = std::make_shared<ForwardTrace>();
  trace->S = S;
  trace->T = T;
  trace->stochastic = tree != nullptr;
  trace->enc_fwd.assign(S, {});
  trace->enc_bwd.assign(S, {});
  trace->enc_states.assign(S, std::vector<Vec>(T));
  trace->dec.assign(S, {});
  trace->attn.assign(S, std::vector<StageAttnCache>(T));

  // encoder
  for (int s = 0; s < S; ++s) {
    Vec h = Vec::Zero(H), c = Vec::Zero(H);
    trace->enc_fwd[s].resize(T);
    for (int t = 0; t < T; ++t) {
      trace->enc_fwd[s][t] = cell_forward(features[s][t], h, c, p.enc_fwd);
      h = trace->enc_fwd[s][t].h;
      c = trace->enc_fwd[s][t].c;
    }
    h = Vec::Zero(H);
    c = Vec::Zero(H);
    trace->enc_bwd[s].resize(T);
    for (int t = T - 1; t >= 0; --t) {
      trace->enc_bwd[s][t] = cell_forward(features[s][t], h, c, p.enc_bwd);
      h = trace->enc_bwd[s][t].h;
      c = trace->enc_bwd[s][t].c;
    }
    for (int t = 0; t < T; ++t) {
      trace->enc_states[s][t] = Vec(2 * H);
      trace->enc_states[s][t] << trace->enc_fwd[s][t].h, trace->enc_bwd[s][t].h;
    }
  }

  if (tree) {
    trace->averaged = neda_average(trace->enc_states, bundles_for(*tree));
  } else {
    trace->averaged = trace->enc_states;
  }

  // decoder with causal attention over averaged states
  ForwardResult result;
  result.probs.assign(S, std::vector<Vec>(T));
  const double scale = 1.0 / std::sqrt(2.0 * H);
  for (int s = 0; s < S; ++s) {
    Vec h = Vec::Zero(H), c = Vec::Zero(H);
    Vec xprev = Vec::Zero(p.items);
    trace->dec[s].resize(T);
    for (int t = 0; t < T; ++t) {
      if (t > 0) {
        if (teacher)
          xprev = (*teacher)[s][t - 1];
        else
          xprev = result.probs[s][t - 1].unaryExpr(
              [](double v) { return v >= 0.5 ? 1.0 : 0.0; });
      }
      Vec u(p.input_width + p.items);
      u << features[s][t], xprev;
      trace->dec[s][t] = cell_forward(u, h, c, p.dec);
      h = trace->dec[s][t].h;
      c = trace->dec[s][t].c;

      Vec scores(t + 1);
      for (int k = 0; k <= t; ++k)
        scores[k] = scale * h.dot(p.attn * trace->averaged[s][k]);
      const double mx = scores.maxCoeff();
      Vec w = (scores.array() - mx).exp();
      w /= w.sum();
      Vec context = Vec::Zero(2 * H);
      for (int k = 0; k <= t; ++k) context += w[k] * trace->averaged[s][k];
      trace->attn[s][t] = {w, context};

      Vec hc(3 * H);
      hc << h, context;
      result.probs[s][t] = sigmoid(p.out_w * hc + p.out_b);
    }
  }
  if (want_trace) result.trace = trace;
  return result;
}

namespace {

constexpr double kLogClamp = 1e-12;

double bce(double prob, double target) {
  return -(target * std::log(std::max(prob, kLogClamp)) +
           (1.0 - target) * std::log(std::max(1.0 - prob, kLogClamp)));
}

}  // namespace

double loss(const ForwardResult& fwd,
            const std::vector<std::vector<Vec>>& targets,
            const std::vector<std::vector<ScenarioBundle>>& bundles_by_stage) {
  const int T = static_cast<int>(bundles_by_stage.size());
  double total = 0.0;
  long count = 0;
  for (int t = 0; t < T; ++t)
    for (const auto& bundle : bundles_by_stage[t]) {
      const int s = bundle.representative;
      const Vec& p = fwd.probs[s][t];
      const Vec& y = targets[s][t];
      for (int j = 0; j < p.size(); ++j) {
        total += bce(p[j], y[j]);
        ++count;
      }
    }
  return total / static_cast<double>(count);
}

SeqModelParams backward(
    const SeqModelParams& p, const ForwardResult& fwd,
    const std::vector<std::vector<Vec>>& targets,
    const std::vector<std::vector<ScenarioBundle>>& bundles_by_stage) {
  if (!fwd.trace)
    throw std::invalid_argument("backward: forward was run without a trace");
  const ForwardTrace& tr = *fwd.trace;
  const int S = tr.S, T = tr.T, H = p.hidden;
  SeqModelParams g = zeros_like(p);

  long count = 0;
  for (int t = 0; t < T; ++t)
    count += static_cast<long>(bundles_by_stage[t].size()) * p.items;

  // loss gradient lands on bundle representatives only
  std::vector<std::vector<Vec>> dlogits(
      S, std::vector<Vec>(T, Vec::Zero(p.items)));
  for (int t = 0; t < T; ++t)
    for (const auto& bundle : bundles_by_stage[t]) {
      const int s = bundle.representative;
      dlogits[s][t] =
          (fwd.probs[s][t] - targets[s][t]) / static_cast<double>(count);
    }

  const double scale = 1.0 / std::sqrt(2.0 * H);
  std::vector<std::vector<Vec>> d_avg(S,
                                      std::vector<Vec>(T, Vec::Zero(2 * H)));

  // decoder BPTT per scenario
  for (int s = 0; s < S; ++s) {
    Vec dh_rec = Vec::Zero(H), dc_rec = Vec::Zero(H);
    for (int t = T - 1; t >= 0; --t) {
      Vec dh = dh_rec;
      Vec dc = dc_rec;
      const Vec& dlog = dlogits[s][t];
      const Vec& hdec = tr.dec[s][t].h;
      const Vec& ctx = tr.attn[s][t].context;
      Vec hc(3 * H);
      hc << hdec, ctx;
      g.out_w += dlog * hc.transpose();
      g.out_b += dlog;
      const Vec dhc = p.out_w.transpose() * dlog;
      dh += dhc.head(H);
      const Vec dctx = dhc.tail(2 * H);

      // attention backward over keys 0..t
      const Vec& w = tr.attn[s][t].weights;
      Vec dalpha(t + 1);
      for (int k = 0; k <= t; ++k) {
        dalpha[k] = dctx.dot(tr.averaged[s][k]);
        d_avg[s][k] += w[k] * dctx;
      }
      const double wdot = w.dot(dalpha);
      for (int k = 0; k <= t; ++k) {
        const double dscore = w[k] * (dalpha[k] - wdot) * scale;
        if (dscore == 0.0) continue;
        dh += dscore * (p.attn * tr.averaged[s][k]);
        g.attn += dscore * (hdec * tr.averaged[s][k].transpose());
        d_avg[s][k] += dscore * (p.attn.transpose() * hdec);
      }

      Vec dh_prev, dc_prev;
      cell_backward(p.dec, tr.dec[s][t], dh, dc, g.dec, nullptr, dh_prev,
                    dc_prev);
      dh_rec = dh_prev;
      dc_rec = dc_prev;
    }
  }

  // averaging backward: each member receives 1/|bundle| of the bundle sum
  std::vector<std::vector<Vec>> d_enc(S, std::vector<Vec>(T, Vec::Zero(2 * H)));
  if (tr.stochastic) {
    for (int t = 0; t < T; ++t)
      for (const auto& bundle : bundles_by_stage[t]) {
        Vec sum = Vec::Zero(2 * H);
        for (int s : bundle.members) sum += d_avg[s][t];
        sum /= static_cast<double>(bundle.members.size());
        for (int s : bundle.members) d_enc[s][t] = sum;
      }
  } else {
    d_enc = d_avg;
  }

  // encoder BPTT per scenario, both directions
  for (int s = 0; s < S; ++s) {
    Vec dh_rec = Vec::Zero(H), dc_rec = Vec::Zero(H);
    for (int t = T - 1; t >= 0; --t) {
      Vec dh = dh_rec + d_enc[s][t].head(H);
      Vec dh_prev, dc_prev;
      cell_backward(p.enc_fwd, tr.enc_fwd[s][t], dh, dc_rec, g.enc_fwd,
                    nullptr, dh_prev, dc_prev);
      dh_rec = dh_prev;
      dc_rec = dc_prev;
    }
    dh_rec = Vec::Zero(H);
    dc_rec = Vec::Zero(H);
    for (int t = 0; t < T; ++t) {
      Vec dh = dh_rec + d_enc[s][t].tail(H);
      Vec dh_prev, dc_prev;
      cell_backward(p.enc_bwd, tr.enc_bwd[s][t], dh, dc_rec, g.enc_bwd,
                    nullptr, dh_prev, dc_prev);
      dh_rec = dh_prev;
      dc_rec = dc_prev;
    }
  }
  return g;
}

SeqModelParams train(const std::vector<TrainingSample>& dataset,
                     const TrainConfig& config,
                     std::vector<double>* loss_history) {
  if (dataset.empty()) throw std::invalid_argument("train: empty dataset");
  const int F = static_cast<int>(dataset[0].features[0][0].size());
  const int d = static_cast<int>(dataset[0].targets[0][0].size());
  SeqModelParams p = init_params(F, d, config.hidden, config.seed);

  // precompute bundle partitions
  std::vector<std::vector<std::vector<ScenarioBundle>>> bundles;
  bundles.reserve(dataset.size());
  std::vector<bool> stochastic;
  for (const auto& sample : dataset) {
    bundles.push_back(bundles_for(sample.tree));
    stochastic.push_back(sample.tree.num_scenarios() > 1);
  }

  // Adam state, flat over the visit order
  std::vector<double*> param_ptrs;
  std::vector<int> sizes;
  visit_tensors(p, [&](const std::string&, double* data, int rows, int cols) {
    param_ptrs.push_back(data);
    sizes.push_back(rows * cols);
  });
  std::vector<std::vector<double>> m(param_ptrs.size()), v(param_ptrs.size());
  for (std::size_t k = 0; k < param_ptrs.size(); ++k) {
    m[k].assign(sizes[k], 0.0);
    v[k].assign(sizes[k], 0.0);
  }
  const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  long step = 0;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      const auto& sample = dataset[i];
      const ScenarioTree* tree = stochastic[i] ? &sample.tree : nullptr;
      ForwardResult fwd =
          forward(p, sample.features, tree, &sample.targets, true);
      const double l = loss(fwd, sample.targets, bundles[i]);
      if (!std::isfinite(l)) {
        std::ostringstream msg;
        msg << "train: non-finite loss at epoch " << epoch << ", sample " << i;
        throw std::runtime_error(msg.str());
      }
      if (loss_history) loss_history->push_back(l);
      SeqModelParams grad = backward(p, fwd, sample.targets, bundles[i]);

      std::vector<const double*> grad_ptrs;
      visit_tensors(grad,
                    [&](const std::string&, double* data, int, int) {
                      grad_ptrs.push_back(data);
                    });
      ++step;
      const double corr =
          config.learning_rate *
          std::sqrt(1.0 - std::pow(b2, static_cast<double>(step))) /
          (1.0 - std::pow(b1, static_cast<double>(step)));
      for (std::size_t k = 0; k < param_ptrs.size(); ++k)
        for (int q = 0; q < sizes[k]; ++q) {
          const double gq = grad_ptrs[k][q];
          m[k][q] = b1 * m[k][q] + (1.0 - b1) * gq;
          v[k][q] = b2 * v[k][q] + (1.0 - b2) * gq * gq;
          param_ptrs[k][q] -= corr * m[k][q] / (std::sqrt(v[k][q]) + eps);
        }
    }
  }
  return p;
}

void save_model(const SeqModelParams& params, std::ostream& out) {
  out << "{\"record\":\"model\",\"version\":1,\"input_width\":"
      << params.input_width << ",\"items\":" << params.items
      << ",\"hidden\":" << params.hidden << "}\n";
  SeqModelParams copy = params;
  visit_tensors(copy, [&](const std::string& name, double* data, int rows,
                          int cols) {
    out << "{\"name\":\"" << name << "\",\"rows\":" << rows
        << ",\"cols\":" << cols << ",\"data\":[";
    for (int k = 0; k < rows * cols; ++k) {
      if (k) out << ",";
      out << fmt17(data[k]);
    }
    out << "]}\n";
  });
}

SeqModelParams load_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("load_model: empty stream");
  auto header = nlohmann::json::parse(line);
  if (header.at("record").get<std::string>() != "model" ||
      header.at("version").get<int>() != 1)
    throw std::invalid_argument("load_model: unsupported checkpoint");
  SeqModelParams shape;
  shape.input_width = header.at("input_width").get<int>();
  shape.items = header.at("items").get<int>();
  shape.hidden = header.at("hidden").get<int>();
  SeqModelParams p = zeros_like(shape);
  visit_tensors(p, [&](const std::string& name, double* data, int rows,
                       int cols) {
    if (!std::getline(in, line))
      throw std::invalid_argument("load_model: truncated checkpoint");
    auto j = nlohmann::json::parse(line);
    if (j.at("name").get<std::string>() != name ||
        j.at("rows").get<int>() != rows || j.at("cols").get<int>() != cols)
      throw std::invalid_argument("load_model: tensor mismatch at " + name);
    const auto values = j.at("data").get<std::vector<double>>();
    if (static_cast<int>(values.size()) != rows * cols)
      throw std::invalid_argument("load_model: bad tensor length at " + name);
    std::copy(values.begin(), values.end(), data);
  });
  return p;
}

}  // namespace scenopt
