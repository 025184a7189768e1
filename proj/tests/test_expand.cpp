#include <doctest.h>

#include "scenopt/expand.hpp"

using namespace scenopt;

namespace {

SeqModelParams model_for(const StochasticInstance& inst, int items, int hidden,
                         std::uint64_t seed) {
  return init_params(feature_width(inst.kind, items), items, hidden, seed);
}

}  // namespace

TEST_CASE("full-subset expansion reproduces forward exactly") {
  const StochasticInstance inst =
      make_stochastic(generate_mclsp(41, 3, 4), {2, 2, 2}, 41);
  const SeqModelParams model = model_for(inst, 3, 6, 5);

  const auto direct = expand_horizon(model, inst);
  const SubsetSchedule schedule{{0, 1, 2}};
  const ExpansionResult ex = itemwise_expand(model, inst, 0, 1, &schedule);
  CHECK(ex.subsets_used == 1);
  REQUIRE(ex.probs.size() == direct.size());
  for (std::size_t s = 0; s < direct.size(); ++s)
    for (std::size_t t = 0; t < direct[s].size(); ++t)
      for (int j = 0; j < 3; ++j)
        CHECK(ex.probs[s][t][j] == direct[s][t][j]);  // bitwise
}

TEST_CASE("hand-traced subset accumulation with mean aggregation") {
  const StochasticInstance inst =
      make_stochastic(generate_msmk(43, 3, 2), {2}, 43);
  const SeqModelParams model = model_for(inst, 2, 5, 9);

  const SubsetSchedule schedule{{0, 1}, {0, 2}};
  const ExpansionResult ex = itemwise_expand(model, inst, 0, 1, &schedule);
  CHECK(ex.subsets_used == 2);

  // recompute both restricted predictions directly
  auto probs_for = [&](const std::vector<int>& subset) {
    return expand_horizon(model, restrict_to_subset(inst, subset));
  };
  const auto p01 = probs_for({0, 1});
  const auto p02 = probs_for({0, 2});
  for (std::size_t s = 0; s < ex.probs.size(); ++s)
    for (std::size_t t = 0; t < ex.probs[s].size(); ++t) {
      // item 0 appeared twice, items 1 and 2 once each
      CHECK(ex.probs[s][t][0] ==
            doctest::Approx((p01[s][t][0] + p02[s][t][0]) / 2.0).epsilon(1e-15));
      CHECK(ex.probs[s][t][1] == p01[s][t][1]);
      CHECK(ex.probs[s][t][2] == p02[s][t][1]);
    }
}

TEST_CASE("sampler covers every item past the threshold") {
  const StochasticInstance inst =
      make_stochastic(generate_mclsp(47, 5, 3), {2, 2}, 47);
  const SeqModelParams model = model_for(inst, 2, 4, 3);
  const int delta = 2;
  const ExpansionResult ex = itemwise_expand(model, inst, delta, 123);
  CHECK(ex.subsets_used >= (5 * (delta + 1) + 1) / 2);
  for (std::size_t s = 0; s < ex.probs.size(); ++s)
    for (const auto& v : ex.probs[s])
      for (int j = 0; j < 5; ++j) {
        CHECK(v[j] > 0.0);
        CHECK(v[j] < 1.0);
      }
}

TEST_CASE("expansion is deterministic in the sampler seed") {
  const StochasticInstance inst =
      make_stochastic(generate_mclsp(53, 4, 3), {2, 2}, 53);
  const SeqModelParams model = model_for(inst, 2, 4, 3);
  const ExpansionResult a = itemwise_expand(model, inst, 1, 5);
  const ExpansionResult b = itemwise_expand(model, inst, 1, 5);
  CHECK(a.subsets_used == b.subsets_used);
  for (std::size_t s = 0; s < a.probs.size(); ++s)
    for (std::size_t t = 0; t < a.probs[s].size(); ++t)
      for (int j = 0; j < 4; ++j) CHECK(a.probs[s][t][j] == b.probs[s][t][j]);
}

TEST_CASE("horizon expansion runs past the training length") {
  // a model is horizon-agnostic: the same parameters apply stage by stage
  const MclspInstance longer = generate_mclsp(59, 2, 12);
  StochasticInstance inst;
  inst.kind = InstanceKind::Mclsp;
  inst.mclsp = longer;
  inst.tree = chain_tree(12, 2);
  const SeqModelParams model = model_for(inst, 2, 4, 7);
  const auto probs = expand_horizon(model, inst);
  REQUIRE(probs.size() == 1);
  CHECK(probs[0].size() == 12);
}

TEST_CASE("expansion input validation") {
  const StochasticInstance inst =
      make_stochastic(generate_mclsp(61, 3, 3), {2, 2}, 61);
  const SeqModelParams model = model_for(inst, 2, 4, 1);
  CHECK_THROWS_AS(itemwise_expand(model, inst, -1, 1), std::invalid_argument);

  const SeqModelParams too_wide = model_for(inst, 4, 4, 1);
  CHECK_THROWS_AS(itemwise_expand(too_wide, inst, 0, 1), std::invalid_argument);

  // a schedule that never covers item 2 runs out
  const SubsetSchedule bad{{0, 1}};
  CHECK_THROWS_AS(itemwise_expand(model, inst, 0, 1, &bad), std::runtime_error);
}
