#pragma once

// Shared test utilities. Random models are deterministic under a fixed seed
// so frozen expectations stay valid.

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "msl/kripke.hpp"

namespace msl::testing {

inline std::shared_ptr<KripkeModel> make_random_model(
    std::mt19937& rng, int n_rel, int max_worlds,
    const std::vector<std::string>& vars, const std::string& id = "rnd") {
  auto m = std::make_shared<KripkeModel>();
  m->id = id;
  m->n = n_rel;
  std::uniform_int_distribution<int> world_count(1, max_worlds);
  int k = world_count(rng);
  for (int w = 0; w < k; ++w) m->add_world("w" + std::to_string(w));
  m->ensure_relations();
  std::uniform_int_distribution<int> coin(0, 2);  // edge prob 1/3
  std::uniform_int_distribution<int> flip(0, 1);
  for (int j = 1; j <= n_rel; ++j)
    for (int u = 0; u < k; ++u)
      for (int v = 0; v < k; ++v)
        if (coin(rng) == 0) m->add_edge(j, u, v);
  for (const auto& p : vars)
    for (int w = 0; w < k; ++w)
      if (flip(rng) == 1) m->set_true(p, w);
  m->points = {0};
  return m;
}

}  // namespace msl::testing
