#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

namespace cmgec {

enum class Ablation { full, mg, g, m_only, cgg, pgs };

// CLI spellings: full, mg, g, m, cgg, pgs.
std::string to_string(Ablation a);
Ablation parse_ablation(const std::string& s);

struct TrainConfig {
  std::size_t m = 10;
  double lambda1 = 0.01;
  double lambda2 = 0.001;
  std::size_t k_g = 10;
  std::size_t k_m = 3;
  std::size_t epochs_gfn = 200;
  std::size_t epochs_mgae = 400;
  std::size_t q_refresh = 5;
  double lr = 1e-3;
  double lr_gfn = 1e-2;
  std::size_t gfn_warmup = 50;
  std::uint64_t seed = 0;
  std::size_t h1 = 256;
  std::size_t h2 = 64;
  Ablation ablation = Ablation::full;
  bool joint_mode = false;

  std::size_t runs = 10;
  std::optional<int> clusters;  // falls back to the labels, then the dataset manifest
  std::size_t gfn_depth = 2;
  std::size_t kmeans_restarts = 20;
  std::size_t kmeans_max_iter = 300;
  bool mim_alternating = false;  // discriminator step then encoder step each epoch
  bool select_by_labels = false;  // informative view by ACC instead of normalized cut
  bool minmax_scale = true;
  // k-NN distance for feature views: one of euclidean/cosine for all views, or
  // a comma-separated list with one entry per view.
  std::string distance = "euclidean";

  // Throws ConfigError naming the offending field.
  void validate() const;
  // Sets a field from its textual value; key is the field name.
  void set(const std::string& key, const std::string& value);
};

nlohmann::json to_json(const TrainConfig& cfg);
TrainConfig config_from_json(const nlohmann::json& j);

}  // namespace cmgec
