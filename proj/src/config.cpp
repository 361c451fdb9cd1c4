#include "cmgec/config.hpp"

#include <charconv>
#include <cmath>

#include "cmgec/errors.hpp"

namespace cmgec {

using nlohmann::json;

namespace {

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(key + ": cannot parse '" + text + "'");
  }
  return value;
}

bool parse_flag(const std::string& key, const std::string& text) {
  if (text == "1" || text == "true" || text == "on") return true;
  if (text == "0" || text == "false" || text == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

void positive(std::size_t value, const char* name) {
  if (value == 0) throw ConfigError(std::string(name) + " must be positive");
}

void nonnegative(double value, const char* name) {
  if (!(value >= 0.0) || !std::isfinite(value))
    throw ConfigError(std::string(name) + " must be a finite nonnegative number");
}

}  // namespace

std::string to_string(Ablation a) {
  switch (a) {
    case Ablation::full: return "full";
    case Ablation::mg: return "mg";
    case Ablation::g: return "g";
    case Ablation::m_only: return "m";
    case Ablation::cgg: return "cgg";
    case Ablation::pgs: return "pgs";
  }
  return "full";
}

Ablation parse_ablation(const std::string& s) {
  if (s == "full") return Ablation::full;
  if (s == "mg") return Ablation::mg;
  if (s == "g") return Ablation::g;
  if (s == "m" || s == "m_only") return Ablation::m_only;
  if (s == "cgg") return Ablation::cgg;
  if (s == "pgs") return Ablation::pgs;
  throw ConfigError("unknown ablation '" + s + "' (expected full, mg, g, m, cgg or pgs)");
}

void TrainConfig::validate() const {
  positive(m, "m");
  positive(k_g, "k_g");
  positive(k_m, "k_m");
  positive(epochs_gfn, "epochs_gfn");
  positive(epochs_mgae, "epochs_mgae");
  positive(q_refresh, "q_refresh");
  positive(h1, "h1");
  positive(h2, "h2");
  positive(runs, "runs");
  positive(gfn_depth, "gfn_depth");
  positive(kmeans_restarts, "kmeans_restarts");
  positive(kmeans_max_iter, "kmeans_max_iter");
  nonnegative(lambda1, "lambda1");
  nonnegative(lambda2, "lambda2");
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("lr must be a finite positive number");
  if (!(lr_gfn > 0.0) || !std::isfinite(lr_gfn))
    throw ConfigError("lr_gfn must be a finite positive number");
  if (clusters && *clusters < 1) throw ConfigError("clusters must be positive");
}

void TrainConfig::set(const std::string& key, const std::string& value) {
  if (key == "m") m = parse_value<std::size_t>(key, value);
  else if (key == "lambda1") lambda1 = parse_value<double>(key, value);
  else if (key == "lambda2") lambda2 = parse_value<double>(key, value);
  else if (key == "k_g") k_g = parse_value<std::size_t>(key, value);
  else if (key == "k_m") k_m = parse_value<std::size_t>(key, value);
  else if (key == "epochs_gfn") epochs_gfn = parse_value<std::size_t>(key, value);
  else if (key == "epochs_mgae") epochs_mgae = parse_value<std::size_t>(key, value);
  else if (key == "q_refresh") q_refresh = parse_value<std::size_t>(key, value);
  else if (key == "lr") lr = parse_value<double>(key, value);
  else if (key == "lr_gfn") lr_gfn = parse_value<double>(key, value);
  else if (key == "gfn_warmup") gfn_warmup = parse_value<std::size_t>(key, value);
  else if (key == "seed") seed = parse_value<std::uint64_t>(key, value);
  else if (key == "h1") h1 = parse_value<std::size_t>(key, value);
  else if (key == "h2") h2 = parse_value<std::size_t>(key, value);
  else if (key == "ablation") ablation = parse_ablation(value);
  else if (key == "joint_mode") joint_mode = parse_flag(key, value);
  else if (key == "runs") runs = parse_value<std::size_t>(key, value);
  else if (key == "clusters") clusters = parse_value<int>(key, value);
  else if (key == "gfn_depth") gfn_depth = parse_value<std::size_t>(key, value);
  else if (key == "kmeans_restarts") kmeans_restarts = parse_value<std::size_t>(key, value);
  else if (key == "kmeans_max_iter") kmeans_max_iter = parse_value<std::size_t>(key, value);
  else if (key == "mim_alternating") mim_alternating = parse_flag(key, value);
  else if (key == "select_by_labels") select_by_labels = parse_flag(key, value);
  else if (key == "minmax_scale") minmax_scale = parse_flag(key, value);
  else if (key == "distance") distance = value;
  else throw ConfigError("unknown config key '" + key + "'");
}

json to_json(const TrainConfig& cfg) {
  json j;
  j["m"] = cfg.m;
  j["lambda1"] = cfg.lambda1;
  j["lambda2"] = cfg.lambda2;
  j["k_g"] = cfg.k_g;
  j["k_m"] = cfg.k_m;
  j["epochs_gfn"] = cfg.epochs_gfn;
  j["epochs_mgae"] = cfg.epochs_mgae;
  j["q_refresh"] = cfg.q_refresh;
  j["lr"] = cfg.lr;
  j["lr_gfn"] = cfg.lr_gfn;
  j["gfn_warmup"] = cfg.gfn_warmup;
  j["seed"] = cfg.seed;
  j["h1"] = cfg.h1;
  j["h2"] = cfg.h2;
  j["ablation"] = to_string(cfg.ablation);
  j["joint_mode"] = cfg.joint_mode;
  j["runs"] = cfg.runs;
  j["clusters"] = cfg.clusters ? json(*cfg.clusters) : json(nullptr);
  j["gfn_depth"] = cfg.gfn_depth;
  j["kmeans_restarts"] = cfg.kmeans_restarts;
  j["kmeans_max_iter"] = cfg.kmeans_max_iter;
  j["mim_alternating"] = cfg.mim_alternating;
  j["select_by_labels"] = cfg.select_by_labels;
  j["minmax_scale"] = cfg.minmax_scale;
  j["distance"] = cfg.distance;
  return j;
}

TrainConfig config_from_json(const json& j) {
  TrainConfig cfg;
  try {
    cfg.m = j.at("m").get<std::size_t>();
    cfg.lambda1 = j.at("lambda1").get<double>();
    cfg.lambda2 = j.at("lambda2").get<double>();
    cfg.k_g = j.at("k_g").get<std::size_t>();
    cfg.k_m = j.at("k_m").get<std::size_t>();
    cfg.epochs_gfn = j.at("epochs_gfn").get<std::size_t>();
    cfg.epochs_mgae = j.at("epochs_mgae").get<std::size_t>();
    cfg.q_refresh = j.at("q_refresh").get<std::size_t>();
    cfg.lr = j.at("lr").get<double>();
    cfg.lr_gfn = j.at("lr_gfn").get<double>();
    cfg.gfn_warmup = j.at("gfn_warmup").get<std::size_t>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.h1 = j.at("h1").get<std::size_t>();
    cfg.h2 = j.at("h2").get<std::size_t>();
    cfg.ablation = parse_ablation(j.at("ablation").get<std::string>());
    cfg.joint_mode = j.at("joint_mode").get<bool>();
    cfg.runs = j.at("runs").get<std::size_t>();
    if (!j.at("clusters").is_null()) cfg.clusters = j["clusters"].get<int>();
    cfg.gfn_depth = j.at("gfn_depth").get<std::size_t>();
    cfg.kmeans_restarts = j.at("kmeans_restarts").get<std::size_t>();
    cfg.kmeans_max_iter = j.at("kmeans_max_iter").get<std::size_t>();
    cfg.mim_alternating = j.at("mim_alternating").get<bool>();
    cfg.select_by_labels = j.at("select_by_labels").get<bool>();
    cfg.minmax_scale = j.at("minmax_scale").get<bool>();
    cfg.distance = j.at("distance").get<std::string>();
  } catch (const json::exception& err) {
    throw ConfigError(std::string("config: ") + err.what());
  }
  return cfg;
}

}  // namespace cmgec
