#include "cmgec/report.hpp"

#include <cmath>
#include <fstream>

#include "cmgec/errors.hpp"

namespace cmgec {

using nlohmann::json;

namespace {

json metrics_to_json(const ClusterMetrics& m) {
  return {{"acc", m.acc}, {"nmi", m.nmi}, {"ari", m.ari}, {"ami", m.ami}, {"f1", m.f1}};
}

ClusterMetrics metrics_from_json(const json& j) {
  return {j.at("acc").get<double>(), j.at("nmi").get<double>(), j.at("ari").get<double>(),
          j.at("ami").get<double>(), j.at("f1").get<double>()};
}

json optional_metrics(const std::optional<ClusterMetrics>& m) {
  return m ? metrics_to_json(*m) : json(nullptr);
}

std::optional<ClusterMetrics> optional_metrics(const json& j) {
  if (j.is_null()) return std::nullopt;
  return metrics_from_json(j);
}

constexpr double ClusterMetrics::*kFields[] = {&ClusterMetrics::acc, &ClusterMetrics::nmi,
                                               &ClusterMetrics::ari, &ClusterMetrics::ami,
                                               &ClusterMetrics::f1};

}  // namespace

void summarize(MetricsReport& r) {
  std::vector<const ClusterMetrics*> scored;
  for (const SeedRun& run : r.runs)
    if (run.metrics) scored.push_back(&*run.metrics);
  if (scored.empty()) {
    r.mean.reset();
    r.stddev.reset();
    return;
  }
  const double count = static_cast<double>(scored.size());
  ClusterMetrics mean, sd;
  for (auto field : kFields) {
    double sum = 0.0;
    for (const ClusterMetrics* m : scored) sum += m->*field;
    mean.*field = sum / count;
    double sq = 0.0;
    for (const ClusterMetrics* m : scored) sq += (m->*field - mean.*field) * (m->*field - mean.*field);
    sd.*field = std::sqrt(sq / count);
  }
  r.mean = mean;
  r.stddev = sd;
}

json report_to_json(const MetricsReport& r) {
  json runs = json::array();
  for (const SeedRun& run : r.runs) {
    runs.push_back({{"seed", run.seed},
                    {"labels", run.labels},
                    {"metrics", optional_metrics(run.metrics)},
                    {"gfn_loss", run.gfn_loss},
                    {"mgae_loss", run.mgae_loss},
                    {"wall_seconds", run.wall_seconds}});
  }
  return {{"config", to_json(r.config)},
          {"n", r.n},
          {"v", r.v},
          {"clusters", r.clusters},
          {"informative_view", r.informative_view},
          {"runs", runs},
          {"mean", optional_metrics(r.mean)},
          {"stddev", optional_metrics(r.stddev)},
          {"wall_seconds", r.wall_seconds}};
}

MetricsReport report_from_json(const json& j) {
  MetricsReport r;
  try {
    r.config = config_from_json(j.at("config"));
    r.n = j.at("n").get<std::size_t>();
    r.v = j.at("v").get<std::size_t>();
    r.clusters = j.at("clusters").get<int>();
    r.informative_view = j.at("informative_view").get<std::size_t>();
    for (const json& run : j.at("runs")) {
      SeedRun s;
      s.seed = run.at("seed").get<std::uint64_t>();
      s.labels = run.at("labels").get<std::vector<int>>();
      s.metrics = optional_metrics(run.at("metrics"));
      s.gfn_loss = run.at("gfn_loss").get<std::vector<double>>();
      s.mgae_loss = run.at("mgae_loss").get<std::vector<double>>();
      s.wall_seconds = run.at("wall_seconds").get<double>();
      r.runs.push_back(std::move(s));
    }
    r.mean = optional_metrics(j.at("mean"));
    r.stddev = optional_metrics(j.at("stddev"));
    r.wall_seconds = j.at("wall_seconds").get<double>();
  } catch (const json::exception& err) {
    throw DataError(std::string("report: ") + err.what());
  }
  return r;
}

void emit_report(const MetricsReport& r, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << report_to_json(r).dump(2) << '\n';
  if (!out) throw DataError("write failed for " + path.string());
}

MetricsReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return report_from_json(json::parse(in));
  } catch (const json::parse_error& err) {
    throw DataError(path.string() + ": " + err.what());
  }
}

}  // namespace cmgec
