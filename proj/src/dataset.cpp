#include "cmgec/dataset.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "cmgec/errors.hpp"

namespace cmgec {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool skip_line(std::string_view line) { return line.empty() || line.front() == '#'; }

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view field, const fs::path& path, std::size_t line_no) {
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw DataError(path.string() + ":" + std::to_string(line_no) + ": cannot parse '" +
                    std::string(field) + "'");
  }
  return value;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

fs::path resolve(const fs::path& dir, const json& entry, const char* key) {
  return dir / entry.at(key).get<std::string>();
}

}  // namespace

std::string to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::features_only: return "features_only";
    case DatasetKind::features_plus_shared_graph: return "features_plus_shared_graph";
    case DatasetKind::single_features_multi_graph: return "single_features_multi_graph";
  }
  return "features_only";
}

DatasetKind parse_dataset_kind(const std::string& s) {
  if (s == "features_only") return DatasetKind::features_only;
  if (s == "features_plus_shared_graph") return DatasetKind::features_plus_shared_graph;
  if (s == "single_features_multi_graph") return DatasetKind::single_features_multi_graph;
  throw DataError("unknown dataset kind '" + s + "'");
}

void MultiViewDataset::validate() const {
  if (views.empty()) throw DataError("dataset has no views");
  if (n < 2) throw DataError("dataset needs at least two samples");
  for (std::size_t v = 0; v < views.size(); ++v) {
    const ViewData& view = views[v];
    const std::string where = "view " + std::to_string(v);
    if (view.features) {
      if (view.features->rows() != n) {
        throw DataError(where + ": features have " + std::to_string(view.features->rows()) +
                        " rows, expected " + std::to_string(n));
      }
      if (view.features->cols() == 0) throw DataError(where + ": features have no columns");
      if (!all_finite(*view.features)) throw DataError(where + ": non-finite feature values");
    }
    if (view.graph && view.graph->n() != n) {
      throw DataError(where + ": graph has " + std::to_string(view.graph->n()) +
                      " nodes, expected " + std::to_string(n));
    }
    const bool needs_features = true;
    const bool needs_graph = kind != DatasetKind::features_only;
    if (needs_features && !view.features) throw DataError(where + ": missing features");
    if (needs_graph && !view.graph) throw DataError(where + ": missing graph");
    if (kind == DatasetKind::features_only && view.graph) {
      throw DataError(where + ": features_only datasets do not carry graphs");
    }
  }
  if (labels) {
    if (labels->size() != n) {
      throw DataError("labels have " + std::to_string(labels->size()) + " entries, expected " +
                      std::to_string(n));
    }
  }
  if (cluster_count && *cluster_count < 1) throw DataError("cluster_count must be positive");
}

Matrix read_matrix_csv(const fs::path& path) {
  std::ifstream in = open_input(path);
  std::vector<double> data;
  std::size_t cols = 0, rows = 0, line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (skip_line(view)) continue;
    const auto fields = split_fields(view);
    if (rows == 0) cols = fields.size();
    if (fields.size() != cols) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(cols) + " columns, found " + std::to_string(fields.size()));
    }
    for (auto f : fields) data.push_back(parse_number<double>(f, path, line_no));
    ++rows;
  }
  if (rows == 0) throw DataError(path.string() + ": no data rows");
  return Matrix(rows, cols, std::move(data));
}

void write_matrix_csv(const Matrix& m, const fs::path& path) {
  std::ofstream out = open_output(path);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  if (!out) throw DataError("write failed for " + path.string());
}

ViewGraph read_edge_csv(const fs::path& path, std::size_t n) {
  std::ifstream in = open_input(path);
  std::vector<Edge> edges;
  std::size_t line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (skip_line(view)) continue;
    const auto fields = split_fields(view);
    if (fields.size() != 3 && fields.size() != 2) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected 'i,j,weight' edge row");
    }
    Edge e;
    e.row = parse_number<std::size_t>(fields[0], path, line_no);
    e.col = parse_number<std::size_t>(fields[1], path, line_no);
    e.weight = fields.size() == 3 ? parse_number<double>(fields[2], path, line_no) : 1.0;
    if (e.row >= n || e.col >= n) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": node id out of range");
    }
    if (e.row == e.col) continue;  // self loops carry no link information
    edges.push_back(e);
  }
  try {
    return {SparseAdjacency::from_edges(n, std::move(edges)), GraphSource::provided};
  } catch (const ContractError& err) {
    throw DataError(path.string() + ": " + err.what());
  }
}

void write_edge_csv(const ViewGraph& g, const fs::path& path) {
  std::ofstream out = open_output(path);
  for (const Edge& e : g.adjacency.entries())
    if (e.row < e.col) out << e.row << ',' << e.col << ',' << format_double(e.weight) << '\n';
  if (!out) throw DataError("write failed for " + path.string());
}

std::vector<int> read_labels_csv(const fs::path& path) {
  std::ifstream in = open_input(path);
  std::vector<int> labels;
  std::size_t line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (skip_line(view)) continue;
    labels.push_back(parse_number<int>(view, path, line_no));
  }
  return labels;
}

void write_labels_csv(std::span<const int> labels, const fs::path& path) {
  std::ofstream out = open_output(path);
  for (int l : labels) out << l << '\n';
  if (!out) throw DataError("write failed for " + path.string());
}

MultiViewDataset load_dataset(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  json manifest;
  {
    std::ifstream in = open_input(manifest_path);
    try {
      manifest = json::parse(in);
    } catch (const json::exception& err) {
      throw DataError(manifest_path.string() + ": " + err.what());
    }
  }

  MultiViewDataset ds;
  try {
    ds.n = manifest.at("n").get<std::size_t>();
    const std::size_t v = manifest.at("v").get<std::size_t>();
    ds.kind = parse_dataset_kind(manifest.at("kind").get<std::string>());
    if (manifest.contains("cluster_count")) ds.cluster_count = manifest["cluster_count"].get<int>();
    const json& views = manifest.at("views");
    if (!views.is_array() || views.size() != v) {
      throw DataError(manifest_path.string() + ": 'views' must list " + std::to_string(v) +
                      " entries");
    }

    // Identical paths are read once and shared.
    std::map<fs::path, Matrix> feature_cache;
    std::map<fs::path, ViewGraph> graph_cache;
    std::optional<fs::path> shared_features, shared_graph;
    ds.views.resize(v);
    for (std::size_t i = 0; i < v; ++i) {
      const json& entry = views[i];
      if (entry.contains("features_csv")) {
        const fs::path p = resolve(dir, entry, "features_csv");
        if (!feature_cache.contains(p)) feature_cache.emplace(p, read_matrix_csv(p));
        ds.views[i].features = feature_cache.at(p);
        shared_features = p;
      }
      if (entry.contains("graph_csv")) {
        const fs::path p = resolve(dir, entry, "graph_csv");
        if (!graph_cache.contains(p)) graph_cache.emplace(p, read_edge_csv(p, ds.n));
        ds.views[i].graph = graph_cache.at(p);
        shared_graph = p;
      }
    }

    if (ds.kind == DatasetKind::features_plus_shared_graph) {
      if (graph_cache.size() != 1) {
        throw DataError(manifest_path.string() +
                        ": features_plus_shared_graph needs exactly one distinct graph_csv");
      }
      for (ViewData& view : ds.views) view.graph = graph_cache.at(*shared_graph);
    } else if (ds.kind == DatasetKind::single_features_multi_graph) {
      if (feature_cache.size() != 1) {
        throw DataError(manifest_path.string() +
                        ": single_features_multi_graph needs exactly one distinct features_csv");
      }
      for (ViewData& view : ds.views) view.features = feature_cache.at(*shared_features);
    }

    if (manifest.contains("labels_csv")) {
      const fs::path p = resolve(dir, manifest, "labels_csv");
      const auto raw = read_labels_csv(p);
      if (raw.size() != ds.n) {
        throw DataError(p.string() + ": " + std::to_string(raw.size()) + " labels, expected " +
                        std::to_string(ds.n));
      }
      ds.labels = ClusterAssignment::from_raw(raw);
    }
  } catch (const json::exception& err) {
    throw DataError(manifest_path.string() + ": " + err.what());
  }
  ds.validate();
  return ds;
}

void save_dataset(const MultiViewDataset& ds, const fs::path& dir) {
  ds.validate();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create " + dir.string() + ": " + ec.message());

  json manifest;
  manifest["n"] = ds.n;
  manifest["v"] = ds.v();
  manifest["kind"] = to_string(ds.kind);
  if (ds.cluster_count) manifest["cluster_count"] = *ds.cluster_count;
  json views = json::array();
  for (std::size_t v = 0; v < ds.v(); ++v) {
    json entry = json::object();
    const bool write_features = ds.kind != DatasetKind::single_features_multi_graph || v == 0;
    const bool write_graph = ds.kind != DatasetKind::features_plus_shared_graph || v == 0;
    if (ds.views[v].features && write_features) {
      const std::string name = "view" + std::to_string(v) + "_features.csv";
      write_matrix_csv(*ds.views[v].features, dir / name);
      entry["features_csv"] = name;
    }
    if (ds.views[v].graph && write_graph) {
      const std::string name = "view" + std::to_string(v) + "_graph.csv";
      write_edge_csv(*ds.views[v].graph, dir / name);
      entry["graph_csv"] = name;
    }
    views.push_back(entry);
  }
  manifest["views"] = views;
  if (ds.labels) {
    write_labels_csv(ds.labels->labels, dir / "labels.csv");
    manifest["labels_csv"] = "labels.csv";
  }
  std::ofstream out = open_output(dir / "manifest.json");
  out << manifest.dump(2) << '\n';
  if (!out) throw DataError("write failed for manifest.json");
}

}  // namespace cmgec
