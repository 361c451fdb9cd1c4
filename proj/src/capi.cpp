#include "cmgec/cmgec.h"

#include <cstring>
#include <new>
#include <string>

#include "cmgec/dataset.hpp"
#include "cmgec/errors.hpp"
#include "cmgec/pipeline.hpp"
#include "cmgec/synth.hpp"

struct cmgec_config {
  cmgec::TrainConfig cfg;
  std::string json;
};

struct cmgec_dataset {
  cmgec::MultiViewDataset ds;
};

struct cmgec_report {
  cmgec::RunOutput out;
};

namespace {

thread_local std::string last_error;

template <typename Fn>
cmgec_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return CMGEC_OK;
  } catch (const cmgec::ConfigError& e) {
    last_error = e.what();
    return CMGEC_ERR_CONFIG;
  } catch (const cmgec::ContractError& e) {
    last_error = e.what();
    return CMGEC_ERR_CONFIG;
  } catch (const cmgec::DataError& e) {
    last_error = e.what();
    return CMGEC_ERR_DATA;
  } catch (const cmgec::NumericalError& e) {
    last_error = e.what();
    return CMGEC_ERR_NUMERICAL;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return CMGEC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CMGEC_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return CMGEC_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) throw cmgec::ContractError(std::string(what) + " must not be null");
}

double pick(const cmgec::ClusterMetrics& m, const char* name) {
  need(name, "metric name");
  const std::string s(name);
  if (s == "acc") return m.acc;
  if (s == "nmi") return m.nmi;
  if (s == "ari") return m.ari;
  if (s == "ami") return m.ami;
  if (s == "f1") return m.f1;
  throw cmgec::ConfigError("unknown metric '" + s + "'");
}

void copy_metrics(const cmgec::ClusterMetrics& m, cmgec_metrics* out) {
  *out = {m.acc, m.nmi, m.ari, m.ami, m.f1};
}

}  // namespace

extern "C" {

const char* cmgec_last_error(void) { return last_error.c_str(); }

cmgec_status cmgec_config_create(cmgec_config** out) {
  return guarded([&] {
    need(out, "out");
    *out = new cmgec_config();
  });
}

void cmgec_config_destroy(cmgec_config* cfg) { delete cfg; }

cmgec_status cmgec_config_set(cmgec_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    need(cfg, "config");
    need(key, "key");
    need(value, "value");
    cmgec::TrainConfig next = cfg->cfg;
    next.set(key, value);
    next.validate();
    cfg->cfg = next;
  });
}

cmgec_status cmgec_config_json(cmgec_config* cfg, const char** out) {
  return guarded([&] {
    need(cfg, "config");
    need(out, "out");
    cfg->json = cmgec::to_json(cfg->cfg).dump();
    *out = cfg->json.c_str();
  });
}

cmgec_status cmgec_dataset_load(const char* dir, cmgec_dataset** out) {
  return guarded([&] {
    need(dir, "dir");
    need(out, "out");
    *out = new cmgec_dataset{cmgec::load_dataset(dir)};
  });
}

void cmgec_dataset_destroy(cmgec_dataset* ds) { delete ds; }

cmgec_status cmgec_dataset_save(const cmgec_dataset* ds, const char* dir) {
  return guarded([&] {
    need(ds, "dataset");
    need(dir, "dir");
    cmgec::save_dataset(ds->ds, dir);
  });
}

size_t cmgec_dataset_n(const cmgec_dataset* ds) { return ds == nullptr ? 0 : ds->ds.n; }

size_t cmgec_dataset_views(const cmgec_dataset* ds) { return ds == nullptr ? 0 : ds->ds.v(); }

cmgec_status cmgec_make_synth(int clusters, size_t n, size_t views, size_t dim,
                              const double* corrupt_fraction, uint64_t seed,
                              cmgec_dataset** out) {
  return guarded([&] {
    need(out, "out");
    cmgec::SynthSpec spec;
    spec.clusters = clusters;
    spec.n = n;
    spec.views = views;
    spec.dim = dim;
    spec.seed = seed;
    if (corrupt_fraction != nullptr) spec.corrupt_fraction.assign(corrupt_fraction, corrupt_fraction + views);
    *out = new cmgec_dataset{cmgec::make_synthetic(spec)};
  });
}

cmgec_status cmgec_run(const cmgec_config* cfg, const cmgec_dataset* ds, cmgec_report** out) {
  return guarded([&] {
    need(cfg, "config");
    need(ds, "dataset");
    need(out, "out");
    *out = new cmgec_report{cmgec::run(cfg->cfg, ds->ds)};
  });
}

void cmgec_report_destroy(cmgec_report* r) { delete r; }

cmgec_status cmgec_report_write(const cmgec_report* r, const char* path) {
  return guarded([&] {
    need(r, "report");
    need(path, "path");
    cmgec::emit_report(r->out.report, path);
  });
}

size_t cmgec_report_runs(const cmgec_report* r) {
  return r == nullptr ? 0 : r->out.report.runs.size();
}

cmgec_status cmgec_report_mean(const cmgec_report* r, const char* name, double* out) {
  return guarded([&] {
    need(r, "report");
    need(out, "out");
    if (!r->out.report.mean) throw cmgec::DataError("report has no metrics (no ground truth)");
    *out = pick(*r->out.report.mean, name);
  });
}

cmgec_status cmgec_report_stddev(const cmgec_report* r, const char* name, double* out) {
  return guarded([&] {
    need(r, "report");
    need(out, "out");
    if (!r->out.report.stddev) throw cmgec::DataError("report has no metrics (no ground truth)");
    *out = pick(*r->out.report.stddev, name);
  });
}

cmgec_status cmgec_report_labels(const cmgec_report* r, size_t index, int* labels, size_t len) {
  return guarded([&] {
    need(r, "report");
    need(labels, "labels");
    const auto& runs = r->out.report.runs;
    if (index >= runs.size()) throw cmgec::ContractError("run index out of range");
    const auto& src = runs[index].labels;
    if (len < src.size()) throw cmgec::ContractError("label buffer too small");
    std::memcpy(labels, src.data(), src.size() * sizeof(int));
  });
}

cmgec_status cmgec_report_export_consensus(const cmgec_report* r, const char* path) {
  return guarded([&] {
    need(r, "report");
    need(path, "path");
    if (!r->out.first.consensus) throw cmgec::ConfigError("this ablation learns no consensus graph");
    cmgec::write_matrix_csv(*r->out.first.consensus, path);
  });
}

cmgec_status cmgec_report_export_embedding(const cmgec_report* r, const char* path) {
  return guarded([&] {
    need(r, "report");
    need(path, "path");
    if (!r->out.first.embedding) throw cmgec::ConfigError("this ablation computes no embedding");
    cmgec::write_matrix_csv(*r->out.first.embedding, path);
  });
}

cmgec_status cmgec_evaluate(const int* pred, const int* truth, size_t n, cmgec_metrics* out) {
  return guarded([&] {
    need(pred, "pred");
    need(truth, "truth");
    need(out, "out");
    const auto p = cmgec::ClusterAssignment::from_raw({pred, n});
    const auto t = cmgec::ClusterAssignment::from_raw({truth, n});
    copy_metrics(cmgec::evaluate(p, t), out);
  });
}

cmgec_status cmgec_evaluate_files(const char* pred_csv, const char* truth_csv,
                                  cmgec_metrics* out) {
  return guarded([&] {
    need(pred_csv, "pred_csv");
    need(truth_csv, "truth_csv");
    need(out, "out");
    const auto pred = cmgec::read_labels_csv(pred_csv);
    const auto truth = cmgec::read_labels_csv(truth_csv);
    if (pred.size() != truth.size()) {
      throw cmgec::DataError(std::string(pred_csv) + " has " + std::to_string(pred.size()) +
                             " labels but " + truth_csv + " has " + std::to_string(truth.size()));
    }
    if (pred.empty()) throw cmgec::DataError(std::string(pred_csv) + ": no labels");
    copy_metrics(cmgec::evaluate(cmgec::ClusterAssignment::from_raw(pred),
                                 cmgec::ClusterAssignment::from_raw(truth)),
                 out);
  });
}

}  // extern "C"
