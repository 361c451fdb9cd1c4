#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "cmgec/cluster.hpp"
#include "cmgec/errors.hpp"

namespace cmgec {

namespace {

void check_pair(const ClusterAssignment& pred, const ClusterAssignment& truth) {
  require(pred.size() == truth.size(),
          "metrics: prediction has " + std::to_string(pred.size()) + " labels, truth has " +
              std::to_string(truth.size()));
  require(pred.size() >= 1, "metrics: empty assignment");
  pred.validate();
  truth.validate();
}

// Column assigned to each predicted cluster under the accuracy-maximizing
// bijection on the square-padded contingency table. Ties in matched count are
// broken by the summed per-pair F1, so the result does not depend on label ids.
std::vector<std::size_t> best_mapping(const Matrix& table) {
  const std::size_t k = std::max(table.rows(), table.cols());
  std::vector<double> pred_size(table.rows(), 0.0), true_size(table.cols(), 0.0);
  for (std::size_t i = 0; i < table.rows(); ++i)
    for (std::size_t j = 0; j < table.cols(); ++j) {
      pred_size[i] += table(i, j);
      true_size[j] += table(i, j);
    }
  // The F1 sum is below k + 1, so one extra match always outweighs it.
  const double scale = static_cast<double>(k + 1);
  Matrix cost(k, k);
  for (std::size_t i = 0; i < table.rows(); ++i)
    for (std::size_t j = 0; j < table.cols(); ++j) {
      const double nij = table(i, j);
      const double f1 = nij > 0.0 ? 2.0 * nij / (pred_size[i] + true_size[j]) : 0.0;
      cost(i, j) = -(scale * nij + f1);
    }
  return solve_assignment(cost);
}

double entropy(std::span<const double> counts, double n) {
  double h = 0.0;
  for (double c : counts)
    if (c > 0.0) h -= (c / n) * std::log(c / n);
  return h;
}

double mutual_information(const Matrix& table, std::span<const double> a, std::span<const double> b,
                          double n) {
  double mi = 0.0;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    for (std::size_t j = 0; j < table.cols(); ++j) {
      const double nij = table(i, j);
      if (nij > 0.0) mi += (nij / n) * std::log(n * nij / (a[i] * b[j]));
    }
  }
  return std::max(mi, 0.0);
}

// E[MI] under the hypergeometric model with fixed marginals.
double expected_mutual_information(std::span<const double> a, std::span<const double> b, double n) {
  const double lg_n = std::lgamma(n + 1.0);
  double emi = 0.0;
  for (double ai : a) {
    if (ai <= 0.0) continue;
    for (double bj : b) {
      if (bj <= 0.0) continue;
      const double lo = std::max(1.0, ai + bj - n);
      const double hi = std::min(ai, bj);
      const double fixed = std::lgamma(ai + 1.0) + std::lgamma(bj + 1.0) +
                           std::lgamma(n - ai + 1.0) + std::lgamma(n - bj + 1.0) - lg_n;
      for (double nij = lo; nij <= hi; nij += 1.0) {
        const double log_p = fixed - std::lgamma(nij + 1.0) - std::lgamma(ai - nij + 1.0) -
                             std::lgamma(bj - nij + 1.0) - std::lgamma(n - ai - bj + nij + 1.0);
        emi += (nij / n) * std::log(n * nij / (ai * bj)) * std::exp(log_p);
      }
    }
  }
  return emi;
}

bool same_partition(const ClusterAssignment& a, const ClusterAssignment& b) {
  return ClusterAssignment::from_raw(a.labels).labels ==
         ClusterAssignment::from_raw(b.labels).labels;
}

std::int64_t pairs(std::int64_t x) { return x * (x - 1) / 2; }

}  // namespace

std::vector<std::size_t> solve_assignment(const Matrix& cost) {
  require(cost.rows() == cost.cols(), "solve_assignment: cost matrix must be square");
  const std::size_t n = cost.rows();
  if (n == 0) return {};
  constexpr double inf = std::numeric_limits<double>::infinity();
  // Potentials and matching are 1-based with index 0 as the virtual root.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[match[j] - 1] = j - 1;
  return row_to_col;
}

Matrix contingency(const ClusterAssignment& pred, const ClusterAssignment& truth) {
  check_pair(pred, truth);
  Matrix table(static_cast<std::size_t>(pred.c), static_cast<std::size_t>(truth.c));
  for (std::size_t i = 0; i < pred.size(); ++i) table(pred.labels[i], truth.labels[i]) += 1.0;
  return table;
}

double accuracy_hungarian(const ClusterAssignment& pred, const ClusterAssignment& truth) {
  const Matrix table = contingency(pred, truth);
  const auto mapping = best_mapping(table);
  double matched = 0.0;
  for (std::size_t i = 0; i < table.rows(); ++i)
    if (mapping[i] < table.cols()) matched += table(i, mapping[i]);
  return matched / static_cast<double>(pred.size());
}

InfoMetrics info_metrics(const ClusterAssignment& pred, const ClusterAssignment& truth) {
  const Matrix table = contingency(pred, truth);
  const double n = static_cast<double>(pred.size());
  std::vector<double> row_totals(table.rows(), 0.0), col_totals(table.cols(), 0.0);
  for (std::size_t i = 0; i < table.rows(); ++i)
    for (std::size_t j = 0; j < table.cols(); ++j) {
      row_totals[i] += table(i, j);
      col_totals[j] += table(i, j);
    }
  const double mi = mutual_information(table, row_totals, col_totals, n);
  std::vector<double> a = row_totals, b = col_totals;
  std::erase(a, 0.0);
  std::erase(b, 0.0);

  InfoMetrics out;
  const bool identical = same_partition(pred, truth);
  const double h_pred = entropy(a, n);
  const double h_truth = entropy(b, n);
  const double mean_h = 0.5 * (h_pred + h_truth);

  if (a.size() == 1 && b.size() == 1) {
    out.nmi = 1.0;
    out.ami = 1.0;
  } else {
    out.nmi = mean_h > 0.0 ? std::clamp(mi / mean_h, 0.0, 1.0) : (identical ? 1.0 : 0.0);
    const double emi = expected_mutual_information(a, b, n);
    const double denom = mean_h - emi;
    // Degenerate when every relabeling gives the same MI (e.g. both all-singleton).
    out.ami = std::abs(denom) < 1e-12 ? (identical ? 1.0 : 0.0) : (mi - emi) / denom;
  }

  std::int64_t sum_comb = 0, sum_a = 0, sum_b = 0;
  for (std::size_t i = 0; i < table.rows(); ++i)
    for (std::size_t j = 0; j < table.cols(); ++j)
      sum_comb += pairs(static_cast<std::int64_t>(table(i, j)));
  for (double x : a) sum_a += pairs(static_cast<std::int64_t>(x));
  for (double x : b) sum_b += pairs(static_cast<std::int64_t>(x));
  const std::int64_t total = pairs(static_cast<std::int64_t>(pred.size()));
  // ARI = (index − E) / (max − E) with E = Σa·Σb / C(n,2), cleared of fractions.
  const std::int64_t num = total * sum_comb - sum_a * sum_b;
  const std::int64_t den = total * (sum_a + sum_b) - 2 * sum_a * sum_b;
  out.ari = den == 0 ? 1.0 : 2.0 * static_cast<double>(num) / static_cast<double>(den);
  return out;
}

double f1_macro(const ClusterAssignment& pred, const ClusterAssignment& truth) {
  const Matrix table = contingency(pred, truth);
  const auto mapping = best_mapping(table);
  std::vector<double> pred_size(table.rows(), 0.0), true_size(table.cols(), 0.0);
  for (std::size_t i = 0; i < table.rows(); ++i)
    for (std::size_t j = 0; j < table.cols(); ++j) {
      pred_size[i] += table(i, j);
      true_size[j] += table(i, j);
    }
  double total = 0.0;
  for (std::size_t k = 0; k < table.cols(); ++k) {
    if (true_size[k] == 0.0) continue;
    double tp = 0.0, predicted = 0.0;
    for (std::size_t i = 0; i < table.rows(); ++i) {
      if (mapping[i] == k) {
        tp = table(i, k);
        predicted = pred_size[i];
      }
    }
    if (tp > 0.0) {
      const double precision = tp / predicted;
      const double recall = tp / true_size[k];
      total += 2.0 * precision * recall / (precision + recall);
    }
  }
  std::size_t present = 0;
  for (double s : true_size) present += s > 0.0;
  return total / static_cast<double>(present);
}

ClusterMetrics evaluate(const ClusterAssignment& pred, const ClusterAssignment& truth) {
  const InfoMetrics info = info_metrics(pred, truth);
  return {accuracy_hungarian(pred, truth), info.nmi, info.ari, info.ami, f1_macro(pred, truth)};
}

}  // namespace cmgec
