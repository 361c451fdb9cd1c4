#pragma once

// Slow, independent reference implementations used by the tests. None of them
// call into the library beyond the Matrix container.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "cmgec/matrix.hpp"

namespace oracle {

using cmgec::Matrix;

inline Matrix naive_matmul(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

inline Matrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng, double lo = -1.0,
                            double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(r, c);
  for (double& x : m.values()) x = u(rng);
  return m;
}

inline Matrix random_graph(std::size_t n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution edge(p);
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (edge(rng)) a(i, j) = a(j, i) = 1.0;
  return a;
}

inline std::size_t count_components(const Matrix& a) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a(i, j) != 0.0) parent[find(i)] = find(j);
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) count += find(i) == i;
  return count;
}

// Every set partition of n elements into at most max_blocks blocks, as
// restricted growth strings.
inline std::vector<std::vector<int>> set_partitions(std::size_t n, int max_blocks) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int used) {
    if (i == n) {
      out.push_back(cur);
      return;
    }
    for (int b = 0; b <= std::min(used, max_blocks - 1); ++b) {
      cur[i] = b;
      rec(i + 1, std::max(used, b + 1));
    }
  };
  rec(0, 0);
  return out;
}

inline int block_count(const std::vector<int>& labels) {
  return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

// Best matched count over every injective map from predicted to true labels.
inline std::size_t best_matching_count(const std::vector<int>& pred, const std::vector<int>& truth) {
  const int k = std::max(block_count(pred), block_count(truth));
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = 0;
  do {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) hits += perm[pred[i]] == truth[i];
    best = std::max(best, hits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Macro F1 of every accuracy-optimal bijection.
inline std::vector<double> optimal_f1_values(const std::vector<int>& pred,
                                             const std::vector<int>& truth) {
  const int k = std::max(block_count(pred), block_count(truth));
  const int classes = block_count(truth);
  const std::size_t best = best_matching_count(pred, truth);
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> out;
  do {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) hits += perm[pred[i]] == truth[i];
    if (hits != best) continue;
    double total = 0.0;
    for (int t = 0; t < classes; ++t) {
      double tp = 0, predicted = 0, actual = 0;
      for (std::size_t i = 0; i < pred.size(); ++i) {
        const bool p = perm[pred[i]] == t, a = truth[i] == t;
        tp += p && a;
        predicted += p;
        actual += a;
      }
      if (tp > 0) total += 2.0 * tp / (predicted + actual);
    }
    out.push_back(total / classes);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// ARI from the four pair-counting classes, as an exact fraction num/den.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

inline Fraction ari_pairs(const std::vector<int>& pred, const std::vector<int>& truth) {
  std::int64_t n11 = 0, n10 = 0, n01 = 0, n00 = 0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    for (std::size_t j = i + 1; j < pred.size(); ++j) {
      const bool sp = pred[i] == pred[j], st = truth[i] == truth[j];
      if (sp && st) ++n11;
      else if (sp) ++n10;
      else if (st) ++n01;
      else ++n00;
    }
  const std::int64_t num = 2 * (n00 * n11 - n01 * n10);
  const std::int64_t den = (n00 + n01) * (n01 + n11) + (n00 + n10) * (n10 + n11);
  if (den == 0) return {1, 1};
  return {num, den};
}

inline double entropy_of(const std::vector<int>& labels) {
  std::map<int, double> counts;
  for (int l : labels) counts[l] += 1.0;
  const double n = static_cast<double>(labels.size());
  double h = 0.0;
  for (const auto& [l, c] : counts) h -= c / n * std::log(c / n);
  return h;
}

inline double mutual_info(const std::vector<int>& a, const std::vector<int>& b) {
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> ca, cb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[{a[i], b[i]}] += 1.0;
    ca[a[i]] += 1.0;
    cb[b[i]] += 1.0;
  }
  const double n = static_cast<double>(a.size());
  double mi = 0.0;
  for (const auto& [key, c] : joint) mi += c / n * std::log(n * c / (ca[key.first] * cb[key.second]));
  return mi;
}

inline bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if ((a[i] == a[j]) != (b[i] == b[j])) return false;
  return true;
}

inline double nmi(const std::vector<int>& pred, const std::vector<int>& truth) {
  const double hp = entropy_of(pred), ht = entropy_of(truth);
  if (hp == 0.0 && ht == 0.0) return 1.0;
  return mutual_info(pred, truth) / (0.5 * (hp + ht));
}

inline std::vector<int> sorted_sizes(const std::vector<int>& labels) {
  std::map<int, int> counts;
  for (int l : labels) ++counts[l];
  std::vector<int> sizes;
  for (const auto& [l, c] : counts) sizes.push_back(c);
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

// Expected MI under random relabeling, by averaging over every permutation of
// the samples of one labeling. Depends only on the two size profiles.
class ExpectedMiByPermutation {
 public:
  double operator()(const std::vector<int>& pred, const std::vector<int>& truth) {
    const auto key = std::make_pair(sorted_sizes(pred), sorted_sizes(truth));
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::vector<int> perm(truth.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> shuffled(truth.size());
    double total = 0.0, count = 0.0;
    do {
      for (std::size_t i = 0; i < perm.size(); ++i) shuffled[i] = truth[perm[i]];
      total += mutual_info(pred, shuffled);
      count += 1.0;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return cache_[key] = total / count;
  }

 private:
  std::map<std::pair<std::vector<int>, std::vector<int>>, double> cache_;
};

inline double ami(const std::vector<int>& pred, const std::vector<int>& truth,
                  ExpectedMiByPermutation& emi_oracle) {
  if (block_count(pred) == 1 && block_count(truth) == 1) return 1.0;
  const double emi = emi_oracle(pred, truth);
  const double denom = 0.5 * (entropy_of(pred) + entropy_of(truth)) - emi;
  if (std::abs(denom) < 1e-12) return same_partition(pred, truth) ? 1.0 : 0.0;
  return (mutual_info(pred, truth) - emi) / denom;
}

}  // namespace oracle
