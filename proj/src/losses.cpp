#include "cmgec/losses.hpp"

#include <algorithm>
#include <cmath>

#include "cmgec/errors.hpp"

namespace cmgec {

double clip_probability(double p) { return std::clamp(p, kProbClip, 1.0 - kProbClip); }

double positive_class_weight(const Matrix& target, bool include_diagonal) {
  double positives = 0.0;
  double negatives = 0.0;
  for (std::size_t i = 0; i < target.rows(); ++i) {
    for (std::size_t j = 0; j < target.cols(); ++j) {
      if (i == j && !include_diagonal) continue;
      if (target(i, j) > 0.0) {
        positives += 1.0;
      } else {
        negatives += 1.0;
      }
    }
  }
  return positives > 0.0 && negatives > 0.0 ? negatives / positives : 1.0;
}

double link_bce(const Matrix& target, const Matrix& prob, const LinkBceOptions& options,
                Matrix* grad_prob) {
  require(target.same_shape(prob), "link_bce: target/prediction shape mismatch");
  require(target.rows() == target.cols(), "link_bce: expected square link matrices");
  const std::size_t n = target.rows();
  const double w = options.reweight ? positive_class_weight(target, options.include_diagonal) : 1.0;
  const double count =
      static_cast<double>(options.include_diagonal ? n * n : n * (n > 0 ? n - 1 : 0));
  require(count > 0.0, "link_bce: no entries to score");
  if (grad_prob != nullptr) *grad_prob = Matrix(n, n);

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j && !options.include_diagonal) continue;
      const double y = target(i, j);
      const double raw = prob(i, j);
      const double p = clip_probability(raw);
      total += -w * y * std::log(p) - (1.0 - y) * std::log(1.0 - p);
      if (grad_prob != nullptr && raw > kProbClip && raw < 1.0 - kProbClip) {
        (*grad_prob)(i, j) = (-w * y / p + (1.0 - y) / (1.0 - p)) / count;
      }
    }
  }
  return total / count;
}

}  // namespace cmgec
