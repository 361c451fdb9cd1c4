#pragma once

#include "cmgec/matrix.hpp"

namespace cmgec {

inline constexpr double kProbClip = 1e-7;

double clip_probability(double p);

struct LinkBceOptions {
  // Scale positive targets by #zero / #nonzero entries of the target.
  bool reweight = true;
  // Graphs carry no self links, so the diagonal is excluded by default.
  bool include_diagonal = false;
};

double positive_class_weight(const Matrix& target, bool include_diagonal);

// Mean over counted entries of −w·y·log p − (1−y)·log(1−p) with p clipped to
// [1e-7, 1−1e-7]. When grad_prob is given it receives d(loss)/d(prob); entries
// in the clipped region get zero gradient.
double link_bce(const Matrix& target, const Matrix& prob, const LinkBceOptions& options = {},
                Matrix* grad_prob = nullptr);

}  // namespace cmgec
