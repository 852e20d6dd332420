// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The haps-array Authors

#pragma once

#include "haps/element_gain.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace haps {

/// Raised when the requested per-user and per-element limits cannot be met.
class SelectionInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// K x M binary antenna assignment. `selected[k]` lists the element indices
/// serving user k in ascending order.
struct SelectionMatrix {
  int num_users = 0;
  int num_elements = 0;
  int m_element_cap = 0;
  std::vector<std::vector<int>> selected;

  int m_k(int k) const { return static_cast<int>(selected[static_cast<std::size_t>(k)].size()); }
  bool is_selected(int k, int m) const;
  /// Dense 0/1 matrix, K x M.
  Eigen::MatrixXd dense() const;
  /// Number of users sharing each element.
  std::vector<int> column_counts() const;
};

struct GreedyReport {
  SelectionMatrix selection;
  /// Users for which fewer than m_k forward-facing elements existed and
  /// zero-gain elements were used as padding.
  std::vector<int> padded_users;
  /// Users for which the element cap displaced at least one top-ranked element.
  std::vector<int> cap_bound_users;
};

/// Gain-greedy selection: each user takes its m_k highest-gain elements
/// (ties by lowest index). With a finite cap, users are served in index
/// order and saturated elements are skipped. A cap <= 0 means "K" (never
/// binds). Throws SelectionInfeasible when K * m_k > M * cap.
GreedyReport select_greedy_report(const GainMatrix& gains, int m_k, int m_element_cap = 0);

SelectionMatrix select_greedy(const GainMatrix& gains, int m_k, int m_element_cap = 0);

/// Large-scale quantities needed to score a selection.
struct LinkContext {
  Eigen::VectorXd beta_sq;  // per user
  double sigma_sq = 0.0;
};

/// Exhaustive search over all per-user m_k-subsets for the selection with the
/// largest minimum closed-form SINR under the given powers. Limited to
/// M <= 12, K <= 3, m_k <= 4. Ties keep the lexicographically first subset.
SelectionMatrix select_brute_force(const GainMatrix& gains, int m_k, const Eigen::VectorXd& power,
                                   const LinkContext& link, int m_element_cap = 0);

}  // namespace haps
