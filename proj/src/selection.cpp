// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The haps-array Authors

#include "haps/selection.hpp"

#include "haps/link_rate.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace haps {

bool SelectionMatrix::is_selected(int k, int m) const {
  const auto& row = selected[static_cast<std::size_t>(k)];
  return std::binary_search(row.begin(), row.end(), m);
}

Eigen::MatrixXd SelectionMatrix::dense() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(num_users, num_elements);
  for (int k = 0; k < num_users; ++k)
    for (int m : selected[static_cast<std::size_t>(k)]) a(k, m) = 1.0;
  return a;
}

std::vector<int> SelectionMatrix::column_counts() const {
  std::vector<int> counts(static_cast<std::size_t>(num_elements), 0);
  for (const auto& row : selected)
    for (int m : row) ++counts[static_cast<std::size_t>(m)];
  return counts;
}

GreedyReport select_greedy_report(const GainMatrix& gains, int m_k, int m_element_cap) {
  const int num_users = static_cast<int>(gains.rows());
  const int num_elements = static_cast<int>(gains.cols());
  if (m_k <= 0 || m_k > num_elements)
    throw std::invalid_argument("m_k must be in [1, M]");
  if ((gains.array() < 0.0).any()) throw std::invalid_argument("gains must be non-negative");
  const int cap = m_element_cap > 0 ? m_element_cap : std::max(num_users, 1);
  if (static_cast<long long>(num_users) * m_k > static_cast<long long>(num_elements) * cap)
    throw SelectionInfeasible("element cap cannot be met: K * m_k > M * m_element_cap");

  GreedyReport report;
  auto& sel = report.selection;
  sel.num_users = num_users;
  sel.num_elements = num_elements;
  sel.m_element_cap = cap;
  sel.selected.resize(static_cast<std::size_t>(num_users));
  const bool cap_binds_possible = cap < num_users;

  std::vector<int> usage(static_cast<std::size_t>(num_elements), 0);
  std::vector<int> order(static_cast<std::size_t>(num_elements));
  for (int k = 0; k < num_users; ++k) {
    const auto row = gains.row(k);
    std::iota(order.begin(), order.end(), 0);
    auto ranked_before = [&row](int a, int b) {
      return row[a] > row[b] || (row[a] == row[b] && a < b);
    };
    auto& chosen = sel.selected[static_cast<std::size_t>(k)];
    if (!cap_binds_possible) {
      std::partial_sort(order.begin(), order.begin() + m_k, order.end(), ranked_before);
      chosen.assign(order.begin(), order.begin() + m_k);
    } else {
      std::sort(order.begin(), order.end(), ranked_before);
      for (int idx = 0; idx < num_elements && static_cast<int>(chosen.size()) < m_k; ++idx) {
        const int m = order[static_cast<std::size_t>(idx)];
        if (usage[static_cast<std::size_t>(m)] >= cap) {
          if (std::find(report.cap_bound_users.begin(), report.cap_bound_users.end(), k) ==
              report.cap_bound_users.end())
            report.cap_bound_users.push_back(k);
          continue;
        }
        chosen.push_back(m);
      }
      if (static_cast<int>(chosen.size()) < m_k)
        throw SelectionInfeasible("element cap exhausted before user " + std::to_string(k) +
                                  " received m_k elements");
    }
    for (int m : chosen) ++usage[static_cast<std::size_t>(m)];
    const bool padded = std::any_of(chosen.begin(), chosen.end(), [&row](int m) { return row[m] <= 0.0; });
    if (padded) report.padded_users.push_back(k);
    std::sort(chosen.begin(), chosen.end());
  }
  return report;
}

SelectionMatrix select_greedy(const GainMatrix& gains, int m_k, int m_element_cap) {
  return select_greedy_report(gains, m_k, m_element_cap).selection;
}

namespace {

std::vector<std::vector<int>> combinations(int n, int r) {
  std::vector<std::vector<int>> out;
  std::vector<int> idx(static_cast<std::size_t>(r));
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    out.push_back(idx);
    int i = r - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - r + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < r; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

}  // namespace

SelectionMatrix select_brute_force(const GainMatrix& gains, int m_k, const Eigen::VectorXd& power,
                                   const LinkContext& link, int m_element_cap) {
  const int num_users = static_cast<int>(gains.rows());
  const int num_elements = static_cast<int>(gains.cols());
  if (num_elements > 12 || num_users > 3 || m_k > 4)
    throw std::invalid_argument("select_brute_force: instance exceeds M <= 12, K <= 3, m_k <= 4");
  if (num_users < 1 || m_k < 1 || m_k > num_elements)
    throw std::invalid_argument("select_brute_force: need K >= 1 and 1 <= m_k <= M");
  const int cap = m_element_cap > 0 ? m_element_cap : num_users;

  const auto subsets = combinations(num_elements, m_k);
  const std::size_t n_sub = subsets.size();
  std::vector<std::size_t> pick(static_cast<std::size_t>(num_users), 0);

  SelectionMatrix candidate;
  candidate.num_users = num_users;
  candidate.num_elements = num_elements;
  candidate.m_element_cap = cap;
  candidate.selected.resize(static_cast<std::size_t>(num_users));

  SelectionMatrix best;
  double best_min = -std::numeric_limits<double>::infinity();
  while (true) {
    for (int k = 0; k < num_users; ++k)
      candidate.selected[static_cast<std::size_t>(k)] = subsets[pick[static_cast<std::size_t>(k)]];
    const auto counts = candidate.column_counts();
    if (std::all_of(counts.begin(), counts.end(), [cap](int c) { return c <= cap; })) {
      const Eigen::VectorXd sinr =
          sinr_closed_form(power, candidate, gains, link.beta_sq, link.sigma_sq);
      const double worst = sinr.minCoeff();
      if (worst > best_min) {
        best_min = worst;
        best = candidate;
      }
    }
    int k = num_users - 1;
    while (k >= 0 && ++pick[static_cast<std::size_t>(k)] == n_sub) {
      pick[static_cast<std::size_t>(k)] = 0;
      --k;
    }
    if (k < 0) break;
  }
  if (best.selected.empty()) throw SelectionInfeasible("no selection satisfies the element cap");
  return best;
}

}  // namespace haps
