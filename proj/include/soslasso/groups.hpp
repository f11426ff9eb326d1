#pragma once

#include <Eigen/Core>
#include <vector>

#include "soslasso/common.hpp"

namespace soslasso {

/// A collection of (possibly overlapping) index sets over [0, p).
/// Immutable after construction; safe to share across threads.
class GroupSet {
 public:
  /// Validates and normalizes: members are sorted and must be distinct and in
  /// range. Group order is preserved as given.
  GroupSet(std::vector<std::vector<int>> groups, int p);

  /// Sliding-window groups {i*shift, ..., i*shift + block - 1} covering [0, p).
  /// Requires (p - block) divisible by shift so the last group ends at p - 1.
  static GroupSet chain(int p, int block, int shift);

  int dim() const { return p_; }
  int count() const { return static_cast<int>(groups_.size()); }
  int max_size() const { return max_size_; }
  const std::vector<int>& group(int g) const { return groups_[static_cast<std::size_t>(g)]; }
  const std::vector<std::vector<int>>& groups() const { return groups_; }

  /// Number of groups containing each coordinate.
  const std::vector<int>& coverage() const { return coverage_; }
  int max_coverage() const { return max_coverage_; }
  bool covers_all() const { return covers_all_; }
  std::int64_t total_duplicated() const { return total_dup_; }

 private:
  int p_ = 0;
  int max_size_ = 0;
  int max_coverage_ = 0;
  bool covers_all_ = false;
  std::int64_t total_dup_ = 0;
  std::vector<std::vector<int>> groups_;
  std::vector<int> coverage_;
};

/// Covariate-duplication layout: one contiguous segment per group, origin maps
/// each duplicated coordinate back to its source coordinate.
struct DuplicationMap {
  int source_dim = 0;
  std::vector<int> offsets;  // per group, size M + 1
  std::vector<int> origin;   // size total()

  int total() const { return static_cast<int>(origin.size()); }
  int segments() const { return static_cast<int>(offsets.size()) - 1; }
  int segment_begin(int g) const { return offsets[static_cast<std::size_t>(g)]; }
  int segment_size(int g) const {
    return offsets[static_cast<std::size_t>(g) + 1] - offsets[static_cast<std::size_t>(g)];
  }
};

DuplicationMap duplication_map(const GroupSet& gs);

/// Per-task group structure replicated across tasks: group g of the result
/// contains coordinate t*p + j iff j is in group g, for every task t.
struct TaskLayout {
  int tasks = 1;
  int dim_per_task = 0;
  GroupSet replicated;
};

TaskLayout replicate_across_tasks(const GroupSet& gs, int tasks);

/// x[j] = sum of w over duplicated coordinates with origin j.
Eigen::VectorXd expand(const DuplicationMap& dm, const Eigen::VectorXd& w_dup);
void expand_into(const DuplicationMap& dm, const double* w_dup, double* x);

/// Adjoint of expand: out[d] = x[origin(d)].
void scatter_into(const DuplicationMap& dm, const double* x, double* out);

/// Column d of the result is column origin(d) of the design, so that
/// lifted * w == design * expand(w) for every w.
Eigen::MatrixXd lift_design(const DuplicationMap& dm, const Eigen::MatrixXd& design);

}  // namespace soslasso
