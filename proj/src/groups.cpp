#include "soslasso/groups.hpp"

#include <algorithm>
#include <string>

namespace soslasso {

GroupSet::GroupSet(std::vector<std::vector<int>> groups, int p)
    : p_(p), groups_(std::move(groups)) {
  require(p_ >= 1, ErrorCode::invalid_argument, "GroupSet: dimension must be >= 1");
  require(!groups_.empty(), ErrorCode::empty_group, "GroupSet: group list is empty");
  coverage_.assign(static_cast<std::size_t>(p_), 0);
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    auto& members = groups_[g];
    require(!members.empty(), ErrorCode::empty_group,
            "GroupSet: group " + std::to_string(g) + " is empty");
    std::sort(members.begin(), members.end());
    for (std::size_t i = 0; i < members.size(); ++i) {
      const int j = members[i];
      require(j >= 0 && j < p_, ErrorCode::index_out_of_range,
              "GroupSet: index " + std::to_string(j) + " in group " + std::to_string(g) +
                  " outside [0, " + std::to_string(p_) + ")");
      require(i == 0 || members[i - 1] != j, ErrorCode::duplicate_within_group,
              "GroupSet: duplicate index " + std::to_string(j) + " in group " +
                  std::to_string(g));
      ++coverage_[static_cast<std::size_t>(j)];
    }
    max_size_ = std::max(max_size_, static_cast<int>(members.size()));
    total_dup_ += static_cast<std::int64_t>(members.size());
  }
  max_coverage_ = *std::max_element(coverage_.begin(), coverage_.end());
  covers_all_ = *std::min_element(coverage_.begin(), coverage_.end()) > 0;
}

GroupSet GroupSet::chain(int p, int block, int shift) {
  require(block >= 1, ErrorCode::invalid_argument, "chain: block size must be >= 1");
  require(shift >= 1, ErrorCode::invalid_argument, "chain: shift must be >= 1");
  require(p >= block, ErrorCode::geometry_mismatch,
          "chain: dimension " + std::to_string(p) + " smaller than block " + std::to_string(block));
  require((p - block) % shift == 0, ErrorCode::geometry_mismatch,
          "chain: (p - block) = " + std::to_string(p - block) + " not divisible by shift " +
              std::to_string(shift));
  const int m = (p - block) / shift + 1;
  std::vector<std::vector<int>> groups(static_cast<std::size_t>(m));
  for (int g = 0; g < m; ++g) {
    auto& members = groups[static_cast<std::size_t>(g)];
    members.resize(static_cast<std::size_t>(block));
    for (int i = 0; i < block; ++i) members[static_cast<std::size_t>(i)] = g * shift + i;
  }
  return GroupSet(std::move(groups), p);
}

DuplicationMap duplication_map(const GroupSet& gs) {
  DuplicationMap dm;
  dm.source_dim = gs.dim();
  dm.offsets.reserve(static_cast<std::size_t>(gs.count()) + 1);
  dm.origin.reserve(static_cast<std::size_t>(gs.total_duplicated()));
  dm.offsets.push_back(0);
  for (int g = 0; g < gs.count(); ++g) {
    const auto& members = gs.group(g);
    dm.origin.insert(dm.origin.end(), members.begin(), members.end());
    dm.offsets.push_back(static_cast<int>(dm.origin.size()));
  }
  return dm;
}

TaskLayout replicate_across_tasks(const GroupSet& gs, int tasks) {
  require(tasks >= 1, ErrorCode::invalid_argument, "replicate_across_tasks: tasks must be >= 1");
  const int p = gs.dim();
  std::vector<std::vector<int>> replicated(static_cast<std::size_t>(gs.count()));
  for (int g = 0; g < gs.count(); ++g) {
    const auto& members = gs.group(g);
    auto& out = replicated[static_cast<std::size_t>(g)];
    out.reserve(members.size() * static_cast<std::size_t>(tasks));
    for (int t = 0; t < tasks; ++t)
      for (int j : members) out.push_back(t * p + j);
  }
  return TaskLayout{tasks, p, GroupSet(std::move(replicated), tasks * p)};
}

void expand_into(const DuplicationMap& dm, const double* w_dup, double* x) {
  std::fill(x, x + dm.source_dim, 0.0);
  const int d = dm.total();
  for (int i = 0; i < d; ++i) x[dm.origin[static_cast<std::size_t>(i)]] += w_dup[i];
}

Eigen::VectorXd expand(const DuplicationMap& dm, const Eigen::VectorXd& w_dup) {
  require(w_dup.size() == dm.total(), ErrorCode::dimension_mismatch,
          "expand: vector length " + std::to_string(w_dup.size()) + " != duplicated dimension " +
              std::to_string(dm.total()));
  Eigen::VectorXd x(dm.source_dim);
  expand_into(dm, w_dup.data(), x.data());
  return x;
}

void scatter_into(const DuplicationMap& dm, const double* x, double* out) {
  const int d = dm.total();
  for (int i = 0; i < d; ++i) out[i] = x[dm.origin[static_cast<std::size_t>(i)]];
}

Eigen::MatrixXd lift_design(const DuplicationMap& dm, const Eigen::MatrixXd& design) {
  require(design.cols() == dm.source_dim, ErrorCode::dimension_mismatch,
          "lift_design: design has " + std::to_string(design.cols()) +
              " columns, duplication expects " + std::to_string(dm.source_dim));
  Eigen::MatrixXd lifted(design.rows(), dm.total());
  for (int d = 0; d < dm.total(); ++d)
    lifted.col(d) = design.col(dm.origin[static_cast<std::size_t>(d)]);
  return lifted;
}

}  // namespace soslasso
