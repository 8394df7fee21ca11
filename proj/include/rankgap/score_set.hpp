#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace rankgap {

using GroupId = std::uint32_t;

// Paired scores, binary labels and optional subgroup tags.
//
// Every score lies in the open interval (0, 1); labels are 0 or 1. A ScoreSet
// is immutable once constructed; operations that "modify" one return a copy.
class ScoreSet {
 public:
  // Throws DataError if the inputs violate the invariants.
  ScoreSet(std::vector<double> scores, std::vector<std::uint8_t> labels,
           std::optional<std::vector<GroupId>> groups = std::nullopt);

  std::size_t size() const noexcept { return scores_.size(); }
  std::size_t num_positive() const noexcept { return num_positive_; }
  std::size_t num_negative() const noexcept { return size() - num_positive_; }
  double prevalence() const noexcept {
    return static_cast<double>(num_positive_) / static_cast<double>(size());
  }

  std::span<const double> scores() const noexcept { return scores_; }
  std::span<const std::uint8_t> labels() const noexcept { return labels_; }
  bool has_groups() const noexcept { return groups_.has_value(); }
  // Empty span when the set carries no group tags.
  std::span<const GroupId> groups() const noexcept {
    return groups_ ? std::span<const GroupId>(*groups_) : std::span<const GroupId>();
  }

  double score(std::size_t i) const { return scores_.at(i); }
  bool positive(std::size_t i) const { return labels_.at(i) != 0; }
  std::optional<GroupId> group(std::size_t i) const {
    if (!groups_) return std::nullopt;
    return groups_->at(i);
  }

  // Sample indices ordered by ascending score; ties keep input order.
  const std::vector<std::size_t>& ascending_order() const noexcept { return order_; }

  // First pair of sample indices sharing a score, if any.
  std::optional<std::pair<std::size_t, std::size_t>> find_tie() const;
  bool is_strict() const { return !find_tie().has_value(); }
  // Throws TieError naming the first tied pair.
  void require_strict() const;

  // Same labels and groups with a new score vector.
  ScoreSet with_scores(std::vector<double> scores) const;
  // Restriction to the samples tagged with `group`.
  ScoreSet restrict_to_group(GroupId group) const;
  // Distinct group ids in ascending order.
  std::vector<GroupId> group_ids() const;

 private:
  std::vector<double> scores_;
  std::vector<std::uint8_t> labels_;
  std::optional<std::vector<GroupId>> groups_;
  std::size_t num_positive_ = 0;
  std::vector<std::size_t> order_;
};

}  // namespace rankgap
