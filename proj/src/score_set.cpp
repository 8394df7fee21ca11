#include "rankgap/score_set.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "rankgap/errors.hpp"

namespace rankgap {

TieError::TieError(std::size_t first, std::size_t second, double score)
    : DataError("tied scores at samples " + std::to_string(first) + " and " +
                std::to_string(second) + " (score " + std::to_string(score) + ")"),
      first_(first),
      second_(second) {}

ScoreSet::ScoreSet(std::vector<double> scores, std::vector<std::uint8_t> labels,
                   std::optional<std::vector<GroupId>> groups)
    : scores_(std::move(scores)), labels_(std::move(labels)), groups_(std::move(groups)) {
  if (scores_.empty()) throw DataError("score set is empty");
  if (labels_.size() != scores_.size()) {
    throw DataError("scores and labels differ in length (" + std::to_string(scores_.size()) +
                    " vs " + std::to_string(labels_.size()) + ")");
  }
  if (groups_ && groups_->size() != scores_.size()) {
    throw DataError("scores and groups differ in length (" + std::to_string(scores_.size()) +
                    " vs " + std::to_string(groups_->size()) + ")");
  }
  for (std::size_t i = 0; i < scores_.size(); ++i) {
    const double s = scores_[i];
    if (!(s > 0.0 && s < 1.0)) {
      throw DataError("score at sample " + std::to_string(i) + " is outside (0,1): " +
                      std::to_string(s));
    }
    if (labels_[i] > 1) {
      throw DataError("label at sample " + std::to_string(i) + " is not 0 or 1");
    }
    num_positive_ += labels_[i];
  }
  order_.resize(scores_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(),
                   [this](std::size_t a, std::size_t b) { return scores_[a] < scores_[b]; });
}

std::optional<std::pair<std::size_t, std::size_t>> ScoreSet::find_tie() const {
  for (std::size_t k = 1; k < order_.size(); ++k) {
    if (scores_[order_[k - 1]] == scores_[order_[k]]) {
      return std::pair{std::min(order_[k - 1], order_[k]), std::max(order_[k - 1], order_[k])};
    }
  }
  return std::nullopt;
}

void ScoreSet::require_strict() const {
  if (auto tie = find_tie()) throw TieError(tie->first, tie->second, scores_[tie->first]);
}

ScoreSet ScoreSet::with_scores(std::vector<double> scores) const {
  return ScoreSet(std::move(scores), labels_, groups_);
}

ScoreSet ScoreSet::restrict_to_group(GroupId group) const {
  if (!groups_) throw DataError("score set carries no group tags");
  std::vector<double> s;
  std::vector<std::uint8_t> l;
  std::vector<GroupId> g;
  for (std::size_t i = 0; i < size(); ++i) {
    if ((*groups_)[i] != group) continue;
    s.push_back(scores_[i]);
    l.push_back(labels_[i]);
    g.push_back(group);
  }
  if (s.empty()) throw DataError("no samples in group " + std::to_string(group));
  return ScoreSet(std::move(s), std::move(l), std::move(g));
}

std::vector<GroupId> ScoreSet::group_ids() const {
  if (!groups_) return {};
  std::set<GroupId> ids(groups_->begin(), groups_->end());
  return {ids.begin(), ids.end()};
}

}  // namespace rankgap
