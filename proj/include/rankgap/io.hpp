#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "rankgap/analysis.hpp"
#include "rankgap/score_set.hpp"

namespace rankgap {

// Score CSV: header `score,label` or `score,label,group`, one row per sample,
// LF line endings. Canonical form writes scores with nine decimals.
//
// Parse errors name the 1-based file line. Sample i lives on line i + 2.
ScoreSet parse_score_csv(std::istream& in, const std::string& source);
ScoreSet read_score_csv(const std::filesystem::path& path);
void write_score_csv(const ScoreSet& s, std::ostream& out);
void write_score_csv(const ScoreSet& s, const std::filesystem::path& path);

inline std::size_t csv_line_of_sample(std::size_t sample) { return sample + 2; }

// Nine-decimal fixed formatting used by every CSV this library writes.
std::string format_fixed(double value);

// Run-record CSV. Required columns:
//   run_id, split_id, seed, val_auroc, val_auprc, group_a, group_b,
//   prevalence_a, prevalence_b, test_auroc_a, test_auroc_b,
//   test_auprc_a, test_auprc_b
// Optional: dataset (default "default"), group_weight (default 1), hparams.
// Columns may appear in any order; fields may not contain commas.
std::vector<RunRecord> parse_run_records(std::istream& in, const std::string& source);
std::vector<RunRecord> read_run_records(const std::filesystem::path& path);
void write_run_records(const std::vector<RunRecord>& records, std::ostream& out);

}  // namespace rankgap
