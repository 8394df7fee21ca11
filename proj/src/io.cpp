#include "rankgap/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "rankgap/errors.hpp"

namespace rankgap {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t begin = 0;
  for (;;) {
    const std::size_t comma = line.find(',', begin);
    fields.push_back(line.substr(begin, comma - begin));
    if (comma == std::string::npos) break;
    begin = comma + 1;
  }
  return fields;
}

std::string where(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line) + ": ";
}

std::optional<double> to_double(const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) return std::nullopt;
  return v;
}

std::optional<std::uint64_t> to_uint(const std::string& text) {
  std::uint64_t v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) return std::nullopt;
  return v;
}

// Reads lines, rejecting CR and tolerating one trailing newline only.
std::vector<std::string> read_lines(std::istream& in, const std::string& source) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') {
      throw DataError(where(source, lines.size() + 1) + "CRLF line endings are not supported");
    }
    lines.push_back(std::move(line));
  }
  if (lines.empty()) throw DataError(source + ": file is empty");
  return lines;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

std::string format_fixed(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", value);
  return buf;
}

ScoreSet parse_score_csv(std::istream& in, const std::string& source) {
  const auto lines = read_lines(in, source);
  const std::string& header = lines.front();
  bool with_groups = false;
  if (header == "score,label,group") {
    with_groups = true;
  } else if (header != "score,label") {
    throw DataError(where(source, 1) + "expected header 'score,label' or 'score,label,group', got '" +
                    header + "'");
  }
  const std::size_t columns = with_groups ? 3 : 2;
  std::vector<double> scores;
  std::vector<std::uint8_t> labels;
  std::vector<GroupId> groups;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const auto fields = split_fields(lines[i]);
    if (fields.size() != columns) {
      throw DataError(where(source, line_no) + "expected " + std::to_string(columns) +
                      " fields, got " + std::to_string(fields.size()));
    }
    const auto score = to_double(fields[0]);
    if (!score) throw DataError(where(source, line_no) + "score '" + fields[0] + "' is not a number");
    if (!(*score > 0.0 && *score < 1.0)) {
      throw DataError(where(source, line_no) + "score " + fields[0] + " is outside (0,1)");
    }
    if (fields[1] != "0" && fields[1] != "1") {
      throw DataError(where(source, line_no) + "label '" + fields[1] + "' is not 0 or 1");
    }
    scores.push_back(*score);
    labels.push_back(fields[1] == "1" ? 1 : 0);
    if (with_groups) {
      const auto g = to_uint(fields[2]);
      if (!g || *g > 0xFFFFFFFFull) {
        throw DataError(where(source, line_no) + "group '" + fields[2] +
                        "' is not a non-negative integer");
      }
      groups.push_back(static_cast<GroupId>(*g));
    }
  }
  if (scores.empty()) throw DataError(source + ": no data rows");
  if (with_groups) return ScoreSet(std::move(scores), std::move(labels), std::move(groups));
  return ScoreSet(std::move(scores), std::move(labels));
}

ScoreSet read_score_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_score_csv(in, path.string());
}

void write_score_csv(const ScoreSet& s, std::ostream& out) {
  out << (s.has_groups() ? "score,label,group\n" : "score,label\n");
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << format_fixed(s.score(i)) << ',' << (s.positive(i) ? '1' : '0');
    if (s.has_groups()) out << ',' << *s.group(i);
    out << '\n';
  }
}

void write_score_csv(const ScoreSet& s, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  write_score_csv(s, out);
}

std::vector<RunRecord> parse_run_records(std::istream& in, const std::string& source) {
  const auto lines = read_lines(in, source);
  const auto header = split_fields(lines.front());
  std::map<std::string, std::size_t> column;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (!column.emplace(header[c], c).second) {
      throw DataError(where(source, 1) + "duplicate column '" + header[c] + "'");
    }
  }
  static const char* const kRequired[] = {
      "run_id",       "split_id",     "seed",         "val_auroc",    "val_auprc",
      "group_a",      "group_b",      "prevalence_a", "prevalence_b", "test_auroc_a",
      "test_auroc_b", "test_auprc_a", "test_auprc_b"};
  std::string missing;
  for (const char* name : kRequired) {
    if (!column.count(name)) missing += std::string(missing.empty() ? "" : ", ") + name;
  }
  if (!missing.empty()) throw DataError(where(source, 1) + "missing required column(s): " + missing);

  std::vector<RunRecord> records;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const auto fields = split_fields(lines[i]);
    if (fields.size() != header.size()) {
      throw DataError(where(source, line_no) + "expected " + std::to_string(header.size()) +
                      " fields, got " + std::to_string(fields.size()));
    }
    auto text = [&](const char* name, const char* fallback) -> std::string {
      auto it = column.find(name);
      return it == column.end() ? fallback : fields[it->second];
    };
    auto real = [&](const char* name, const char* fallback = nullptr) {
      const std::string t = text(name, fallback ? fallback : "");
      const auto v = to_double(t);
      if (!v) throw DataError(where(source, line_no) + "column " + name + ": '" + t + "' is not a number");
      return *v;
    };
    auto integer = [&](const char* name) {
      const std::string t = text(name, "");
      const auto v = to_uint(t);
      if (!v) {
        throw DataError(where(source, line_no) + "column " + name + ": '" + t +
                        "' is not a non-negative integer");
      }
      return *v;
    };
    RunRecord r;
    r.dataset = text("dataset", "default");
    r.run_id = text("run_id", "");
    r.split_id = text("split_id", "");
    r.seed = integer("seed");
    r.val_auroc = real("val_auroc");
    r.val_auprc = real("val_auprc");
    r.group_a = static_cast<GroupId>(integer("group_a"));
    r.group_b = static_cast<GroupId>(integer("group_b"));
    r.prevalence_a = real("prevalence_a");
    r.prevalence_b = real("prevalence_b");
    r.test_auroc_a = real("test_auroc_a");
    r.test_auroc_b = real("test_auroc_b");
    r.test_auprc_a = real("test_auprc_a");
    r.test_auprc_b = real("test_auprc_b");
    r.group_weight = real("group_weight", "1");
    r.hparams = text("hparams", "");
    if (r.group_a == r.group_b) throw DataError(where(source, line_no) + "group_a equals group_b");
    records.push_back(std::move(r));
  }
  if (records.empty()) throw DataError(source + ": no data rows");
  return records;
}

std::vector<RunRecord> read_run_records(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_run_records(in, path.string());
}

void write_run_records(const std::vector<RunRecord>& records, std::ostream& out) {
  out << "dataset,run_id,split_id,seed,val_auroc,val_auprc,group_a,group_b,prevalence_a,"
         "prevalence_b,test_auroc_a,test_auroc_b,test_auprc_a,test_auprc_b,group_weight,hparams\n";
  for (const auto& r : records) {
    out << r.dataset << ',' << r.run_id << ',' << r.split_id << ',' << r.seed << ','
        << format_fixed(r.val_auroc) << ',' << format_fixed(r.val_auprc) << ',' << r.group_a << ','
        << r.group_b << ',' << format_fixed(r.prevalence_a) << ',' << format_fixed(r.prevalence_b)
        << ',' << format_fixed(r.test_auroc_a) << ',' << format_fixed(r.test_auroc_b) << ','
        << format_fixed(r.test_auprc_a) << ',' << format_fixed(r.test_auprc_b) << ','
        << format_fixed(r.group_weight) << ',' << r.hparams << '\n';
  }
}

}  // namespace rankgap
