#include "fairlens/scores_csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

#include "fairlens/error.hpp"

namespace fairlens {
namespace {

constexpr std::string_view kHeader = "pair_id,group,kind,score";

std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::kMalformedInput, "line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

ComparisonScoreSet read_scores_csv(std::istream& source) {
  ComparisonScoreSet set;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(source, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (!header_seen) {
      if (text != kHeader) {
        fail(line_no, "expected header '" + std::string(kHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    if (text.empty()) continue;
    const auto fields = split(text);
    if (fields.size() != 4) {
      fail(line_no, "missing column: expected 4 fields, found " + std::to_string(fields.size()));
    }
    ScoreEntry e;
    e.pair_id = std::string(fields[0]);
    e.group = std::string(fields[1]);
    if (e.group.empty()) fail(line_no, "empty group label");
    if (fields[2] == "genuine") {
      e.kind = PairKind::kGenuine;
    } else if (fields[2] == "imposter") {
      e.kind = PairKind::kImposter;
    } else {
      fail(line_no, "unknown kind '" + std::string(fields[2]) + "'");
    }
    const std::string_view sv = fields[3];
    const auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), e.score);
    if (ec != std::errc() || ptr != sv.data() + sv.size() || sv.empty() ||
        !std::isfinite(e.score)) {
      fail(line_no, "unparseable score '" + std::string(sv) + "'");
    }
    set.entries.push_back(std::move(e));
  }
  if (!header_seen) fail(1, "empty file, expected header '" + std::string(kHeader) + "'");
  return set;
}

ComparisonScoreSet read_scores_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  try {
    return read_scores_csv(in);
  } catch (const Error& err) {
    throw Error(err.code(), path + ": " + err.what());
  }
}

void write_scores_csv(const ComparisonScoreSet& scores, std::ostream& sink) {
  sink << kHeader << '\n';
  char buf[64];
  for (const auto& e : scores.entries) {
    std::snprintf(buf, sizeof buf, "%.17g", e.score);
    sink << e.pair_id << ',' << e.group << ','
         << (e.kind == PairKind::kGenuine ? "genuine" : "imposter") << ',' << buf << '\n';
  }
}

void write_scores_csv_file(const ComparisonScoreSet& scores, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path + " for writing");
  write_scores_csv(scores, out);
}

}  // namespace fairlens
