#include "stabcert/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

#include "stabcert/rng.hpp"  // detail::fnv1a64

namespace stabcert {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(cur);
  return cells;
}

// Strict double parse: whole cell must be consumed, value must be finite.
double parse_cell(const std::string& cell, const std::string& origin,
                  std::size_t line_no) {
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  // Tolerate surrounding spaces only.
  while (first < last && (*first == ' ' || *first == '\t')) ++first;
  while (last > first && (*(last - 1) == ' ' || *(last - 1) == '\t')) --last;
  double v = 0.0;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || first == last)
    fail(ErrorCode::parse, origin + ":" + std::to_string(line_no) +
                               ": cannot parse '" + cell + "' as a number");
  if (!std::isfinite(v))
    fail(ErrorCode::parse, origin + ":" + std::to_string(line_no) +
                               ": non-finite value '" + cell + "'");
  return v;
}

// Collect non-empty lines with their 1-based line numbers; tolerates CRLF
// and a trailing newline.
std::vector<std::pair<std::size_t, std::string>> logical_lines(
    const std::string& text) {
  std::vector<std::pair<std::size_t, std::string>> out;
  std::string cur;
  std::size_t line_no = 1;
  auto flush = [&] {
    if (!cur.empty() && cur.back() == '\r') cur.pop_back();
    if (!cur.empty()) out.emplace_back(line_no, cur);
    cur.clear();
    ++line_no;
  };
  for (char c : text) {
    if (c == '\n')
      flush();
    else
      cur += c;
  }
  flush();
  return out;
}

// Validates the header and returns the feature dimension.
std::int64_t check_header(const std::vector<std::string>& cells, bool labeled,
                          const std::string& origin) {
  const std::size_t want_min = labeled ? 2 : 1;
  if (cells.size() < want_min)
    fail(ErrorCode::parse, origin + ":1: header has too few columns");
  const std::size_t d = cells.size() - (labeled ? 1 : 0);
  for (std::size_t i = 0; i < d; ++i) {
    const std::string want = "x" + std::to_string(i + 1);
    if (cells[i] != want)
      fail(ErrorCode::parse, origin + ":1: expected header column '" + want +
                                 "', found '" + cells[i] + "'");
  }
  if (labeled && cells.back() != "y")
    fail(ErrorCode::parse,
         origin + ":1: labeled file must end with a 'y' column, found '" +
             cells.back() + "'");
  return static_cast<std::int64_t>(d);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(ErrorCode::io, "read error on '" + path + "'");
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io, "cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) fail(ErrorCode::io, "write error on '" + path + "'");
}

}  // namespace

LabeledDataset parse_labeled_csv(const std::string& text,
                                 const std::string& origin) {
  const auto lines = logical_lines(text);
  if (lines.empty()) fail(ErrorCode::parse, origin + ": empty file");
  const auto header = split_csv_line(lines[0].second);
  const std::int64_t d = check_header(header, /*labeled=*/true, origin);
  LabeledDataset out(d);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [line_no, line] = lines[i];
    const auto cells = split_csv_line(line);
    if (static_cast<std::int64_t>(cells.size()) != d + 1)
      fail(ErrorCode::parse,
           origin + ":" + std::to_string(line_no) + ": expected " +
               std::to_string(d + 1) + " columns, found " +
               std::to_string(cells.size()));
    LabeledPoint p;
    p.x.reserve(static_cast<std::size_t>(d));
    for (std::int64_t j = 0; j < d; ++j)
      p.x.push_back(parse_cell(cells[static_cast<std::size_t>(j)], origin, line_no));
    p.y = parse_cell(cells.back(), origin, line_no);
    out.add(std::move(p));
  }
  return out;
}

UnlabeledDataset parse_unlabeled_csv(const std::string& text,
                                     const std::string& origin) {
  const auto lines = logical_lines(text);
  if (lines.empty()) fail(ErrorCode::parse, origin + ": empty file");
  const auto header = split_csv_line(lines[0].second);
  const std::int64_t d = check_header(header, /*labeled=*/false, origin);
  UnlabeledDataset out(d);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [line_no, line] = lines[i];
    const auto cells = split_csv_line(line);
    if (static_cast<std::int64_t>(cells.size()) != d)
      fail(ErrorCode::parse,
           origin + ":" + std::to_string(line_no) + ": expected " +
               std::to_string(d) + " columns, found " +
               std::to_string(cells.size()));
    FeatureVector x;
    x.reserve(static_cast<std::size_t>(d));
    for (std::int64_t j = 0; j < d; ++j)
      x.push_back(parse_cell(cells[static_cast<std::size_t>(j)], origin, line_no));
    out.add(std::move(x));
  }
  return out;
}

LabeledDataset load_labeled_csv(const std::string& path) {
  return parse_labeled_csv(read_file(path), path);
}

UnlabeledDataset load_unlabeled_csv(const std::string& path) {
  return parse_unlabeled_csv(read_file(path), path);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string labeled_to_csv(const LabeledDataset& data) {
  std::string out;
  for (std::int64_t j = 1; j <= data.dim(); ++j) {
    out += "x" + std::to_string(j) + ",";
  }
  out += "y\n";
  for (const auto& p : data.points()) {
    for (double c : p.x) {
      out += format_double(c);
      out += ',';
    }
    out += format_double(p.y);
    out += '\n';
  }
  return out;
}

std::string unlabeled_to_csv(const UnlabeledDataset& data) {
  std::string out;
  for (std::int64_t j = 1; j <= data.dim(); ++j) {
    if (j > 1) out += ',';
    out += "x" + std::to_string(j);
  }
  out += '\n';
  for (const auto& x : data.points()) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (j > 0) out += ',';
      out += format_double(x[j]);
    }
    out += '\n';
  }
  return out;
}

void save_labeled_csv(const LabeledDataset& data, const std::string& path) {
  write_file(path, labeled_to_csv(data));
}

void save_unlabeled_csv(const UnlabeledDataset& data, const std::string& path) {
  write_file(path, unlabeled_to_csv(data));
}

namespace {
std::string hex64(std::uint64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}
}  // namespace

std::string labeled_digest(const LabeledDataset& data) {
  return hex64(detail::fnv1a64(labeled_to_csv(data)));
}

std::string unlabeled_digest(const UnlabeledDataset& data) {
  return hex64(detail::fnv1a64(unlabeled_to_csv(data)));
}

}  // namespace stabcert
