#include "gerbelab/cli/report.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace gerbelab::cli {

using OJson = nlohmann::ordered_json;

namespace {

std::string render_cell(const OJson& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  return Report::format(v.get<double>());
}

}  // namespace

Report::Report(std::string command) {
  root_["command"] = command;
  root_["inputs"] = OJson::array();
  lines_.push_back({0, "command: " + command});
}

void Report::input(const std::string& path, const std::string& digest) {
  root_["inputs"].push_back(OJson{{"path", path}, {"fnv1a", digest}});
  lines_.push_back({0, fmt::format("input: {} fnv1a={}", path, digest)});
}

OJson& Report::current() {
  OJson* node = &root_;
  for (const auto& p : path_) node = &(*node)[p];
  return *node;
}

void Report::begin(const std::string& name) {
  lines_.push_back({static_cast<int>(path_.size()), name + ":"});
  current()[name] = OJson::object();
  path_.push_back(name);
}

void Report::end() {
  if (!path_.empty()) path_.pop_back();
}

void Report::emit(const std::string& key, const std::string& rendered, OJson value) {
  lines_.push_back({static_cast<int>(path_.size()), key + ": " + rendered});
  current()[key] = std::move(value);
}

std::string Report::format(double v) {
  if (v == 0.0) v = 0.0;
  if (std::isnan(v)) return "nan";
  return fmt::format("{:.6e}", v);
}

void Report::put(const std::string& key, const std::string& value) { emit(key, value, value); }

void Report::put(const std::string& key, long long value) { emit(key, std::to_string(value), value); }

void Report::put(const std::string& key, double value) {
  if (value == 0.0) value = 0.0;
  emit(key, format(value), std::isfinite(value) ? OJson(value) : OJson(format(value)));
}

void Report::put(const std::string& key, bool value) { emit(key, value ? "yes" : "no", value); }

void Report::put(const std::string& key, const std::vector<long long>& values) {
  std::vector<std::string> parts;
  for (auto v : values) parts.push_back(std::to_string(v));
  emit(key, "[" + fmt::format("{}", fmt::join(parts, ", ")) + "]", values);
}

void Report::table(const std::string& key, const std::vector<std::string>& columns,
                   const std::vector<std::vector<Cell>>& rows) {
  std::vector<std::size_t> width(columns.size());
  std::vector<std::vector<std::string>> cells;
  for (std::size_t c = 0; c < columns.size(); ++c) width[c] = columns[c].size();
  OJson arr = OJson::array();
  for (const auto& row : rows) {
    OJson obj = OJson::object();
    std::vector<std::string> rendered;
    for (std::size_t c = 0; c < columns.size() && c < row.size(); ++c) {
      OJson v = row[c].value;
      if (v.is_number_float() && v.get<double>() == 0.0) v = 0.0;
      obj[columns[c]] = v;
      rendered.push_back(render_cell(v));
      width[c] = std::max(width[c], rendered.back().size());
    }
    arr.push_back(std::move(obj));
    cells.push_back(std::move(rendered));
  }
  const int depth = static_cast<int>(path_.size());
  lines_.push_back({depth, key + ":"});
  auto row_text = [&](const std::vector<std::string>& r) {
    std::string s;
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c) s += "  ";
      s += fmt::format("{:>{}}", r[c], width[c]);
    }
    return s;
  };
  lines_.push_back({depth + 1, row_text(columns)});
  for (const auto& r : cells) lines_.push_back({depth + 1, row_text(r)});
  current()[key] = std::move(arr);
}

void Report::verdict(const std::string& key, bool pass, const std::string& detail) {
  passed_ = passed_ && pass;
  const std::string word = pass ? "PASS" : "FAIL";
  lines_.push_back({static_cast<int>(path_.size()), key + ": " + word + (detail.empty() ? "" : " (" + detail + ")")});
  OJson v{{"result", word}};
  if (!detail.empty()) v["detail"] = detail;
  current()[key] = std::move(v);
}

std::string Report::text() const {
  std::string out;
  for (const auto& l : lines_) {
    out.append(static_cast<std::size_t>(2 * l.depth), ' ');
    out += l.text;
    out += '\n';
  }
  out += fmt::format("status: {}\n", passed_ ? "PASS" : "FAIL");
  return out;
}

std::string Report::json() const {
  OJson copy = root_;
  copy["status"] = passed_ ? "PASS" : "FAIL";
  return copy.dump(2) + "\n";
}

}  // namespace gerbelab::cli
