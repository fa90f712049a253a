#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace gerbelab::cli {

/// Ordered key/value report rendered either as indented text or as JSON.
/// Floating-point values are formatted with a fixed number of significant
/// digits in text; JSON keeps full precision. Both renderings depend only
/// on the order and content of the calls, so identical inputs give
/// identical bytes.
class Report {
 public:
  explicit Report(std::string command);

  void input(const std::string& path, const std::string& digest);

  /// Nested group of entries; closed by end().
  void begin(const std::string& name);
  void end();

  void put(const std::string& key, const std::string& value);
  void put(const std::string& key, const char* value) { put(key, std::string(value)); }
  void put(const std::string& key, long long value);
  void put(const std::string& key, int value) { put(key, static_cast<long long>(value)); }
  void put(const std::string& key, std::size_t value) { put(key, static_cast<long long>(value)); }
  void put(const std::string& key, double value);
  void put(const std::string& key, bool value);
  void put(const std::string& key, const std::vector<long long>& values);

  /// A table cell is either text or a number; numbers follow the float
  /// formatting of put(double).
  struct Cell {
    nlohmann::ordered_json value;
    Cell(const std::string& s) : value(s) {}
    Cell(const char* s) : value(std::string(s)) {}
    Cell(long long v) : value(v) {}
    Cell(int v) : value(static_cast<long long>(v)) {}
    Cell(double v) : value(v) {}
  };
  void table(const std::string& key, const std::vector<std::string>& columns, const std::vector<std::vector<Cell>>& rows);

  /// Named PASS/FAIL line; any FAIL makes passed() false.
  void verdict(const std::string& key, bool pass, const std::string& detail = {});
  bool passed() const noexcept { return passed_; }

  std::string text() const;
  std::string json() const;

  /// 6 significant digits in scientific notation, -0 printed as 0.
  static std::string format(double v);

 private:
  struct Line {
    int depth;
    std::string text;
  };
  nlohmann::ordered_json& current();
  void emit(const std::string& key, const std::string& rendered, nlohmann::ordered_json value);

  nlohmann::ordered_json root_;
  std::vector<std::string> path_;
  std::vector<Line> lines_;
  bool passed_ = true;
};

}  // namespace gerbelab::cli
