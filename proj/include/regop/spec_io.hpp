#pragma once

#include <istream>
#include <map>
#include <string>
#include <vector>

#include "regop/types.hpp"

/// Structured-text spec files:
///
///   # comment
///   [grid]
///   n_x = 400
///   [operator]
///   action = 1,0 0,-1  2 0.5e-1,0
///
/// Sections: algebra, operator, gauge, grid. Lists are whitespace separated,
/// complex entries are "re,im" (a bare real is allowed). Keys may repeat
/// where a section collects several rows.
namespace regop {

struct SpecEntry {
  std::string key;
  std::string value;
  int line = 0;
};

class SpecFile {
 public:
  static SpecFile parse(std::istream& in, std::string source = "<input>");
  static SpecFile load(const std::string& path);

  const std::string& source() const { return source_; }
  bool has_section(const std::string& name) const { return sections_.count(name) > 0; }

  /// Throws MalformedSpec naming the line of the first key outside `allowed`.
  void require_keys(const std::string& section, const std::vector<std::string>& allowed) const;

  bool has(const std::string& section, const std::string& key) const;
  /// All values of a repeated key, in file order.
  std::vector<SpecEntry> all(const std::string& section, const std::string& key) const;

  std::string text(const std::string& section, const std::string& key,
                   const std::string& fallback) const;
  double number(const std::string& section, const std::string& key, double fallback) const;
  Index integer(const std::string& section, const std::string& key, Index fallback) const;
  std::vector<double> numbers(const std::string& section, const std::string& key) const;

  /// Throws MalformedSpec at `line` of this file.
  [[noreturn]] void fail(int line, const std::string& message) const;

  std::vector<double> parse_reals(const SpecEntry& e) const;
  std::vector<Complex> parse_complexes(const SpecEntry& e) const;
  /// Row-major square matrix from a complex list.
  Matrix parse_square(const SpecEntry& e, Index n) const;

 private:
  const SpecEntry* find(const std::string& section, const std::string& key) const;

  std::string source_;
  std::map<std::string, std::vector<SpecEntry>> sections_;
};

}  // namespace regop
