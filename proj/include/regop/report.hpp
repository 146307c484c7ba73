#pragma once

#include <ostream>
#include <string>
#include <vector>

/// Flat key-value report plus CSV tables. Only the first line (timestamp)
/// varies between identical runs.
namespace regop {

enum class Bound { AtMost, AtLeast, Within };

class Report {
 public:
  explicit Report(std::string command);

  void param(const std::string& key, const std::string& value);
  void param(const std::string& key, double value);

  /// Records value together with the bound it was tested against; returns the
  /// outcome. Within means value in [lo, hi].
  bool check(const std::string& key, double value, Bound bound, double tol, double hi = 0.0);
  /// A numeric that is reported but not tested ("tol = none").
  void info(const std::string& key, double value);
  void text(const std::string& key, const std::string& value);

  void table(const std::string& name, std::vector<std::string> header,
             std::vector<std::vector<std::string>> rows);

  void verdict(const std::string& v) { verdict_ = v; }
  const std::string& verdict() const { return verdict_; }
  bool all_checks_passed() const { return failures_ == 0; }

  void write(std::ostream& out, const std::string& timestamp) const;

  static std::string num(double v);

 private:
  struct Table {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
  };

  std::string command_;
  std::vector<std::string> lines_;
  std::vector<Table> tables_;
  std::string verdict_;
  int failures_ = 0;
};

std::string utc_timestamp();

}  // namespace regop
