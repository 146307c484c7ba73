#include "regop/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

namespace regop {

Report::Report(std::string command) : command_(std::move(command)) {}

std::string Report::num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

void Report::param(const std::string& key, const std::string& value) {
  lines_.push_back("config." + key + " = " + value);
}

void Report::param(const std::string& key, double value) { param(key, num(value)); }

bool Report::check(const std::string& key, double value, Bound bound, double tol, double hi) {
  bool ok = false;
  std::string bound_text;
  switch (bound) {
    case Bound::AtMost:
      ok = value <= tol;
      bound_text = "<= " + num(tol);
      break;
    case Bound::AtLeast:
      ok = value >= tol;
      bound_text = ">= " + num(tol);
      break;
    case Bound::Within:
      ok = value >= tol && value <= hi;
      bound_text = "in [" + num(tol) + ", " + num(hi) + "]";
      break;
  }
  if (!ok) ++failures_;
  lines_.push_back(key + " = " + num(value) + " ; tol " + bound_text + " ; " + (ok ? "PASS" : "FAIL"));
  return ok;
}

void Report::info(const std::string& key, double value) {
  lines_.push_back(key + " = " + num(value) + " ; tol none");
}

void Report::text(const std::string& key, const std::string& value) {
  lines_.push_back(key + " = " + value);
}

void Report::table(const std::string& name, std::vector<std::string> header,
                   std::vector<std::vector<std::string>> rows) {
  tables_.push_back({name, std::move(header), std::move(rows)});
}

void Report::write(std::ostream& out, const std::string& timestamp) const {
  out << "# regop report generated " << timestamp << "\n";
  out << "command = " << command_ << "\n";
  for (const auto& l : lines_) out << l << "\n";
  for (const auto& t : tables_) {
    out << "\n[table " << t.name << "]\n";
    for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
    out << "\n";
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
      out << "\n";
    }
  }
  out << "\nverdict = " << verdict_ << "\n";
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace regop
