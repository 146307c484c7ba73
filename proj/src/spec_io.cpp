#include "regop/spec_io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "regop/errors.hpp"

namespace regop {

namespace {

const std::vector<std::string> kSections{"algebra", "operator", "gauge", "grid"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> tokens(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

bool to_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  errno = 0;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return errno == 0 && end == s.c_str() + s.size() && std::isfinite(out);
}

}  // namespace

SpecFile SpecFile::parse(std::istream& in, std::string source) {
  SpecFile f;
  f.source_ = std::move(source);
  std::string current;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') f.fail(line, "unterminated section header");
      current = trim(s.substr(1, s.size() - 2));
      if (std::find(kSections.begin(), kSections.end(), current) == kSections.end()) {
        f.fail(line, "unknown section [" + current + "]");
      }
      f.sections_[current];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) f.fail(line, "expected key = value");
    if (current.empty()) f.fail(line, "entry outside of any section");
    SpecEntry e{trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line};
    if (e.key.empty()) f.fail(line, "empty key");
    f.sections_[current].push_back(std::move(e));
  }
  return f;
}

SpecFile SpecFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedSpec, "cannot read spec file " + path);
  return parse(in, path);
}

void SpecFile::fail(int line, const std::string& message) const {
  throw Error(ErrorCode::MalformedSpec, source_ + ":" + std::to_string(line) + ": " + message);
}

void SpecFile::require_keys(const std::string& section, const std::vector<std::string>& allowed) const {
  auto it = sections_.find(section);
  if (it == sections_.end()) return;
  for (const auto& e : it->second) {
    if (std::find(allowed.begin(), allowed.end(), e.key) == allowed.end()) {
      fail(e.line, "unknown key '" + e.key + "' in [" + section + "]");
    }
  }
}

const SpecEntry* SpecFile::find(const std::string& section, const std::string& key) const {
  auto it = sections_.find(section);
  if (it == sections_.end()) return nullptr;
  const SpecEntry* hit = nullptr;
  for (const auto& e : it->second) {
    if (e.key != key) continue;
    if (hit) fail(e.line, "key '" + key + "' given twice");
    hit = &e;
  }
  return hit;
}

bool SpecFile::has(const std::string& section, const std::string& key) const {
  return !all(section, key).empty();
}

std::vector<SpecEntry> SpecFile::all(const std::string& section, const std::string& key) const {
  std::vector<SpecEntry> out;
  auto it = sections_.find(section);
  if (it == sections_.end()) return out;
  for (const auto& e : it->second)
    if (e.key == key) out.push_back(e);
  return out;
}

std::string SpecFile::text(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
  const SpecEntry* e = find(section, key);
  return e ? e->value : fallback;
}

double SpecFile::number(const std::string& section, const std::string& key, double fallback) const {
  const SpecEntry* e = find(section, key);
  if (!e) return fallback;
  double v = 0.0;
  if (!to_double(e->value, v)) fail(e->line, "'" + e->value + "' is not a number");
  return v;
}

Index SpecFile::integer(const std::string& section, const std::string& key, Index fallback) const {
  const SpecEntry* e = find(section, key);
  if (!e) return fallback;
  double v = 0.0;
  if (!to_double(e->value, v) || v != std::floor(v)) {
    fail(e->line, "'" + e->value + "' is not an integer");
  }
  return static_cast<Index>(v);
}

std::vector<double> SpecFile::numbers(const std::string& section, const std::string& key) const {
  const SpecEntry* e = find(section, key);
  return e ? parse_reals(*e) : std::vector<double>{};
}

std::vector<double> SpecFile::parse_reals(const SpecEntry& e) const {
  std::vector<double> out;
  for (const auto& t : tokens(e.value)) {
    double v = 0.0;
    if (!to_double(t, v)) fail(e.line, "'" + t + "' is not a number");
    out.push_back(v);
  }
  return out;
}

std::vector<Complex> SpecFile::parse_complexes(const SpecEntry& e) const {
  std::vector<Complex> out;
  for (const auto& t : tokens(e.value)) {
    const auto comma = t.find(',');
    double re = 0.0, im = 0.0;
    const bool ok = comma == std::string::npos
                        ? to_double(t, re)
                        : to_double(t.substr(0, comma), re) && to_double(t.substr(comma + 1), im);
    if (!ok) fail(e.line, "'" + t + "' is not a complex entry (re,im)");
    out.emplace_back(re, im);
  }
  return out;
}

Matrix SpecFile::parse_square(const SpecEntry& e, Index n) const {
  const std::vector<Complex> v = parse_complexes(e);
  if (static_cast<Index>(v.size()) != n * n) {
    fail(e.line, "expected " + std::to_string(n * n) + " entries, got " + std::to_string(v.size()));
  }
  Matrix m(n, n);
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c) m(r, c) = v[static_cast<std::size_t>(r * n + c)];
  return m;
}

}  // namespace regop
