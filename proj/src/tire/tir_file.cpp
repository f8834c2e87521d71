#include "laptime/tire/tir_file.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "laptime/error.hpp"

namespace laptime::tire {
namespace {

std::string trim(std::string_view s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

// Strips a trailing `$` or `!` comment that is not inside quotes.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (c == '\'' || c == '"') quoted = !quoted;
    if (!quoted && (c == '$' || c == '!')) return line.substr(0, i);
  }
  return line;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  // from_chars rejects a leading '+', which .tir writers sometimes emit.
  std::string_view v = s;
  if (v.front() == '+') v.remove_prefix(1);
  // Fortran-style exponents (1.0D+03).
  std::string tmp(v);
  std::replace(tmp.begin(), tmp.end(), 'D', 'E');
  std::replace(tmp.begin(), tmp.end(), 'd', 'e');
  auto [ptr, ec] = std::from_chars(tmp.data(), tmp.data() + tmp.size(), out);
  return ec == std::errc() && ptr == tmp.data() + tmp.size();
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

TirFile TirFile::parse(const std::string& text, const std::string& source) {
  TirFile f;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  TirSection* current = nullptr;
  bool in_table = false;

  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(source, lineno, "unterminated section header");
      std::string name = upper(trim(std::string_view(line).substr(1, line.size() - 2)));
      if (name.empty()) throw ParseError(source, lineno, "empty section name");
      current = &f.section(name);
      in_table = false;
      continue;
    }
    if (line.front() == '{') {
      if (!current) throw ParseError(source, lineno, "table header outside a section");
      current->table_header = line;
      in_table = true;
      continue;
    }
    if (line.front() == '(') continue;  // sub-block markers such as (COMMENTS)

    auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (in_table) {
        std::istringstream row(line);
        std::vector<double> vals;
        std::string tok;
        while (row >> tok) {
          double v;
          if (!parse_double(tok, v)) throw ParseError(source, lineno, "non-numeric table entry '" + tok + "'");
          vals.push_back(v);
        }
        current->table_rows.push_back(std::move(vals));
        continue;
      }
      throw ParseError(source, lineno, "malformed line (expected KEY = VALUE): '" + line + "'");
    }
    if (!current) throw ParseError(source, lineno, "key outside of any section");

    std::string key = upper(trim(std::string_view(line).substr(0, eq)));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ParseError(source, lineno, "missing key before '='");
    if (value.empty()) throw ParseError(source, lineno, "missing value for key " + key);

    TirEntry e;
    e.key = key;
    if (value.front() == '\'' || value.front() == '"') {
      char q = value.front();
      auto close = value.find(q, 1);
      if (close == std::string::npos) throw ParseError(source, lineno, "unterminated string for key " + key);
      e.is_string = true;
      e.text = value.substr(1, close - 1);
    } else if (!parse_double(value, e.number)) {
      throw ParseError(source, lineno, "non-numeric value '" + value + "' for numeric key " + key);
    }

    // Last occurrence wins, wherever the earlier one lives.
    for (auto& s : f.sections_) {
      auto it = std::find_if(s.entries.begin(), s.entries.end(), [&](const TirEntry& x) { return x.key == key; });
      if (it != s.entries.end()) {
        f.warnings_.push_back(source + ":" + std::to_string(lineno) + ": duplicate key " + key + " (last value wins)");
        s.entries.erase(it);
        break;
      }
    }
    current->entries.push_back(std::move(e));
  }

  for (const char* key : {"FNOMIN", "UNLOADED_RADIUS"}) {
    auto v = f.number(key);
    if (!v) throw ParseError(source, lineno, std::string("missing mandatory key ") + key);
    if (!(*v > 0.0)) throw ParseError(source, lineno, std::string(key) + " must be positive");
  }
  if (auto k = f.number("VERTICAL_STIFFNESS"); k && !(*k > 0.0)) {
    throw ParseError(source, lineno, "VERTICAL_STIFFNESS must be positive");
  }
  return f;
}

TirFile TirFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open tire file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

std::string TirFile::serialize() const {
  std::ostringstream out;
  out << "$ written by laptime\n";
  for (const auto& s : sections_) {
    out << "[" << s.name << "]\n";
    for (const auto& e : s.entries) {
      out << e.key << " = ";
      if (e.is_string) {
        out << "'" << e.text << "'";
      } else {
        out << format_number(e.number);
      }
      out << "\n";
    }
    if (!s.table_header.empty()) {
      out << s.table_header << "\n";
      for (const auto& row : s.table_rows) {
        for (size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << format_number(row[i]);
        out << "\n";
      }
    }
  }
  return out.str();
}

void TirFile::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write tire file " + path);
  out << serialize();
}

const TirEntry* TirFile::find(const std::string& key) const {
  for (const auto& s : sections_) {
    for (const auto& e : s.entries) {
      if (e.key == key) return &e;
    }
  }
  return nullptr;
}

std::optional<double> TirFile::number(const std::string& key) const {
  const TirEntry* e = find(key);
  if (!e || e->is_string) return std::nullopt;
  return e->number;
}

std::optional<std::string> TirFile::text(const std::string& key) const {
  const TirEntry* e = find(key);
  if (!e || !e->is_string) return std::nullopt;
  return e->text;
}

bool TirFile::has(const std::string& key) const { return find(key) != nullptr; }

void TirFile::set(const std::string& section_name, const std::string& key, double value) {
  std::string k = upper(key);
  for (auto& s : sections_) {
    for (auto& e : s.entries) {
      if (e.key == k) {
        e.is_string = false;
        e.number = value;
        return;
      }
    }
  }
  TirEntry e;
  e.key = k;
  e.number = value;
  section(upper(section_name)).entries.push_back(e);
}

TirSection& TirFile::section(const std::string& name) {
  for (auto& s : sections_) {
    if (s.name == name) return s;
  }
  sections_.push_back(TirSection{name, {}, {}, {}});
  return sections_.back();
}

}  // namespace laptime::tire
