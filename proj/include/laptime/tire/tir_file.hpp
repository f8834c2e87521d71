#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace laptime::tire {

// Contents of a .tir property file. Numeric keys and quoted string keys are
// kept per section in file order so the file can be written back.
struct TirEntry {
  std::string key;
  bool is_string = false;
  double number = 0.0;
  std::string text;
};

struct TirSection {
  std::string name;
  std::vector<TirEntry> entries;
  // Free-form rows below a `{...}` header, e.g. [SHAPE] tables.
  std::string table_header;
  std::vector<std::vector<double>> table_rows;
};

class TirFile {
 public:
  static TirFile parse(const std::string& text, const std::string& source = "<string>");
  static TirFile load(const std::string& path);

  std::string serialize() const;
  void save(const std::string& path) const;

  std::optional<double> number(const std::string& key) const;
  std::optional<std::string> text(const std::string& key) const;
  bool has(const std::string& key) const;

  // Inserts or overwrites a numeric key, creating the section if needed.
  void set(const std::string& section, const std::string& key, double value);

  const std::vector<TirSection>& sections() const { return sections_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  TirSection& section(const std::string& name);
  const TirEntry* find(const std::string& key) const;

  std::vector<TirSection> sections_;
  std::vector<std::string> warnings_;
};

}  // namespace laptime::tire
