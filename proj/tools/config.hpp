#pragma once

// Run configuration: a flat, sectioned key-value schema with defaults.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qftn::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ValueType { Real, Int, Bool, Text, RealList, IntList };

struct KeySpec {
  const char* section;
  const char* key;
  const char* fallback;  ///< "" means unset; "auto" is resolved per model
  ValueType type;
  const char* doc;
};

/// Every accepted key, in canonical order.
const std::vector<KeySpec>& schema();

class RunConfig {
 public:
  RunConfig();  ///< all defaults

  /// Merges an INI file; unknown sections or keys throw ConfigError.
  void load_file(const std::string& path);
  /// Applies QFTN_<SECTION>_<KEY> environment variables.
  void load_env();
  /// "section.key" = value.
  void set(const std::string& dotted, const std::string& value);

  double real(const std::string& dotted) const;
  int integer(const std::string& dotted) const;
  std::uint64_t uint64(const std::string& dotted) const;
  bool flag(const std::string& dotted) const;
  std::string text(const std::string& dotted) const;
  std::vector<double> reals(const std::string& dotted) const;
  std::vector<int> integers(const std::string& dotted) const;
  bool is_set(const std::string& dotted) const;

  /// Canonical INI text (schema order, every key present). provenance_only
  /// leaves out the output and thread settings.
  std::string canonical(bool provenance_only = false) const;
  /// FNV-1a of canonical(true), 16 hex digits.
  std::string hash() const;
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  const KeySpec& spec(const std::string& dotted) const;
  void validate(const KeySpec& s, const std::string& value) const;
  std::map<std::string, std::string> values_;
};

}  // namespace qftn::cli
