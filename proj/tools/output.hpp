#pragma once

// Output directory of one invocation: atomic files, progress log, manifest.

#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace qftn::cli {

/// %.17g
std::string fmt(double v);

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : header_(std::move(header)) {}
  Csv& row(const std::vector<double>& values);
  /// Mixed rows; cells are already formatted.
  Csv& text_row(const std::vector<std::string>& cells);
  std::string render(const std::string& config_hash) const;
  std::size_t size() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::string> rows_;
};

class OutputDir {
 public:
  OutputDir(std::filesystem::path root, std::string config_hash);

  const std::filesystem::path& root() const { return root_; }
  const std::string& hash() const { return hash_; }

  /// Writes root/rel through a temporary file and a rename. Thread-safe.
  void write(const std::string& rel, const std::string& content);
  void write_csv(const std::string& rel, const Csv& csv) { write(rel, csv.render(hash_)); }
  /// Path for a file produced by another writer (checkpoints); the caller
  /// writes to tmp_path(rel) and then calls commit(rel).
  std::filesystem::path tmp_path(const std::string& rel);
  void commit(const std::string& rel);

  /// Appends one JSON line to progress.jsonl (flushed immediately).
  void progress(nlohmann::json event);

  std::vector<std::string> files() const;

 private:
  void record(const std::string& rel);
  std::filesystem::path root_;
  std::string hash_;
  mutable std::mutex mu_;
  std::vector<std::string> files_;
};

}  // namespace qftn::cli
