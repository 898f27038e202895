#include "output.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace qftn::cli {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Csv& Csv::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(fmt(v));
  return text_row(cells);
}

Csv& Csv::text_row(const std::vector<std::string>& cells) {
  if (cells.size() != header_.size()) throw std::logic_error("csv row width differs from the header");
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) line += (i ? "," : "") + cells[i];
  rows_.push_back(std::move(line));
  return *this;
}

std::string Csv::render(const std::string& config_hash) const {
  std::string out = "# config " + config_hash + "\n";
  for (std::size_t i = 0; i < header_.size(); ++i) out += (i ? "," : "") + header_[i];
  out += "\n";
  for (const auto& r : rows_) out += r + "\n";
  return out;
}

OutputDir::OutputDir(fs::path root, std::string config_hash) : root_(std::move(root)), hash_(std::move(config_hash)) {
  fs::create_directories(root_);
}

fs::path OutputDir::tmp_path(const std::string& rel) {
  const fs::path target = root_ / rel;
  fs::create_directories(target.parent_path());
  return fs::path(target.string() + ".tmp");
}

void OutputDir::commit(const std::string& rel) {
  const fs::path target = root_ / rel;
  fs::rename(fs::path(target.string() + ".tmp"), target);
  record(rel);
}

void OutputDir::write(const std::string& rel, const std::string& content) {
  const auto tmp = tmp_path(rel);
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    os << content;
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
  }
  commit(rel);
}

void OutputDir::progress(nlohmann::json event) {
  event["config"] = hash_;
  std::lock_guard lock(mu_);
  std::ofstream os(root_ / "progress.jsonl", std::ios::app);
  os << event.dump() << std::endl;
  if (std::find(files_.begin(), files_.end(), "progress.jsonl") == files_.end()) files_.push_back("progress.jsonl");
}

void OutputDir::record(const std::string& rel) {
  std::lock_guard lock(mu_);
  if (std::find(files_.begin(), files_.end(), rel) == files_.end()) files_.push_back(rel);
}

std::vector<std::string> OutputDir::files() const {
  std::lock_guard lock(mu_);
  auto out = files_;
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace qftn::cli
