#pragma once

// Deterministic artifact output: RFC-4180 CSV with locale-independent number
// formatting, and 64-bit FNV-1a content hashes for manifests.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace shubin {

// shortest round-trip representation, '.' decimal regardless of locale
std::string format_number(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  void row_numbers(const std::vector<double>& cells);
  const std::string& body() const { return body_; }

 private:
  std::string body_;
  size_t columns_ = 0;
};

std::uint64_t fnv1a(const std::string& data);
std::string fnv1a_hex(const std::string& data);

// writes with LF endings exactly as given; creates parent directories
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace shubin
