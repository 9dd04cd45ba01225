#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace boundedrat {

struct ReproduceOptions {
  std::filesystem::path out_dir = "reproduce_out";
  std::optional<std::filesystem::path> golden_dir;  // nothing compared when unset
  std::size_t workers = 1;
};

struct ReproduceCheck {
  std::string name;
  bool pass;
  std::string detail;
};

struct ReproduceResult {
  std::vector<ReproduceCheck> checks;
  std::vector<std::string> mismatches;  // golden-file differences
  bool ok() const;
};

// Directory of the committed golden files in the source tree.
std::filesystem::path default_golden_dir();

// Runs every reference experiment, writes CSVs and report.txt into out_dir,
// and diffs each golden CSV against its fresh counterpart.
ReproduceResult reproduce(const ReproduceOptions& options);

// Field-wise CSV comparison: numeric fields within 1e-9 (absolute plus
// relative), everything else exact. Returns a description of the first
// difference.
std::optional<std::string> diff_csv(const std::string& expected, const std::string& actual);

}  // namespace boundedrat
