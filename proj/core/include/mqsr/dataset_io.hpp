#pragma once

// On-disk dataset directory:
//   meta.json  p, s, n1, n2, sigma1_sq, sigma2_sq, seed, support (1-based), values
//   X.csv      n rows of p comma-separated decimals, no header
//   Y.csv      n rows, one decimal each
// Decimals use 17 significant digits with '.' radix and '\n' line endings.

#include <filesystem>
#include <string>

#include "mqsr/model.hpp"

namespace mqsr::io {

/// "%.17g" rendering; locale independent.
std::string format_decimal(double value);
double parse_decimal(const std::string& text);

void write_dataset(const MixedDataset& dataset, const std::filesystem::path& dir);
MixedDataset read_dataset(const std::filesystem::path& dir);

/// Writes `contents` to `path`, throwing IoError with the path on failure.
void write_text_file(const std::filesystem::path& path, const std::string& contents);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace mqsr::io
