#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clusterkit/core.hpp"
#include "clusterkit/density.hpp"

namespace clusterkit {

struct CsvOptions {
  bool has_header = true;
  // Column holding class names, by header name or 0-based index.
  std::optional<std::string> label_column;
};

// Comma separated, '.' decimals. Class names map to 1..c by first
// appearance. Errors carry 1-based file line and column in the message.
Dataset parse_csv(const std::string& text, const CsvOptions& options = {});
Dataset ingest_csv(const std::string& path, const CsvOptions& options = {});

// The last column when its first data cell is not a number or its header
// is "label", else nullopt.
std::optional<std::string> detect_label_column(const std::string& text, bool has_header);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

// point_index,label
std::string labels_csv(const LabelVector& labels);
std::string matrix_csv(const Matrix& m, const std::vector<std::string>& header);
std::string dataset_csv(const Dataset& data);

// Two interleaved semicircles; labels 1 (upper) and 2 (lower).
Dataset gen_moons(std::size_t n, double noise_sd = 0.07, std::uint64_t seed = 0);

Dataset gen_blobs(std::size_t n, const std::vector<std::vector<double>>& centers, double sd,
                  std::uint64_t seed = 0);

struct Gauss1dSample {
  Dataset data;
  GaussianMixture1D mixture;
};

// Labels record the drawing component (1-based).
Gauss1dSample gen_gauss1d(const std::vector<double>& weights, const std::vector<double>& means,
                          const std::vector<double>& sds, std::size_t n, std::uint64_t seed = 0);

}  // namespace clusterkit
