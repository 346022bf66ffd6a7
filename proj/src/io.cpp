#include "clusterkit/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace clusterkit {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(const std::string& cell) {
  const std::string t = trim(cell);
  if (t.empty()) return std::nullopt;
  double v = 0.0;
  const char* begin = t.data();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
  return v;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

std::string location(std::size_t line, std::size_t col) {
  return "row " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

std::optional<std::string> detect_label_column(const std::string& text, bool has_header) {
  const auto lines = lines_of(text);
  const std::size_t first = has_header ? 1 : 0;
  if (lines.size() <= first) return std::nullopt;
  const auto cells = split_line(lines[first]);
  if (cells.empty()) return std::nullopt;
  if (has_header) {
    const std::string last = trim(split_line(lines[0]).back());
    if (last == "label" || !parse_number(cells.back())) return last;
    return std::nullopt;
  }
  if (parse_number(cells.back())) return std::nullopt;
  return std::to_string(cells.size() - 1);
}

Dataset parse_csv(const std::string& text, const CsvOptions& options) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw Error(ErrorCode::EmptyFile, "input has no rows");
  std::vector<std::string> header;
  std::size_t first = 0;
  if (options.has_header) {
    for (auto& h : split_line(lines[0])) header.push_back(trim(h));
    first = 1;
  }
  if (lines.size() <= first) throw Error(ErrorCode::EmptyFile, "input has a header but no data");
  const std::size_t width = options.has_header ? header.size() : split_line(lines[first]).size();

  std::optional<std::size_t> label_col;
  if (options.label_column) {
    const std::string& want = *options.label_column;
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (header[j] == want) label_col = j;
    }
    if (!label_col) {
      std::size_t idx = 0;
      const auto [ptr, ec] = std::from_chars(want.data(), want.data() + want.size(), idx);
      if (ec != std::errc() || ptr != want.data() + want.size() || idx >= width) {
        throw Error(ErrorCode::InvalidArgument, "unknown label column '" + want + "'");
      }
      label_col = idx;
    }
  }

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::map<std::string, int> class_ids;
  for (std::size_t li = first; li < lines.size(); ++li) {
    const auto cells = split_line(lines[li]);
    if (cells.size() != width) {
      throw Error(ErrorCode::ParseError, location(li + 1, cells.size() + 1) + ": expected " +
                                             std::to_string(width) + " cells, found " +
                                             std::to_string(cells.size()));
    }
    std::vector<double> row;
    for (std::size_t j = 0; j < width; ++j) {
      if (label_col && j == *label_col) {
        const std::string name = trim(cells[j]);
        auto [it, inserted] = class_ids.emplace(name, static_cast<int>(class_ids.size()) + 1);
        labels.push_back(it->second);
        continue;
      }
      const auto v = parse_number(cells[j]);
      if (!v) {
        throw Error(ErrorCode::ParseError,
                    location(li + 1, j + 1) + ": '" + trim(cells[j]) + "' is not a number");
      }
      row.push_back(*v);
    }
    rows.push_back(std::move(row));
  }

  std::vector<std::string> names;
  if (options.has_header) {
    for (std::size_t j = 0; j < width; ++j) {
      if (!(label_col && j == *label_col)) names.push_back(header[j]);
    }
  }
  std::optional<std::vector<int>> truth;
  if (label_col) truth = std::move(labels);
  return make_dataset(rows, std::move(names), std::move(truth));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << contents;
}

Dataset ingest_csv(const std::string& path, const CsvOptions& options) {
  return parse_csv(read_file(path), options);
}

namespace {

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

std::string labels_csv(const LabelVector& labels) {
  std::string out = "point_index,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out += std::to_string(i) + "," + std::to_string(labels[i]) + "\n";
  }
  return out;
}

std::string matrix_csv(const Matrix& m, const std::vector<std::string>& header) {
  std::string out;
  for (std::size_t j = 0; j < header.size(); ++j) out += (j ? "," : "") + header[j];
  if (!header.empty()) out += "\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out += (j ? "," : "") + format_double(m(i, j));
    out += "\n";
  }
  return out;
}

std::string dataset_csv(const Dataset& data) {
  auto header = data.feature_names();
  if (!data.has_labels()) return matrix_csv(data.points(), header);
  header.push_back("label");
  std::string out;
  for (std::size_t j = 0; j < header.size(); ++j) out += (j ? "," : "") + header[j];
  out += "\n";
  for (std::size_t i = 0; i < data.n(); ++i) {
    for (std::size_t j = 0; j < data.m(); ++j) out += format_double(data.points()(i, j)) + ",";
    out += std::to_string((*data.true_labels())[i]) + "\n";
  }
  return out;
}

Dataset gen_moons(std::size_t n, double noise_sd, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorCode::TooFewPoints, "moons need n >= 2");
  if (noise_sd < 0.0) throw Error(ErrorCode::InvalidArgument, "noise_sd must be >= 0");
  const std::size_t upper = n / 2;
  const std::size_t lower = n - upper;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  auto angle = [](std::size_t i, std::size_t count) {
    return count > 1 ? std::numbers::pi * static_cast<double>(i) / static_cast<double>(count - 1) : 0.0;
  };
  for (std::size_t i = 0; i < upper; ++i) {
    const double t = angle(i, upper);
    rows.push_back({std::cos(t), std::sin(t)});
    labels.push_back(1);
  }
  for (std::size_t i = 0; i < lower; ++i) {
    const double t = angle(i, lower);
    rows.push_back({1.0 - std::cos(t), 0.5 - std::sin(t)});
    labels.push_back(2);
  }
  if (noise_sd > 0.0) {
    for (auto& r : rows) {
      for (double& v : r) v += noise_sd * noise(rng);
    }
  }
  return make_dataset(rows, {"x", "y"}, std::move(labels));
}

Dataset gen_blobs(std::size_t n, const std::vector<std::vector<double>>& centers, double sd,
                  std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::TooFewPoints, "blobs need n >= 1");
  if (centers.empty()) throw Error(ErrorCode::InvalidArgument, "blobs need at least one center");
  if (sd < 0.0) throw Error(ErrorCode::InvalidArgument, "sd must be >= 0");
  const std::size_t m = centers.front().size();
  for (const auto& c : centers) {
    if (c.size() != m || m == 0) throw Error(ErrorCode::DimensionMismatch, "centers differ in length");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  const std::size_t k = centers.size();
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t count = n / k + (c < n % k ? 1 : 0);
    for (std::size_t i = 0; i < count; ++i) {
      std::vector<double> p = centers[c];
      for (double& v : p) v += sd * noise(rng);
      rows.push_back(std::move(p));
      labels.push_back(static_cast<int>(c) + 1);
    }
  }
  return make_dataset(rows, {}, std::move(labels));
}

Gauss1dSample gen_gauss1d(const std::vector<double>& weights, const std::vector<double>& means,
                          const std::vector<double>& sds, std::size_t n, std::uint64_t seed) {
  if (weights.size() != means.size() || weights.size() != sds.size()) {
    throw Error(ErrorCode::InvalidMixture, "weights, means and sds differ in length");
  }
  std::vector<GaussianComponent> comps;
  for (std::size_t c = 0; c < weights.size(); ++c) comps.push_back({weights[c], means[c], sds[c]});
  GaussianMixture1D mixture(std::move(comps));
  if (n < 1) throw Error(ErrorCode::TooFewPoints, "need n >= 1");
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = pick(rng);
    rows.push_back({means[c] + sds[c] * noise(rng)});
    labels.push_back(static_cast<int>(c) + 1);
  }
  return {make_dataset(rows, {"x"}, std::move(labels)), std::move(mixture)};
}

}  // namespace clusterkit
