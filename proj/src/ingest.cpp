#include "grayhilbert/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "grayhilbert/errors.hpp"

#ifndef GRAYHILBERT_DATA_DIR
#define GRAYHILBERT_DATA_DIR "data"
#endif

namespace grayhilbert {

namespace {

// Splits one record, honouring double quotes ("" is an escaped quote).
std::vector<std::string> split_record(const std::string& line, char delim, std::size_t row) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delim) {
      cells.push_back(std::move(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  if (quoted) throw DataError("row " + std::to_string(row) + ": unterminated quote");
  cells.push_back(std::move(cell));
  return cells;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& raw, std::size_t row, std::size_t col) {
  const std::string s = trim(raw);
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (s.empty() || ec != std::errc() || ptr != last) {
    throw DataError("row " + std::to_string(row) + ", column " + std::to_string(col) +
                    ": not a number: '" + s + "'");
  }
  return v;
}

}  // namespace

PointCloud parse_csv(const std::string& text, const CsvOptions& options, const std::string& label) {
  PointCloud cloud;
  cloud.label = label;
  std::istringstream in(text);
  std::string line;
  std::size_t row = 0;
  std::size_t width = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    if (first && options.header) {
      first = false;
      continue;
    }
    const auto cells = split_record(line, options.delimiter, row);
    if (width == 0) {
      width = cells.size();
    } else if (cells.size() != width) {
      throw DataError("row " + std::to_string(row) + ": expected " + std::to_string(width) +
                      " columns, found " + std::to_string(cells.size()));
    }
    first = false;
    std::vector<double> point;
    if (options.columns.empty()) {
      for (std::size_t c = 0; c < cells.size(); ++c) point.push_back(parse_number(cells[c], row, c + 1));
    } else {
      for (std::size_t c : options.columns) {
        if (c >= cells.size()) {
          throw DataError("row " + std::to_string(row) + ": column " + std::to_string(c + 1) +
                          " does not exist");
        }
        point.push_back(parse_number(cells[c], row, c + 1));
      }
    }
    cloud.points.push_back(std::move(point));
  }
  cloud.n = cloud.points.empty() ? options.columns.size() : cloud.points.front().size();
  return cloud;
}

PointCloud load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), options, path.stem().string());
}

PointCloud normalize_minmax(PointCloud cloud) {
  if (cloud.empty()) throw ContractViolation("cannot normalise an empty point cloud");
  for (std::size_t j = 0; j < cloud.n; ++j) {
    double lo = cloud.points.front()[j], hi = lo;
    for (const auto& x : cloud.points) {
      lo = std::min(lo, x[j]);
      hi = std::max(hi, x[j]);
    }
    const double span = hi - lo;
    for (auto& x : cloud.points) {
      x[j] = span > 0.0 ? std::clamp((x[j] - lo) / span, 0.0, 1.0) : 0.0;
    }
  }
  return cloud;
}

PointCloud normalize_global(PointCloud cloud) {
  if (cloud.empty()) throw ContractViolation("cannot normalise an empty point cloud");
  double lo = cloud.points.front().empty() ? 0.0 : cloud.points.front().front(), hi = lo;
  for (const auto& x : cloud.points) {
    for (double v : x) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const double span = hi - lo;
  for (auto& x : cloud.points) {
    for (auto& v : x) v = span > 0.0 ? std::clamp((v - lo) / span, 0.0, 1.0) : 0.0;
  }
  return cloud;
}

Scaling parse_scaling(const std::string& name) {
  if (name == "minmax") return Scaling::minmax;
  if (name == "global") return Scaling::global;
  throw ContractViolation("unknown scaling '" + name + "' (minmax, global)");
}

std::string to_string(Scaling s) { return s == Scaling::minmax ? "minmax" : "global"; }

PointCloud normalize(PointCloud cloud, Scaling scaling) {
  return scaling == Scaling::minmax ? normalize_minmax(std::move(cloud)) : normalize_global(std::move(cloud));
}

void require_unit_cube(const PointCloud& cloud) {
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (std::size_t j = 0; j < cloud.n; ++j) {
      const double v = cloud.points[i][j];
      if (!(v >= 0.0 && v <= 1.0)) {
        throw RangeError("point " + std::to_string(i) + ", axis " + std::to_string(j) + ": " +
                         std::to_string(v) + " outside [0, 1]");
      }
    }
  }
}

// ---------------------------------------------------------------------------

IrisEncoding parse_iris_encoding(const std::string& name) {
  if (name == "original") return IrisEncoding::original;
  if (name == "cdf") return IrisEncoding::cdf;
  if (name == "cdf_trimmed") return IrisEncoding::cdf_trimmed;
  if (name == "bch") return IrisEncoding::bch;
  throw ContractViolation("unknown iris encoding '" + name + "' (original, cdf, cdf_trimmed, bch)");
}

std::string to_string(IrisEncoding e) {
  switch (e) {
    case IrisEncoding::original: return "original";
    case IrisEncoding::cdf: return "cdf";
    case IrisEncoding::cdf_trimmed: return "cdf_trimmed";
    case IrisEncoding::bch: return "bch";
  }
  return "?";
}

std::size_t iris_dimension(IrisEncoding e) {
  switch (e) {
    case IrisEncoding::original: return 4;
    case IrisEncoding::cdf: return 400;
    case IrisEncoding::cdf_trimmed: return 123;
    case IrisEncoding::bch: return 431;
  }
  return 0;
}

std::filesystem::path default_data_dir() { return GRAYHILBERT_DATA_DIR; }

PointCloud load_iris(IrisEncoding encoding, const std::filesystem::path& data_dir, Scaling scaling) {
  PointCloud cloud;
  if (encoding == IrisEncoding::original) {
    cloud = load_csv(data_dir / "iris.csv", CsvOptions{',', true, {0, 1, 2, 3}});
  } else {
    const auto file = data_dir / ("iris_" + to_string(encoding) + ".csv");
    if (!std::filesystem::exists(file)) {
      throw DataError("iris encoding '" + to_string(encoding) + "' is not bundled; supply " +
                      file.string() + " (150 rows of " + std::to_string(iris_dimension(encoding)) +
                      " comma-separated 0/1 values)");
    }
    cloud = load_csv(file, CsvOptions{',', false, {}});
  }
  cloud.label = "iris-" + to_string(encoding);
  if (cloud.size() != 150) {
    throw DataError(cloud.label + ": expected 150 rows, found " + std::to_string(cloud.size()));
  }
  if (cloud.n != iris_dimension(encoding)) {
    throw DataError(cloud.label + ": expected " + std::to_string(iris_dimension(encoding)) +
                    " columns, found " + std::to_string(cloud.n));
  }
  return normalize(std::move(cloud), scaling);
}

// ---------------------------------------------------------------------------

Distribution parse_distribution(const std::string& name) {
  if (name == "uniform") return Distribution::uniform;
  if (name == "normal") return Distribution::normal;
  throw ContractViolation("unknown distribution '" + name + "' (uniform, normal)");
}

std::string to_string(Distribution d) { return d == Distribution::uniform ? "uniform" : "normal"; }

NormalMapping parse_normal_mapping(const std::string& name) {
  if (name == "truncate3") return NormalMapping::truncate3;
  if (name == "minmax") return NormalMapping::minmax;
  throw ContractViolation("unknown normal mapping '" + name + "' (truncate3, minmax)");
}

std::string to_string(NormalMapping m) { return m == NormalMapping::truncate3 ? "truncate3" : "minmax"; }

PointCloud generate(Distribution dist, std::size_t count, std::size_t n, std::uint64_t seed,
                    NormalMapping mapping) {
  if (count == 0) throw ContractViolation("count must be at least 1");
  if (n == 0) throw ContractViolation("dimension must be at least 1");
  PointCloud cloud;
  cloud.n = n;
  cloud.label = to_string(dist);
  cloud.points.assign(count, std::vector<double>(n));
  std::mt19937_64 rng(seed);
  if (dist == Distribution::uniform) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& x : cloud.points) {
      for (auto& v : x) v = u(rng);
    }
    return cloud;
  }
  std::normal_distribution<double> g(0.0, 1.0);
  if (mapping == NormalMapping::minmax) {
    for (auto& x : cloud.points) {
      for (auto& v : x) v = g(rng);
    }
    cloud = normalize_minmax(std::move(cloud));
    cloud.label = to_string(dist);
    return cloud;
  }
  constexpr double cut = 3.0;
  for (auto& x : cloud.points) {
    bool inside;
    do {
      inside = true;
      for (auto& v : x) {
        v = g(rng);
        inside = inside && std::abs(v) <= cut;
      }
    } while (!inside);
    for (auto& v : x) v = (v + cut) / (2.0 * cut);
  }
  return cloud;
}

}  // namespace grayhilbert
