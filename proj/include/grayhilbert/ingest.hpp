#pragma once

// Point clouds: CSV input, unit-cube normalisation, the bundled iris data
// and random generators.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace grayhilbert {

struct PointCloud {
  std::vector<std::vector<double>> points;  // point id = position
  std::size_t n = 0;
  std::string label;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
};

struct CsvOptions {
  char delimiter = ',';
  bool header = false;
  std::vector<std::size_t> columns;  // empty: every column
};

/// One point per row. DataError naming row and column for unreadable files,
/// non-numeric cells and ragged rows.
PointCloud load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
PointCloud parse_csv(const std::string& text, const CsvOptions& options = {},
                     const std::string& label = "csv");

/// Per axis x -> (x - min)/(max - min); constant axes map to 0.
/// ContractViolation for an empty cloud.
PointCloud normalize_minmax(PointCloud cloud);
/// One range for every axis: x -> (x - min)/(max - min) with min and max over
/// all components, which keeps the raw units' proportions between axes.
PointCloud normalize_global(PointCloud cloud);

enum class Scaling { minmax, global };
Scaling parse_scaling(const std::string& name);
std::string to_string(Scaling s);
PointCloud normalize(PointCloud cloud, Scaling scaling);

/// RangeError unless every component lies in [0, 1].
void require_unit_cube(const PointCloud& cloud);

enum class IrisEncoding { original, cdf, cdf_trimmed, bch };
IrisEncoding parse_iris_encoding(const std::string& name);
std::string to_string(IrisEncoding e);
/// Expected dimension of each encoding.
std::size_t iris_dimension(IrisEncoding e);

/// Directory of the bundled data files, fixed at build time.
std::filesystem::path default_data_dir();

/// The iris data set in the requested encoding, normalised into the unit
/// cube. Only the original encoding is bundled; the others are read from
/// iris_<encoding>.csv in data_dir, with a DataError if missing.
PointCloud load_iris(IrisEncoding encoding, const std::filesystem::path& data_dir = default_data_dir(),
                     Scaling scaling = Scaling::minmax);

enum class Distribution { uniform, normal };
Distribution parse_distribution(const std::string& name);
std::string to_string(Distribution d);

/// How normal samples are confined to the unit cube.
///   truncate3: points with a coordinate beyond 3 standard deviations are
///              redrawn, then [-3, 3] maps linearly onto [0, 1].
///   minmax:    per-axis min-max rescale of the batch.
enum class NormalMapping { truncate3, minmax };
NormalMapping parse_normal_mapping(const std::string& name);
std::string to_string(NormalMapping m);

/// `count` i.i.d. points: uniform on [0, 1]^n, or standard normal mapped into
/// the cube. Deterministic per seed.
PointCloud generate(Distribution dist, std::size_t count, std::size_t n, std::uint64_t seed,
                    NormalMapping mapping = NormalMapping::truncate3);

}  // namespace grayhilbert
