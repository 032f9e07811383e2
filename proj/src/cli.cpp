#include "grayhilbert/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "grayhilbert/curve.hpp"
#include "grayhilbert/errors.hpp"
#include "grayhilbert/index.hpp"
#include "grayhilbert/ingest.hpp"
#include "grayhilbert/sparsity.hpp"
#include "json.hpp"

namespace grayhilbert::cli {

namespace {

using json = nlohmann::ordered_json;

// Raised for arguments that parse but make no sense together.
class UsageError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// text helpers

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split(const std::string& text, char delim) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == delim) {
      parts.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

template <class T>
T parse_number(const std::string& s, const std::string& what) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw UsageError("invalid " + what + ": '" + s + "'");
  }
  return v;
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> x;
  for (const auto& part : split(text, ',')) x.push_back(parse_number<double>(part, "coordinate"));
  return x;
}

// "1,2,4" or "1..64" (powers of two from 1 to 64), mixed freely.
std::vector<std::size_t> parse_buckets(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& part : split(text, ',')) {
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_number<std::size_t>(part, "bucket size"));
      continue;
    }
    const auto lo = parse_number<std::size_t>(part.substr(0, dots), "bucket size");
    const auto hi = parse_number<std::size_t>(part.substr(dots + 2), "bucket size");
    if (lo == 0 || lo > hi) throw UsageError("bucket range '" + part + "' is empty");
    for (std::size_t s = lo; s <= hi; s *= 2) out.push_back(s);
  }
  for (auto s : out) {
    if (s == 0) throw UsageError("bucket sizes must be at least 1");
  }
  return out;
}

// All unsigned integers in order of appearance.
std::vector<std::uint64_t> integers_in(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isdigit(static_cast<unsigned char>(text[i]))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      out.push_back(parse_number<std::uint64_t>(text.substr(i, j - i), "integer"));
      i = j;
    } else if (text[i] == '-') {
      throw UsageError("negative values are not allowed: '" + text + "'");
    } else {
      ++i;
    }
  }
  return out;
}

std::string prefix_text(const Path& prefix) {
  std::string s;
  for (auto d : prefix) s += std::to_string(d);
  return s;
}

// ---------------------------------------------------------------------------
// configuration

struct CurveConfig {
  unsigned p = 2;
  std::size_t n = 2;
  std::size_t k = 1;
  std::string variant = "bubble";
  std::string format;
};

struct DataConfig {
  std::string input;
  bool header = false;
  std::string delimiter = ",";
  std::string columns;
  std::string normalize = "none";
  std::string iris;
  std::string data_dir;
  std::string scaling = "minmax";
  std::string dist;
  std::size_t count = 1000;
  std::uint64_t seed = 1;
  std::string normal_mapping = "truncate3";
};

struct RunConfig {
  CurveConfig curve;
  DataConfig data;
  std::string buckets;  // empty: the command's default
  std::size_t kmax = 20;
  unsigned threads = 0;
  std::size_t repeat = 1;
  std::string cell;
  std::string point;
  std::string index;
  std::uint64_t id = 0;
  bool leaves = false;
  std::vector<CLI::Option*> n_opts;
};

Variant single_variant(const std::string& name) {
  if (name == "both") throw UsageError("this command takes a single variant (bubble or ring)");
  const Variant v = parse_variant(name);
  if (v == Variant::custom) throw UsageError("custom local orders are only available through the library");
  return v;
}

std::vector<Variant> variants_of(const std::string& name) {
  if (name == "both") return {Variant::bubble, Variant::ring};
  return {single_variant(name)};
}

CurveParams curve_params(const CurveConfig& c) {
  CurveParams prm{Prime(c.p), c.n, c.k, single_variant(c.variant), {}};
  prm.validate();
  return prm;
}

void require_format(const std::string& format, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (format == a) return;
  }
  std::string list;
  for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
  throw UsageError("--format must be one of: " + list);
}

bool explicit_n(const RunConfig& cfg) {
  return std::any_of(cfg.n_opts.begin(), cfg.n_opts.end(), [](const CLI::Option* o) { return o->count() > 0; });
}

PointCloud load_dataset(const RunConfig& cfg, std::uint64_t seed) {
  const auto& d = cfg.data;
  const int sources = !d.input.empty() + !d.iris.empty() + !d.dist.empty();
  if (sources != 1) throw UsageError("choose exactly one of --input, --iris or --dist");
  PointCloud cloud;
  if (!d.dist.empty()) {
    if (cfg.curve.n == 0) throw UsageError("--n must be at least 1");
    cloud = generate(parse_distribution(d.dist), d.count, cfg.curve.n, seed,
                     parse_normal_mapping(d.normal_mapping));
    cloud.label = d.dist + "-" + std::to_string(seed);
    return cloud;
  }
  if (!d.iris.empty()) {
    const auto dir = d.data_dir.empty() ? default_data_dir() : std::filesystem::path(d.data_dir);
    cloud = load_iris(parse_iris_encoding(d.iris), dir, parse_scaling(d.scaling));
  } else {
    if (d.delimiter.size() != 1) throw UsageError("--delimiter must be a single character");
    CsvOptions opt{d.delimiter[0], d.header, {}};
    if (!d.columns.empty()) {
      for (auto c : integers_in(d.columns)) opt.columns.push_back(static_cast<std::size_t>(c));
    }
    cloud = load_csv(d.input, opt);
    if (cloud.empty()) throw DataError("'" + d.input + "' holds no points");
    if (d.normalize == "minmax" || d.normalize == "global") {
      cloud = normalize(std::move(cloud), parse_scaling(d.normalize));
    } else if (d.normalize != "none") {
      throw UsageError("--normalize must be none, minmax or global");
    }
    require_unit_cube(cloud);
  }
  if (explicit_n(cfg) && cfg.curve.n != cloud.n) {
    throw DataError("input has " + std::to_string(cloud.n) + " columns but --n is " +
                    std::to_string(cfg.curve.n));
  }
  return cloud;
}

TreeParams tree_params(const RunConfig& cfg, std::size_t n, Variant v, std::size_t bucket) {
  TreeParams prm{Prime(cfg.curve.p), n, bucket, cfg.kmax, v, {}};
  prm.validate();
  return prm;
}

// ---------------------------------------------------------------------------
// encode / decode

CurveIndex parse_index(const std::string& text, const CurveParams& prm) {
  const std::uint64_t base = checked_power(prm.p.value(), prm.n);
  if (text.find('[') == std::string::npos) {
    return CurveIndex::from_integer(parse_number<std::uint64_t>(text, "curve index"), prm);
  }
  const auto limbs = integers_in(text);
  if (limbs.size() != prm.k) {
    throw ContractViolation("expected " + std::to_string(prm.k) + " limbs, found " +
                            std::to_string(limbs.size()));
  }
  CurveIndex idx;
  for (auto v : limbs) {
    if (v >= base) throw RangeError("limb " + std::to_string(v) + " is not below p^n");
    idx.limbs.push_back(bin_digits(v, prm.n, prm.p));
  }
  return idx;
}

CellWord parse_cell(const std::string& text, const CurveParams& prm) {
  const auto digits = integers_in(text);
  if (digits.size() != prm.k * prm.n) {
    throw ContractViolation("a cell needs k*n = " + std::to_string(prm.k * prm.n) + " digits, found " +
                            std::to_string(digits.size()));
  }
  CellWord word;
  for (std::size_t l = 0; l < prm.k; ++l) {
    std::vector<unsigned> msb;
    for (std::size_t j = 0; j < prm.n; ++j) {
      const auto v = digits[l * prm.n + j];
      if (v >= prm.p.value()) throw RangeError("digit " + std::to_string(v) + " is not below p");
      msb.push_back(static_cast<unsigned>(v));
    }
    word.coeffs.push_back(DigitVec::from_msb(std::span<const unsigned>(msb), prm.p));
  }
  return word;
}

void print_position(const Curve& curve, const CurveIndex& idx, const CellWord& cell,
                    const std::string& format, std::ostream& out) {
  std::optional<std::uint64_t> value;
  try {
    value = idx.to_integer();
  } catch (const RangeError&) {
  }
  const auto coord = curve.coord(cell);
  if (format == "json") {
    json j;
    j["p"] = curve.prime().value();
    j["n"] = curve.dim();
    j["k"] = curve.depth();
    j["variant"] = to_string(curve.params().variant);
    j["index"] = value ? json(*value) : json(nullptr);
    j["limbs"] = json::array();
    for (const auto& limb : idx.limbs) j["limbs"].push_back(digits_value(limb));
    j["cell"] = json::array();
    for (const auto& c : cell.coeffs) {
      json level = json::array();
      for (std::size_t a = c.size(); a-- > 0;) level.push_back(c[a]);
      j["cell"].push_back(level);
    }
    j["coord"] = coord;
    out << j.dump() << '\n';
    return;
  }
  std::string axes = "(", point = "(";
  for (std::size_t i = 0; i < coord.size(); ++i) {
    axes += (i ? "," : "") + std::to_string(curve.dim() - 1 - i);
    point += (i ? "," : "") + num(coord[i]);
  }
  if (value) out << "index  " << *value << '\n';
  out << "limbs  " << idx.to_string() << '\n';
  out << "cell   " << cell.to_string() << '\n';
  out << "coord  " << point << ") on axes " << axes << ")\n";
}

std::string format_or(const RunConfig& cfg, const char* fallback) {
  return cfg.curve.format.empty() ? fallback : cfg.curve.format;
}

int cmd_encode(const RunConfig& cfg, std::ostream& out) {
  const auto format = format_or(cfg, "table");
  require_format(format, {"table", "json"});
  const auto prm = curve_params(cfg.curve);
  const Curve curve(prm);
  const auto idx = parse_index(cfg.index, prm);
  print_position(curve, idx, curve.index_to_cell(idx), format, out);
  return kOk;
}

int cmd_decode(const RunConfig& cfg, std::ostream& out) {
  const auto format = format_or(cfg, "table");
  require_format(format, {"table", "json"});
  if (cfg.cell.empty() == cfg.point.empty()) throw UsageError("decode needs exactly one of --cell or --point");
  const auto prm = curve_params(cfg.curve);
  checked_power(prm.p.value(), prm.n);
  const Curve curve(prm);
  const CellWord cell = cfg.cell.empty() ? curve.quantize(parse_point(cfg.point)) : parse_cell(cfg.cell, prm);
  print_position(curve, curve.cell_to_index(cell), cell, format, out);
  return kOk;
}

// ---------------------------------------------------------------------------
// trace

int cmd_trace(const RunConfig& cfg, std::ostream& out) {
  const std::string format = format_or(cfg, "csv");
  require_format(format, {"csv", "svg"});
  const auto prm = curve_params(cfg.curve);
  if (format == "svg" && prm.n != 2) throw ContractViolation("SVG traces need n = 2");
  const Curve curve(prm);
  constexpr std::uint64_t kLimit = 1u << 22;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < prm.n * prm.k; ++i) {
    total *= prm.p.value();
    if (total > kLimit) throw ContractViolation("trace limited to 2^22 cells");
  }
  const double half = 0.5 * std::pow(static_cast<double>(prm.p.value()), -static_cast<double>(prm.k));

  std::vector<std::vector<double>> centres;
  centres.reserve(total);
  for (std::uint64_t i = 0; i < total; ++i) {
    auto c = curve.coord(curve.index_to_cell(CurveIndex::from_integer(i, prm)));
    for (auto& v : c) v += half;
    centres.push_back(std::move(c));
  }
  if (format == "csv") {
    out << "index";
    for (std::size_t i = 0; i < prm.n; ++i) out << ",axis" << prm.n - 1 - i;
    out << '\n';
    for (std::uint64_t i = 0; i < total; ++i) {
      out << i;
      for (double v : centres[i]) out << ',' << num(v);
      out << '\n';
    }
    return kOk;
  }
  // axis 0 runs left to right, axis 1 bottom to top
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1 1\" width=\"512\" height=\"512\">\n";
  out << "<rect width=\"1\" height=\"1\" fill=\"white\" stroke=\"#999\" stroke-width=\"1\" "
         "vector-effect=\"non-scaling-stroke\"/>\n";
  out << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" vector-effect=\"non-scaling-stroke\" "
         "points=\"";
  for (std::uint64_t i = 0; i < total; ++i) {
    out << (i ? " " : "") << num(centres[i][1]) << ',' << num(1.0 - centres[i][0]);
  }
  out << "\"/>\n</svg>\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// index

json stats_json(const TreeStats& s) {
  json hist = json::object();
  for (const auto& [depth, count] : s.depth_histogram) hist[std::to_string(depth)] = count;
  return json{{"points", s.points},       {"nodes", s.nodes},         {"leaves", s.leaves},
              {"overfilled", s.overfilled}, {"max_depth", s.max_depth}, {"depth_histogram", hist}};
}

json leaf_json(const ScaledTree& tree, ScaledTree::NodeId node, const Path& prefix) {
  return json{{"depth", tree.depth(node)}, {"prefix", prefix_text(prefix)}, {"ids", tree.bucket(node)}};
}

void print_index_result(const json& j, const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << j.dump(2) << '\n';
    return;
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "stats") {
      for (const auto& [k, v] : value.items()) out << k << ' ' << v.dump() << '\n';
    } else {
      out << key << ' ' << value.dump() << '\n';
    }
  }
}

int cmd_index(const std::string& action, const RunConfig& cfg, std::ostream& out) {
  const std::string format = format_or(cfg, "json");
  require_format(format, {"json", "table"});
  const auto cloud = load_dataset(cfg, cfg.data.seed);
  const auto buckets = parse_buckets(cfg.buckets.empty() ? "1" : cfg.buckets);
  if (buckets.size() != 1) throw UsageError("index commands take a single --bucket");
  const auto prm = tree_params(cfg, cloud.n, single_variant(cfg.curve.variant), buckets.front());
  auto tree = ScaledTree::build(prm, cloud.points, cfg.threads);

  json j;
  j["command"] = action;
  j["dataset"] = cloud.label;
  j["p"] = prm.p.value();
  j["n"] = prm.n;
  j["bucket"] = prm.bucket;
  j["kmax"] = prm.k_max;
  j["variant"] = to_string(prm.variant);

  if (action == "build") {
    j["stats"] = stats_json(tree.stats());
    if (cfg.leaves) {
      j["leaves"] = json::array();
      for (const auto& leaf : tree.leaves()) {
        j["leaves"].push_back({{"depth", leaf.depth}, {"prefix", prefix_text(leaf.prefix)}, {"ids", leaf.ids}});
      }
    }
  } else if (action == "find") {
    if (cfg.point.empty()) throw UsageError("find needs --point");
    Path digits;
    const auto node = tree.find_node(parse_point(cfg.point), &digits);
    j["found"] = node.has_value();
    j["digits"] = prefix_text(digits);
    if (node) j["leaf"] = leaf_json(tree, *node, digits);
  } else if (action == "insert") {
    if (cfg.point.empty()) throw UsageError("insert needs --point");
    const auto x = parse_point(cfg.point);
    const PointId id = cloud.size();
    tree.insert(id, x);
    Path digits;
    const auto node = tree.find_node(x, &digits);
    j["inserted"] = id;
    j["leaf"] = leaf_json(tree, *node, digits);
    j["stats"] = stats_json(tree.stats());
  } else {
    tree.remove(cfg.id);
    j["removed"] = cfg.id;
    j["stats"] = stats_json(tree.stats());
  }
  print_index_result(j, format, out);
  return kOk;
}

// ---------------------------------------------------------------------------
// sparsity

struct Row {
  std::size_t s;
  Variant variant;
  double leaves = 0, omega_static = 0, omega_scaled = 0, eps = 0, log2_ratio = 0, rho = 0;
  std::size_t k = 0;
  bool bounds_hold = true, criterion_applies = false, ratio_at_most_one = true;
};

int cmd_sparsity(const RunConfig& cfg, std::ostream& out) {
  const std::string format = format_or(cfg, "table");
  require_format(format, {"table", "json", "csv"});
  if (cfg.repeat == 0) throw UsageError("--repeat must be at least 1");
  if (cfg.repeat > 1 && cfg.data.dist.empty()) throw UsageError("--repeat needs a generated dataset (--dist)");
  const auto buckets = parse_buckets(cfg.buckets.empty() ? "1..64" : cfg.buckets);
  const auto variants = variants_of(cfg.curve.variant);

  std::vector<Row> rows;
  std::string label;
  std::size_t n = 0, points = 0;
  for (std::size_t r = 0; r < cfg.repeat; ++r) {
    const auto cloud = load_dataset(cfg, cfg.data.seed + r);
    n = cloud.n;
    points = cloud.size();
    label = cfg.repeat > 1 ? cfg.data.dist : cloud.label;
    const auto base = tree_params(cfg, cloud.n, variants.front(), 1);
    const auto reports = sparsity_sweep(label, cloud.points, base, buckets, variants, cfg.threads);
    if (rows.empty()) {
      for (const auto& rep : reports) rows.push_back(Row{rep.bucket, rep.variant});
    }
    const double w = 1.0 / static_cast<double>(cfg.repeat);
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto& rep = reports[i];
      auto& row = rows[i];
      row.leaves += w * static_cast<double>(rep.leaves_scaled);
      row.omega_static += w * rep.omega_static;
      row.omega_scaled += w * rep.omega_scaled;
      row.eps = rep.eps;
      row.k = rep.k_static;
      row.log2_ratio += w * rep.log2_ratio();
      row.rho += w * rep.rho;
      row.bounds_hold = row.bounds_hold && rep.bounds_hold;
      row.criterion_applies = rep.criterion_applies;
      row.ratio_at_most_one = row.ratio_at_most_one && rep.ratio_at_most_one;
    }
  }

  const auto leaves_text = [&](double v) {
    return cfg.repeat == 1 ? std::to_string(static_cast<std::size_t>(v)) : format_2dp(v);
  };
  if (format == "json") {
    json j;
    j["dataset"] = label;
    j["p"] = cfg.curve.p;
    j["n"] = n;
    j["points"] = points;
    j["kmax"] = cfg.kmax;
    j["repeats"] = cfg.repeat;
    if (cfg.data.dist == "normal") j["normal_mapping"] = cfg.data.normal_mapping;
    j["rows"] = json::array();
    for (const auto& r : rows) {
      j["rows"].push_back({{"s", r.s},
                           {"variant", to_string(r.variant)},
                           {"leaves_scaled", r.leaves},
                           {"omega_static", r.omega_static},
                           {"omega_scaled", r.omega_scaled},
                           {"k_static", r.k},
                           {"eps", r.eps},
                           {"log2_ratio", r.log2_ratio},
                           {"rho", r.rho},
                           {"rho_2dp", format_2dp(r.rho)},
                           {"bounds_hold", r.bounds_hold},
                           {"criterion_applies", r.criterion_applies},
                           {"ratio_at_most_one", r.ratio_at_most_one}});
    }
    out << j.dump(2) << '\n';
    return kOk;
  }
  if (format == "csv") {
    out << "s,variant,leaves_scaled,omega_static,omega_scaled,k,eps,log2_ratio,rho\n";
    for (const auto& r : rows) {
      out << r.s << ',' << to_string(r.variant) << ',' << leaves_text(r.leaves) << ',' << num(r.omega_static)
          << ',' << num(r.omega_scaled) << ',' << r.k << ',' << num(r.eps) << ',' << num(r.log2_ratio) << ','
          << format_2dp(r.rho) << '\n';
    }
    return kOk;
  }
  char line[160];
  out << label << ": " << points << " points, n = " << n << ", p = " << cfg.curve.p;
  if (cfg.repeat > 1) out << ", mean of " << cfg.repeat << " seeds";
  out << '\n';
  std::snprintf(line, sizeof line, "%6s  %-7s %9s %9s %9s %4s %7s %9s %5s\n", "s", "variant", "leaves", "w_st",
                "w_sc", "k", "eps", "log2R", "rho");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%6zu  %-7s %9s %9.4f %9.4f %4zu %7.4f %9.3f %5s\n", r.s,
                  to_string(r.variant).c_str(), leaves_text(r.leaves).c_str(), r.omega_static, r.omega_scaled, r.k,
                  r.eps, r.log2_ratio, format_2dp(r.rho).c_str());
    out << line;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// bench

int cmd_bench(const RunConfig& cfg, std::ostream& out) {
  const std::string format = format_or(cfg, "table");
  require_format(format, {"table", "json"});
  const auto prm = curve_params(cfg.curve);
  const Curve curve(prm);
  const auto cloud = generate(Distribution::uniform, cfg.data.count, prm.n, cfg.data.seed);
  using clock = std::chrono::steady_clock;
  const auto ms_since = [](clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  };

  std::vector<std::pair<std::string, double>> timings;
  std::vector<CellWord> cells;
  cells.reserve(cloud.size());
  auto t0 = clock::now();
  for (const auto& x : cloud.points) cells.push_back(curve.quantize(x));
  timings.emplace_back("quantize", ms_since(t0));

  std::vector<CurveIndex> indices;
  indices.reserve(cells.size());
  t0 = clock::now();
  for (const auto& c : cells) indices.push_back(curve.cell_to_index(c));
  timings.emplace_back("encode", ms_since(t0));

  t0 = clock::now();
  std::size_t agree = 0;
  for (std::size_t i = 0; i < indices.size(); ++i) agree += curve.index_to_cell(indices[i]) == cells[i];
  timings.emplace_back("decode", ms_since(t0));
  if (agree != cells.size()) throw Error("decode did not invert encode");

  const auto buckets = parse_buckets(cfg.buckets.empty() ? "1" : cfg.buckets);
  TreeParams tp{prm.p, prm.n, buckets.front(), prm.k, prm.variant, {}};
  t0 = clock::now();
  const auto tree = ScaledTree::build(tp, cloud.points, cfg.threads);
  timings.emplace_back("index_build", ms_since(t0));

  if (format == "json") {
    json j;
    j["p"] = prm.p.value();
    j["n"] = prm.n;
    j["k"] = prm.k;
    j["variant"] = to_string(prm.variant);
    j["count"] = cloud.size();
    j["leaves"] = tree.stats().leaves;
    j["timings_ms"] = json::object();
    for (const auto& [name, ms] : timings) j["timings_ms"][name] = ms;
    out << j.dump(2) << '\n';
    return kOk;
  }
  char line[128];
  out << cloud.size() << " uniform points, p = " << prm.p.value() << ", n = " << prm.n << ", k = " << prm.k
      << ", " << to_string(prm.variant) << '\n';
  for (const auto& [name, ms] : timings) {
    std::snprintf(line, sizeof line, "%-12s %10.2f ms %10.3f us/point\n", name.c_str(), ms,
                  1000.0 * ms / static_cast<double>(cloud.size()));
    out << line;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// option wiring

void add_curve_options(CLI::App* sub, RunConfig& cfg, bool with_k, bool with_n) {
  sub->add_option("--p", cfg.curve.p, "prime radix")->capture_default_str();
  if (with_n) cfg.n_opts.push_back(sub->add_option("--n", cfg.curve.n, "dimension")->capture_default_str());
  if (with_k) sub->add_option("--k", cfg.curve.k, "curve iterations")->capture_default_str();
  sub->add_option("--variant", cfg.curve.variant, "local order: bubble or ring")->capture_default_str();
}

void add_data_options(CLI::App* sub, RunConfig& cfg) {
  auto& d = cfg.data;
  sub->add_option("--input", d.input, "CSV file, one point per row");
  sub->add_flag("--header", d.header, "skip the first CSV row");
  sub->add_option("--delimiter", d.delimiter, "CSV delimiter")->capture_default_str();
  sub->add_option("--columns", d.columns, "0-based CSV columns to read, e.g. 0,1,3");
  sub->add_option("--normalize", d.normalize, "CSV scaling into the unit cube: none, minmax or global")
      ->capture_default_str();
  sub->add_option("--iris", d.iris, "iris encoding: original, cdf, cdf_trimmed or bch");
  sub->add_option("--data-dir", d.data_dir, "directory holding iris_<encoding>.csv files");
  sub->add_option("--scaling", d.scaling, "iris scaling: minmax or global")->capture_default_str();
  sub->add_option("--dist", d.dist, "generate points: uniform or normal");
  sub->add_option("--count", d.count, "generated points")->capture_default_str();
  sub->add_option("--seed", d.seed, "generator seed")->capture_default_str();
  sub->add_option("--normal-mapping", d.normal_mapping, "normal samples into the cube: truncate3 or minmax")
      ->capture_default_str();
  sub->add_option("--kmax", cfg.kmax, "maximal curve iterations of the tree")->capture_default_str();
  sub->add_option("--threads", cfg.threads, "encoding workers (0: all cores)")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"p-adic Gray-Hilbert curves, the scaled tree index and its sparsity measures", "grayhilbert"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "show help for every command");
  RunConfig cfg;

  auto* encode = app.add_subcommand("encode", "curve index -> cell and lower-corner coordinates");
  add_curve_options(encode, cfg, true, true);
  encode->add_option("index", cfg.index, "integer, or limbs such as [3,1]")->required();
  encode->add_option("--format", cfg.curve.format, "table or json (default table)");

  auto* decode = app.add_subcommand("decode", "cell or point -> curve index");
  add_curve_options(decode, cfg, true, true);
  decode->add_option("--cell", cfg.cell, "cell digits per level, most significant axis first: [(1,0),(0,1)]");
  decode->add_option("--point", cfg.point, "coordinates in [0,1], axis n-1 first: 0.9,0.1");
  decode->add_option("--format", cfg.curve.format, "table or json (default table)");

  auto* trace = app.add_subcommand("trace", "the curve through all cell centres");
  add_curve_options(trace, cfg, true, true);
  trace->add_option("--format", cfg.curve.format, "csv or svg (default csv)");

  auto* index = app.add_subcommand("index", "scaled tree over a dataset");
  index->require_subcommand(1);
  std::map<std::string, CLI::App*> actions;
  for (const char* name : {"build", "find", "insert", "remove"}) {
    auto* a = index->add_subcommand(name, std::string(name) + " on the tree built from the dataset");
    add_curve_options(a, cfg, false, true);
    add_data_options(a, cfg);
    a->add_option("--bucket", cfg.buckets, "bucket capacity s (default 1)");
    a->add_option("--format", cfg.curve.format, "json or table (default json)");
    actions[name] = a;
  }
  actions["build"]->add_flag("--leaves", cfg.leaves, "list every leaf");
  actions["find"]->add_option("--point", cfg.point, "coordinates, axis n-1 first")->required();
  actions["insert"]->add_option("--point", cfg.point, "coordinates, axis n-1 first; gets the next free id")
      ->required();
  actions["remove"]->add_option("--id", cfg.id, "point id (row number)")->required();

  auto* sparsity = app.add_subcommand("sparsity", "capacity ratio and local sparsity over a bucket sweep");
  add_curve_options(sparsity, cfg, false, true);
  add_data_options(sparsity, cfg);
  sparsity->add_option("--bucket", cfg.buckets, "bucket sizes: 1,2,4 or 1..64 (powers of two; default 1..64)");
  sparsity->add_option("--repeat", cfg.repeat, "average over this many seeds (generated data)")
      ->capture_default_str();
  sparsity->add_option("--format", cfg.curve.format, "table, json or csv (default table)");

  auto* bench = app.add_subcommand("bench", "timings for encoding and index construction");
  add_curve_options(bench, cfg, true, true);
  bench->add_option("--count", cfg.data.count, "uniform random points")->capture_default_str();
  bench->add_option("--seed", cfg.data.seed, "generator seed")->capture_default_str();
  bench->add_option("--bucket", cfg.buckets, "bucket capacity for the index build (default 1)");
  bench->add_option("--threads", cfg.threads, "encoding workers (0: all cores)")->capture_default_str();
  bench->add_option("--format", cfg.curve.format, "table or json (default table)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (encode->parsed()) return cmd_encode(cfg, out);
    if (decode->parsed()) return cmd_decode(cfg, out);
    if (trace->parsed()) return cmd_trace(cfg, out);
    if (sparsity->parsed()) return cmd_sparsity(cfg, out);
    if (bench->parsed()) return cmd_bench(cfg, out);
    for (const auto& [name, a] : actions) {
      if (a->parsed()) return cmd_index(name, cfg, out);
    }
    err << "no command given\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const NotFoundError& e) {
    err << "not found: " << e.what() << '\n';
    return kData;
  } catch (const ContractViolation& e) {
    err << "invalid parameters: " << e.what() << '\n';
    return kContract;
  } catch (const RangeError& e) {
    err << "out of range: " << e.what() << '\n';
    return kContract;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace grayhilbert::cli
