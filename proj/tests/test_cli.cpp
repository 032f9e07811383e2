#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "grayhilbert/cli.hpp"
#include "json.hpp"

using json = nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = grayhilbert::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("encode and decode") {
  auto r = run({"encode", "--p", "2", "--n", "2", "--k", "1", "3"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("cell   [(1,0)]") != std::string::npos);
  CHECK(r.out.find("coord  (0.5,0) on axes (1,0)") != std::string::npos);

  r = run({"encode", "--p", "3", "--n", "2", "--k", "2", "0", "--format", "json"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["coord"] == json::array({0.0, 0.0}));
  CHECK(j["cell"] == json::array({json::array({0, 0}), json::array({0, 0})}));

  std::mt19937_64 rng(1);
  for (const auto& [p, n, k] : std::vector<std::tuple<int, int, int>>{{2, 3, 4}, {3, 2, 3}, {5, 2, 2}}) {
    const auto total = static_cast<std::uint64_t>(std::pow(p, n * k));
    for (int round = 0; round < 20; ++round) {
      const auto i = rng() % total;
      const std::vector<std::string> curve = {"--p", std::to_string(p), "--n", std::to_string(n), "--k",
                                              std::to_string(k)};
      auto args = curve;
      args.insert(args.begin(), "encode");
      args.push_back(std::to_string(i));
      args.push_back("--format");
      args.push_back("json");
      const auto enc = json::parse(run(args).out);
      REQUIRE(enc["index"] == i);
      // decode the printed cell
      std::string cell = "[";
      for (const auto& level : enc["cell"]) {
        cell += "(";
        for (std::size_t a = 0; a < level.size(); ++a) cell += (a ? "," : "") + level[a].dump();
        cell += "),";
      }
      cell.back() = ']';
      args = curve;
      args.insert(args.begin(), "decode");
      args.insert(args.end(), {"--cell", cell, "--format", "json"});
      const auto dec = json::parse(run(args).out);
      CHECK(dec["index"] == i);
      // and the limb form of the index
      std::string limbs = "[";
      for (const auto& l : enc["limbs"]) limbs += l.dump() + ",";
      limbs.back() = ']';
      args = curve;
      args.insert(args.begin(), "encode");
      args.insert(args.end(), {limbs, "--format", "json"});
      CHECK(json::parse(run(args).out)["index"] == i);
    }
  }

  r = run({"decode", "--p", "2", "--n", "2", "--k", "1", "--point", "0.9,0.1"});
  CHECK(r.out.find("index  3") != std::string::npos);
  CHECK(run({"decode", "--k", "1"}).code == 2);
  CHECK(run({"decode", "--k", "1", "--point", "1.5,0"}).code == 4);
  CHECK(run({"decode", "--k", "2", "--cell", "[(1,0)]"}).code == 4);
  CHECK(run({"encode", "--p", "2", "--n", "2", "--k", "1", "4"}).code == 4);
  CHECK(run({"encode", "--p", "6", "1"}).code == 4);
  CHECK(run({"encode", "--variant", "both", "1"}).code == 2);
}

TEST_CASE("trace") {
  auto r = run({"trace", "--p", "2", "--n", "2", "--k", "1"});
  REQUIRE(r.code == 0);
  // axis 1, axis 0: right, up, left when axis 0 is horizontal
  const std::vector<std::vector<double>> expected = {
      {0, 0.25, 0.25}, {1, 0.25, 0.75}, {2, 0.75, 0.75}, {3, 0.75, 0.25}};
  CHECK(csv_rows(r.out) == expected);

  r = run({"trace", "--p", "3", "--n", "2", "--k", "1"});
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 9);
  // boustrophedon: axis 0 runs up, down, up in the three axis-1 columns
  for (int col = 0; col < 3; ++col) {
    for (int j = 0; j < 3; ++j) {
      const auto& row = rows[col * 3 + j];
      CHECK(row[1] == doctest::Approx((col + 0.5) / 3));
      CHECK(row[2] == doctest::Approx(((col % 2 ? 2 - j : j) + 0.5) / 3));
    }
  }

  for (const auto& [p, n, k] : std::vector<std::tuple<int, int, int>>{{2, 3, 2}, {3, 2, 2}, {2, 2, 4}, {5, 1, 2}}) {
    r = run({"trace", "--p", std::to_string(p), "--n", std::to_string(n), "--k", std::to_string(k)});
    const auto pts = csv_rows(r.out);
    REQUIRE(pts.size() == static_cast<std::size_t>(std::pow(p, n * k)));
    const double step = std::pow(p, -k);
    for (std::size_t i = 1; i < pts.size(); ++i) {
      double linf = 0;
      for (std::size_t a = 1; a < pts[i].size(); ++a) linf = std::max(linf, std::abs(pts[i][a] - pts[i - 1][a]));
      CHECK(linf == doctest::Approx(step));
    }
  }

  r = run({"trace", "--k", "2", "--format", "svg"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("<svg") == 0);
  CHECK(r.out.find("<polyline") != std::string::npos);
  CHECK(run({"trace", "--n", "3", "--format", "svg"}).code == 4);
  CHECK(run({"trace", "--format", "png"}).code == 2);
}

TEST_CASE("index commands") {
  auto r = run({"index", "build", "--iris", "original", "--bucket", "1"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["stats"]["leaves"] == 147);
  CHECK(j["stats"]["points"] == 150);

  r = run({"index", "build", "--iris", "original", "--bucket", "16", "--variant", "ring"});
  CHECK(json::parse(r.out)["stats"]["leaves"] == 20);
  // deterministic output
  CHECK(run({"index", "build", "--iris", "original", "--bucket", "16", "--variant", "ring"}).out == r.out);

  r = run({"index", "find", "--iris", "original", "--bucket", "4", "--point", "0.2,0.6,0.1,0.05"});
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  CHECK(j.contains("found"));

  r = run({"index", "insert", "--dist", "uniform", "--count", "50", "--n", "3", "--point", "0.5,0.5,0.5"});
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  CHECK(j["inserted"] == 50);
  CHECK(j["stats"]["points"] == 51);
  CHECK(j["leaf"]["ids"].size() >= 1);

  r = run({"index", "remove", "--dist", "uniform", "--count", "50", "--n", "3", "--id", "7"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["stats"]["points"] == 49);
  CHECK(run({"index", "remove", "--dist", "uniform", "--count", "50", "--id", "70"}).code == 3);

  const auto empty = std::filesystem::temp_directory_path() / "grayhilbert-empty.csv";
  std::ofstream(empty) << "";
  CHECK(run({"index", "build", "--input", empty.string()}).code == 3);
  std::filesystem::remove(empty);
  CHECK(run({"index", "build"}).code == 2);
  CHECK(run({"index", "build", "--iris", "original", "--dist", "uniform"}).code == 2);
  CHECK(run({"index", "build", "--iris", "bch", "--data-dir", "/nonexistent"}).code == 3);
}

TEST_CASE("csv input") {
  const auto file = std::filesystem::temp_directory_path() / "grayhilbert-cli.csv";
  std::ofstream(file) << "a,b\n2,10\n4,20\n6,30\n8,10\n";
  CHECK(run({"index", "build", "--input", file.string(), "--header"}).code == 4);
  auto r = run({"index", "build", "--input", file.string(), "--header", "--normalize", "minmax"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["stats"]["leaves"] == 4);
  CHECK(run({"index", "build", "--input", file.string()}).code == 3);  // header read as data
  CHECK(run({"index", "build", "--input", file.string(), "--header", "--normalize", "minmax", "--n", "3"}).code ==
        3);
  std::filesystem::remove(file);
}

TEST_CASE("sparsity reports") {
  auto r = run({"sparsity", "--iris", "original", "--variant", "both", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  REQUIRE(j["rows"].size() == 14);
  CHECK(j["rows"][0]["variant"] == "bubble");
  CHECK(j["rows"][7]["variant"] == "ring");
  CHECK(j["rows"][0]["s"] == 1);
  CHECK(j["rows"][6]["s"] == 64);
  CHECK(j["rows"][0]["leaves_scaled"] == 147);
  for (const auto& row : j["rows"]) {
    CHECK(row["bounds_hold"] == true);
    CHECK(row["rho_2dp"].get<std::string>().size() == 4);
  }

  r = run({"sparsity", "--iris", "original", "--bucket", "1,4", "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("s,variant,leaves_scaled,omega_static,omega_scaled,k,eps,log2_ratio,rho\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 3);

  r = run({"sparsity", "--dist", "uniform", "--count", "2000", "--n", "3", "--bucket", "1,2", "--repeat", "3"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("mean of 3 seeds") != std::string::npos);
  CHECK(run({"sparsity", "--iris", "original", "--repeat", "2"}).code == 2);
  CHECK(run({"sparsity", "--iris", "original", "--bucket", "150"}).code == 4);
  CHECK(run({"sparsity", "--iris", "original", "--bucket", "0"}).code == 2);
}

TEST_CASE("bench and usage") {
  auto r = run({"bench", "--n", "2", "--k", "4", "--count", "200", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["timings_ms"].contains("encode"));
  CHECK(j["count"] == 200);

  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"encode"}).code == 2);
  CHECK(run({"encode", "--p", "x", "1"}).code == 2);
  r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("sparsity") != std::string::npos);
}
