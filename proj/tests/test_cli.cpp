#include <doctest.h>

#include <lamellar/lamellar.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(LAMELLAR_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(is), {});
}

struct Table {
  std::string comment;
  std::vector<std::string> header;
  std::vector<std::map<std::string, std::string>> rows;

  double num(std::size_t r, const std::string& col) const { return std::stod(rows.at(r).at(col)); }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) out.push_back(f);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

Table read_csv(const std::string& path) {
  Table t;
  std::ifstream is(path);
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind("#", 0) == 0) {
      t.comment = line;
      continue;
    }
    if (t.header.empty()) {
      t.header = split(line);
      continue;
    }
    const auto f = split(line);
    REQUIRE(f.size() == t.header.size());
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < f.size(); ++i) row[t.header[i]] = f[i];
    t.rows.push_back(row);
  }
  return t;
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("lamellar_cli_" + std::to_string(std::rand()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("energy command") {
  TempDir d;
  REQUIRE(run("energy --N 2 --s 0.25 --gamma 1 --out " + d / "e.csv") == 0);
  auto t = read_csv(d / "e.csv");
  CHECK(t.comment.rfind("# lamellar 1.0.0 command=energy", 0) == 0);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.num(0, "k") == doctest::Approx(0.01041667).epsilon(1e-6));
  CHECK(t.num(0, "k_closed_form") == doctest::Approx(1.0 / 96.0).epsilon(1e-15));

  REQUIRE(run("energy --N 2,4,8,16 --s 0.25 --gamma 1 --out " + d / "e4.csv") == 0);
  t = read_csv(d / "e4.csv");
  REQUIRE(t.rows.size() == 4);
  const double ref = t.num(0, "h") / std::sqrt(2.0);
  for (std::size_t r = 0; r < 4; ++r) {
    CHECK(std::fabs(t.num(r, "h") / std::sqrt(t.num(r, "N")) / ref - 1.0) < 1e-5);
    CHECK(t.num(r, "N_pow_2s") == doctest::Approx(std::sqrt(t.num(r, "N"))));
  }
  CHECK(run("energy --N \"\" --out " + d / "bad.csv") == 2);
  CHECK_FALSE(fs::exists(d / "bad.csv"));
  CHECK(run("energy --N 3 --out " + d / "bad.csv") == 2);
  CHECK(run("energy --N 4 --s 0.7 --out " + d / "bad.csv") == 2);
  CHECK_FALSE(fs::exists(d / "bad.csv"));
}

TEST_CASE("spectrum command") {
  TempDir d;
  REQUIRE(run("spectrum --N 4 --gamma 0.001 --s 0.25 --out " + d / "s.csv") == 0);
  const auto t = read_csv(d / "s.csv");
  REQUIRE(t.rows.size() == 4);
  const double g = 1e-3;
  double mx = 0.0;
  for (std::size_t r = 0; r < 4; ++r) mx = std::max(mx, std::fabs(t.num(r, "lambda")));
  CHECK(std::fabs(t.num(0, "lambda")) < 1e-10 * mx);
  CHECK(std::fabs(t.num(1, "lambda") * g * g * 4 - 1.0) < 0.01);
  // Assembled from the Hessian, λ_{N/2} tends to -2/(3γ²N).
  CHECK(std::fabs(t.num(2, "lambda") * 6 * g * g + 1.0) < 0.01);
  CHECK(t.rows[1].at("classification") == "LocalMin");
  CHECK(t.num(1, "gamma0") == doctest::Approx(3.5355339e-3).epsilon(1e-6));
  CHECK(t.num(1, "green_part") + t.num(1, "kernel_part") == doctest::Approx(t.num(1, "lambda")).epsilon(1e-9));

  std::ofstream(d / "m.json") << R"({"command":"spectrum","N":[4],"gamma":[0.1],"m":0.2})";
  CHECK(run("--config " + d / "m.json" + " --out " + d / "m.csv") == 2);
  CHECK_FALSE(fs::exists(d / "m.csv"));
}

TEST_CASE("phase-diagram command") {
  TempDir d;
  const std::string args = "phase-diagram --N 4,8,16 --s 0.1,0.25,0.4 --gamma 0.0001,0.001,0.01,0.1,1 ";
  REQUIRE(run(args + "--threads 1 --out " + d / "p1.csv") == 0);
  REQUIRE(run(args + "--threads 4 --out " + d / "p4.csv") == 0);
  REQUIRE(run(args + "--threads 4 --out " + d / "p4b.csv") == 0);
  CHECK(slurp(d / "p1.csv") == slurp(d / "p4.csv"));
  CHECK(slurp(d / "p4.csv") == slurp(d / "p4b.csv"));
  const auto t = read_csv(d / "p1.csv");
  REQUIRE(t.rows.size() == 45);
  CHECK(t.header == std::vector<std::string>{"N", "s", "gamma", "min_constrained_eigenvalue", "classification",
                                              "gamma0", "gamma_star", "flag"});
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    CHECK(t.num(r, "gamma_star") >= t.num(r, "gamma0"));
    if (t.num(r, "gamma") < t.num(r, "gamma0")) CHECK(t.rows[r].at("classification") == "LocalMin");
    CHECK(t.rows[r].at("flag") == "ok");
  }

  std::ofstream(d / "rel.json") << R"({"command":"phase-diagram","N":[2,4],"gamma_over_gamma0":[0.5]})";
  CHECK(run("--config " + d / "rel.json" + " --out " + d / "rel.csv") == 2);
  std::ofstream(d / "two.json") << R"({"command":"phase-diagram","N":[2],"gamma":[1]})";
  REQUIRE(run("--config " + d / "two.json" + " --out " + d / "two.csv") == 0);
  const auto t2 = read_csv(d / "two.csv");
  CHECK(t2.rows[0].at("flag") == "unbounded");
  CHECK(t2.rows[0].at("gamma0").empty());
  CHECK(t2.rows[0].at("classification") == "LocalMin");
}

TEST_CASE("minimize command") {
  TempDir d;
  REQUIRE(run("minimize --N 4 --s 0.25 --seed 42 --out " + d / "m.json") == 0);
  const auto j = nlohmann::json::parse(slurp(d / "m.json"));
  CHECK(j["status"] == "converged");
  CHECK(j["params"]["amplitude"].get<double>() == doctest::Approx(0.025));
  const auto x = j["final"]["interfaces"].get<std::vector<double>>();
  REQUIRE(x.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(std::fabs(x[i] - (2 * i + 1) / 8.0) < 1e-6);
  CHECK(j["trace"].size() == j["iterations"].get<std::size_t>() + 1);

  std::ofstream(d / "zero.json") << R"({"command":"minimize","N":4,"amplitude":0})";
  REQUIRE(run("--config " + d / "zero.json" + " --out " + d / "z.json") == 0);
  CHECK(nlohmann::json::parse(slurp(d / "z.json"))["iterations"] == 0);

  std::ofstream(d / "sad.json") << R"({"command":"minimize","N":4,"gamma_over_gamma_star":10,"amplitude":0.001,"seed":3})";
  REQUIRE(run("--config " + d / "sad.json" + " --out " + d / "sad.out.json") == 0);
  const auto s = nlohmann::json::parse(slurp(d / "sad.out.json"));
  CHECK(s["energies"]["final"]["total"].get<double>() < s["energies"]["equidistributed"]["total"].get<double>());

  REQUIRE(run("minimize --N 4 --seed 42 --threads 3 --out " + d / "m3.json") == 0);
  CHECK(slurp(d / "m.json") == slurp(d / "m3.json"));
  CHECK(run("minimize --N 4 --seed 43 --out " + d / "m43.json") == 0);
  CHECK(slurp(d / "m.json") != slurp(d / "m43.json"));
  CHECK(run("minimize --N 4 --seed -1 --out " + d / "neg.json") == 2);
}

TEST_CASE("flow command") {
  TempDir d;
  REQUIRE(run("flow --N 2 --gamma 1 --eps 0.05 --grid-points 1024 --out " + d / "f") == 0);
  const auto t = read_csv(d / "f.trace.csv");
  REQUIRE(t.rows.size() > 2);
  for (std::size_t r = 1; r < t.rows.size(); ++r) {
    CHECK(t.num(r, "total") <= t.num(r - 1, "total") * (1 + 1e-13) + 1e-13);
  }
  double* v = nullptr;
  size_t m = 0;
  REQUIRE(lam_checkpoint_load((d / "f.llpf").c_str(), &v, &m) == LAM_OK);
  CHECK(m == 1024);
  REQUIRE(lam_checkpoint_save((d / "g.llpf").c_str(), v, m) == LAM_OK);
  lam_buffer_free(v);
  CHECK(slurp(d / "f.llpf") == slurp(d / "g.llpf"));

  REQUIRE(run("flow --N 2 --gamma 1 --eps 0.1,0.05,0.025 --grid-points 4096 --out " + d / "sched") == 0);
  const auto rec = read_csv(d / "sched.records.csv");
  REQUIRE(rec.rows.size() == 3);
  for (std::size_t r = 1; r < 3; ++r) CHECK(rec.num(r, "distance") < rec.num(r - 1, "distance"));
  const auto tr = read_csv(d / "sched.trace.csv");
  CHECK(tr.header.front() == "epsilon");
  CHECK(fs::exists(d / "sched.llpf"));

  CHECK(run("flow --eps 0.05,0.1 --out " + d / "bad") == 2);
  CHECK(run("flow --grid-points 1000 --out " + d / "bad") == 2);
  CHECK_FALSE(fs::exists(d / "bad.trace.csv"));
}

TEST_CASE("config handling and exit codes") {
  TempDir d;
  std::ofstream(d / "c.json") << R"({"command":"energy","N":[2,4],"s":0.25,"gamma":[1]})";
  REQUIRE(run("--config " + d / "c.json" + " --N 8 --out " + d / "c.csv") == 0);
  const auto t = read_csv(d / "c.csv");
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0].at("N") == "8");
  std::ofstream(d / "typo.json") << R"({"command":"energy","N":[2],"gama":1})";
  CHECK(run("--config " + d / "typo.json") == 2);
  std::ofstream(d / "broken.json") << "{";
  CHECK(run("--config " + d / "broken.json") == 2);
  CHECK(run("spectrum --config " + d / "c.json") == 2);
  CHECK(run("") == 2);
  CHECK(run("energy --N 2 --bogus") == 2);
  CHECK(run("energy --N 2 --out /nonexistent_dir/x.csv") == 3);
  CHECK(run("--help") == 0);

  REQUIRE(run("gamma0 --N 2,4 --s 0.25 --out " + d / "g.csv") == 0);
  const auto g = read_csv(d / "g.csv");
  CHECK(g.rows[0].at("gamma0").empty());
  CHECK(g.num(1, "gamma0") == doctest::Approx(1.0 / (100 * 0.5 * std::pow(4.0, 1.25))));
}
