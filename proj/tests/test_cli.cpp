#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli_app.hpp"
#include "gaussmem/numerics.hpp"

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "gaussmem");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code =
      gaussmem::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

std::vector<double> fields(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      out.push_back(std::stod(cell));
    } catch (...) {
      out.push_back(std::nan(""));
    }
  }
  return out;
}

}  // namespace

TEST_CASE("capacity command: identity special case") {
  auto r = invoke({"capacity", "--kappa", "1", "--mu", "0.5", "--nbar", "0", "--energy", "8"});
  CHECK(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 2);
  CHECK(ls[0] == "kappa,mu,nbar,energy,capacity_nats,quadrature_error,method");
  const auto row = fields(ls[1]);
  CHECK(row[4] == doctest::Approx(gaussmem::g(8.0)).epsilon(1e-11));
  CHECK(ls[1].find("special_case") != std::string::npos);
}

TEST_CASE("capacity command is deterministic") {
  const std::vector<std::string> args = {"capacity", "--kappa", "0.9", "--mu", "0.8",
                                         "--nbar", "1", "--energy", "8"};
  auto a = invoke(args);
  auto b = invoke(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("spectrum command: asymptotic and finite") {
  auto rows = invoke({"spectrum", "--kappa", "0.5", "--mu", "0.5", "--points", "9"});
  CHECK(rows.code == 0);
  auto ls = lines(rows.out);
  REQUIRE(ls.size() == 10);
  CHECK(ls[0] == "z,eta");
  CHECK(fields(ls[1])[1] == doctest::Approx(0.0).epsilon(1e-12));  // eta(0) = 0 at kappa=mu

  auto fin = invoke({"spectrum", "--kappa", "0.5", "--mu", "0.5", "--n", "4"});
  auto fls = lines(fin.out);
  REQUIRE(fls.size() == 5);
  CHECK(fls[0] == "j,eta_j,divergent");

  auto div = invoke({"spectrum", "--kappa", "4", "--mu", "0.5", "--n", "4"});
  auto dls = lines(div.out);
  REQUIRE(dls.size() == 5);
  CHECK(fields(dls[4])[2] == 1.0);  // largest flagged divergent
}

TEST_CASE("waterfill summary reports the cutoff") {
  auto cold = invoke({"waterfill", "--kappa", "0.9", "--mu", "0.8", "--nbar", "0.5",
                      "--energy", "8", "--summary"});
  CHECK(cold.code == 0);
  auto ls = lines(cold.out);
  REQUIRE(ls.size() == 2);
  CHECK(ls[0] == "lambda,z0,z0_fraction,energy,energy_residual");
  CHECK(fields(ls[1])[1] == 0.0);

  auto hot = invoke({"waterfill", "--kappa", "0.9", "--mu", "0.8", "--nbar", "1.2",
                     "--energy", "8", "--summary"});
  CHECK(fields(lines(hot.out)[1])[1] > 0.0);
}

TEST_CASE("simulate --check closed-form reports tiny residuals") {
  auto r = invoke({"simulate", "--kappa", "0.5", "--mu", "0.5", "--n", "8", "--check",
                   "closed-form"});
  CHECK(r.code == 0);
  auto ls = lines(r.out);
  REQUIRE(ls.size() == 2);
  const auto row = fields(ls[1]);
  CHECK(row[0] == 8.0);
  CHECK(row[1] < 1e-10);  // max entrywise |A A^T - M|
  CHECK(row[5] == 1.0);   // pass flag
}

TEST_CASE("additive command emits capacity and single-mode bound") {
  auto r = invoke({"additive", "--mu", "0.25", "--nc", "1", "--energy", "8"});
  CHECK(r.code == 0);
  const auto row = fields(lines(r.out)[1]);
  CHECK(row[3] == doctest::Approx(2.00320830118474).epsilon(1e-9));
  CHECK(row[3] >= row[4]);
}

TEST_CASE("sweep over nbar tracks the critical temperature") {
  auto r = invoke({"sweep", "--var", "nbar", "--from", "0", "--to", "2", "--steps", "11",
                   "--kappa", "0.9", "--mu", "0.8", "--energy", "8", "--quantity",
                   "z0_fraction", "--threads", "2"});
  CHECK(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 12);
  CHECK(ls[0] == "nbar,z0_fraction");
  // zero below the critical temperature (~0.8), positive above
  CHECK(fields(ls[1])[1] == 0.0);
  CHECK(fields(ls[4])[1] == 0.0);   // nbar = 0.6
  CHECK(fields(ls[7])[1] > 0.0);    // nbar = 1.2
  double prev = -1.0;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    CHECK(fields(ls[i])[1] >= prev);
    prev = fields(ls[i])[1];
  }
}

TEST_CASE("sweep is deterministic under threading") {
  const std::vector<std::string> base = {"sweep", "--var", "kappa", "--from", "0.1",
                                         "--to", "0.9", "--steps", "9", "--mu", "0.5",
                                         "--nbar", "1", "--energy", "8", "--quantity",
                                         "capacity,z0_fraction"};
  auto one = invoke([&] {
    auto v = base;
    v.push_back("--threads");
    v.push_back("1");
    return v;
  }());
  auto four = invoke([&] {
    auto v = base;
    v.push_back("--threads");
    v.push_back("4");
    return v;
  }());
  CHECK(one.code == 0);
  CHECK(one.out == four.out);
  CHECK(lines(one.out)[0] == "kappa,capacity_nats,z0_fraction");
}

TEST_CASE("sweep vector quantity emits long-format rows") {
  auto r = invoke({"sweep", "--var", "nbar", "--from", "0.5", "--to", "1.0", "--steps",
                   "2", "--kappa", "0.9", "--mu", "0.8", "--energy", "8", "--quantity",
                   "n_of_z", "--points", "5"});
  CHECK(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 11);  // header + 2 grid points x 5 samples
  CHECK(ls[0] == "nbar,z,n_of_z");
  CHECK(fields(ls[1])[0] == 0.5);
  CHECK(fields(ls[6])[0] == 1.0);
}

TEST_CASE("json output carries columns and rows") {
  auto r = invoke({"capacity", "--kappa", "0.5", "--mu", "0", "--nbar", "1", "--energy",
                   "8", "--format", "json"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"command\": \"capacity\"") != std::string::npos);
  CHECK(r.out.find("\"capacity_nats\"") != std::string::npos);
  CHECK(r.out.find("1.65299496937") != std::string::npos);
}

TEST_CASE("config file provides defaults, flags override") {
  const std::string path = "test_cli_config.tmp";
  {
    std::ofstream f(path);
    f << "kappa=0.5\nmu=0\nnbar=1\nenergy=8\n";
  }
  auto r = invoke({"capacity", "--config", path});
  CHECK(r.code == 0);
  CHECK(fields(lines(r.out)[1])[4] == doctest::Approx(1.652994969375886).epsilon(1e-9));

  auto over = invoke({"capacity", "--config", path, "--energy", "1"});
  CHECK(over.code == 0);
  CHECK(fields(lines(over.out)[1])[3] == 1.0);
  std::remove(path.c_str());
}

TEST_CASE("exit codes") {
  // usage: unknown flag
  CHECK(invoke({"capacity", "--bogus", "1"}).code == 64);
  // usage: missing required
  CHECK(invoke({"capacity", "--kappa", "1"}).code == 64);
  // domain error: threshold
  auto dom = invoke({"capacity", "--kappa", "2", "--mu", "0.5", "--energy", "8"});
  CHECK(dom.code == 1);
  CHECK(dom.err.find("domain error") != std::string::npos);
  // domain error: invalid parameter range
  CHECK(invoke({"capacity", "--kappa", "-1", "--mu", "0.5", "--energy", "8"}).code == 1);
  // resource error: n over the cap
  setenv("GAUSSMEM_MAX_N", "8", 1);
  CHECK(invoke({"simulate", "--kappa", "0.5", "--mu", "0.5", "--n", "9"}).code == 2);
  unsetenv("GAUSSMEM_MAX_N");
  // help
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("--out writes the file") {
  const std::string path = "test_cli_out.tmp";
  auto r = invoke({"capacity", "--kappa", "1", "--mu", "0", "--energy", "8", "--out", path});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  std::string header;
  std::getline(f, header);
  CHECK(header == "kappa,mu,nbar,energy,capacity_nats,quadrature_error,method");
  f.close();
  std::remove(path.c_str());
}
