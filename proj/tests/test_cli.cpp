#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "fixtures.hpp"
#include "oql/cli.hpp"
#include "oql/model_io.hpp"
#include "oql/report.hpp"

using namespace oql;
using oql::report::Json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

Json machine(std::vector<std::string> args) {
  args.insert(args.begin(), {"--format", "machine"});
  return Json::parse(run(args).out);
}

std::string d(const char* f) { return fixtures::data(f); }

class EnvGuard {
public:
  explicit EnvGuard(const char* value) { setenv("SUBENTITY_LAB_EPS", value, 1); }
  ~EnvGuard() { unsetenv("SUBENTITY_LAB_EPS"); }
};

}  // namespace

TEST(Report, Sha256KnownVector) {
  EXPECT_EQ(report::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(report::input_digest({"abc"}), report::sha256_hex("abc"));
  EXPECT_NE(report::input_digest({"ab", "c"}), report::input_digest({"a", "bc"}));
}

TEST(Report, MachineBlockRoundTrips) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"check-axioms", d("mo2.sps")},
           {"subentity-quantum", d("bell_completed.model")},
           {"lecce-build", d("lab_world.lab")},
           {"decompose", d("mixed_qutrit.hilbert"), "--parts", "4", "--samples", "2", "--seed", "3"}}) {
    const auto j = machine(args);
    const auto r = report::Report::from_json(j);
    EXPECT_EQ(r.to_json(), j);
    EXPECT_EQ(Json::parse(report::render_machine(r)), j);
  }
}

TEST(Cli, CheckAxiomsBooleanSquare) {
  const auto r = run({"check-axioms", d("boolean_square.sps"), "--format", "machine"});
  EXPECT_EQ(r.code, cli::exit_negative);
  const auto j = Json::parse(r.out);
  ASSERT_EQ(j["verdicts"].size(), 8u);
  std::vector<std::string> status;
  for (const auto& v : j["verdicts"]) status.push_back(v["status"]);
  EXPECT_EQ(status, (std::vector<std::string>{"pass", "pass", "pass", "pass", "pass", "fail", "fail", "fail"}));
  EXPECT_EQ(j["tool"], "oqlcheck");
  EXPECT_EQ(j["input_digest"], report::sha256_hex(io::read_file(d("boolean_square.sps"))));
  EXPECT_EQ(j["exit_code"], 1);
}

TEST(Cli, CheckAxiomsHumanReport) {
  const auto r = run({"check-axioms", d("o6.sps")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("fail  weak_modularity"), std::string::npos);
  EXPECT_NE(r.out.find("exit 1"), std::string::npos);
  EXPECT_NE(r.out.find("strict"), std::string::npos);
}

TEST(Cli, SpsCheck) {
  EXPECT_EQ(run({"sps-check", d("boolean_square.sps")}).code, 0);
  EXPECT_EQ(run({"sps-check", d("bad_meet.sps")}).code, 1);
  EXPECT_EQ(run({"sps-check", d("not_a_lattice.lattice")}).code, 2);
}

TEST(Cli, SchmidtAndPtrace) {
  const auto prod = machine({"schmidt", d("product.hilbert")});
  EXPECT_EQ(prod["exit_code"], 0);
  EXPECT_EQ(prod["machine"]["rank"], 1);
  EXPECT_NEAR(prod["machine"]["coefficients"][0].get<double>(), 1.0, 1e-12);
  const auto bell = machine({"schmidt", d("bell.hilbert")});
  EXPECT_EQ(bell["machine"]["rank"], 2);
  EXPECT_EQ(bell["machine"]["entangled"], true);

  const auto pt = machine({"ptrace", d("bell.hilbert"), "--keep", "B"});
  EXPECT_NEAR(pt["machine"]["purity"].get<double>(), 0.5, 1e-12);
  EXPECT_EQ(run({"ptrace", d("bell.hilbert"), "--keep", "C"}).code, 2);
}

TEST(Cli, SubentityCommands) {
  const auto q = run({"subentity-quantum", d("bell_completed.model"), "--format", "machine"});
  EXPECT_EQ(q.code, 0);
  const auto j = Json::parse(q.out);
  EXPECT_EQ(j["machine"]["verified"], true);
  EXPECT_TRUE(j["machine"].contains("witness"));

  EXPECT_EQ(run({"subentity-quantum", d("bell_split.model")}).code, 0);
  EXPECT_EQ(run({"subentity-search", d("boolean_square.sps"), d("boolean_square.sps")}).code, 0);
  EXPECT_EQ(run({"subentity-search", d("boolean_square.sps"), d("mo2.sps")}).code, 1);
  const auto budget = run({"subentity-search", d("mo2.sps"), d("mo2.sps"), "--budget", "1"});
  EXPECT_EQ(budget.code, 3);
}

TEST(Cli, LecceDecomposeEvolve) {
  EXPECT_EQ(run({"lecce-build", d("lab_world.lab")}).code, 0);
  const auto bad = machine({"lecce-build", d("lab_mismatch.lab")});
  EXPECT_EQ(bad["exit_code"], 1);
  EXPECT_EQ(bad["machine"]["frequency_violations"].size(), 1u);

  const auto dec = machine({"decompose", d("mixed_qutrit.hilbert"), "--parts", "5", "--samples", "3", "--seed", "7"});
  EXPECT_EQ(dec["exit_code"], 0);
  EXPECT_LE(dec["machine"]["max_reconstruction_error"].get<double>(), 1e-8);
  EXPECT_EQ(run({"decompose", d("mixed_qutrit.hilbert"), "--parts", "1"}).code, 2);

  const auto ev = machine({"evolve", d("cnot.hilbert")});
  EXPECT_NEAR(ev["machine"]["purity_before"].get<double>(), 1.0, 1e-9);
  EXPECT_NEAR(ev["machine"]["purity_after"].get<double>(), 0.5, 1e-9);
}

TEST(Cli, InputErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"check-axioms"}).code, 2);
  const auto missing = run({"check-axioms", d("nope.sps")});
  EXPECT_EQ(missing.code, 2);
  EXPECT_FALSE(missing.err.empty());
  const auto order = run({"check-axioms", d("not_a_lattice.lattice")});
  EXPECT_EQ(order.code, 2);
  EXPECT_NE(order.err.find("a and b have no unique least upper bound"), std::string::npos);
  EXPECT_EQ(run({"schmidt", d("boolean_square.sps")}).code, 2);
  EXPECT_EQ(run({"--format", "xml", "check-axioms", d("mo2.sps")}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, MachineOutputIsByteStable) {
  const std::vector<std::string> args{"--format", "machine", "decompose", d("mixed_qutrit.hilbert"),
                                      "--parts", "4", "--samples", "3", "--seed", "11"};
  EXPECT_EQ(run(args).out, run(args).out);
  const std::vector<std::string> search{"--format", "machine", "subentity-search", d("mo2.sps"), d("mo2.sps")};
  EXPECT_EQ(run(search).out, run(search).out);
}

TEST(Cli, EpsFromEnvironmentAndFlag) {
  // Qutrit eigenvalues are 0.55, 0.25 and 0.2: eps 0.22 drops one term.
  const std::vector<std::string> base{"decompose", d("mixed_qutrit.hilbert"), "--parts", "3"};
  EXPECT_EQ(machine(base)["machine"]["rank"], 3);
  {
    EnvGuard env("0.22");
    EXPECT_EQ(machine(base)["machine"]["rank"], 2);
    auto flagged = base;
    flagged.insert(flagged.end(), {"--eps", "1e-9"});
    EXPECT_EQ(machine(flagged)["machine"]["rank"], 3);
  }
  {
    EnvGuard env("banana");
    EXPECT_EQ(run(base).code, 2);
  }
}

TEST(Cli, OutFlagWritesFile) {
  const auto path = std::filesystem::temp_directory_path() / "oql_cli_out.json";
  std::filesystem::remove(path);
  const auto r = run({"--format", "machine", "--out", path.string(), "check-axioms", d("mo2.sps")});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(r.out.empty());
  const auto j = Json::parse(io::read_file(path));
  EXPECT_EQ(j["command"], "check-axioms");
  std::filesystem::remove(path);
}
