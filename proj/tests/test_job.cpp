#include "doctest.h"
#include "support.hpp"

#include "cantor/job.hpp"
#include "cantor/output.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cantor;
using testing::Q;
namespace fs = std::filesystem;

namespace {

const char* kSecondGen = R"({
  "command": "second-gen",
  "maps": [{"slope": "1/3", "offset": "-2/3"}, {"slope": "1/3", "offset": "2/3"}],
  "alpha": "9/20",
  "epsilon": "1/100"
})";

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("cantor_job_test_" + name);
  fs::remove_all(p);
  return p;
}

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_text(const std::string& text, const fs::path& dir, job::Overrides o = {}) {
  std::ostringstream out, err;
  int code = job::run_document(text, o, dir, out, err);
  return {code, out.str(), err.str()};
}

std::string message_of(const std::string& text) {
  try {
    job::parse_spec(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("exact parsing") {
  auto s = job::parse_spec(R"({"command": "second-gen", "maps": [{"slope": "1/3"}, {"slope": "1/3", "offset": "2/3"}],
                               "alpha": "1/3"})");
  CHECK(s.alpha->exact == Q(1, 3));
  CHECK_FALSE(s.float_mode);
  auto d = job::parse_spec(R"({"command": "second-gen", "maps": [{"slope": "1/3"}, {"slope": "1/3", "offset": "2/3"}],
                               "alpha": "0.45"})");
  CHECK(d.alpha->exact == Q(9, 20));
  CHECK_FALSE(d.float_mode);
  auto f = job::parse_spec(R"({"command": "second-gen", "maps": [{"slope": "1/3"}, {"slope": "1/3", "offset": "2/3"}],
                               "alpha": 0.45})");
  CHECK(f.float_mode);
}

TEST_CASE("semantic errors name the field") {
  auto m = message_of(R"({"command": "second-gen", "maps": [{"slope": "1/3"}, {"slope": "1/3", "offset": 1}],
                          "alpha": 1.5})");
  CHECK(m.rfind("alpha:", 0) == 0);
  auto one = message_of(R"({"command": "attractor", "maps": [{"slope": "1/3"}]})");
  CHECK(one.rfind("maps:", 0) == 0);
  auto same = message_of(R"({"command": "attractor", "maps": [{"slope": "1/3"}, {"slope": "1/2"}]})");
  CHECK(same.find("fixed points") != std::string::npos);
  auto slope = message_of(R"({"command": "attractor", "maps": [{"slope": "1/3"}, {"slope": 2, "offset": 1}]})");
  CHECK(slope.rfind("maps[1].slope:", 0) == 0);
  auto unknown = message_of(R"({"command": "attractor", "maps": [{"slope": "1/3"}, {"slope": "1/3", "offset": 1}],
                                "alpah": 0.3})");
  CHECK(unknown.rfind("alpah:", 0) == 0);
  auto cmd = message_of(R"({"command": "nope"})");
  CHECK(cmd.rfind("command:", 0) == 0);
  auto missing = message_of(R"({"command": "neps", "maps": [{"slope": "1/3"}, {"slope": "1/3", "offset": 1}],
                                "alpha": "1/2"})");
  CHECK(missing.rfind("epsilon:", 0) == 0);
  auto set = message_of(R"({"command": "sum-check", "sets": [{"type": "rule", "interval": [0, 1],
                             "left": "1/2", "right": "1/2"}]})");
  CHECK(set.rfind("sets[0]:", 0) == 0);
}

TEST_CASE("syntax errors carry line and column") {
  auto m = message_of("{\n  \"command\": \"gaps\",\n  \"depth\": ,\n}");
  CHECK(m.find("line 3") != std::string::npos);
  CHECK(m.find("column 12") != std::string::npos);
}

TEST_CASE("second-gen end to end") {
  auto dir = scratch("second_gen");
  job::Overrides o;
  o.svg = true;
  auto r = run_text(kSecondGen, dir, o);
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "intervals.txt"));
  CHECK(fs::exists(dir / "intervals.csv"));
  CHECK(fs::exists(dir / "plot.svg"));
  CHECK(fs::exists(dir / "report.json"));
  auto u = parse_interval_list<Rational>(slurp(dir / "intervals.txt"));
  CHECK(u.hull() == Interval<Rational>(Q(-1), Q(1)));
  CHECK(slurp(dir / "intervals.csv").rfind("lo_num,lo_den,hi_num,hi_den\n", 0) == 0);
  auto svg = slurp(dir / "plot.svg");
  CHECK(svg.find("viewBox=\"0 0 1000.000") != std::string::npos);
  CHECK(svg.find("N_eps") != std::string::npos);
}

TEST_CASE("csv output is deterministic") {
  auto a = scratch("det_a"), b = scratch("det_b");
  std::string text = R"({"command": "second-gen", "alpha": "1/10",
    "maps": [{"slope": "1/3", "offset": "-2/3"}, {"slope": "1/3", "offset": "2/3"}]})";
  REQUIRE(run_text(text, a).code == 0);
  REQUIRE(run_text(text, b).code == 0);
  CHECK(slurp(a / "intervals.csv") == slurp(b / "intervals.csv"));
  CHECK(slurp(a / "intervals.txt") == slurp(b / "intervals.txt"));
}

TEST_CASE("interval list round trip") {
  auto spec = SecondGenSpec<Rational>{FirstGeneration<Rational>(testing::symmetric_ifs()), Q(1, 10)};
  auto u = second_gen_attractor(spec).set;
  CHECK(parse_interval_list<Rational>(format_interval_list(u)) == u);

  SecondGenSpec<double> ds{FirstGeneration<double>(testing::symmetric_ifs_double()), 0.1};
  auto d = second_gen_attractor(ds).set;
  auto back = parse_interval_list<double>(format_interval_list(d));
  REQUIRE(back.size() == d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(back[i].lo == d[i].lo);
    CHECK(back[i].hi == d[i].hi);
  }
  CHECK_THROWS_AS(parse_interval_list<Rational>("[1, 2]\n[3 4]\n"), InputError);
}

TEST_CASE("overlapping union exits 2") {
  auto r = run_text(R"({"command": "ulbd-check", "combine": "union",
    "sets": [{"type": "middle-third", "interval": [0, 1]}, {"type": "middle-third", "interval": ["1/2", "3/2"]}]})",
                    scratch("overlap"));
  CHECK(r.code == 2);
  CHECK(r.err.find("overlap") != std::string::npos);
}

TEST_CASE("oracle-compare prints the distance and a verdict") {
  auto r = run_text(R"({"command": "oracle-compare", "alpha": "9/20", "grid_h": "1/1000", "beta_depth": 6,
    "maps": [{"slope": "1/3", "offset": "-2/3"}, {"slope": "1/3", "offset": "2/3"}], "tolerance": "5e-3"})",
                    scratch("oracle"));
  CHECK(r.code == 0);
  CHECK(r.out.find("hausdorff distance") != std::string::npos);
  CHECK(r.out.find("PASS") != std::string::npos);
}

TEST_CASE("overrides take precedence") {
  auto dir = scratch("override");
  job::Overrides o;
  o.alpha = "1/10";
  o.depth = 6;
  auto r = run_text(kSecondGen, dir, o);
  REQUIRE(r.code == 0);
  auto rep = slurp(dir / "report.json");
  CHECK(rep.find("\"alpha\": \"1/10\"") != std::string::npos);
  o.alpha = "2";
  CHECK(run_text(kSecondGen, dir, o).code == 2);
}

TEST_CASE("budget failures exit 3") {
  auto r = run_text(R"({"command": "attractor", "depth": 24,
    "maps": [{"slope": "1/5"}, {"slope": "1/5", "offset": "2/5"}, {"slope": "1/5", "offset": "4/5"}]})",
                    scratch("budget"));
  CHECK(r.code == 3);
}

TEST_CASE("exit code mapping") {
  CHECK(job::exit_code_for(InputError("x")) == 2);
  CHECK(job::exit_code_for(OverlapError("x")) == 2);
  CHECK(job::exit_code_for(BudgetError("x", 0)) == 3);
  CHECK(job::exit_code_for(CertificateError("x")) == 3);
  CHECK(job::exit_code_for(NonConvergence("x")) == 4);
  CHECK(job::exit_code_for(InvariantViolation("x")) == 5);
}

TEST_CASE("other commands") {
  auto dir = scratch("cmds");
  std::string maps = R"("maps": [{"slope": "1/3", "offset": "-2/3"}, {"slope": "1/3", "offset": "2/3"}])";
  CHECK(run_text(R"({"command": "attractor", "depth": 4, )" + maps + "}", dir).code == 0);
  CHECK(parse_interval_list<Rational>(slurp(dir / "intervals.txt")).size() == 16);
  CHECK(run_text(R"({"command": "gaps", "depth": 3, )" + maps + "}", dir).code == 0);
  CHECK(slurp(dir / "intervals.txt").rfind("]-25/27, -23/27[\n", 0) == 0);
  CHECK(run_text(R"({"command": "neps", "alpha": "1/10", "epsilon": "1/100", )" + maps + "}", dir).code == 0);
  CHECK(run_text(R"({"command": "plot", "alpha": "1/10", )" + maps + "}", dir).code == 0);
  CHECK(fs::exists(dir / "plot.svg"));
  auto sum = run_text(R"({"command": "sum-check", "a": "1/3",
    "sets": [{"type": "middle-third", "interval": [0, 1]}, {"type": "middle-third", "interval": [0, 1]},
             {"type": "middle-third", "interval": [0, 1]}]})", dir);
  CHECK(sum.code == 0);
  CHECK(sum.out.find("certified") == 0);
  auto smooth = run_text(R"({"command": "gaps", "depth": 6, "maps": [
    {"kind": "smooth", "poly": [0, 0.3, 0.05], "sigma": 0.3, "delta": 0.4, "B": 0.1, "domain": [0, 1]},
    {"kind": "smooth", "poly": [0.6, 0.3, 0.05], "sigma": 0.3, "delta": 0.4, "B": 0.1, "domain": [0, 1]}]})", dir);
  CHECK(smooth.code == 0);
  CHECK(slurp(dir / "intervals.csv").rfind("lo,hi\n", 0) == 0);
  auto certified = run_text(R"({"command": "second-gen", "alpha": "1/5", "mode": "certified", )" + maps + "}", dir);
  CHECK(certified.code == 0);
}
