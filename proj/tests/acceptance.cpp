// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include "support.hpp"

#include "cantor/job.hpp"
#include "cantor/output.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>

using namespace cantor;
using testing::Q;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + ("failed: " + what);
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

struct JobRun {
  int code;
  json report;
  fs::path dir;
};

JobRun run_job(const std::string& name, const std::string& text) {
  fs::path dir = fs::temp_directory_path() / ("cantor_acceptance_" + name);
  fs::remove_all(dir);
  std::ostringstream out, err;
  int code = job::run_document(text, {}, dir, out, err);
  return {code, json::parse(slurp(dir / "report.json")), dir};
}

const char* kThreeThirds = R"({"command": "sum-check", "a": "1/3", "grid_h": "1/6561", "depth": 8,
  "sets": [{"type": "middle-third", "interval": [0, 1]}, {"type": "middle-third", "interval": [0, 1]},
           {"type": "middle-third", "interval": [0, 1]}]})";

const char* kTwoThirds = R"({"command": "sum-check", "a": "1/3", "grid_h": "1/6561", "depth": 8,
  "sets": [{"type": "middle-third", "interval": [0, 1]}, {"type": "middle-third", "interval": [0, 1]}]})";

const char* kSecondGen = R"({"command": "second-gen", "alpha": "0.45", "epsilon": "0.01",
  "maps": [{"slope": "1/3", "offset": "-2/3"}, {"slope": "1/3", "offset": "2/3"}]})";

// Grid sum gap-free over [lo, hi]: one run, no empty cell, covering the target.
void check_grid(Verdict& v, const json& oracle, double lo, double hi) {
  v.require(oracle.at("empty_cells").get<std::size_t>() == 0, "grid oracle found empty cells");
  v.require(oracle.at("runs").get<std::size_t>() == 1, "grid sum splits into several runs");
  auto h = oracle.at("hull");
  v.require(h[0].get<double>() <= lo && hi <= h[1].get<double>(), "grid sum misses part of the target interval");
  v.note("grid " + std::to_string(oracle.at("cells").get<std::size_t>()) + " cells, 0 empty");
}

Verdict triple_sum() {
  Verdict v;
  v.require(cabrelli_check(Q(1, 3), 3), "cabrelli_check(1/3, 3)");
  v.require(cabrelli_value(Q(1, 3), 3) == Q(5, 4), "cabrelli value 5/4");
  // (m-1) a^2 / (1-a)^3 + a / (1-a) at a = 1/3, m = 3, written out
  v.require(Q(2) * Q(1, 9) / Q(8, 27) + Q(1, 3) / Q(2, 3) == Q(5, 4), "closed form");
  auto r = run_job("sum3", kThreeThirds);
  v.require(r.code == 0, "sum-check exit code " + std::to_string(r.code));
  const auto& c = r.report.at("certificate");
  v.require(c.at("certified").get<bool>(), "certified");
  v.require(c.at("interval") == json::array({json{{"exact", "0"}, {"approx", 0.0}}, json{{"exact", "3"}, {"approx", 3.0}}}),
            "interval [0, 3]");
  v.require(c.at("cabrelli_value").at("exact") == "5/4", "reported value 5/4");
  check_grid(v, r.report.at("oracle"), 0.0, 3.0);
  v.note("certified [0, 3], value 5/4");
  return v;
}

Verdict pair_sum() {
  Verdict v;
  v.require(!cabrelli_check(Q(1, 3), 2), "cabrelli_check(1/3, 2) is false");
  v.require(cabrelli_value(Q(1, 3), 2) == Q(7, 8), "cabrelli value 7/8");
  auto r = run_job("sum2", kTwoThirds);
  v.require(r.code == 0, "sum-check exit code " + std::to_string(r.code));
  const auto& c = r.report.at("certificate");
  v.require(!c.at("certified").get<bool>(), "not certified");
  v.require(c.at("cabrelli_value").at("exact") == "7/8", "reported value 7/8");
  check_grid(v, r.report.at("oracle"), 0.0, 2.0);
  v.note("not certified at 7/8, grid sum gap-free on [0, 2]");
  return v;
}

Verdict constants() {
  Verdict v;
  v.require(aprime(Q(1, 3)) == Q(1, 12), "aprime(1/3) = 1/12");
  v.require(a_m(Q(1, 3), 3) == Q(1, 156), "a_m(1/3, 3) = 1/156");
  testing::Gen g(3);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    int maps = static_cast<int>(g.integer(2, 5));
    std::vector<MapDescriptor<Rational>> ds;
    Rational least(1);
    for (int k = 0; k < maps; ++k) {
      Rational s = g.rational(Q(1, 50), Q(9, 10), 97) + Q(1, 100);
      if (g.coin()) s = -s;
      least = std::min<Rational>(least, abs(s));
      ds.push_back(MapDescriptor<Rational>::affine(s, Q(k)));
    }
    Ifs<Rational> f(std::move(ds));
    v.require(ratio_floor(f) == least, "ratio_floor of a random affine system");
    ++checked;
  }
  v.require(ratio_floor(testing::middle_third_ifs()) == Q(1, 3), "ratio_floor of the middle-third system");
  v.note("aprime 1/12, a_3 1/156, ratio_floor exact on " + std::to_string(checked) + " random systems");
  return v;
}

Verdict phi_algebra() {
  Verdict v;
  testing::Gen g(4);
  double worst = 0;
  std::size_t exact_miss = 0;
  for (int i = 0; i < 1000; ++i) {
    Rational alpha = g.rational(Q(1, 100), Q(99, 100), 100);
    std::vector<Rational> bs;
    std::vector<double> bd;
    for (long long k = g.integer(0, 16); k > 0; --k) {
      bs.push_back(g.rational(Q(-1), Q(1), 64));
      bd.push_back(to_double(bs.back()));
    }
    Rational x = g.rational(Q(-1), Q(1), 64);
    // literal iteration: apply phi_{beta_1} first, then phi_{beta_2}, ...
    Rational lit = x;
    double lit_d = to_double(x);
    const double ad = to_double(alpha);
    for (std::size_t k = 0; k < bs.size(); ++k) {
      lit = alpha * lit + (1 - alpha) * bs[k];
      lit_d = ad * lit_d + (1 - ad) * bd[k];
    }
    if (compose_phi(alpha, bs, x) != lit) ++exact_miss;
    worst = std::max(worst, std::abs(compose_phi(ad, bd, to_double(x)) - lit_d));
  }
  v.require(exact_miss == 0, std::to_string(exact_miss) + " rational mismatches");
  v.require(worst <= 1e-12, "float error " + fmt(worst));
  v.note("1000 cases, rational exact, float max error " + fmt(worst));
  return v;
}

Verdict second_gen_end_to_end() {
  Verdict v;
  auto r = run_job("second_gen", kSecondGen);
  v.require(r.code == 0, "second-gen exit code " + std::to_string(r.code));
  if (r.code != 0) return v;
  auto k = parse_interval_list<Rational>(slurp(r.dir / "intervals.txt"));
  v.require(!k.empty(), "non-empty result");
  v.require(k.hull() == Interval<Rational>(Q(-1), Q(1)), "hull exactly [-1, 1]");
  v.require(r.report.at("sandwich").get<bool>(), "sandwich check");
  v.require(r.report.at("n_epsilon").at("disjoint_from_attractor").get<bool>(), "N_eps disjoint");
  auto grid = grid_second_gen(testing::symmetric_ifs_double(), 0.45, 1e-4, 8);
  double d = hausdorff(grid, testing::to_double_union(k));
  v.require(d <= 5e-3, "hausdorff " + fmt(d));
  v.note(std::to_string(k.size()) + " interval(s), hull [-1, 1], hausdorff to grid " + fmt(d) + ", sandwich ok, " +
         std::to_string(r.report.at("n_epsilon").at("intervals").get<std::size_t>()) + " N_eps interval(s) disjoint");
  return v;
}

Verdict stabilization() {
  Verdict v;
  SecondGenSpec<Rational> spec{FirstGeneration<Rational>(testing::symmetric_ifs()), Q(9, 20)};
  auto base = second_gen_attractor(spec);
  AttractorOptions more;
  more.extra_terms = 2;
  auto plus = second_gen_attractor(spec, more);
  v.require(plus.n == base.n + 2, "extra terms honoured");
  Rational dr = hausdorff(base.set, plus.set);
  v.require(to_double(dr) <= 1e-9, "rational change " + fmt(to_double(dr)));

  SecondGenSpec<double> ds{FirstGeneration<double>(testing::symmetric_ifs_double()), 0.45};
  AttractorOptions fo;
  fo.tol = 1e-6;
  auto fb = second_gen_attractor(ds, fo);
  fo.extra_terms = 2;
  auto fp = second_gen_attractor(ds, fo);
  double df = hausdorff(fb.set, fp.set);
  v.require(df <= 1e-6, "float change " + fmt(df));
  v.note("stabilized at n = " + std::to_string(base.n) + ", change at n + 2: rational " + fmt(to_double(dr)) +
         ", float " + fmt(df));
  return v;
}

Verdict smooth_ratios() {
  Verdict v;
  auto quad = [](double shift) {
    return MapDescriptor<double>::smooth([=](const double& x) { return shift + 0.3 * x + 0.05 * x * x; },
                                         [](const double& x) { return 0.3 + 0.1 * x; }, 0.3, 0.4, 0.1,
                                         Interval<double>(0.0, 1.0));
  };
  Ifs<double> f({quad(0.0), quad(0.6)}, Interval<double>(0.0, 1.0));
  double c = ratio_floor(f);
  // independent: sigma exp(-B / (sigma (1 - delta)))
  double closed = 0.3 * std::exp(-0.1 / (0.3 * (1 - 0.4)));
  v.require(std::abs(c - closed) <= 1e-15, "floor " + fmt(c) + " against closed form " + fmt(closed));
  v.require(std::abs(c - 0.17213) < 1e-5, "floor near 0.17213");
  auto con = std::get<ConstructionPtr<double>>(two_map_construction(f));
  double least = 1;
  std::size_t words = 0;
  for (std::size_t len = 1; len <= 10; ++len) {
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i) {
      least = std::min(least, dissection_ratio(con, BinaryWord::from_index(i, len)));
      ++words;
    }
  }
  v.require(c <= least, "least ratio " + fmt(least) + " below the floor");
  char buf[160];
  std::snprintf(buf, sizeof buf, "floor %.6f, %zu ratios, least %.6f", c, words, least);
  v.note(buf);
  return v;
}

Verdict union_construction() {
  Verdict v;
  auto c1 = middle_third(Q(0), Q(1)), c2 = middle_third(Q(2), Q(3));
  auto plan = union_plan(c1, c2);
  auto u = union_construct(c1, c2);
  const std::size_t nb = plan.n_bar;
  auto merged = [&](std::size_t n) {
    auto a = cover(c1, n).intervals();
    auto b = cover(c2, n).intervals();
    a.insert(a.end(), b.begin(), b.end());
    return IntervalUnion<Rational>::from_pieces(std::move(a));
  };
  for (std::size_t n = nb + 1; n <= nb + 6; ++n) {
    auto cn = cover(u, n);
    v.require(merged(n).subset_of(cn), "inner inclusion at n = " + std::to_string(n));
    v.require(cn.subset_of(merged(n - nb - 1)), "outer inclusion at n = " + std::to_string(n));
  }
  auto b = ulbd_bound(u, 10).bound;
  v.require(Q(1, 12) <= b, "ratio bound " + b.get_str());

  // every construction gap of the union is a gap of one input or the separating gap
  using Gap = std::pair<Rational, Rational>;
  std::set<Gap> ours, theirs{{Q(1), Q(2)}};
  const std::size_t depth = 8;
  for (std::size_t len = 0; len < depth; ++len) {
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i) {
      auto g = gap(u, BinaryWord::from_index(i, len));
      ours.insert({g.lo, g.hi});
    }
  }
  for (std::size_t len = 0; len + nb + 1 < depth; ++len) {
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i) {
      for (const auto& c : {c1, c2}) {
        auto g = gap(c, BinaryWord::from_index(i, len));
        theirs.insert({g.lo, g.hi});
      }
    }
  }
  v.require(ours == theirs, "construction gaps differ from the inputs' gaps plus (1, 2)");
  // the same at the level of covers
  for (std::size_t n = nb + 1; n <= 8; ++n) {
    auto want = merged(n - nb - 1).gaps();
    v.require(cover(u, n).gaps() == want, "cover gaps at n = " + std::to_string(n));
  }
  v.note("n_bar = " + std::to_string(nb) + ", inclusions hold for n_bar+1..n_bar+6, ratio bound " + b.get_str() + ", " +
         std::to_string(ours.size()) + " gaps match");
  return v;
}

Verdict count_sanity() {
  Verdict v;
  auto d = geometric_count_detail(Q(1), Q(1), Q(1, 3));
  v.require(d.m == 2, "m = 2");
  v.require(d.a_m == Q(1, 12), "a_2 = 1/12");
  v.require(d.h == 101, "H = 101");
  v.require(geometric_count(Q(1), Q(1), Q(1, 3)) == 204, "count 204");
  // independent: least m with m A1 > A2, least H with H b^2/(1-b)^3 + b/(1-b) >= 1, n = H m + m
  long m = 1;
  while (!(Q(m) > Q(1))) ++m;
  Rational b = Q(1, 12);
  long h = 0;
  while (Q(h) * b * b / ((1 - b) * (1 - b) * (1 - b)) + b / (1 - b) < 1) ++h;
  v.require(h * m + m == 204, "brute-force count " + std::to_string(h * m + m));
  v.note("m = 2, a_2 = 1/12, H = 101, count 204");
  return v;
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;  // 0 for none
  std::function<Verdict()> run;
};

}  // namespace

int main() {
  const Criterion all[] = {
      {1, "triple middle-third sum", 5, triple_sum},
      {2, "double middle-third sum", 0, pair_sum},
      {3, "exact constants", 0, constants},
      {4, "phi composition", 1, phi_algebra},
      {5, "second generation end to end", 60, second_gen_end_to_end},
      {6, "stabilization", 0, stabilization},
      {7, "smooth ratio floor", 5, smooth_ratios},
      {8, "union construction", 0, union_construction},
      {9, "geometric count", 0, count_sanity},
  };
  int failed = 0;
  for (const auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.require(false, std::string("threw: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0 && secs >= c.limit_s) v.require(false, "runtime limit " + fmt(c.limit_s) + " s");
    if (!v.pass) ++failed;
    std::printf("criterion %d %-30s %s  %.2f s  %s\n", c.id, c.name, v.pass ? "PASS" : "FAIL", secs, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of 9 criteria passed\n", 9 - failed);
  return failed == 0 ? 0 : 1;
}
