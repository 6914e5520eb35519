#include "cantor/job.hpp"

#include "cantor/dissection.hpp"
#include "cantor/errors.hpp"
#include "cantor/ifs.hpp"
#include "cantor/oracle.hpp"
#include "cantor/output.hpp"
#include "cantor/setops.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <ostream>
#include <set>

namespace cantor::job {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// parsing

InputError at(const std::string& path, const std::string& why) { return InputError(path + ": " + why); }

InputError syntax_error(std::string_view text, std::size_t byte, const std::string& what) {
  // nlohmann reports the 1-based offset of the last byte read
  std::size_t upto = std::min(byte == 0 ? 0 : byte - 1, text.size());
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < upto; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  auto msg = what;
  if (auto p = msg.find("parse error"); p != std::string::npos) {
    if (auto c = msg.find(": ", p); c != std::string::npos) msg = msg.substr(c + 2);
  }
  return InputError("syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
}

Number parse_number(const json& v, const std::string& path) {
  Number n;
  if (v.is_string()) {
    n.text = v.get<std::string>();
    try {
      n.exact = parse_rational(n.text);
    } catch (const std::exception& e) {
      throw at(path, "not a number: \"" + n.text + "\"");
    }
    n.value = to_double(n.exact);
  } else if (v.is_number_integer()) {
    n.text = v.dump();
    n.exact = parse_rational(n.text);
    n.value = to_double(n.exact);
  } else if (v.is_number_float()) {
    n.value = v.get<double>();
    if (!std::isfinite(n.value)) throw at(path, "must be finite");
    n.exact = Rational(n.value);
    n.is_float = true;
    n.text = format_number(n.value);
  } else {
    throw at(path, "expected a number or a \"p/q\" string");
  }
  return n;
}

double parse_real(const json& v, const std::string& path) { return parse_number(v, path).value; }

std::size_t parse_count(const json& v, const std::string& path, std::size_t lo, std::size_t hi) {
  if (!v.is_number_integer()) throw at(path, "expected an integer");
  auto x = v.get<long long>();
  if (x < static_cast<long long>(lo) || x > static_cast<long long>(hi)) {
    throw at(path, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return static_cast<std::size_t>(x);
}

std::pair<Number, Number> parse_pair(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) throw at(path, "expected [lo, hi]");
  auto lo = parse_number(v[0], path + "[0]");
  auto hi = parse_number(v[1], path + "[1]");
  if (!(lo.exact < hi.exact)) throw at(path, "needs lo < hi");
  return {lo, hi};
}

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<std::string_view> known) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
      throw at(path.empty() ? it.key() : path + "." + it.key(), "unknown field");
    }
  }
}

MapSpec parse_map(const json& v, const std::string& path) {
  if (!v.is_object()) throw at(path, "expected an object");
  MapSpec m;
  std::string kind = v.value("kind", std::string("affine"));
  if (kind == "affine") {
    reject_unknown(v, path, {"kind", "slope", "offset"});
    if (!v.contains("slope")) throw at(path + ".slope", "required");
    m.slope = parse_number(v["slope"], path + ".slope");
    m.offset = v.contains("offset") ? parse_number(v["offset"], path + ".offset") : parse_number(json(0), path);
    Rational s = abs_value(m.slope.exact);
    if (!(s > 0 && s < 1)) throw at(path + ".slope", "needs 0 < |slope| < 1");
  } else if (kind == "smooth") {
    reject_unknown(v, path, {"kind", "poly", "sigma", "delta", "B", "domain"});
    m.smooth = true;
    for (auto key : {"poly", "sigma", "delta", "B", "domain"}) {
      if (!v.contains(key)) throw at(path + "." + key, "required for smooth maps");
    }
    if (!v["poly"].is_array() || v["poly"].size() < 2) throw at(path + ".poly", "needs at least two coefficients");
    for (std::size_t i = 0; i < v["poly"].size(); ++i) {
      m.poly.push_back(parse_number(v["poly"][i], path + ".poly[" + std::to_string(i) + "]"));
    }
    m.sigma = parse_number(v["sigma"], path + ".sigma");
    m.delta = parse_number(v["delta"], path + ".delta");
    m.curvature = parse_number(v["B"], path + ".B");
    m.domain = parse_pair(v["domain"], path + ".domain");
    if (!(m.sigma.exact > 0 && m.sigma.exact <= m.delta.exact && m.delta.exact < 1)) {
      throw at(path, "needs 0 < sigma <= delta < 1");
    }
    if (m.curvature.exact < 0) throw at(path + ".B", "must be >= 0");
  } else {
    throw at(path + ".kind", "expected \"affine\" or \"smooth\"");
  }
  return m;
}

std::vector<MapSpec> parse_maps(const json& v, const std::string& path) {
  if (!v.is_array()) throw at(path, "expected a list of maps");
  if (v.size() < 2) throw at(path, "at least two maps with distinct fixed points are required");
  std::vector<MapSpec> maps;
  for (std::size_t i = 0; i < v.size(); ++i) maps.push_back(parse_map(v[i], path + "[" + std::to_string(i) + "]"));
  bool all_affine = std::none_of(maps.begin(), maps.end(), [](const MapSpec& m) { return m.smooth; });
  if (all_affine) {
    std::set<Rational> fixed;
    for (const auto& m : maps) fixed.insert(m.offset.exact / (1 - m.slope.exact));
    if (fixed.size() < 2) throw at(path, "all fixed points coincide; at least two distinct fixed points are required");
  }
  return maps;
}

SetSpec parse_set(const json& v, const std::string& path) {
  if (!v.is_object()) throw at(path, "expected an object");
  SetSpec s;
  std::string type = v.value("type", std::string());
  if (type == "rule" || type == "middle-third") {
    reject_unknown(v, path, {"type", "interval", "left", "right"});
    s.kind = SetSpec::Kind::rule;
    if (!v.contains("interval")) throw at(path + ".interval", "required");
    s.interval = parse_pair(v["interval"], path + ".interval");
    if (type == "middle-third") {
      s.left = s.right = parse_number(json("1/3"), path);
    } else {
      if (!v.contains("left") || !v.contains("right")) throw at(path, "rule needs left and right fractions");
      s.left = parse_number(v["left"], path + ".left");
      s.right = parse_number(v["right"], path + ".right");
      if (!(s.left.exact > 0 && s.right.exact > 0 && s.left.exact + s.right.exact < 1)) {
        throw at(path, "needs left, right > 0 with left + right < 1");
      }
    }
  } else if (type == "maps") {
    reject_unknown(v, path, {"type", "maps", "domain"});
    s.kind = SetSpec::Kind::maps;
    if (!v.contains("maps")) throw at(path + ".maps", "required");
    s.maps = parse_maps(v["maps"], path + ".maps");
    if (s.maps.size() != 2) throw at(path + ".maps", "a construction needs exactly two maps");
    if (v.contains("domain")) s.domain = parse_pair(v["domain"], path + ".domain");
  } else if (type == "tree") {
    reject_unknown(v, path, {"type", "levels"});
    s.kind = SetSpec::Kind::tree;
    if (!v.contains("levels") || !v["levels"].is_array() || v["levels"].empty()) {
      throw at(path + ".levels", "expected a non-empty list of levels");
    }
    for (std::size_t k = 0; k < v["levels"].size(); ++k) {
      const auto& lv = v["levels"][k];
      std::string lp = path + ".levels[" + std::to_string(k) + "]";
      if (!lv.is_array()) throw at(lp, "expected a list of intervals");
      std::vector<std::pair<Number, Number>> row;
      for (std::size_t i = 0; i < lv.size(); ++i) row.push_back(parse_pair(lv[i], lp + "[" + std::to_string(i) + "]"));
      s.levels.push_back(std::move(row));
    }
  } else {
    throw at(path + ".type", "expected \"rule\", \"middle-third\", \"maps\" or \"tree\"");
  }
  return s;
}

bool any_float(const Number& n) { return n.is_float; }

bool any_float(const std::vector<MapSpec>& maps) {
  for (const auto& m : maps) {
    if (m.smooth || m.slope.is_float || m.offset.is_float) return true;
  }
  return false;
}

bool any_float(const SetSpec& s) {
  switch (s.kind) {
    case SetSpec::Kind::rule:
      return s.interval.first.is_float || s.interval.second.is_float || s.left.is_float || s.right.is_float;
    case SetSpec::Kind::maps:
      return any_float(s.maps) || (s.domain && (s.domain->first.is_float || s.domain->second.is_float));
    case SetSpec::Kind::tree:
      for (const auto& row : s.levels) {
        for (const auto& [a, b] : row) {
          if (a.is_float || b.is_float) return true;
        }
      }
      return false;
  }
  return false;
}

bool needs_first_gen(const std::string& c) {
  return c == "attractor" || c == "second-gen" || c == "gaps" || c == "neps" || c == "oracle-compare" || c == "plot";
}

bool needs_alpha(const std::string& c) {
  return c == "second-gen" || c == "neps" || c == "oracle-compare" || c == "plot";
}

void validate(JobSpec& s) {
  if (std::find(std::begin(kCommands), std::end(kCommands), s.command) == std::end(kCommands)) {
    throw at("command", "unknown command \"" + s.command + "\"");
  }
  if (s.alpha && !(s.alpha->exact > 0 && s.alpha->exact < 1)) throw at("alpha", "must lie in ]0,1[");
  if (s.epsilon && !(s.epsilon->exact > 0)) throw at("epsilon", "must be positive");
  if (s.a && !(s.a->exact > 0 && s.a->exact < Rational(1, 2))) throw at("a", "must lie in ]0,1/2[");
  if (s.tolerance && !(*s.tolerance > 0)) throw at("tolerance", "must be positive");
  if (!(s.grid_h > 0)) throw at("grid_h", "must be positive");
  if (s.combine != "union" && s.combine != "sum") throw at("combine", "expected \"union\" or \"sum\"");

  if (needs_first_gen(s.command) && s.maps.empty() && !s.set) {
    throw at("maps", "command " + s.command + " needs \"maps\" or \"set\"");
  }
  if (needs_alpha(s.command) && !s.alpha) throw at("alpha", "required by command " + s.command);
  if (s.command == "neps" && !s.epsilon) throw at("epsilon", "required by command neps");
  if (s.command == "sum-check" && s.sets.empty()) throw at("sets", "required by command sum-check");
  if (s.command == "ulbd-check") {
    if (s.combine == "union" && s.sets.size() != 2) throw at("sets", "a union takes exactly two sets");
    if (s.sets.empty()) throw at("sets", "required by command ulbd-check");
  }
  s.float_mode = any_float(s.maps) || (s.domain && (s.domain->first.is_float || s.domain->second.is_float)) ||
                 (s.set && any_float(*s.set)) || (s.alpha && any_float(*s.alpha)) ||
                 (s.epsilon && any_float(*s.epsilon)) || (s.a && any_float(*s.a));
  for (const auto& x : s.sets) s.float_mode = s.float_mode || any_float(x);
}

// ---------------------------------------------------------------------------
// building library objects

template <Scalar T>
T num(const Number& n) {
  if constexpr (is_exact_v<T>) {
    return n.exact;
  } else {
    return n.value;
  }
}

template <Scalar T>
Interval<T> iv(const std::pair<Number, Number>& p) {
  return Interval<T>(num<T>(p.first), num<T>(p.second));
}

template <Scalar T>
MapDescriptor<T> build_map(const MapSpec& m) {
  if (!m.smooth) return MapDescriptor<T>::affine(num<T>(m.slope), num<T>(m.offset));
  if constexpr (is_exact_v<T>) {
    throw InvariantViolation("smooth map in exact mode");
  } else {
    std::vector<double> c;
    for (const auto& x : m.poly) c.push_back(x.value);
    auto value = [c](const double& x) {
      double y = 0;
      for (auto it = c.rbegin(); it != c.rend(); ++it) y = y * x + *it;
      return y;
    };
    auto deriv = [c](const double& x) {
      double y = 0;
      for (std::size_t i = c.size() - 1; i >= 1; --i) y = y * x + static_cast<double>(i) * c[i];
      return y;
    };
    return MapDescriptor<double>::smooth(value, deriv, m.sigma.value, m.delta.value, m.curvature.value,
                                         iv<double>(*m.domain));
  }
}

template <Scalar T>
Ifs<T> build_ifs(const std::vector<MapSpec>& maps, const std::optional<std::pair<Number, Number>>& domain) {
  std::vector<MapDescriptor<T>> ds;
  for (const auto& m : maps) ds.push_back(build_map<T>(m));
  std::optional<Interval<T>> dom;
  if (domain) dom = iv<T>(*domain);
  return Ifs<T>(std::move(ds), dom);
}

template <Scalar T>
ConstructionPtr<T> build_set(const SetSpec& s, const std::string& path) {
  switch (s.kind) {
    case SetSpec::Kind::rule:
      return make_rule(iv<T>(s.interval), num<T>(s.left), num<T>(s.right));
    case SetSpec::Kind::maps: {
      auto f = build_ifs<T>(s.maps, s.domain);
      auto c = two_map_construction(f);
      if (std::holds_alternative<Interval<T>>(c)) {
        throw OverlapError(path + ": the two first-level images overlap, so the attractor is an interval");
      }
      return std::get<ConstructionPtr<T>>(c);
    }
    case SetSpec::Kind::tree: {
      std::vector<std::vector<Interval<T>>> levels;
      for (const auto& row : s.levels) {
        std::vector<Interval<T>> r;
        for (const auto& p : row) r.push_back(iv<T>(p));
        levels.push_back(std::move(r));
      }
      try {
        return make_explicit(std::move(levels));
      } catch (const InputError& e) {
        throw at(path, e.what());
      }
    }
  }
  throw InvariantViolation("unhandled set kind");
}

template <Scalar T>
FirstGeneration<T> build_first_gen(const JobSpec& s) {
  if (!s.maps.empty()) return FirstGeneration<T>(build_ifs<T>(s.maps, s.domain));
  if (s.set->kind == SetSpec::Kind::maps) return FirstGeneration<T>(build_ifs<T>(s.set->maps, s.set->domain));
  return FirstGeneration<T>(build_set<T>(*s.set, "set"));
}

// ---------------------------------------------------------------------------
// reporting

template <Scalar T>
json jnum(const T& x) {
  if constexpr (is_exact_v<T>) {
    return json{{"exact", format_number(x)}, {"approx", to_double(x)}};
  } else {
    return json(x);
  }
}

template <Scalar T>
json jinterval(const Interval<T>& i) {
  return json::array({jnum(i.lo), jnum(i.hi)});
}

struct Artifacts {
  std::string text;
  std::string csv;
  std::optional<std::string> svg;
};

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

template <Scalar T>
Artifacts union_artifacts(const IntervalUnion<T>& u) {
  return {format_interval_list(u), format_csv(u), std::nullopt};
}

template <Scalar T>
Artifacts open_artifacts(const std::vector<OpenInterval<T>>& gs) {
  std::vector<std::pair<T, T>> rows;
  for (const auto& g : gs) rows.emplace_back(g.lo, g.hi);
  return {format_open_list(gs), format_csv(rows), std::nullopt};
}

template <Scalar T>
json first_gen_report(const FirstGeneration<T>& k) {
  json r;
  r["hull"] = jinterval(k.hull());
  if (k.is_construction()) {
    r["source"] = std::string(to_string(k.construction()->backing()));
    if (auto a = usable_ratio_bound(k.construction(), 10, false)) {
      r["a"] = jnum(*a);
      r["aprime"] = jnum(aprime(*a));
    }
  } else {
    const auto& f = k.ifs();
    r["source"] = "ifs";
    r["maps"] = f.size();
    auto w = hull_witness(f);
    r["hull_witness"] = {{"low_map", w.low_map}, {"high_map", w.high_map}, {"case", w.which_case}};
    r["c"] = jnum(ratio_floor(f));
  }
  return r;
}

template <Scalar T>
std::string svg_for(const FirstGeneration<T>& k, const std::optional<IntervalUnion<T>>& attractor,
                    const std::optional<std::vector<OpenInterval<T>>>& neps, std::size_t depth) {
  std::vector<SvgLane> lanes;
  lanes.push_back({"K_psi cover, depth " + std::to_string(depth), to_spans(k.outer(depth))});
  if (attractor) lanes.push_back({"K_phi", to_spans(*attractor)});
  if (neps) lanes.push_back({"N_eps", to_spans(*neps)});
  auto h = k.hull();
  return render_svg(lanes, to_double(h.lo), to_double(h.hi));
}

template <Scalar T>
AttractorOptions attractor_options(const JobSpec& s) {
  AttractorOptions o;
  o.mode = s.mode;
  if (s.tolerance && s.command != "oracle-compare") o.tol = *s.tolerance;
  o.n_override = s.terms;
  o.depth_max = std::max<std::size_t>(s.depth, 2);
  return o;
}

template <Scalar T>
json attractor_report(const AttractorResult<T>& r) {
  json j;
  j["n"] = r.n;
  j["stabilization_n"] = r.stabilization_n;
  j["depth"] = r.depth;
  j["depth_converged"] = r.depth_converged;
  j["tail_iterations"] = r.iterations;
  j["displacements"] = r.displacements;
  j["guarantee"] = r.guarantee;
  j["intervals"] = r.set.size();
  j["merged_gaps"] = r.merged_gaps;
  j["hull"] = jinterval(r.set.hull());
  if (r.certificate) {
    const auto& c = *r.certificate;
    json cj;
    cj["a"] = jnum(c.a);
    cj["aprime"] = jnum(aprime(c.a));
    cj["amplitude"] = jnum(c.amplitude);
    cj["cabrelli_terms"] = c.cabrelli_terms;
    cj["min_piece_diameter"] = jnum(c.min_piece_diameter);
    cj["max_piece_gap"] = jnum(c.max_piece_gap);
    cj["pieces"] = c.pieces;
    if (c.count_bound) cj["count_bound"] = c.count_bound->get_str();
    cj["route"] = c.route;
    j["certificate"] = cj;
  }
  return j;
}

template <Scalar T>
json certificate_report(const IntervalCertificate<T>& c) {
  json j;
  j["certified"] = c.certified;
  j["a"] = jnum(c.a_used);
  j["m"] = c.m;
  j["cabrelli_value"] = jnum(c.condition_value);
  j["min_diameter"] = jnum(c.min_diameter);
  j["max_gap"] = jnum(c.max_gap);
  j["gaps_exhaustive"] = c.gaps_exhaustive;
  if (c.interval) j["interval"] = jinterval(*c.interval);
  if (!c.reason.empty()) j["reason"] = c.reason;
  if (c.m >= 2) j["a_m"] = jnum(a_m(c.a_used, c.m));
  return j;
}

// Grid sumset of the depth covers, and the empty cells between its runs.
template <Scalar T>
json sum_oracle(const std::vector<ConstructionPtr<T>>& cs, double h, std::size_t depth) {
  std::optional<GridSet<double>> acc;
  for (const auto& c : cs) {
    std::vector<Interval<double>> v;
    for (const auto& i : cover(c, depth)) v.emplace_back(to_double(i.lo), to_double(i.hi));
    auto g = GridSet<double>::rasterize(IntervalUnion<double>::from_sorted(std::move(v)), 0.0, h);
    acc = acc ? grid_minkowski(*acc, g) : g;
  }
  std::size_t holes = 0;
  for (std::size_t i = 1; i < acc->runs().size(); ++i) {
    holes += static_cast<std::size_t>(acc->runs()[i].first - acc->runs()[i - 1].second - 1);
  }
  auto hl = acc->to_union().hull();
  return {{"grid_h", h}, {"cover_depth", depth}, {"runs", acc->runs().size()}, {"cells", acc->count()},
          {"empty_cells", holes}, {"hull", {hl.lo, hl.hi}}};
}

template <Scalar T>
Ifs<double> to_float_ifs(const JobSpec& s) {
  if (!s.maps.empty()) return build_ifs<double>(s.maps, s.domain);
  if (s.set && s.set->kind == SetSpec::Kind::maps) return build_ifs<double>(s.set->maps, s.set->domain);
  throw InputError("maps: oracle-compare needs the first-generation system as maps");
}

template <Scalar T>
int dispatch(const JobSpec& s, json& report, Artifacts& art, std::ostream& out) {
  const std::string& cmd = s.command;

  if (cmd == "attractor") {
    auto k = build_first_gen<T>(s);
    report["first_generation"] = first_gen_report(k);
    IntervalUnion<T> u = k.outer(s.depth);
    if (!k.is_construction()) {
      auto b = attractor_bounds(k.ifs(), s.depth);
      report["inner_points"] = b.inner.size();
      u = b.outer;
    }
    report["depth"] = s.depth;
    report["intervals"] = u.size();
    art = union_artifacts(u);
    if (s.svg) art.svg = svg_for<T>(k, std::nullopt, std::nullopt, s.depth);
    out << "attractor cover at depth " << s.depth << ": " << u.size() << " intervals, hull ["
        << format_number(u.hull().lo) << ", " << format_number(u.hull().hi) << "]\n";
    return 0;
  }

  if (cmd == "second-gen" || cmd == "plot") {
    auto k = build_first_gen<T>(s);
    SecondGenSpec<T> spec{k, num<T>(*s.alpha)};
    report["first_generation"] = first_gen_report(k);
    auto r = second_gen_attractor(spec, attractor_options<T>(s));
    report["attractor"] = attractor_report(r);
    report["sandwich"] = sandwich_check(spec, r.set, s.depth);
    std::optional<std::vector<OpenInterval<T>>> ne;
    if (s.epsilon) {
      ne = n_epsilon(k, spec.alpha, num<T>(*s.epsilon), s.depth);
      bool disjoint = std::none_of(ne->begin(), ne->end(), [&](const OpenInterval<T>& g) { return r.set.intersects(g); });
      report["n_epsilon"] = {{"intervals", ne->size()}, {"disjoint_from_attractor", disjoint}};
    }
    art = union_artifacts(r.set);
    if (s.svg || cmd == "plot") art.svg = svg_for<T>(k, r.set, ne, s.depth);
    out << "second-generation attractor: " << r.set.size() << " intervals, n = " << r.n << ", guarantee "
        << r.guarantee << "\n";
    return 0;
  }

  if (cmd == "neps") {
    auto k = build_first_gen<T>(s);
    auto ne = n_epsilon(k, num<T>(*s.alpha), num<T>(*s.epsilon), s.depth);
    report["first_generation"] = first_gen_report(k);
    report["n_epsilon"] = {{"intervals", ne.size()}, {"depth", s.depth}};
    art = open_artifacts(ne);
    if (s.svg) art.svg = svg_for<T>(k, std::nullopt, ne, s.depth);
    out << "N_eps: " << ne.size() << " open intervals\n";
    return 0;
  }

  if (cmd == "gaps") {
    ConstructionPtr<T> c;
    if (s.set && s.set->kind != SetSpec::Kind::maps) {
      c = build_set<T>(*s.set, "set");
    } else {
      const auto& maps = s.maps.empty() ? s.set->maps : s.maps;
      if (maps.size() != 2) throw at("maps", "gaps needs a two-map system or a construction");
      SetSpec tmp;
      tmp.kind = SetSpec::Kind::maps;
      tmp.maps = maps;
      tmp.domain = s.maps.empty() ? s.set->domain : s.domain;
      c = build_set<T>(tmp, "maps");
    }
    auto mg = max_gap(c, s.depth);
    auto cov = cover(c, s.depth);
    auto gs = cov.gaps();
    report["max_gap"] = {{"width", jnum(mg.width)},
                         {"word", mg.word.to_string()},
                         {"depth_checked", mg.depth_checked},
                         {"exhaustive", mg.exhaustive}};
    report["gaps"] = gs.size();
    art = open_artifacts(gs);
    out << "gaps of the depth-" << s.depth << " cover: " << gs.size() << ", widest " << format_number(mg.width)
        << (mg.exhaustive ? " (exhaustive)" : "") << "\n";
    return 0;
  }

  if (cmd == "sum-check") {
    std::vector<ConstructionPtr<T>> cs;
    for (std::size_t i = 0; i < s.sets.size(); ++i) cs.push_back(build_set<T>(s.sets[i], "sets[" + std::to_string(i) + "]"));
    T a;
    if (s.a) {
      a = num<T>(*s.a);
    } else {
      std::optional<T> best;
      for (std::size_t i = 0; i < cs.size(); ++i) {
        auto b = usable_ratio_bound(cs[i], 10, false);
        if (!b) throw CertificateError("sets[" + std::to_string(i) + "]: no proven ratio bound; give \"a\"");
        best = best ? std::min(*best, *b) : *b;
      }
      a = *best;
    }
    auto cert = sum_is_interval(cs, a, std::max<std::size_t>(s.depth, 1));
    report["certificate"] = certificate_report(cert);
    if (s.grid_h_given) report["oracle"] = sum_oracle(cs, s.grid_h, s.depth);
    IntervalUnion<T> u;
    if (cert.interval) u = IntervalUnion<T>::single(*cert.interval);
    art = union_artifacts(u);
    if (cert.certified) {
      out << "certified: the sum is [" << format_number(cert.interval->lo) << ", " << format_number(cert.interval->hi)
          << "]\n";
    } else {
      out << "not certified: " << cert.reason << "\n";
    }
    return 0;
  }

  if (cmd == "ulbd-check") {
    std::vector<ConstructionPtr<T>> cs;
    for (std::size_t i = 0; i < s.sets.size(); ++i) cs.push_back(build_set<T>(s.sets[i], "sets[" + std::to_string(i) + "]"));
    ConstructionPtr<T> c;
    json j;
    if (s.combine == "union") {
      auto plan = union_plan(cs[0], cs[1]);
      c = union_construct(cs[0], cs[1]);
      j["n_bar"] = plan.n_bar;
      j["mirrored"] = plan.mirrored;
      j["a"] = jnum(plan.a);
      j["aprime"] = jnum(plan.bound);
    } else {
      T a;
      if (s.a) {
        a = num<T>(*s.a);
      } else {
        std::optional<T> best;
        for (const auto& x : cs) {
          auto b = usable_ratio_bound(x, 10, false);
          if (!b) throw CertificateError("an input set has no proven ratio bound; give \"a\"");
          best = best ? std::min(*best, *b) : *b;
        }
        a = *best;
      }
      c = sum_subset_construct(cs, a);
      j["a"] = jnum(a);
      j["a_m"] = jnum(a_m(a, cs.size()));
    }
    verify_construction(c, s.depth);
    auto u = ulbd_bound(c, s.depth);
    j["sampled_bound"] = jnum(u.bound);
    j["depth_checked"] = u.depth_checked;
    if (auto p = c->proven_ratio_bound()) {
      j["proven_bound"] = jnum(*p);
      j["sound"] = !(u.bound < *p);
    }
    report["ulbd"] = j;
    auto cov = cover(c, s.depth);
    art = union_artifacts(cov);
    out << s.combine << " construction: minimum ratio to depth " << s.depth << " is " << format_number(u.bound) << "\n";
    return 0;
  }

  if (cmd == "oracle-compare") {
    auto k = build_first_gen<T>(s);
    SecondGenSpec<T> spec{k, num<T>(*s.alpha)};
    auto r = second_gen_attractor(spec, attractor_options<T>(s));
    auto f = to_float_ifs<T>(s);
    auto g = grid_second_gen(f, to_double(spec.alpha), s.grid_h, s.beta_depth);
    std::vector<Interval<double>> v;
    for (const auto& i : r.set) v.emplace_back(to_double(i.lo), to_double(i.hi));
    double d = hausdorff(g, IntervalUnion<double>::from_sorted(v));
    double tol = s.tolerance.value_or(5e-3);
    bool pass = d <= tol;
    report["attractor"] = attractor_report(r);
    report["oracle"] = {{"grid_h", s.grid_h}, {"beta_depth", s.beta_depth}, {"cells", g.count()},
                        {"runs", g.runs().size()}, {"hausdorff", d}, {"tolerance", tol}, {"pass", pass}};
    art = union_artifacts(r.set);
    if (s.svg) art.svg = svg_for<T>(k, r.set, std::nullopt, s.depth);
    out << "hausdorff distance " << format_number(d) << " against tolerance " << format_number(tol) << ": "
        << (pass ? "PASS" : "FAIL") << "\n";
    return 0;
  }

  throw InvariantViolation("unhandled command " + cmd);
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw InputError("cannot write " + p.string());
  f << content;
}

}  // namespace

namespace {

JobSpec parse_document(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw syntax_error(text, e.byte, e.what());
  }
  if (!doc.is_object()) throw InputError("document: expected a JSON object");
  reject_unknown(doc, "", {"command", "maps", "domain", "set", "sets", "alpha", "epsilon", "a", "depth",
                           "tolerance", "mode", "terms", "combine", "grid_h", "beta_depth", "svg"});
  JobSpec s;
  if (!doc.contains("command") || !doc["command"].is_string()) throw at("command", "required string");
  s.command = doc["command"].get<std::string>();
  if (doc.contains("maps")) s.maps = parse_maps(doc["maps"], "maps");
  if (doc.contains("domain")) s.domain = parse_pair(doc["domain"], "domain");
  if (doc.contains("set")) s.set = parse_set(doc["set"], "set");
  if (!s.maps.empty() && s.set) throw at("set", "give either \"maps\" or \"set\", not both");
  if (doc.contains("sets")) {
    if (!doc["sets"].is_array() || doc["sets"].empty()) throw at("sets", "expected a non-empty list");
    for (std::size_t i = 0; i < doc["sets"].size(); ++i) {
      s.sets.push_back(parse_set(doc["sets"][i], "sets[" + std::to_string(i) + "]"));
    }
  }
  if (doc.contains("alpha")) s.alpha = parse_number(doc["alpha"], "alpha");
  if (doc.contains("epsilon")) s.epsilon = parse_number(doc["epsilon"], "epsilon");
  if (doc.contains("a")) s.a = parse_number(doc["a"], "a");
  if (doc.contains("depth")) s.depth = parse_count(doc["depth"], "depth", 1, 24);
  if (doc.contains("tolerance")) s.tolerance = parse_real(doc["tolerance"], "tolerance");
  if (doc.contains("mode")) {
    auto m = doc["mode"].is_string() ? doc["mode"].get<std::string>() : std::string();
    if (m == "empirical") {
      s.mode = Mode::empirical;
    } else if (m == "certified") {
      s.mode = Mode::certified;
    } else {
      throw at("mode", "expected \"empirical\" or \"certified\"");
    }
  }
  if (doc.contains("terms")) s.terms = parse_count(doc["terms"], "terms", 1, 64);
  if (doc.contains("combine")) {
    if (!doc["combine"].is_string()) throw at("combine", "expected a string");
    s.combine = doc["combine"].get<std::string>();
  }
  if (doc.contains("grid_h")) {
    s.grid_h = parse_real(doc["grid_h"], "grid_h");
    s.grid_h_given = true;
  }
  if (doc.contains("beta_depth")) s.beta_depth = parse_count(doc["beta_depth"], "beta_depth", 1, 20);
  if (doc.contains("svg")) {
    if (!doc["svg"].is_boolean()) throw at("svg", "expected true or false");
    s.svg = doc["svg"].get<bool>();
  }
  return s;
}

}  // namespace

JobSpec parse_spec(std::string_view text) {
  JobSpec s = parse_document(text);
  validate(s);
  return s;
}

void apply_overrides(JobSpec& s, const Overrides& o) {
  if (o.command) s.command = *o.command;
  if (o.alpha) s.alpha = parse_number(json(*o.alpha), "--alpha");
  if (o.depth) {
    if (*o.depth < 1 || *o.depth > 24) throw at("--depth", "must lie in [1, 24]");
    s.depth = *o.depth;
  }
  if (o.tol) s.tolerance = *o.tol;
  if (o.mode) {
    if (*o.mode == "empirical") {
      s.mode = Mode::empirical;
    } else if (*o.mode == "certified") {
      s.mode = Mode::certified;
    } else {
      throw at("--mode", "expected empirical or certified");
    }
  }
  if (o.svg) s.svg = true;
  validate(s);
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const InvariantViolation*>(&e)) return 5;
  if (dynamic_cast<const NonConvergence*>(&e)) return 4;
  if (dynamic_cast<const BudgetError*>(&e) || dynamic_cast<const CertificateError*>(&e)) return 3;
  if (dynamic_cast<const Error*>(&e) || dynamic_cast<const std::invalid_argument*>(&e)) return 2;
  return 5;
}

int run(const JobSpec& spec, const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err) {
  Stopwatch clock;
  json report;
  report["command"] = spec.command;
  report["arithmetic"] = spec.float_mode ? "float" : "rational";
  report["mode"] = std::string(to_string(spec.mode));
  report["depth"] = spec.depth;
  if (spec.alpha) report["alpha"] = spec.alpha->text;
  if (spec.epsilon) report["epsilon"] = spec.epsilon->text;
  Artifacts art;
  int code = 0;
  try {
    code = spec.float_mode ? dispatch<double>(spec, report, art, out) : dispatch<Rational>(spec, report, art, out);
  } catch (const std::exception& e) {
    code = exit_code_for(e);
    err << "error: " << e.what() << "\n";
    report["error"] = {{"message", e.what()}, {"exit_code", code}};
    if (auto* b = dynamic_cast<const BudgetError*>(&e)) report["error"]["partial_count"] = b->partial_count();
  }
  report["timings_ms"] = {{"total", clock.ms()}};
  try {
    std::filesystem::create_directories(out_dir);
    if (code == 0) {
      write_file(out_dir / "intervals.txt", art.text);
      write_file(out_dir / "intervals.csv", art.csv);
      if (art.svg) write_file(out_dir / "plot.svg", *art.svg);
    }
    write_file(out_dir / "report.json", report.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return code;
}

int run_document(std::string_view text, const Overrides& o, const std::filesystem::path& out_dir, std::ostream& out,
                 std::ostream& err) {
  try {
    JobSpec s = parse_document(text);
    apply_overrides(s, o);
    return run(s, out_dir, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace cantor::job
