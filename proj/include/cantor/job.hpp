#pragma once

// Job documents for the command-line tool: parsing, validation and dispatch.

#include "cantor/attractor.hpp"
#include "cantor/interval.hpp"
#include "cantor/numeric.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cantor::job {

/// A number as written in the document. Integers, "p/q" strings and decimal strings are exact;
/// bare JSON floats are not and switch the job to float arithmetic.
struct Number {
  Rational exact;
  double value = 0;
  bool is_float = false;
  std::string text;
};

struct MapSpec {
  bool smooth = false;
  Number slope;
  Number offset;
  /// Smooth maps: psi(x) = sum poly[i] x^i on `domain`.
  std::vector<Number> poly;
  Number sigma;
  Number delta;
  Number curvature;
  std::optional<std::pair<Number, Number>> domain;
};

struct SetSpec {
  enum class Kind { rule, maps, tree };
  Kind kind = Kind::rule;
  std::pair<Number, Number> interval;
  Number left;
  Number right;
  std::vector<MapSpec> maps;
  std::optional<std::pair<Number, Number>> domain;
  std::vector<std::vector<std::pair<Number, Number>>> levels;
};

inline constexpr std::string_view kCommands[] = {"attractor", "second-gen", "sum-check",      "ulbd-check",
                                                 "gaps",      "neps",       "oracle-compare", "plot"};

struct JobSpec {
  std::string command;
  /// First-generation system, given either as maps or as a single set.
  std::vector<MapSpec> maps;
  std::optional<std::pair<Number, Number>> domain;
  std::optional<SetSpec> set;
  /// Inputs of sum-check and ulbd-check.
  std::vector<SetSpec> sets;
  std::optional<Number> alpha;
  std::optional<Number> epsilon;
  /// Common ratio bound for sum-check; defaults to the smallest usable bound of the inputs.
  std::optional<Number> a;
  std::size_t depth = 8;
  std::optional<double> tolerance;
  Mode mode = Mode::empirical;
  std::optional<std::size_t> terms;
  /// "union" or "sum".
  std::string combine = "sum";
  double grid_h = 1e-4;
  bool grid_h_given = false;
  std::size_t beta_depth = 8;
  bool svg = false;
  /// Derived: any float-valued geometric input, or a smooth map.
  bool float_mode = false;
};

/// Parses and validates a JSON document. Syntax errors carry line and column, semantic errors the
/// field path. Both are thrown as InputError.
JobSpec parse_spec(std::string_view text);

/// Command-line values that take precedence over the document.
struct Overrides {
  std::optional<std::string> command;
  std::optional<std::string> alpha;
  std::optional<std::size_t> depth;
  std::optional<double> tol;
  std::optional<std::string> mode;
  bool svg = false;
};

/// Applies the overrides and re-validates. Throws InputError.
void apply_overrides(JobSpec& spec, const Overrides& o);

/// Exit status: 0 ok, 2 input or overlap, 3 budget or certificate, 4 non-convergence, 5 invariant.
int exit_code_for(const std::exception& e);

/// Runs the job and writes intervals.txt, intervals.csv, report.json and (when asked) plot.svg
/// into `out_dir`. A one-paragraph summary goes to `out`, diagnostics to `err`.
int run(const JobSpec& spec, const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err);

/// Parse, override and run in one call; never throws.
int run_document(std::string_view text, const Overrides& o, const std::filesystem::path& out_dir, std::ostream& out,
                 std::ostream& err);

}  // namespace cantor::job
