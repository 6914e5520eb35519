#pragma once

// Text, CSV and SVG emission for interval unions, and the reverse parse of the text form.

#include "cantor/interval.hpp"
#include "cantor/numeric.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace cantor {

/// One "[lo, hi]" line per interval.
template <Scalar T>
std::string format_interval_list(const IntervalUnion<T>& u);

/// One "]lo, hi[" line per open interval.
template <Scalar T>
std::string format_open_list(const std::vector<OpenInterval<T>>& gaps);

/// Inverse of format_interval_list. Blank lines are skipped; "]lo, hi[" lines are also accepted.
/// Throws InputError with the offending line number.
template <Scalar T>
IntervalUnion<T> parse_interval_list(std::string_view text);

/// Header plus one row per interval: lo_num,lo_den,hi_num,hi_den for rationals, lo,hi for doubles.
template <Scalar T>
std::string format_csv(const std::vector<std::pair<T, T>>& rows);

template <Scalar T>
std::string format_csv(const IntervalUnion<T>& u);

struct SvgLane {
  std::string label;
  /// Closed or open, drawn the same way.
  std::vector<std::pair<double, double>> spans;
};

/// Horizontal bars, one lane per entry, on a 1000-unit wide viewport scaled to [lo, hi].
std::string render_svg(const std::vector<SvgLane>& lanes, double lo, double hi);

template <Scalar T>
std::vector<std::pair<double, double>> to_spans(const IntervalUnion<T>& u);

template <Scalar T>
std::vector<std::pair<double, double>> to_spans(const std::vector<OpenInterval<T>>& gaps);

}  // namespace cantor
