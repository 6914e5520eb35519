#include "cantor/output.hpp"

#include "cantor/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cantor {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <Scalar T>
T parse_scalar(std::string_view s) {
  if constexpr (is_exact_v<T>) {
    return parse_rational(s);
  } else {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      // "p/q" is still acceptable in float mode
      return to_double(parse_rational(s));
    }
    return v;
  }
}

// SVG numbers: fixed precision keeps the file stable across platforms.
std::string svg_num(double x) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(3);
  os << x;
  return os.str();
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

template <Scalar T>
std::string format_interval_list(const IntervalUnion<T>& u) {
  std::string out;
  for (const auto& iv : u) out += "[" + format_number(iv.lo) + ", " + format_number(iv.hi) + "]\n";
  return out;
}

template <Scalar T>
std::string format_open_list(const std::vector<OpenInterval<T>>& gaps) {
  std::string out;
  for (const auto& g : gaps) out += "]" + format_number(g.lo) + ", " + format_number(g.hi) + "[\n";
  return out;
}

template <Scalar T>
IntervalUnion<T> parse_interval_list(std::string_view text) {
  std::vector<Interval<T>> pieces;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty()) continue;
    auto fail = [&](const std::string& why) {
      return InputError("interval list line " + std::to_string(line_no) + ": " + why);
    };
    if (line.size() < 5 || (line.front() != '[' && line.front() != ']') ||
        (line.back() != ']' && line.back() != '[')) {
      throw fail("expected [lo, hi]");
    }
    std::string_view body = line.substr(1, line.size() - 2);
    auto comma = body.find(',');
    if (comma == std::string_view::npos) throw fail("missing comma");
    try {
      T lo = parse_scalar<T>(trim(body.substr(0, comma)));
      T hi = parse_scalar<T>(trim(body.substr(comma + 1)));
      if (hi < lo) throw fail("hi below lo");
      pieces.emplace_back(lo, hi);
    } catch (const std::invalid_argument& e) {
      throw fail(e.what());
    }
  }
  return IntervalUnion<T>::from_pieces(std::move(pieces));
}

template <Scalar T>
std::string format_csv(const std::vector<std::pair<T, T>>& rows) {
  std::string out;
  if constexpr (is_exact_v<T>) {
    out = "lo_num,lo_den,hi_num,hi_den\n";
    for (const auto& [lo, hi] : rows) {
      out += lo.get_num().get_str() + "," + lo.get_den().get_str() + "," + hi.get_num().get_str() + "," +
             hi.get_den().get_str() + "\n";
    }
  } else {
    out = "lo,hi\n";
    for (const auto& [lo, hi] : rows) out += format_number(lo) + "," + format_number(hi) + "\n";
  }
  return out;
}

template <Scalar T>
std::string format_csv(const IntervalUnion<T>& u) {
  std::vector<std::pair<T, T>> rows;
  rows.reserve(u.size());
  for (const auto& iv : u) rows.emplace_back(iv.lo, iv.hi);
  return format_csv(rows);
}

std::string render_svg(const std::vector<SvgLane>& lanes, double lo, double hi) {
  constexpr double kWidth = 1000.0;
  constexpr double kLabel = 24.0;
  constexpr double kLane = 40.0;
  constexpr double kBar = 16.0;
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double height = kLane * static_cast<double>(lanes.size()) + 20.0;
  auto sx = [&](double x) { return (x - lo) / (hi - lo) * kWidth; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << svg_num(kWidth) << " " << svg_num(height)
     << "\" width=\"" << svg_num(kWidth) << "\" height=\"" << svg_num(height) << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << svg_num(kWidth) << "\" height=\"" << svg_num(height)
     << "\" fill=\"white\"/>\n";
  static constexpr const char* kColours[] = {"#355c7d", "#c06c84", "#f67280", "#6c5b7b"};
  for (std::size_t i = 0; i < lanes.size(); ++i) {
    const double top = 10.0 + kLane * static_cast<double>(i);
    os << "<g id=\"lane" << i << "\">\n";
    os << "<text x=\"4\" y=\"" << svg_num(top + 12.0) << "\" font-family=\"monospace\" font-size=\"11\">"
       << xml_escape(lanes[i].label) << "</text>\n";
    for (const auto& [a, b] : lanes[i].spans) {
      double x0 = sx(a);
      double w = std::max(sx(b) - x0, 0.5);  // keep points visible
      os << "<rect x=\"" << svg_num(x0) << "\" y=\"" << svg_num(top + kLabel - kBar / 2) << "\" width=\""
         << svg_num(w) << "\" height=\"" << svg_num(kBar) << "\" fill=\"" << kColours[i % 4] << "\"/>\n";
    }
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

template <Scalar T>
std::vector<std::pair<double, double>> to_spans(const IntervalUnion<T>& u) {
  std::vector<std::pair<double, double>> out;
  out.reserve(u.size());
  for (const auto& iv : u) out.emplace_back(to_double(iv.lo), to_double(iv.hi));
  return out;
}

template <Scalar T>
std::vector<std::pair<double, double>> to_spans(const std::vector<OpenInterval<T>>& gaps) {
  std::vector<std::pair<double, double>> out;
  out.reserve(gaps.size());
  for (const auto& g : gaps) out.emplace_back(to_double(g.lo), to_double(g.hi));
  return out;
}

#define CANTOR_INSTANTIATE_OUTPUT(T)                                                          \
  template std::string format_interval_list<T>(const IntervalUnion<T>&);                      \
  template std::string format_open_list<T>(const std::vector<OpenInterval<T>>&);              \
  template IntervalUnion<T> parse_interval_list<T>(std::string_view);                         \
  template std::string format_csv<T>(const std::vector<std::pair<T, T>>&);                    \
  template std::string format_csv<T>(const IntervalUnion<T>&);                                \
  template std::vector<std::pair<double, double>> to_spans<T>(const IntervalUnion<T>&);       \
  template std::vector<std::pair<double, double>> to_spans<T>(const std::vector<OpenInterval<T>>&);

CANTOR_INSTANTIATE_OUTPUT(Rational)
CANTOR_INSTANTIATE_OUTPUT(double)

}  // namespace cantor
