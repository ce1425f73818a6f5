#pragma once

// Parameter sweeps over a scenario: config parsing, parallel evaluation on a
// fixed grid, CSV serialisation and a minimal SVG line plot.
//
// Config grammar (INI-style, one `key = value` per line, `#` or `;` starting a
// comment line):
//
//   [scenario]  alpha, r, l, T, eta, theta        (all optional)
//   [sweep]     axis = theta|r|eta|alpha, start, stop, points   (required)
//   [output]    columns = comma list, sql_normalization = n_tot|n_alpha

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "oamwb/closed_forms.hpp"
#include "oamwb/detection.hpp"
#include "oamwb/elements.hpp"
#include "oamwb/fisher.hpp"

namespace oamwb::sweep {

// Malformed config text or unknown keys; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Well-formed config whose values leave the physical domain; exit code 3.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

enum class Axis { theta, r, eta, alpha };

enum class Output {
  id_sensitivity,
  bhd_sensitivity,
  qcrb_single,
  qcrb_multi_d,
  qcrb_multi_s,
  sql,
  table1,
};

inline const char* to_string(Axis a) {
  switch (a) {
    case Axis::theta: return "theta";
    case Axis::r: return "r";
    case Axis::eta: return "eta";
    case Axis::alpha: return "alpha";
  }
  return "?";
}

inline const char* to_string(Output o) {
  switch (o) {
    case Output::id_sensitivity: return "id_sensitivity";
    case Output::bhd_sensitivity: return "bhd_sensitivity";
    case Output::qcrb_single: return "qcrb_single";
    case Output::qcrb_multi_d: return "qcrb_multi_d";
    case Output::qcrb_multi_s: return "qcrb_multi_s";
    case Output::sql: return "sql";
    case Output::table1: return "table1";
  }
  return "?";
}

struct SweepConfig {
  double alpha = 20.0;
  double r = 2.0;
  int l = 1;
  double T = 0.5;
  double eta = 1.0;
  double theta = 0.0;

  Axis axis = Axis::theta;
  double start = 0.0;
  double stop = 1.0;
  int points = 2;

  std::vector<Output> outputs;
  cf::SqlNormalization sql_normalization = cf::SqlNormalization::n_tot;
  // Free-text lines appended to the CSV as `# ...` trailers.
  std::vector<std::string> notes;
};

inline std::vector<std::string> column_names(const SweepConfig& cfg) {
  std::vector<std::string> names{to_string(cfg.axis)};
  for (auto o : cfg.outputs) {
    if (o == Output::table1) {
      for (const char* n : {"table1_mzi", "table1_pa_pa", "table1_pa_bs", "table1_modified_mzi"}) {
        names.emplace_back(n);
      }
    } else {
      names.emplace_back(to_string(o));
    }
  }
  return names;
}

inline void validate(const SweepConfig& c) {
  auto fail = [](const std::string& field, const std::string& why) {
    throw DomainError("domain error: " + field + ": " + why);
  };
  if (!(c.alpha >= 0.0) || !std::isfinite(c.alpha)) fail("scenario.alpha", "must be finite and >= 0");
  if (!(c.r >= 0.0) || !std::isfinite(c.r)) fail("scenario.r", "must be finite and >= 0");
  if (c.l < 1) fail("scenario.l", "must be a positive integer");
  if (!(c.T >= 0.0 && c.T <= 1.0)) fail("scenario.T", "must lie in [0, 1]");
  if (!(c.eta > 0.0 && c.eta <= 1.0)) fail("scenario.eta", "must lie in (0, 1]");
  if (!std::isfinite(c.theta)) fail("scenario.theta", "must be finite");
  if (c.points < 2) fail("sweep.points", "must be >= 2");
  if (!std::isfinite(c.start) || !std::isfinite(c.stop) || !(c.start < c.stop)) {
    fail("sweep.start/stop", "need finite start < stop");
  }
  switch (c.axis) {
    case Axis::theta: break;
    case Axis::r:
      if (c.start < 0.0) fail("sweep.start", "r axis must stay >= 0");
      break;
    case Axis::eta:
      if (c.start <= 0.0 || c.stop > 1.0) fail("sweep.start/stop", "eta axis must stay inside (0, 1]");
      break;
    case Axis::alpha:
      if (c.start < 0.0) fail("sweep.start", "alpha axis must stay >= 0");
      break;
  }
  if (c.outputs.empty()) fail("output.columns", "at least one column is required");
  for (auto o : c.outputs) {
    if (o == Output::qcrb_single && c.T != 0.5) fail("output.columns", "qcrb_single needs T = 0.5");
  }
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
    throw ConfigError("config error: field " + field + ": expected a number, got '" + t + "'");
  }
  return v;
}

inline int parse_int(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  int v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
    throw ConfigError("config error: field " + field + ": expected an integer, got '" + t + "'");
  }
  return v;
}

inline Axis parse_axis(const std::string& text) {
  const std::string t = trim(text);
  if (t == "theta") return Axis::theta;
  if (t == "r") return Axis::r;
  if (t == "eta") return Axis::eta;
  if (t == "alpha") return Axis::alpha;
  throw ConfigError("config error: field sweep.axis: unknown axis '" + t + "'");
}

inline Output parse_output(const std::string& text) {
  const std::string t = trim(text);
  for (auto o : {Output::id_sensitivity, Output::bhd_sensitivity, Output::qcrb_single,
                 Output::qcrb_multi_d, Output::qcrb_multi_s, Output::sql, Output::table1}) {
    if (t == to_string(o)) return o;
  }
  throw ConfigError("config error: field output.columns: unknown column '" + t + "'");
}

}  // namespace detail

inline SweepConfig parse_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("config error: line " + std::to_string(e.line()) + ": " + e.message());
  }

  static const std::map<std::string, std::vector<std::string>> known{
      {"scenario", {"alpha", "r", "l", "T", "eta", "theta"}},
      {"sweep", {"axis", "start", "stop", "points"}},
      {"output", {"columns", "sql_normalization"}},
  };
  for (const auto& [section, body] : tree) {
    const auto it = known.find(section);
    if (it == known.end() || body.data() != "") {
      throw ConfigError("config error: unknown section '" + section + "'");
    }
    for (const auto& [key, value] : body) {
      if (std::find(it->second.begin(), it->second.end(), key) == it->second.end()) {
        throw ConfigError("config error: field " + section + "." + key + ": unknown key");
      }
    }
  }

  SweepConfig cfg;
  auto get = [&](const std::string& path) -> boost::optional<std::string> {
    return tree.get_optional<std::string>(boost::property_tree::ptree::path_type(path, '.'));
  };
  auto number = [&](const std::string& path, double& dst) {
    if (auto v = get(path)) dst = detail::parse_number(path, *v);
  };
  number("scenario.alpha", cfg.alpha);
  number("scenario.r", cfg.r);
  if (auto v = get("scenario.l")) cfg.l = detail::parse_int("scenario.l", *v);
  number("scenario.T", cfg.T);
  number("scenario.eta", cfg.eta);
  number("scenario.theta", cfg.theta);

  const auto axis = get("sweep.axis");
  const auto start = get("sweep.start");
  const auto stop = get("sweep.stop");
  const auto points = get("sweep.points");
  if (!axis || !start || !stop || !points) {
    throw ConfigError("config error: section [sweep] needs axis, start, stop and points");
  }
  cfg.axis = detail::parse_axis(*axis);
  cfg.start = detail::parse_number("sweep.start", *start);
  cfg.stop = detail::parse_number("sweep.stop", *stop);
  cfg.points = detail::parse_int("sweep.points", *points);

  const auto columns = get("output.columns");
  if (!columns) throw ConfigError("config error: field output.columns is required");
  std::stringstream list(*columns);
  for (std::string item; std::getline(list, item, ',');) {
    cfg.outputs.push_back(detail::parse_output(item));
  }
  if (auto v = get("output.sql_normalization")) {
    const std::string t = detail::trim(*v);
    if (t == "n_tot") {
      cfg.sql_normalization = cf::SqlNormalization::n_tot;
    } else if (t == "n_alpha") {
      cfg.sql_normalization = cf::SqlNormalization::n_alpha;
    } else {
      throw ConfigError("config error: field output.sql_normalization: expected n_tot or n_alpha");
    }
  }
  validate(cfg);
  return cfg;
}

inline SweepConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config error: cannot open '" + path + "'");
  return parse_config(in);
}

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string render_config(const SweepConfig& c) {
  std::ostringstream out;
  out << "[scenario]\n"
      << "alpha = " << format_double(c.alpha) << "\n"
      << "r = " << format_double(c.r) << "\n"
      << "l = " << c.l << "\n"
      << "T = " << format_double(c.T) << "\n"
      << "eta = " << format_double(c.eta) << "\n"
      << "theta = " << format_double(c.theta) << "\n\n"
      << "[sweep]\n"
      << "axis = " << to_string(c.axis) << "\n"
      << "start = " << format_double(c.start) << "\n"
      << "stop = " << format_double(c.stop) << "\n"
      << "points = " << c.points << "\n\n"
      << "[output]\n"
      << "columns = ";
  for (std::size_t i = 0; i < c.outputs.size(); ++i) {
    out << (i ? ", " : "") << to_string(c.outputs[i]);
  }
  out << "\nsql_normalization = "
      << (c.sql_normalization == cf::SqlNormalization::n_tot ? "n_tot" : "n_alpha") << "\n";
  return out.str();
}

inline std::vector<double> grid(const SweepConfig& c) {
  std::vector<double> xs(static_cast<std::size_t>(c.points));
  const double span = c.stop - c.start;
  for (int k = 0; k < c.points; ++k) {
    xs[std::size_t(k)] = k + 1 == c.points ? c.stop : c.start + span * k / (c.points - 1);
  }
  return xs;
}

// Scenario at one grid point. theta is the single-arm rotation theta_b
// (theta_a = 0); the intensity column reads it as theta_d with theta_s = 0.
struct PointParameters {
  double alpha, r, theta, eta;
};

inline PointParameters point_parameters(const SweepConfig& c, double x) {
  PointParameters p{c.alpha, c.r, c.theta, c.eta};
  switch (c.axis) {
    case Axis::theta: p.theta = x; break;
    case Axis::r: p.r = x; break;
    case Axis::eta: p.eta = x; break;
    case Axis::alpha: p.alpha = x; break;
  }
  return p;
}

inline Scenario base_scenario(const SweepConfig& c, const PointParameters& p) {
  Scenario s;
  s.alpha = {p.alpha, 0.0};
  s.r = p.r;
  s.l = c.l;
  s.T = c.T;
  s.eta_a = s.eta_b = p.eta;
  s.lossless = p.eta == 1.0;
  return s;
}

inline std::vector<double> evaluate_point(const SweepConfig& c, double x) {
  const PointParameters p = point_parameters(c, x);
  const Scenario s = base_scenario(c, p);
  Scenario lossless = s;
  lossless.eta_a = lossless.eta_b = 1.0;
  lossless.lossless = true;

  std::vector<double> row{x};
  for (auto o : c.outputs) {
    switch (o) {
      case Output::id_sensitivity:
        row.push_back(sensitivity(s.with_difference_sum(p.theta, 0.0), IntensityDifference{},
                                  Parameter::theta_d)
                          .delta_theta);
        break;
      case Output::bhd_sensitivity: {
        Scenario b = s;
        b.theta_a = 0.0;
        b.theta_b = p.theta;
        row.push_back(sensitivity(b, Homodyne{}, Parameter::theta_b).delta_theta);
        break;
      }
      case Output::qcrb_single:
        try {
          row.push_back(qfi_single(lossless).qcrb);
        } catch (const SingularInformation&) {
          row.push_back(cf::kInf);
        }
        break;
      case Output::qcrb_multi_d:
      case Output::qcrb_multi_s:
        try {
          const CrbBounds b = crb_bounds(qfim_two_param(lossless));
          row.push_back(std::sqrt(o == Output::qcrb_multi_d ? b.var_theta_d : b.var_theta_s));
        } catch (const SingularInformation&) {
          row.push_back(cf::kInf);
        }
        break;
      case Output::sql:
        row.push_back(cf::sql(p.alpha, p.r, c.l, c.sql_normalization));
        break;
      case Output::table1:
        if (p.alpha == 0.0) {
          row.insert(row.end(), 4, cf::kInf);
        } else {
          const cf::Table1 t = cf::table1(p.alpha, p.r, c.l);
          row.insert(row.end(), {t.mzi, t.pa_pa, t.pa_bs, t.modified_mzi});
        }
        break;
    }
  }
  return row;
}

inline unsigned thread_budget() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("WORKBENCH_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
  }
  return n;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> notes;
};

// Rows are stored by grid index, so the result does not depend on how the
// points were scheduled across threads.
inline Table run(const SweepConfig& c, unsigned threads = thread_budget()) {
  validate(c);
  const std::vector<double> xs = grid(c);
  Table t{column_names(c), std::vector<std::vector<double>>(xs.size()), c.notes};
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < xs.size(); k = next++) {
      try {
        t.rows[k] = evaluate_point(c, xs[k]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(xs.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return t;
}

inline std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  for (const auto& n : t.notes) out += "# " + n + "\n";
  return out;
}

// Inverse of to_csv; `#` lines are collected as notes.
inline Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      t.notes.push_back(line.substr(2));
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (header) {
      t.columns = cells;
      header = false;
      continue;
    }
    std::vector<double> row;
    for (const auto& cell : cells) {
      double v = 0.0;
      if (cell == "inf") {
        v = cf::kInf;
      } else if (cell == "-inf") {
        v = -cf::kInf;
      } else if (cell == "nan") {
        v = std::numeric_limits<double>::quiet_NaN();
      } else {
        v = detail::parse_number("csv", cell);
      }
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

// Single-panel line plot, log-scaled y axis, one legend entry per series.
inline std::string to_svg(const Table& t, const std::string& title) {
  const double width = 720, height = 480, left = 80, right = 200, top = 40, bottom = 60;
  const double pw = width - left - right, ph = height - top - bottom;
  double xmin = cf::kInf, xmax = -cf::kInf, ymin = cf::kInf, ymax = -cf::kInf;
  for (const auto& row : t.rows) {
    xmin = std::min(xmin, row[0]);
    xmax = std::max(xmax, row[0]);
    for (std::size_t i = 1; i < row.size(); ++i) {
      if (std::isfinite(row[i]) && row[i] > 0.0) {
        ymin = std::min(ymin, row[i]);
        ymax = std::max(ymax, row[i]);
      }
    }
  }
  if (!(ymin < ymax)) {
    ymin = ymin > 0.0 && std::isfinite(ymin) ? ymin / 10.0 : 1e-6;
    ymax = ymin * 100.0;
  }
  const double ly0 = std::floor(std::log10(ymin));
  const double ly1 = std::ceil(std::log10(ymax));
  const double xspan = xmax > xmin ? xmax - xmin : 1.0;
  auto px = [&](double x) { return left + pw * (x - xmin) / xspan; };
  auto py = [&](double y) { return top + ph * (ly1 - std::log10(y)) / (ly1 - ly0); };
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

  std::ostringstream svg;
  svg << std::setprecision(6);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
      << title << "</text>\n";
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double e = ly0; e <= ly1; e += 1.0) {
    const double y = py(std::pow(10.0, e));
    svg << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << left + pw << "\" y2=\"" << y
        << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << left - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e"
        << static_cast<int>(e) << "</text>\n";
  }
  for (int k = 0; k <= 4; ++k) {
    const double x = xmin + xspan * k / 4.0;
    svg << "<text x=\"" << px(x) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << x
        << "</text>\n";
  }
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 16 << "\" text-anchor=\"middle\">"
      << (t.columns.empty() ? "" : t.columns[0]) << "</text>\n";
  for (std::size_t col = 1; col < t.columns.size(); ++col) {
    const char* colour = palette[(col - 1) % 8];
    std::string path;
    bool pen_down = false;
    for (const auto& row : t.rows) {
      const double y = row[col];
      if (!std::isfinite(y) || y <= 0.0) {
        pen_down = false;
        continue;
      }
      std::ostringstream seg;
      seg << std::setprecision(6) << (pen_down ? " L" : " M") << px(row[0]) << ' ' << py(y);
      path += seg.str();
      pen_down = true;
    }
    svg << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << colour
        << "\" stroke-width=\"1.5\"/>\n";
    const double ly = top + 16.0 * static_cast<double>(col);
    svg << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 36
        << "\" y2=\"" << ly << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << left + pw + 42 << "\" y=\"" << ly + 4 << "\">" << t.columns[col]
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

enum class Figure { fig2, fig3, fig5, table1 };

inline std::optional<Figure> parse_figure(const std::string& id) {
  if (id == "fig2") return Figure::fig2;
  if (id == "fig3") return Figure::fig3;
  if (id == "fig5") return Figure::fig5;
  if (id == "table1") return Figure::table1;
  return std::nullopt;
}

// Canonical sweeps. fig2 uses an odd point count so theta = 0 is on the grid.
inline SweepConfig figure_config(Figure f) {
  SweepConfig c;
  switch (f) {
    case Figure::fig2:
      c.axis = Axis::theta;
      c.start = -std::numbers::pi / 4.0;
      c.stop = std::numbers::pi / 4.0;
      c.points = 201;
      c.outputs = {Output::bhd_sensitivity, Output::id_sensitivity, Output::sql, Output::qcrb_single};
      break;
    case Figure::fig3:
      c.axis = Axis::r;
      c.start = 0.0;
      c.stop = 3.0;
      c.points = 301;
      c.outputs = {Output::bhd_sensitivity, Output::sql, Output::qcrb_single};
      break;
    case Figure::fig5:
      c.alpha = 10.0;
      c.axis = Axis::eta;
      c.start = 0.05;
      c.stop = 1.0;
      c.points = 96;
      c.outputs = {Output::bhd_sensitivity, Output::sql, Output::qcrb_single};
      c.notes = {"NOTE: the PA+BS comparison series is out of scope; its shot-noise "
                 "normalisation cannot be derived from the model, so it is omitted"};
      break;
    case Figure::table1:
      throw InvalidArgument("figure_config: table1 is a fixed table, not a sweep");
  }
  return c;
}

// Four configurations as rows rather than columns.
inline std::string table1_csv(double alpha, double r, int l) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("domain error: alpha must be finite and > 0");
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("domain error: r must be finite and >= 0");
  if (l < 1) throw DomainError("domain error: l must be a positive integer");
  const cf::Table1 t = cf::table1(alpha, r, l);
  std::string out = "configuration,sensitivity\n";
  out += "mzi," + format_double(t.mzi) + "\n";
  out += "pa_pa," + format_double(t.pa_pa) + "\n";
  out += "pa_bs," + format_double(t.pa_bs) + "\n";
  out += "modified_mzi," + format_double(t.modified_mzi) + "\n";
  out += "# alpha=" + format_double(alpha) + " r=" + format_double(r) + " l=" + std::to_string(l) + "\n";
  return out;
}

}  // namespace oamwb::sweep
