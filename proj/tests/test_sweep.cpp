#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "oamwb/sweep.hpp"

using namespace oamwb;
using namespace oamwb::sweep;

namespace {

SweepConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::size_t column(const Table& t, const std::string& name) {
  return static_cast<std::size_t>(std::find(t.columns.begin(), t.columns.end(), name) - t.columns.begin());
}

const char* kFig2Like =
    "# default operating point\n"
    "[scenario]\nalpha = 20\nr = 2\nl = 1\n\n"
    "[sweep]\naxis = theta\nstart = -0.7853981633974483\nstop = 0.7853981633974483\npoints = 200\n\n"
    "[output]\ncolumns = bhd_sensitivity, sql, qcrb_single\n";

}  // namespace

TEST(Config, ParsesFullGrammar) {
  const SweepConfig c = parse(
      "; comment\n[scenario]\nalpha = 10\nr = 1.5\nl = 2\nT = 0.5\neta = 0.8\ntheta = 0.1\n"
      "[sweep]\naxis = eta\nstart = 0.1\nstop = 1\npoints = 10\n"
      "[output]\ncolumns = bhd_sensitivity,sql\nsql_normalization = n_alpha\n");
  EXPECT_EQ(c.alpha, 10.0);
  EXPECT_EQ(c.l, 2);
  EXPECT_EQ(c.axis, Axis::eta);
  EXPECT_EQ(c.points, 10);
  EXPECT_EQ(c.outputs.size(), 2u);
  EXPECT_EQ(c.sql_normalization, cf::SqlNormalization::n_alpha);
}

TEST(Config, RenderRoundTrip) {
  const SweepConfig c = figure_config(Figure::fig5);
  const SweepConfig back = parse(render_config(c));
  EXPECT_EQ(back.alpha, c.alpha);
  EXPECT_EQ(back.start, c.start);
  EXPECT_EQ(back.stop, c.stop);
  EXPECT_EQ(back.points, c.points);
  EXPECT_EQ(back.outputs, c.outputs);
}

TEST(Config, SyntaxErrorReportsLine) {
  try {
    parse("[sweep]\naxis = theta\nthis line is broken\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Config, BadNumberNamesField) {
  try {
    parse("[sweep]\naxis = theta\nstart = zero\nstop = 1\npoints = 3\n[output]\ncolumns = sql\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("sweep.start"), std::string::npos) << e.what();
  }
}

TEST(Config, UnknownKeysAndSections) {
  EXPECT_THROW(parse("[sweep]\naxis = theta\nstart = 0\nstop = 1\npoints = 3\nfoo = 1\n[output]\ncolumns = sql\n"), ConfigError);
  EXPECT_THROW(parse("[extra]\nx = 1\n"), ConfigError);
  EXPECT_THROW(parse("[sweep]\naxis = phi\nstart = 0\nstop = 1\npoints = 3\n[output]\ncolumns = sql\n"), ConfigError);
  EXPECT_THROW(parse("[sweep]\naxis = r\nstart = 0\nstop = 1\npoints = 3\n[output]\ncolumns = power\n"), ConfigError);
  EXPECT_THROW(parse("[sweep]\naxis = r\nstart = 0\nstop = 1\n[output]\ncolumns = sql\n"), ConfigError);
}

TEST(Config, DomainViolations) {
  EXPECT_THROW(parse("[sweep]\naxis = r\nstart = 1\nstop = 0\npoints = 3\n[output]\ncolumns = sql\n"), DomainError);
  EXPECT_THROW(parse("[sweep]\naxis = r\nstart = 0\nstop = 1\npoints = 1\n[output]\ncolumns = sql\n"), DomainError);
  EXPECT_THROW(parse("[sweep]\naxis = eta\nstart = 0\nstop = 1\npoints = 3\n[output]\ncolumns = sql\n"), DomainError);
  EXPECT_THROW(parse("[scenario]\nT = 0.3\n[sweep]\naxis = r\nstart = 0\nstop = 1\npoints = 3\n[output]\ncolumns = qcrb_single\n"),
               DomainError);
  EXPECT_THROW(parse("[scenario]\nr = -1\n[sweep]\naxis = theta\nstart = 0\nstop = 1\npoints = 3\n[output]\ncolumns = sql\n"),
               DomainError);
}

TEST(Grid, EndpointsExact) {
  SweepConfig c;
  c.start = -0.3;
  c.stop = 0.7;
  c.points = 13;
  const auto xs = grid(c);
  EXPECT_EQ(xs.front(), -0.3);
  EXPECT_EQ(xs.back(), 0.7);
  EXPECT_TRUE(std::is_sorted(xs.begin(), xs.end()));
}

TEST(Run, Fig2LikeConfig) {
  const Table t = run(parse(kFig2Like));
  ASSERT_EQ(t.rows.size(), 200u);
  const std::size_t bhd = column(t, "bhd_sensitivity");
  std::size_t best = 0, nearest = 0;
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    if (t.rows[k][bhd] < t.rows[best][bhd]) best = k;
    if (std::abs(t.rows[k][0]) < std::abs(t.rows[nearest][0])) nearest = k;
  }
  EXPECT_EQ(best, nearest);
  // 200 points straddle zero; the lowest value sits one half-step away.
  const double theta = t.rows[best][0];
  EXPECT_LT(std::abs(t.rows[best][bhd] - cf::dtheta_bhd(20.0, 2.0, 1, theta)) / t.rows[best][bhd], 1e-7);
}

TEST(Run, Fig2CanonicalHitsOptimum) {
  const Table t = run(figure_config(Figure::fig2));
  const std::size_t bhd = column(t, "bhd_sensitivity");
  double best = cf::kInf;
  for (const auto& row : t.rows) best = std::min(best, row[bhd]);
  EXPECT_NEAR(best, 4.5789e-4, 0.5e-8);
  EXPECT_TRUE(std::isinf(t.rows.front()[bhd]));
}

TEST(Run, Fig3Monotone) {
  const Table t = run(figure_config(Figure::fig3));
  const std::size_t bhd = column(t, "bhd_sensitivity"), sql = column(t, "sql");
  for (std::size_t k = 1; k < t.rows.size(); ++k) {
    EXPECT_LT(t.rows[k][bhd], t.rows[k - 1][bhd]);
    EXPECT_LT(t.rows[k][bhd], t.rows[k][sql]);
  }
  EXPECT_LT(std::abs(t.rows[0][bhd] - t.rows[0][sql]) / t.rows[0][sql], 1e-9);
}

TEST(Run, Fig5Crossing) {
  const Table t = run(figure_config(Figure::fig5));
  ASSERT_EQ(t.notes.size(), 1u);
  const std::size_t bhd = column(t, "bhd_sensitivity"), sql = column(t, "sql");
  double crossing = 0.0;
  for (std::size_t k = 1; k < t.rows.size(); ++k) {
    if (t.rows[k - 1][bhd] > t.rows[k - 1][sql] && t.rows[k][bhd] <= t.rows[k][sql]) crossing = t.rows[k][0];
  }
  EXPECT_NEAR(crossing, 0.506, 0.005);
}

TEST(Run, SingularBoundsBecomeInf) {
  const Table t = run(parse("[scenario]\nalpha = 0\n[sweep]\naxis = r\nstart = 0\nstop = 1\npoints = 3\n"
                            "[output]\ncolumns = qcrb_multi_d, qcrb_single, table1\n"));
  EXPECT_TRUE(std::isinf(t.rows[0][1]));
  EXPECT_TRUE(std::isinf(t.rows[0][2]));
  EXPECT_TRUE(std::isfinite(t.rows[1][1]));
  EXPECT_EQ(t.columns.size(), 7u);
}

TEST(Run, ParallelEqualsSerial) {
  const SweepConfig c = figure_config(Figure::fig2);
  EXPECT_EQ(to_csv(run(c, 1)), to_csv(run(c, 3)));
  EXPECT_EQ(to_csv(run(c, 8)), to_csv(run(c, 1)));
}

TEST(Run, ThreadBudgetHonoursEnvironment) {
  setenv("WORKBENCH_THREADS", "1", 1);
  EXPECT_EQ(thread_budget(), 1u);
  unsetenv("WORKBENCH_THREADS");
  EXPECT_GE(thread_budget(), 1u);
}

TEST(Csv, FormatAndRoundTrip) {
  const Table t = run(figure_config(Figure::fig2));
  const std::string csv = to_csv(t);
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "theta,bhd_sensitivity,id_sensitivity,sql,qcrb_single");
  EXPECT_NE(csv.find(",inf,"), std::string::npos);
  const Table back = parse_csv(csv);
  ASSERT_EQ(back.rows.size(), t.rows.size());
  EXPECT_EQ(back.columns, t.columns);
  for (std::size_t k = 0; k < t.rows.size(); ++k) EXPECT_EQ(back.rows[k], t.rows[k]);
}

TEST(Csv, NotesTrail) {
  const std::string csv = to_csv(run(figure_config(Figure::fig5)));
  const auto pos = csv.rfind("# NOTE:");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_EQ(csv.find('\n', pos), csv.size() - 1);
}

TEST(Table1Csv, RowsAndInf) {
  const std::string csv = table1_csv(20.0, 0.0, 1);
  EXPECT_NE(csv.find("pa_pa,inf\n"), std::string::npos);
  EXPECT_EQ(csv.rfind("configuration,sensitivity\n", 0), 0u);
  EXPECT_THROW(table1_csv(0.0, 1.0, 1), DomainError);
}

TEST(Svg, LegendNamesEverySeries) {
  const Table t = run(figure_config(Figure::fig5));
  const std::string svg = to_svg(t, "fig5");
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  for (std::size_t i = 1; i < t.columns.size(); ++i) EXPECT_NE(svg.find(">" + t.columns[i] + "<"), std::string::npos);
  EXPECT_EQ(std::count(svg.begin(), svg.end(), '\n') > 10, true);
}

TEST(Figure, Ids) {
  EXPECT_EQ(parse_figure("fig3"), Figure::fig3);
  EXPECT_FALSE(parse_figure("fig4").has_value());
  EXPECT_THROW(figure_config(Figure::table1), InvalidArgument);
}
