#include <gtest/gtest.h>

#include "degen/config.hpp"
#include "degen/report.hpp"

using namespace degen;

namespace {

ErrorCode code_of(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const Error& err) {
    return err.code();
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return ErrorCode::SyntaxError;
}

const char* kValid = R"(# comment
[analysis]
mode = sphere

[fields]
f = "x1^2 + x2^2 - 1"   # trailing comment
E1 = -x2
E2 = "x1"

[domain]
xmin = -3
xmax = 3
ymin = -2.5
ymax = 2.5
grid_n = 64

[tolerances]
eps_reducible = 1e-6
min_samples = 512
)";

}  // namespace

TEST(Config, ParsesAllSections) {
  const Config c = parse_config(kValid);
  EXPECT_EQ(c.mode, Mode::Sphere);
  ASSERT_TRUE(c.fields);
  EXPECT_EQ(c.fields->f, "x1^2 + x2^2 - 1");
  EXPECT_EQ(c.fields->e1, "-x2");
  EXPECT_EQ(c.fields->e2, "x1");
  EXPECT_FALSE(c.family);
  EXPECT_EQ(c.domain.xmin, -3.0);
  EXPECT_EQ(c.domain.ymax, 2.5);
  EXPECT_EQ(c.domain.grid_n, 64);
  EXPECT_EQ(c.analysis.ring_index.eps_reducible, 1e-6);
  EXPECT_EQ(c.analysis.ring_index.min_samples, 512u);
  EXPECT_FALSE(c.explicit_charts());
}

TEST(Config, DefaultsWithoutOptionalSections) {
  const Config c = parse_config("[fields]\nf = 1\nE1 = x1\nE2 = x2\n");
  EXPECT_EQ(c.mode, Mode::Plane);
  EXPECT_EQ(c.domain.grid_n, Domain{}.grid_n);
  EXPECT_EQ(c.analysis.ring_index.eps_reducible, RingIndexOptions{}.eps_reducible);
}

TEST(Config, FamilyAndRange) {
  const Config c = parse_config("[fields]\nf = \"x1^2+x2^2-s\"\nE1 = -x2\nE2 = x1\nfamily = true\ns_min = -1\ns_max = 2\n");
  EXPECT_TRUE(c.family);
  EXPECT_EQ(c.s_min, -1.0);
  EXPECT_EQ(c.s_max, 2.0);
}

TEST(Config, ExplicitCharts) {
  const Config c = parse_config(
      "[analysis]\nmode = sphere\n[north]\nf = 1\nE1 = -x2\nE2 = x1\n[south]\nf = 1\nE1 = x2\nE2 = -x1\n");
  EXPECT_TRUE(c.explicit_charts());
  EXPECT_EQ(c.south->e2, "-x1");
}

TEST(Config, Rejections) {
  const std::string fields = "[fields]\nf = 1\nE1 = x1\nE2 = x2\n";
  EXPECT_EQ(code_of("[fields]\nf = 1\nE1 = x1\n"), ErrorCode::ConfigError);             // missing E2
  EXPECT_EQ(code_of(fields + "[extra]\na = 1\n"), ErrorCode::ConfigError);              // unknown section
  EXPECT_EQ(code_of(fields + "[domain]\nwidth = 1\n"), ErrorCode::ConfigError);         // unknown key
  EXPECT_EQ(code_of("[fields]\nf = 1\nf = 2\nE1 = x1\nE2 = x2\n"), ErrorCode::ConfigError);  // duplicate
  EXPECT_EQ(code_of("[fields]\nf = \"x1 +\"\nE1 = x1\nE2 = x2\n"), ErrorCode::ConfigError);  // parse error
  EXPECT_EQ(code_of("[fields]\nf = \"x1\nE1 = x1\nE2 = x2\n"), ErrorCode::ConfigError);      // open quote
  EXPECT_EQ(code_of("f = 1\n"), ErrorCode::ConfigError);                                      // no section
  EXPECT_EQ(code_of(fields + "[domain]\ngrid_n = 8\n"), ErrorCode::ConfigError);         // invalid domain
  EXPECT_EQ(code_of(fields + "[domain]\nxmin = abc\n"), ErrorCode::ConfigError);
  EXPECT_EQ(code_of(fields + "[analysis]\nmode = torus\n"), ErrorCode::ConfigError);
  EXPECT_EQ(code_of(fields + "[tolerances]\neps_reducible = -1\n"), ErrorCode::ConfigError);
  EXPECT_EQ(code_of("[analysis]\nmode = sphere\n[north]\nf = 1\nE1 = x1\nE2 = x2\n"), ErrorCode::ConfigError);
  EXPECT_EQ(code_of("[fields]\nf = 1\nE1 = x1\nE2 = x2\nfamily = true\ns_min = 1\ns_max = 1\n"),
            ErrorCode::ConfigError);
  EXPECT_EQ(code_of("[fields]\nnot a key value line\n"), ErrorCode::ConfigError);
}

TEST(Report, NumberFormatting) {
  EXPECT_EQ(detail::num(-0.0).dump(), "0.0");
  EXPECT_EQ(detail::num(1e-300 * -1e-300).dump(), "0.0");
  EXPECT_EQ(detail::num(0.1 + 0.2).dump(), "0.3");
  EXPECT_EQ(detail::num(2.0 / 3.0).dump(), "0.666666666667");
  EXPECT_EQ(detail::num(std::nan("")).dump(), "null");
  EXPECT_EQ(detail::num(123456789012345.0).dump(), "123456789012000.0");
}

TEST(Report, FamilyRefusedOutsideHomotopy) {
  const Config fam = parse_config("[fields]\nf = \"x1^2+x2^2-s\"\nE1 = -x2\nE2 = x1\nfamily = true\n");
  EXPECT_THROW(analyze_report(fam), Error);
  const Config unbound = parse_config("[fields]\nf = \"x1^2+x2^2-s\"\nE1 = -x2\nE2 = x1\n");
  EXPECT_THROW(analyze_report(unbound), Error);
  EXPECT_THROW(homotopy_report(unbound, 5), Error);
}

TEST(Report, ExplicitChartsMatchCompactification) {
  // south chart of (f = 1, E-) is f = 1 with JE_s = (w1, w2), i.e. E_s = (w2, -w1)
  const Config explicit_cfg = parse_config(
      "[analysis]\nmode = sphere\n[north]\nf = 1\nE1 = -x2\nE2 = x1\n[south]\nf = 1\nE1 = x2\nE2 = -x1\n"
      "[domain]\ngrid_n = 64\n");
  const Config auto_cfg =
      parse_config("[analysis]\nmode = sphere\n[fields]\nf = 1\nE1 = -x2\nE2 = x1\n[domain]\ngrid_n = 64\n");
  const CommandOutcome a = ph_check_report(explicit_cfg), b = ph_check_report(auto_cfg);
  EXPECT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.report.dump(), b.report.dump());
  EXPECT_EQ(a.report["sum"], "2(S1)-1(Z1)");
}
