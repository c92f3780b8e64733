// degen: analysis of planar degenerate flows f·ẋ = JE from an INI config.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "degen/config.hpp"
#include "degen/report.hpp"

namespace {

degen::Vec2 parse_point(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw degen::Error(degen::ErrorCode::ConfigError, "--x0 expects \"a,b\", got '" + text + "'");
  auto part = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || s.find_first_not_of(" \t", used) != std::string::npos)
      throw degen::Error(degen::ErrorCode::ConfigError, "--x0 expects \"a,b\", got '" + text + "'");
    return v;
  };
  return {part(text.substr(0, comma)), part(text.substr(comma + 1))};
}

int emit(const degen::CommandOutcome& out) {
  std::cout << out.report.dump(2) << '\n';
  return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analysis of planar degenerate flows f(x) dx/dt = J E(x)"};
  app.require_subcommand(1);

  std::string config_path, out_path, x0_text;
  double t_max = 10.0, tol = 1e-8;
  std::size_t samples = 21;

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "INI configuration file")->required();
  };
  auto* analyze = app.add_subcommand("analyze", "rings, open curves and zeros as JSON");
  add_config(analyze);
  auto* ph = app.add_subcommand("ph-check", "degeneracy index sum over the sphere");
  add_config(ph);
  auto* portrait = app.add_subcommand("portrait", "SVG phase portrait");
  add_config(portrait);
  portrait->add_option("--out", out_path, "SVG output path (default: standard output)");
  auto* homotopy = app.add_subcommand("homotopy", "admissibility of an s-family");
  add_config(homotopy);
  homotopy->add_option("--samples", samples, "number of s samples")->check(CLI::Range(2, 100000));
  auto* integ = app.add_subcommand("integrate", "trajectory of dx/dt = JE/f as JSON");
  add_config(integ);
  integ->add_option("--x0", x0_text, "initial point \"a,b\"")->required();
  integ->add_option("--t-max", t_max, "final time");
  integ->add_option("--tol", tol, "absolute and relative tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : degen::kExitConfig;
  }

  try {
    const degen::Config cfg = degen::load_config(config_path);
    if (analyze->parsed()) return emit(degen::analyze_report(cfg));
    if (ph->parsed()) return emit(degen::ph_check_report(cfg));
    if (homotopy->parsed()) return emit(degen::homotopy_report(cfg, samples));
    if (integ->parsed()) return emit(degen::integrate_report(cfg, parse_point(x0_text), t_max, tol));
    const degen::PortraitOutcome p = degen::portrait_report(cfg);
    if (!p.svg) return emit(p.outcome);
    if (out_path.empty()) {
      std::cout << *p.svg;
    } else {
      std::ofstream f(out_path, std::ios::binary);
      f << *p.svg;
      if (!f) throw degen::Error(degen::ErrorCode::ConfigError, "cannot write '" + out_path + "'");
    }
    return degen::kExitOk;
  } catch (const degen::Error& err) {
    std::cerr << "degen: " << err.what() << '\n';
    return degen::kExitConfig;
  }
}
