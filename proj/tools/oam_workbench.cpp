// oam_workbench: sweeps, figure reproduction and the acceptance suite.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "oamwb/acceptance.hpp"
#include "oamwb/sweep.hpp"

namespace fs = std::filesystem;
using namespace oamwb;

namespace {

enum Exit { kOk = 0, kValidation = 1, kUsage = 2, kDomain = 3 };

bool write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

int cmd_run(const std::string& config, const std::string& out_path) {
  const sweep::SweepConfig cfg = sweep::load_config(config);
  const std::string csv = sweep::to_csv(sweep::run(cfg));
  if (out_path.empty()) {
    std::cout << csv;
    return kOk;
  }
  if (!write_file(out_path, csv)) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return kUsage;
  }
  return kOk;
}

int cmd_reproduce(const std::string& id, const std::string& format, const std::string& outdir, double alpha,
                  double r, int l) {
  const auto fig = sweep::parse_figure(id);
  if (!fig) {
    std::cerr << "error: unknown figure id '" << id << "' (expected fig2, fig3, fig5 or table1)\n";
    return kUsage;
  }
  std::error_code ec;
  fs::create_directories(outdir, ec);
  const fs::path dir(outdir);

  sweep::SweepConfig cfg;
  if (*fig == sweep::Figure::table1) {
    if (format == "csv") {
      const std::string csv = sweep::table1_csv(alpha, r, l);
      if (!write_file(dir / "table1.csv", csv)) return kUsage;
      std::cout << (dir / "table1.csv").string() << "\n";
      return kOk;
    }
    // The plot shows the four rows against the squeezing factor.
    cfg.alpha = alpha;
    cfg.l = l;
    cfg.axis = sweep::Axis::r;
    cfg.start = 0.0;
    cfg.stop = 3.0;
    cfg.points = 301;
    cfg.outputs = {sweep::Output::table1};
  } else {
    cfg = sweep::figure_config(*fig);
  }
  sweep::validate(cfg);
  const fs::path ini = dir / (id + ".ini");
  const fs::path data = dir / (id + "." + format);
  const sweep::Table table = sweep::run(cfg);
  const std::string body = format == "csv" ? sweep::to_csv(table) : sweep::to_svg(table, id);
  if (!write_file(ini, sweep::render_config(cfg)) || !write_file(data, body)) {
    std::cerr << "error: cannot write into " << outdir << "\n";
    return kUsage;
  }
  std::cout << ini.string() << "\n" << data.string() << "\n";
  return kOk;
}

int cmd_validate(bool full, const std::string& fault) {
  acceptance::Options opt;
  opt.full = full;
  if (fault == "squeezer-sign") {
    opt.fault = acceptance::Fault::squeezer_sign;
  } else if (!fault.empty()) {
    std::cerr << "error: unknown fault '" << fault << "'\n";
    return kUsage;
  }
  const auto results = acceptance::run_all(opt);
  int failed = 0;
  for (const auto& r : results) {
    acceptance::print(std::cout, r);
    failed += !r.passed;
  }
  std::cout << (failed ? "FAILED " : "OK ") << results.size() - failed << "/" << results.size()
            << " criteria passed (" << (full ? "full" : "quick") << ")\n";
  return failed ? kValidation : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Angular-displacement interferometer workbench"};
  app.require_subcommand(1);

  std::string config, out_path;
  auto* run = app.add_subcommand("run", "Evaluate a sweep config and emit CSV");
  run->add_option("config", config, "Sweep config file")->required();
  run->add_option("--out", out_path, "Write CSV here instead of standard output");

  std::string figure, format = "csv", outdir = ".";
  double alpha = 20.0, r = 2.0;
  int l = 1;
  auto* rep = app.add_subcommand("reproduce", "Write the canonical config and output for a figure");
  rep->add_option("figure", figure, "fig2, fig3, fig5 or table1")->required();
  rep->add_option("--format", format, "csv or svg")->check(CLI::IsMember({"csv", "svg"}));
  rep->add_option("--outdir", outdir, "Output directory");
  rep->add_option("--alpha", alpha, "table1: coherent amplitude");
  rep->add_option("--r", r, "table1: squeezing factor");
  rep->add_option("--l", l, "table1: topological charge");

  bool quick = false, full = false;
  std::string fault;
  auto* val = app.add_subcommand("validate", "Run the acceptance suite");
  auto* q = val->add_flag("--quick", quick, "Skip oracle cases above cutoff 30 (default)");
  val->add_flag("--full", full, "Include every oracle case and the finite-difference QFI checks")->excludes(q);
  val->add_option("--inject-fault", fault, "Corrupt an element before validating (squeezer-sign)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*run) return cmd_run(config, out_path);
    if (*rep) return cmd_reproduce(figure, format, outdir, alpha, r, l);
    if (*val) return cmd_validate(full, fault);
  } catch (const sweep::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const sweep::DomainError& e) {
    std::cerr << e.what() << "\n";
    return kDomain;
  } catch (const InvalidArgument& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kDomain;
  }
  return kUsage;
}
