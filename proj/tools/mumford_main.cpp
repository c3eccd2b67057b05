// Command line front end: certify | periods | theta-table | lambdas | verify
// over a JSON curve specification.

#include "CLI11.hpp"
#include "mumford/curve_run.hpp"

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"p-adic uniformization of hyperelliptic Mumford curves"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string out_dir;
  int trunc = 0;
  int radius = 0;
  long tolerance = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--spec", spec_path, "curve specification file (JSON)")
        ->required();
    cmd->add_option("--trunc", trunc, "override word truncation length");
    cmd->add_option("--radius", radius, "override theta summation radius");
    cmd->add_option("--tolerance", tolerance, "override tail tolerance");
    cmd->add_option("--out", out_dir, "report and cache directory");
  };

  for (const char* name : {"certify", "periods", "theta-table", "lambdas", "verify"})
    add_common(app.add_subcommand(name));

  CLI11_PARSE(app, argc, argv);

  std::string command = app.get_subcommands().front()->get_name();
  try {
    mumford::CurveSpec spec = mumford::load_curve_spec(spec_path);
    if (trunc > 0) spec.trunc_len = trunc;
    if (radius > 0) spec.theta_radius = radius;
    if (tolerance > 0) spec.tolerance = tolerance;
    mumford::RunReport rep = mumford::run_command(command, spec, out_dir);
    std::cout << rep.text();
    return rep.ok ? 0 : 1;
  } catch (const mumford::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
