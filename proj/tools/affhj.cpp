// affhj: validate affgebroid models, integrate Hamilton equations and check
// Hamilton-Jacobi solutions.

#include <iostream>

#include "CLI11.hpp"
#include "affhj/cli.hpp"

namespace cli = affhj::cli;

namespace {

void add_model(CLI::App* cmd, cli::CommonOptions& opt) {
  cmd->add_option("model", opt.model, "model file or built-in name (trivial:<d>, free:<d>, oscillator:<d>, "
                                      "linear:tangent<d>, rigid:<I1>,<I2>,<I3>)")
      ->required();
  cmd->add_option("--H", opt.hamiltonian, "replace the model Hamiltonian");
}

void add_sampling(CLI::App* cmd, cli::SamplingOptions& s) {
  cmd->add_option("--box", s.box, "sample box lo:hi,... (m or m+n intervals)");
  cmd->add_option("--samples", s.samples, "number of sample points");
  cmd->add_option("--seed", s.seed, "sampling seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hamiltonian mechanics and Hamilton-Jacobi checks on Lie affgebroids"};
  app.require_subcommand(0, 1);
  bool show_defaults = false;
  app.add_flag("--show-defaults", show_defaults, "print default settings and tolerances");

  cli::CommonOptions validate;
  cli::SamplingOptions validate_sampling;
  auto* v = app.add_subcommand("validate", "check the algebroid axioms of the bidual, vertical and prolongation charts");
  add_model(v, validate);
  add_sampling(v, validate_sampling);

  cli::FlowOptions flow;
  auto* f = app.add_subcommand("flow", "integrate the Hamilton equations and write CSV");
  add_model(f, flow);
  f->add_option("--x0", flow.x0, "initial base point, comma separated");
  f->add_option("--y0", flow.y0, "initial fiber point, comma separated");
  f->add_option("--t0", flow.t0, "start time");
  f->add_option("--t-end", flow.t_end, "end time (default t0 + 1)");
  f->add_option("--step", flow.step, "RK4 step (default 1e-3)");
  f->add_option("--out", flow.out_path, "CSV file (default stdout)");
  f->add_option("--every", flow.every, "write every k-th row");

  cli::HjOptions hj;
  auto* h = app.add_subcommand("hj", "cocycle and Hamilton-Jacobi residuals of a section");
  add_model(h, hj);
  h->add_option("--alpha", hj.alpha, "section name, exact:<S> or cosection:<a0>;<a1>,...")->required();
  add_sampling(h, hj.sampling);

  cli::VerifyOptions verify;
  auto* w = app.add_subcommand("verify", "compare the trajectory and Hamilton-Jacobi conditions");
  add_model(w, verify);
  w->add_option("--alpha", verify.alpha, "section name, exact:<S> or cosection:<a0>;<a1>,...")->required();
  w->add_option("--x0-set", verify.x0_set, "seeded, seeded:<k> or explicit points a,b;c,d");
  w->add_option("--horizon", verify.horizon, "integration horizon (default 1)");
  w->add_option("--step", verify.step, "RK4 step (default 1e-3)");
  add_sampling(w, verify.sampling);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::input_error;
  }

  if (show_defaults) {
    cli::print_defaults(std::cout);
    return cli::ok;
  }
  if (*v) return cli::run_validate(validate, validate_sampling, std::cout, std::cerr);
  if (*f) return cli::run_flow(flow, std::cout, std::cerr);
  if (*h) return cli::run_hj(hj, std::cout, std::cerr);
  if (*w) return cli::run_verify(verify, std::cout, std::cerr);
  std::cout << app.help();
  return cli::input_error;
}
