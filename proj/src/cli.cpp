#include "affhj/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include "affhj/defaults.hpp"
#include "affhj/dynamics.hpp"
#include "affhj/hj.hpp"
#include "affhj/model_file.hpp"

namespace affhj::cli {

namespace {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

double parse_real(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) throw InputError("bad number '" + s + "'");
  return v;
}

std::string num(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, end);
}

std::string point_text(const std::vector<double>& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + num(p[i]);
  return s + ")";
}

Expr parse_in(const std::string& src, const std::vector<std::string>& vars, const std::string& what) {
  const Expr e = parse(src);
  for (const auto& v : e.free_variables())
    if (std::find(vars.begin(), vars.end(), v) == vars.end())
      throw InputError("unknown variable '" + v + "' in " + what + " '" + src + "'");
  return e;
}

SamplePlan sampling_plan(const ModelBundle& model, const SamplingOptions& s) {
  SamplePlan plan = model.plan;
  if (!s.box.empty()) {
    const auto box = parse_box(s.box);
    const std::size_t m = model.chart.m();
    const std::size_t n = model.chart.n();
    if (box.size() != m && box.size() != m + n) throw InputError("--box needs m or m+n intervals");
    for (std::size_t k = 0; k < box.size(); ++k) plan.box[k] = box[k];
  }
  if (s.samples) plan.count = *s.samples;
  if (s.seed) plan.seed = *s.seed;
  return plan;
}

void line(std::ostream& out, const std::string& key, const std::string& value) { out << key << " = " << value << "\n"; }
void line(std::ostream& out, const std::string& key, double value) { line(out, key, num(value)); }

// Runs `body`, mapping exceptions to exit codes.
template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const InconsistencyError& e) {
    err << "error: internal inconsistency: " << e.what() << "\n";
    return inconsistency;
  } catch (const ModelFileError& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  } catch (const EvalError& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  }
}

void print_chart_report(std::ostream& out, const std::string& prefix, const ValidationReport& r) {
  line(out, prefix + "_ANTISYMMETRY", r.antisymmetry);
  line(out, prefix + "_ANCHOR", r.anchor);
  line(out, prefix + "_JACOBI", r.jacobi);
  if (!r.worst_jacobi_point.empty()) line(out, prefix + "_JACOBI_WORST_POINT", point_text(r.worst_jacobi_point));
  line(out, prefix + "_VALID", r.valid() ? "yes" : "no");
}

}  // namespace

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (const auto& part : split(text, ',')) out.push_back(parse_real(part));
  return out;
}

std::vector<std::pair<double, double>> parse_box(const std::string& text) {
  std::vector<std::pair<double, double>> box;
  for (const auto& part : split(text, ',')) {
    const auto ends = split(part, ':');
    if (ends.size() != 2) throw InputError("intervals look like lo:hi, got '" + part + "'");
    const double lo = parse_real(ends[0]);
    const double hi = parse_real(ends[1]);
    if (!(lo < hi)) throw InputError("empty interval '" + part + "'");
    box.emplace_back(lo, hi);
  }
  return box;
}

ModelBundle resolve_model(const std::string& spec, const std::string& hamiltonian) {
  ModelBundle model = is_model_name(spec) ? model_by_name(spec) : load_model(spec);
  if (!hamiltonian.empty()) model.hamiltonian = parse_in(hamiltonian, model.chart.phase_vars(), "Hamiltonian");
  return model;
}

CoSection resolve_section(const ModelBundle& model, const std::string& spec) {
  const auto& base = model.chart.base_vars();
  if (spec.rfind("exact:", 0) == 0) return coboundary(model.chart, parse_in(spec.substr(6), base, "potential"));
  if (spec.rfind("cosection:", 0) == 0) {
    const auto parts = split(spec.substr(10), ';');
    if (parts.size() != 2) throw InputError("cosection needs '<alpha0>;<alpha1>,...'");
    std::vector<Expr> av;
    if (model.chart.n() > 0) {
      const auto comps = split(parts[1], ',');
      if (comps.size() != model.chart.n())
        throw InputError("cosection needs " + std::to_string(model.chart.n()) + " vertical components");
      for (const auto& c : comps) av.push_back(parse_in(c, base, "section"));
    }
    return CoSection(model.chart, parse_in(parts[0], base, "section"), av);
  }
  if (!model.has_section(spec)) {
    std::string known;
    for (const auto& s : model.sections) known += (known.empty() ? "" : ", ") + s.first;
    throw InputError("unknown section '" + spec + "' (model has: " + (known.empty() ? "none" : known) + ")");
  }
  return model.section(spec);
}

int run_validate(const CommonOptions& opt, const SamplingOptions& sampling, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ModelBundle model = resolve_model(opt.model, opt.hamiltonian);
    const SamplePlan plan = sampling_plan(model, sampling);
    const AffgebroidValidation v = validate_affgebroid(model.chart, plan);
    line(out, "MODEL", model.name);
    line(out, "M", static_cast<double>(model.chart.m()));
    line(out, "N", static_cast<double>(model.chart.n()));
    line(out, "SAMPLES", static_cast<double>(plan.count));
    line(out, "SEED", std::to_string(plan.seed));
    print_chart_report(out, "BIDUAL", v.bidual);
    print_chart_report(out, "VERTICAL", v.vertical);
    print_chart_report(out, "PROLONGATION", v.prolongation);
    line(out, "CV_ANTISYMMETRY", v.cv_antisymmetry);
    line(out, "E0_DIFFERENTIAL", v.e0_differential);
    line(out, "VALID", v.valid() ? "yes" : "no");
    return v.valid() ? ok : check_failed;
  });
}

int run_flow(const FlowOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const ModelBundle model = resolve_model(opt.model, opt.hamiltonian);
    const std::size_t m = model.chart.m();
    const std::size_t n = model.chart.n();
    std::vector<double> x0 = parse_vector(opt.x0);
    std::vector<double> y0 = parse_vector(opt.y0);
    if (x0.empty()) x0.assign(m, 0.0);
    if (y0.empty()) y0.assign(n, 0.0);
    if (x0.size() != m) throw InputError("--x0 needs " + std::to_string(m) + " values");
    if (y0.size() != n) throw InputError("--y0 needs " + std::to_string(n) + " values");
    if (opt.every == 0) throw InputError("--every must be positive");
    const double t_end = opt.t_end.value_or(opt.t0 + defaults::horizon);
    const double step = opt.step.value_or(defaults::step);
    std::vector<double> state = x0;
    state.insert(state.end(), y0.begin(), y0.end());
    const Trajectory tr = integrate(model.hamiltonian_section(), state, opt.t0, t_end, step);

    std::ofstream file;
    if (!opt.out_path.empty()) {
      file.open(opt.out_path);
      if (!file) throw InputError("cannot write '" + opt.out_path + "'");
    }
    std::ostream& csv = opt.out_path.empty() ? out : file;
    csv << "t";
    for (std::size_t i = 1; i <= m; ++i) csv << ",x" << i;
    for (std::size_t a = 1; a <= n; ++a) csv << ",y" << a;
    csv << "\n";
    for (std::size_t k = 0; k < tr.size(); ++k) {
      if (k % opt.every != 0 && k + 1 != tr.size()) continue;
      csv << num(tr.times[k]);
      for (double v : tr.states[k]) csv << "," << num(v);
      csv << "\n";
    }
    if (tr.aborted) {
      csv << "# ABORTED: " << tr.error << "\n";
      err << "error: integration aborted: " << tr.error << "\n";
      return check_failed;
    }
    return ok;
  });
}

int run_hj(const HjOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ModelBundle model = resolve_model(opt.model, opt.hamiltonian);
    const CoSection alpha = resolve_section(model, opt.alpha);
    const SamplePlan plan = sampling_plan(model, opt.sampling);
    const ResidualReport c = cocycle_residual(alpha, plan);
    const HjReport h = hj_residual(alpha, model.hamiltonian_section(), plan);
    line(out, "MODEL", model.name);
    line(out, "SECTION", opt.alpha);
    line(out, "SAMPLES", static_cast<double>(plan.count));
    line(out, "SEED", std::to_string(plan.seed));
    line(out, "COCYCLE_RESIDUAL", c.max);
    line(out, "F_MIN", h.f_min);
    line(out, "F_MAX", h.f_max);
    line(out, "F_MEAN", h.f_mean);
    line(out, "HJ_RESIDUAL", h.max);
    if (!h.worst_point.empty()) line(out, "HJ_WORST_POINT", point_text(h.worst_point));
    const bool cocycle = c.max <= defaults::cocycle_tol;
    const bool solution = h.max <= defaults::hj_tol;
    line(out, "COCYCLE", cocycle ? "yes" : "no");
    line(out, "HJ_SOLUTION", solution ? "yes" : "no");
    return cocycle && solution ? ok : check_failed;
  });
}

int run_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const ModelBundle model = resolve_model(opt.model, opt.hamiltonian);
    const CoSection alpha = resolve_section(model, opt.alpha);
    const SamplePlan plan = sampling_plan(model, opt.sampling);
    const std::size_t m = model.chart.m();
    const double horizon = opt.horizon.value_or(defaults::horizon);
    const double step = opt.step.value_or(defaults::step);
    if (!(horizon > 0.0) || !(step > 0.0)) throw InputError("--horizon and --step must be positive");

    std::vector<Point> x0s;
    if (opt.x0_set.rfind("seeded", 0) == 0) {
      SamplePlan seeded = plan.resized(m);
      seeded.count = defaults::verify_points;
      if (opt.x0_set.size() > 6) {
        if (opt.x0_set[6] != ':') throw InputError("--x0-set: expected seeded:<count>");
        const double k = parse_real(opt.x0_set.substr(7));
        if (!(k >= 1.0) || k != std::floor(k)) throw InputError("--x0-set: bad count");
        seeded.count = static_cast<std::size_t>(k);
      }
      x0s = sample_points(seeded);
    } else {
      for (const auto& p : split(opt.x0_set, ';')) {
        x0s.push_back(parse_vector(p));
        if (x0s.back().size() != m) throw InputError("--x0-set points need " + std::to_string(m) + " values");
      }
    }

    TheoremSetReport rep;
    try {
      rep = verify_theorem(alpha, model.hamiltonian_section(), x0s, horizon, step, plan);
    } catch (const NotCocycleError& e) {
      line(out, "COCYCLE_RESIDUAL", e.residual());
      err << "error: " << e.what() << "\n";
      return input_error;
    }
    line(out, "MODEL", model.name);
    line(out, "SECTION", opt.alpha);
    line(out, "HORIZON", horizon);
    line(out, "STEP", step);
    line(out, "COCYCLE_RESIDUAL", rep.cocycle);
    line(out, "POINTS", static_cast<double>(rep.runs.size()));
    double traj = 0.0;
    double hj = 0.0;
    bool failed = false;
    for (std::size_t k = 0; k < rep.runs.size(); ++k) {
      const TheoremReport& r = rep.runs[k];
      traj = std::max(traj, r.trajectory_residual);
      hj = std::max(hj, r.hj_box);
      std::string row = "x0=" + point_text(r.x0) + " traj=" + num(r.trajectory_residual) + " hj=" + num(r.hj_box) +
                        " i=" + (r.trajectory_condition() ? "holds" : "fails") +
                        " ii=" + (r.hj_condition() ? "holds" : "fails");
      if (r.integration_failed) {
        row += " ABORTED(" + r.error + ")";
        failed = true;
      }
      line(out, "RUN_" + std::to_string(k + 1), row);
    }
    line(out, "TRAJECTORY_RESIDUAL", traj);
    line(out, "HJ_RESIDUAL", hj);
    if (!rep.runs.empty()) {
      const TheoremReport& w = rep.runs[rep.witness()];
      line(out, "WITNESS", point_text(w.x0));
      line(out, "WITNESS_RESIDUAL", w.trajectory_residual);
    }
    line(out, "CONDITION_I", rep.trajectory_condition() ? "holds" : "fails");
    line(out, "CONDITION_II", rep.hj_condition() ? "holds" : "fails");
    line(out, "VERDICT", std::string("(i) and (ii) ") + (rep.agree() ? "AGREE" : "DISAGREE"));
    if (failed) {
      err << "error: integration failed for at least one initial point\n";
      return check_failed;
    }
    if (!rep.agree()) return inconsistency;
    return rep.hj_condition() ? ok : check_failed;
  });
}

void print_defaults(std::ostream& out) { defaults::print(out); }

}  // namespace affhj::cli
