#include "affhj/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace affhj {

namespace {

bool finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

std::vector<double> axpy(const std::vector<double>& x, double a, const std::vector<double>& k) {
  std::vector<double> out(x);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += a * k[i];
  return out;
}

}  // namespace

Trajectory rk4(const VectorField& field, std::vector<double> state0, double t0, double t_end, double step) {
  if (step == 0.0 || !std::isfinite(step)) throw std::invalid_argument("rk4: step must be finite and nonzero");
  if ((t_end - t0) * step < 0.0) throw std::invalid_argument("rk4: step points away from t_end");

  Trajectory tr;
  tr.t0 = t0;
  tr.step = step;
  tr.times.push_back(t0);
  tr.states.push_back(std::move(state0));
  if (!finite(tr.states.back())) {
    tr.aborted = true;
    tr.error = "non-finite initial state";
    return tr;
  }

  const double span = (t_end - t0) / step;
  const auto full = static_cast<std::size_t>(std::floor(span + 1e-9));
  const double rest = span - static_cast<double>(full);
  const std::size_t total = full + (rest > 1e-9 ? 1 : 0);

  for (std::size_t k = 0; k < total; ++k) {
    const double hstep = k < full ? step : t_end - (t0 + static_cast<double>(full) * step);
    const std::vector<double>& y = tr.states.back();
    std::vector<double> next;
    try {
      const auto k1 = field(y);
      const auto k2 = field(axpy(y, 0.5 * hstep, k1));
      const auto k3 = field(axpy(y, 0.5 * hstep, k2));
      const auto k4 = field(axpy(y, hstep, k3));
      next = y;
      for (std::size_t i = 0; i < next.size(); ++i) next[i] += hstep / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    } catch (const std::exception& e) {
      tr.aborted = true;
      tr.error = e.what();
      return tr;
    }
    if (!finite(next)) {
      tr.aborted = true;
      tr.error = "non-finite state at t = " + std::to_string(tr.times.back() + hstep);
      return tr;
    }
    tr.times.push_back(k + 1 == total ? t_end : t0 + static_cast<double>(k + 1) * step);
    tr.states.push_back(std::move(next));
  }
  return tr;
}

std::vector<double> hamilton_rhs(const HamiltonianSection& h, std::span<const double> state) {
  const AffgebroidChart& a = h.chart();
  const std::size_t m = a.m();
  const std::size_t n = a.n();
  if (state.size() != m + n) throw std::invalid_argument("hamilton_rhs: state needs m + n entries");
  std::vector<double> grad(m + n);
  h(state, grad);
  const ChartValues cv = a.bidual().evaluate(state.first(m));
  const auto y = state.subspan(m, n);
  std::vector<double> out(m + n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double v = cv.rho(0, i);
    for (std::size_t al = 0; al < n; ++al) v += grad[m + al] * cv.rho(al + 1, i);
    out[i] = v;
  }
  for (std::size_t al = 0; al < n; ++al) {
    double v = 0.0;
    for (std::size_t i = 0; i < m; ++i) v -= cv.rho(al + 1, i) * grad[i];
    for (std::size_t g = 0; g < n; ++g) {
      double s = cv.c(0, al + 1, g + 1);
      for (std::size_t be = 0; be < n; ++be) s += cv.c(be + 1, al + 1, g + 1) * grad[m + be];
      v += y[g] * s;
    }
    out[m + al] = v;
  }
  return out;
}

Trajectory integrate(const HamiltonianSection& h, std::vector<double> state0, double t0, double t_end, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("integrate: step must be positive");
  if (!(t_end > t0)) throw std::invalid_argument("integrate: t_end must exceed t0");
  if (state0.size() != h.chart().m() + h.chart().n())
    throw std::invalid_argument("integrate: initial state needs m + n entries");
  return rk4([&h](std::span<const double> s) { return hamilton_rhs(h, s); }, std::move(state0), t0, t_end, step);
}

VectorField reduced_field(const CoSection& alpha, const HamiltonianSection& h) {
  return [alpha, h](std::span<const double> x) {
    const AffgebroidChart& a = h.chart();
    const std::size_t m = a.m();
    const std::size_t n = a.n();
    if (x.size() != m) throw std::invalid_argument("reduced_field: point needs m entries");
    const FormJet aj = alpha.jet(x);
    std::vector<double> p(x.begin(), x.end());
    p.insert(p.end(), aj.value.begin() + 1, aj.value.end());
    std::vector<double> grad(m + n);
    h(p, grad);
    const ChartValues cv = a.bidual().evaluate(x);
    std::vector<double> out(m);
    for (std::size_t i = 0; i < m; ++i) {
      double v = cv.rho(0, i);
      for (std::size_t al = 0; al < n; ++al) v += grad[m + al] * cv.rho(al + 1, i);
      out[i] = v;
    }
    return out;
  };
}

Trajectory integrate_reduced(const CoSection& alpha, const HamiltonianSection& h, std::vector<double> x0, double t0,
                             double t_end, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("integrate_reduced: step must be positive");
  if (!(t_end > t0)) throw std::invalid_argument("integrate_reduced: t_end must exceed t0");
  if (x0.size() != h.chart().m()) throw std::invalid_argument("integrate_reduced: initial point needs m entries");
  return rk4(reduced_field(alpha, h), std::move(x0), t0, t_end, step);
}

}  // namespace affhj
