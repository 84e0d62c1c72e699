#include "wavelab/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wavelab/errors.hpp"

namespace wavelab {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

double compute_sigma(double n_minus, double n_plus, double q_minus) {
  if (!(n_minus > 0.0) || !(n_plus > 0.0))
    throw DomainError("end-state densities must be positive");
  if (n_minus == n_plus) throw DomainError("n_minus == n_plus: no shock");
  // Roots of s^2 + q s - n_plus; their product is -n_plus. Take the root
  // without cancellation first and recover the other from the product.
  const double disc = std::sqrt(q_minus * q_minus + 4.0 * n_plus);
  double pos, neg;
  if (q_minus >= 0.0) {
    neg = (-q_minus - disc) / 2.0;
    pos = -n_plus / neg;
  } else {
    pos = (-q_minus + disc) / 2.0;
    neg = -n_plus / pos;
  }
  return n_minus > n_plus ? pos : neg;
}

double compute_q_plus(double n_minus, double n_plus, double q_minus, double sigma) {
  if (sigma == 0.0) throw DomainError("sigma == 0");
  if (n_minus == n_plus) throw DomainError("n_minus == n_plus: no shock");
  return q_minus + (n_minus - n_plus) / sigma;
}

EndStates make_end_states(double n_minus, double n_plus, double q_minus, double nu) {
  if (!(nu > 0.0)) throw DomainError("viscosity must be positive");
  EndStates e;
  e.n_minus = n_minus;
  e.n_plus = n_plus;
  e.q_minus = q_minus;
  e.nu = nu;
  e.sigma = compute_sigma(n_minus, n_plus, q_minus);
  e.q_plus = compute_q_plus(n_minus, n_plus, q_minus, e.sigma);
  e.epsilon = n_minus - n_plus;
  return e;
}

RhResiduals rh_residuals(const EndStates& e) {
  const double dn = e.n_plus - e.n_minus;
  const double dq = e.q_plus - e.q_minus;
  const double r1 = -e.sigma * dn - (e.n_plus * e.q_plus - e.n_minus * e.q_minus);
  const double s1 = std::abs(e.sigma * dn) + std::abs(e.n_plus * e.q_plus) +
                    std::abs(e.n_minus * e.q_minus);
  const double r2 = -e.sigma * dq - dn;
  const double s2 = std::abs(e.sigma * dq) + std::abs(dn);
  return {std::abs(r1) / (s1 > 0.0 ? s1 : 1.0), std::abs(r2) / (s2 > 0.0 ? s2 : 1.0)};
}

EndStateReport validate_end_states(const EndStates& e) {
  EndStateReport out;
  Report& r = out.checks;
  r.add("positive densities", e.n_minus > 0.0 && e.n_plus > 0.0,
        "n_minus=" + fmt(e.n_minus) + " n_plus=" + fmt(e.n_plus));
  r.add("distinct densities", e.n_minus != e.n_plus);
  r.add("positive viscosity", e.nu > 0.0);
  if (!r.ok()) return out;
  const RhResiduals res = rh_residuals(e);
  r.add("rankine-hugoniot mass", res.mass < 1e-12, "relative residual " + fmt(res.mass));
  r.add("rankine-hugoniot flux", res.flux < 1e-12, "relative residual " + fmt(res.flux));
  const bool case_minus = e.n_minus > e.n_plus && e.q_minus < e.q_plus;
  const bool case_plus = e.n_minus < e.n_plus && e.q_minus < e.q_plus;
  r.add("lax entropy condition", case_minus || case_plus,
        case_minus ? "case n_minus > n_plus, q_minus < q_plus"
                   : (case_plus ? "case n_minus < n_plus, q_minus < q_plus (reflect)"
                                : "sign pattern violated"));
  const bool speed_sign = (e.n_minus > e.n_plus) ? e.sigma > 0.0 : e.sigma < 0.0;
  r.add("speed sign", speed_sign, "sigma=" + fmt(e.sigma));
  out.admissible = r.ok();
  out.needs_reflection = e.n_minus < e.n_plus;
  // After reflection the left state is the larger density.
  const double left = std::max(e.n_minus, e.n_plus);
  out.window_satisfiable = std::abs(e.epsilon) < kappa_upper_bound(left);
  return out;
}

EndStateReport validate_end_states(double n_minus, double n_plus, double q_minus) {
  try {
    return validate_end_states(make_end_states(n_minus, n_plus, q_minus));
  } catch (const DomainError& err) {
    EndStateReport out;
    out.checks.add("derivable end states", false, err.what());
    return out;
  }
}

bool is_canonical(const EndStates& e) {
  return e.n_minus > e.n_plus && e.n_plus > 0.0 && e.sigma > 0.0;
}

EndStates reflect(const EndStates& e) {
  EndStates r = e;
  r.n_minus = e.n_plus;
  r.n_plus = e.n_minus;
  r.q_minus = -e.q_plus;
  r.q_plus = -e.q_minus;
  r.sigma = -e.sigma;
  r.epsilon = -e.epsilon;
  return r;
}

EndStates reflect_problem(const EndStates& e) {
  if (!(e.n_plus > e.n_minus))
    throw DomainError("reflect_problem requires n_plus > n_minus (already canonical)");
  return reflect(e);
}

EndStates canonicalize(const EndStates& e) { return is_canonical(e) ? e : reflect_problem(e); }

FieldState reflect_state(const FieldState& s) {
  FieldState r;
  r.t = s.t;
  r.grid = s.grid;
  r.grid.xi_min = -s.grid.xi_max;
  r.grid.xi_max = -s.grid.xi_min;
  r.n.assign(s.n.rbegin(), s.n.rend());
  r.q.resize(s.q.size());
  std::transform(s.q.rbegin(), s.q.rend(), r.q.begin(), [](double v) { return -v; });
  return r;
}

FieldState scale_solution(double nu, const FieldState& state) {
  if (!(nu > 0.0)) throw DomainError("viscosity must be positive");
  if (nu == 1.0) return state;
  FieldState out = state;
  out.t = state.t / nu;
  out.grid.xi_min = state.grid.xi_min / nu;
  out.grid.xi_max = state.grid.xi_max / nu;
  return out;
}

double kappa_upper_bound(double n_minus) { return std::min(n_minus / 15.0, 1.0 / 8.0); }

WindowConstants default_window_constants(const EndStates& e) {
  WindowConstants tc;
  tc.kappa = 0.9 * kappa_upper_bound(e.n_minus);
  tc.lambda = std::sqrt(std::abs(e.epsilon));
  return tc;
}

Report check_window_constants(const EndStates& e, const WindowConstants& tc) {
  Report r;
  const double ub = kappa_upper_bound(e.n_minus);
  r.add("kappa > 0", tc.kappa > 0.0, "kappa=" + fmt(tc.kappa));
  r.add("kappa < min(n_minus/15, 1/8)", tc.kappa < ub,
        "kappa=" + fmt(tc.kappa) + " bound=" + fmt(ub));
  r.add("0 < epsilon", e.epsilon > 0.0, "epsilon=" + fmt(e.epsilon));
  r.add("epsilon < kappa", e.epsilon < tc.kappa,
        "epsilon=" + fmt(e.epsilon) + " kappa=" + fmt(tc.kappa));
  const double sk = tc.kappa > 0.0 ? std::sqrt(tc.kappa) : 0.0;
  const double lo = sk > 0.0 ? e.epsilon / sk : INFINITY;
  r.add("epsilon/sqrt(kappa) < lambda", lo < tc.lambda,
        "epsilon/sqrt(kappa)=" + fmt(lo) + " lambda=" + fmt(tc.lambda));
  r.add("lambda < sqrt(kappa)", tc.lambda < sk,
        "lambda=" + fmt(tc.lambda) + " sqrt(kappa)=" + fmt(sk));
  return r;
}

}  // namespace wavelab
