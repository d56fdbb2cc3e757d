#include "axon/plant.hpp"

#include <cmath>

#include "axon/numerics.hpp"

namespace axon {

void SolverConfig::validate() const {
  if (N < 16) fail(ErrorKind::InvalidParams, "solver N must be >= 16");
  if (!(dt > 0)) fail(ErrorKind::InvalidParams, "solver dt must be positive");
  if (!(theta >= 0.5 && theta <= 1.0))
    fail(ErrorKind::InvalidParams, "solver theta must lie in [0.5, 1]");
  if (!(t_end > 0)) fail(ErrorKind::InvalidParams, "solver horizon must be positive");
}

VecX advance_profile(const VecX& v, const BioParams& p, Scalar l_mid, Scalar ldot_mid,
                     Scalar bc0, Scalar bc1, Scalar dt, Scalar theta, Scalar t,
                     const SourceFn* source) {
  const int N = static_cast<int>(v.size()) - 1;
  const Scalar h = 1.0 / N;
  const Scalar adiff = p.D / (l_mid * l_mid);
  VecX lo = VecX::Zero(N + 1), di = VecX::Ones(N + 1), up = VecX::Zero(N + 1), rhs(N + 1);
  for (int i = 1; i < N; ++i) {
    const Scalar xi = i * h;
    const Scalar adv = xi * ldot_mid / l_mid - p.a / l_mid;
    Scalar cl = adiff / (h * h), cu = adiff / (h * h), cd = -2.0 * adiff / (h * h) - p.g;
    const Scalar peclet = std::abs(adv) * h / adiff;
    if (peclet <= 2.0) {
      cl -= adv / (2.0 * h);
      cu += adv / (2.0 * h);
    } else if (adv > 0) {
      cu += adv / h;
      cd -= adv / h;
    } else {
      cl -= adv / h;
      cd += adv / h;
    }
    lo(i) = -theta * dt * cl;
    di(i) = 1.0 - theta * dt * cd;
    up(i) = -theta * dt * cu;
    rhs(i) = v(i) + (1.0 - theta) * dt * (cl * v(i - 1) + cd * v(i) + cu * v(i + 1));
    if (source) {
      const Scalar x = xi * l_mid;
      rhs(i) += dt * ((1.0 - theta) * (*source)(x, t) + theta * (*source)(x, t + dt));
    }
  }
  rhs(0) = bc0;
  rhs(N) = bc1;
  return solve_tridiagonal(lo, di, up, rhs);
}

Scalar boundary_gradient(const PlantState& s) {
  const int N = s.segments();
  if (N < 3) fail(ErrorKind::GridMismatch, "boundary_gradient needs at least 3 segments");
  const Scalar h = 1.0 / N;
  return (3.0 * s.c(N) - 4.0 * s.c(N - 1) + s.c(N - 2)) / (2.0 * h * s.l);
}

namespace {

Scalar cone_rate(const BioParams& p, Scalar c_c, Scalar flux) {
  return ((p.a - p.g * p.l_c) * c_c - p.D * flux -
          (p.r_g * c_c + p.rt_g * p.l_c) * (c_c - p.c_inf)) /
         p.l_c;
}

}  // namespace

std::pair<PlantState, StepDiagnostics> plant_step(const PlantState& s, Scalar q_s,
                                                  const SolverConfig& cfg, const BioParams& p) {
  if (!std::isfinite(q_s)) fail(ErrorKind::NonFinite, "plant_step: q_s is not finite");
  if (!(s.l > 0)) fail(ErrorKind::DomainCollapse, "plant_step: l must be positive");
  const int N = s.segments();
  const Scalar dt = cfg.dt;

  const Scalar flux_n = boundary_gradient(s);
  const Scalar ccdot_n = cone_rate(p, s.c_c, flux_n);
  const Scalar ldot_n = p.r_g * (s.c_c - p.c_inf);
  const Scalar cc_pred = s.c_c + dt * ccdot_n;
  const Scalar l_pred = s.l + dt * ldot_n;
  if (!(l_pred > 0)) fail(ErrorKind::DomainCollapse, "plant_step: predicted l <= 0");
  const Scalar ldot_pred = p.r_g * (cc_pred - p.c_inf);
  const Scalar l_mid = 0.5 * (s.l + l_pred);
  const Scalar ldot_mid = 0.5 * (ldot_n + ldot_pred);

  PlantState out;
  out.t = s.t + dt;
  out.xi = s.xi;
  out.c = advance_profile(s.c, p, l_mid, ldot_mid, -q_s, cc_pred, dt, cfg.theta, s.t);
  out.l = l_pred;  // provisional, for the corrector flux

  const Scalar flux_np = (3.0 * out.c(N) - 4.0 * out.c(N - 1) + out.c(N - 2)) *
                         (N / (2.0 * l_pred));
  const Scalar ccdot_np = cone_rate(p, cc_pred, flux_np);
  out.c_c = s.c_c + 0.5 * dt * (ccdot_n + ccdot_np);
  out.l = s.l + 0.5 * dt * (ldot_n + p.r_g * (out.c_c - p.c_inf));
  out.c(N) = out.c_c;

  if (!out.c.allFinite() || !std::isfinite(out.c_c) || !std::isfinite(out.l))
    fail(ErrorKind::NonFinite, "plant_step: state is not finite after the step");
  if (!(out.l > 0)) fail(ErrorKind::DomainCollapse, "plant_step: l <= 0 after the step");

  StepDiagnostics diag;
  diag.max_c = out.c.cwiseAbs().maxCoeff();
  diag.l_dot = ldot_n;
  diag.cfl_like = (std::abs(ldot_mid) + p.a) / l_mid * dt * N;
  return {std::move(out), diag};
}

Scalar manufactured_solution(const BioParams& p, Scalar x, Scalar t) {
  return p.c_inf * (1.0 + 0.1 * std::sin(M_PI * x / p.l_s) * std::exp(-t));
}

Scalar manufactured_source(const BioParams& p, Scalar x, Scalar t) {
  const Scalar k = M_PI / p.l_s;
  const Scalar amp = 0.1 * p.c_inf * std::exp(-t);
  const Scalar sn = std::sin(k * x), cs = std::cos(k * x);
  // c_t - D c_xx + a c_x + g c, applied to c_m; the constant offset feeds g.
  return amp * (-sn + p.D * k * k * sn + p.a * k * cs + p.g * sn) + p.g * p.c_inf;
}

namespace {

Scalar manufactured_error(const BioParams& p, int N, Scalar dt, Scalar t_end, Scalar theta) {
  const Scalar L = p.l_s;
  VecX v(N + 1);
  for (int i = 0; i <= N; ++i) v(i) = manufactured_solution(p, L * i / N, 0.0);
  SourceFn src = [&p](Scalar x, Scalar t) { return manufactured_source(p, x, t); };
  const int steps = static_cast<int>(std::round(t_end / dt));
  Scalar t = 0.0;
  for (int n = 0; n < steps; ++n) {
    v = advance_profile(v, p, L, 0.0, manufactured_solution(p, 0.0, t + dt),
                        manufactured_solution(p, L, t + dt), dt, theta, t, &src);
    t += dt;
  }
  Scalar err = 0.0;
  for (int i = 0; i <= N; ++i)
    err = std::max(err, std::abs(v(i) - manufactured_solution(p, L * i / N, t)));
  return err;
}

void fill_orders(ConvergenceReport* r) {
  for (size_t i = 1; i < r->error.size(); ++i) {
    const Scalar ratio = r->resolution[i] / r->resolution[i - 1];
    const Scalar refine = ratio > 1.0 ? ratio : 1.0 / ratio;
    r->order.push_back(std::log(r->error[i - 1] / r->error[i]) / std::log(refine));
  }
}

}  // namespace

ConvergenceReport spatial_convergence_study(const BioParams& p, const std::vector<int>& grids,
                                            Scalar dt, Scalar t_end, Scalar theta) {
  ConvergenceReport r;
  for (int N : grids) {
    r.resolution.push_back(N);
    r.error.push_back(manufactured_error(p, N, dt, t_end, theta));
  }
  fill_orders(&r);
  return r;
}

ConvergenceReport temporal_convergence_study(const BioParams& p, int N,
                                             const std::vector<Scalar>& dts, Scalar t_end,
                                             Scalar theta) {
  ConvergenceReport r;
  for (Scalar dt : dts) {
    r.resolution.push_back(dt);
    r.error.push_back(manufactured_error(p, N, dt, t_end, theta));
  }
  fill_orders(&r);
  return r;
}

}  // namespace axon
