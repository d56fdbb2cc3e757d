#include "axon/trigger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "axon/numerics.hpp"

namespace axon {

void EtmConfig::validate() const {
  if (!(gamma > 0)) fail(ErrorKind::InvalidParams, "etm gamma must be positive");
  if (!(eta > 0)) fail(ErrorKind::InvalidParams, "etm eta must be positive");
  if (!(rho > 0)) fail(ErrorKind::InvalidParams, "etm rho must be positive");
  if (!(sigma > 0 && sigma < 1)) fail(ErrorKind::InvalidParams, "etm sigma must lie in (0,1)");
  if (!(m0 < 0)) fail(ErrorKind::InvalidParams, "etm m0 must be negative");
  for (Scalar b : beta)
    if (!(b >= 0)) fail(ErrorKind::InvalidParams, "etm beta_i must be nonnegative");
}

EtmConfig paper_fig2_etm() { return EtmConfig{}; }

namespace {

struct InverseKernelTables {
  // difference-kernel samples at lags s_d = -d*h*l_bar, d = 0..Nq
  VecX qbar;            // resolvent kernel
  VecX phibar1, phibar2;
  Scalar h_phys = 0;    // physical node spacing at l = l_bar
};

// The inverse-transform kernels of a difference Volterra kernel are
// difference kernels themselves; one triangular solve at l = l_bar yields
// q(0,y) and phibar on the whole lag range.
InverseKernelTables build_inverse_tables(const KernelModel& km, int Nq) {
  InverseKernelTables t;
  const Scalar l = km.l_bar;
  const Scalar h = l / Nq;
  t.h_phys = h;
  VecX kbar(Nq + 1), p1(Nq + 1), p2(Nq + 1);
  for (int d = 0; d <= Nq; ++d) {
    const auto [v, dv] = km.phi(-d * h);
    (void)dv;
    kbar(d) = -(1.0 / km.bio.D) * v.dot(km.dc.B);
    p1(d) = v(0);
    p2(d) = v(1);
  }
  // M = I - K_d, upper triangular in node order (integral from x to l).
  auto weight = [&](int i, int j) -> Scalar {  // trapezoid on [x_i, l]
    if (j < i) return 0.0;
    if (i == Nq) return 0.0;
    return (j == i || j == Nq) ? 0.5 * h : h;
  };
  // q(0, y_j): row 0 of (M^{-1} - I), scaled by the quadrature weight.
  // Solve z^T M = e_0^T by forward substitution over columns.
  VecX z = VecX::Zero(Nq + 1);
  for (int j = 0; j <= Nq; ++j) {
    Scalar acc = (j == 0) ? 1.0 : 0.0;
    for (int i = 0; i < j; ++i) acc += z(i) * weight(i, j) * kbar(j - i);
    const Scalar mjj = 1.0 - weight(j, j) * kbar(0);
    z(j) = acc / mjj;
  }
  t.qbar.resize(Nq + 1);
  for (int j = 0; j <= Nq; ++j) {
    const Scalar w = (j == 0 || j == Nq) ? 0.5 * h : h;
    t.qbar(j) = (z(j) - (j == 0 ? 1.0 : 0.0)) / w;
  }
  // phibar columns: M phibar = Phi with Phi_i = phi(x_i - l)^T, back-substitution.
  t.phibar1.resize(Nq + 1);
  t.phibar2.resize(Nq + 1);
  for (int c = 0; c < 2; ++c) {
    const VecX& rhs = (c == 0) ? p1 : p2;  // rhs_i = phi_c(-(Nq - i) h)
    VecX sol(Nq + 1);
    for (int i = Nq; i >= 0; --i) {
      Scalar acc = rhs(Nq - i);
      for (int j = i + 1; j <= Nq; ++j) acc += weight(i, j) * kbar(j - i) * sol(j);
      sol(i) = acc / (1.0 - weight(i, i) * kbar(0));
    }
    // store by lag: phibar(s = -(Nq - i) h) = sol(i)
    for (int d = 0; d <= Nq; ++d) {
      if (c == 0)
        t.phibar1(d) = sol(Nq - d);
      else
        t.phibar2(d) = sol(Nq - d);
    }
  }
  return t;
}

}  // namespace

AlphaConstants alpha_constants(const KernelModel& km, const DerivedConstants& dc,
                               const BioParams& p, Scalar l_bar) {
  AlphaConstants ac;
  ac.k_n = std::max(p.c_inf * dc.K_plus * dc.lambda_plus * dc.lambda_plus,
                    p.c_inf * dc.K_minus * dc.lambda_minus * dc.lambda_minus);
  ac.k_m = std::max(p.c_inf * dc.K_plus * std::pow(dc.lambda_plus, 3),
                    p.c_inf * dc.K_minus * std::pow(dc.lambda_minus, 3));

  const Scalar htb = dc.H.dot(dc.B);
  Vec2 dphi0;
  {
    const auto [v0, dv0] = km.phi(0.0);
    (void)v0;
    dphi0 = dv0;
  }
  const Scalar c0 = dphi0.dot(dc.B) + htb / p.D;  // phidot(0)B + (1/D)H^T B
  ac.rho1 = 8.0 * c0 * c0;

  // zeta(y) = D k_yy(0,y) + a k_y(0,y) - (g + c0) k(0,y), from the analytic
  // derivatives of k(0,y) = -(1/D) phi(-y)^T B, integrated over table nodes.
  {
    const int side = km.zero_node();
    VecX zeta2(side + 1);
    for (int k = 0; k <= side; ++k) {
      const auto row = km.table_row(km.zero_node() - k);  // s = -k*ds
      const Vec2 v(row(0), row(1)), dv(row(2), row(3)), ddv(row(4), row(5));
      const Scalar z = -ddv.dot(dc.B) + (p.a / p.D) * dv.dot(dc.B) +
                       ((p.g + c0) / p.D) * v.dot(dc.B);
      zeta2(k) = z * z;
    }
    ac.zeta_norm = trapezoid(zeta2, km.table_step());
  }

  const int Nq = 512;
  const InverseKernelTables inv = build_inverse_tables(km, Nq);
  {
    // int_0^l int_x^l q^2 dy dx = int_{-l}^{0} qbar(s)^2 (l - |s|) ds at l = l_bar
    VecX f(Nq + 1);
    for (int d = 0; d <= Nq; ++d)
      f(d) = inv.qbar(d) * inv.qbar(d) * (l_bar - d * inv.h_phys);
    ac.qq_int = trapezoid(f, inv.h_phys);
    // int_0^l q_x(0,y)^2 dy with q_x = qbar'(x-y); central differences on lags
    VecX qx2(Nq + 1);
    for (int d = 0; d <= Nq; ++d) {
      Scalar dq;
      if (d == 0)
        dq = (inv.qbar(0) - inv.qbar(1)) / inv.h_phys;  // d/ds at lag 0 (s decreasing)
      else if (d == Nq)
        dq = (inv.qbar(Nq - 1) - inv.qbar(Nq)) / inv.h_phys;
      else
        dq = (inv.qbar(d - 1) - inv.qbar(d + 1)) / (2.0 * inv.h_phys);
      qx2(d) = dq * dq;
    }
    ac.qx0_int = trapezoid(qx2, inv.h_phys);
    // int_0^l phibar(x - l)^T dx = int_{-l}^0 phibar(s) ds at l = l_bar
    ac.phibar_int(0) = trapezoid(inv.phibar1, inv.h_phys);
    ac.phibar_int(1) = trapezoid(inv.phibar2, inv.h_phys);
  }

  // Length-dependent factors at their supremum over (0, l_bar].
  const int n_sup = 256;
  Scalar sup_c0A_phi = 0;      // ||(c0 I - A) phi(-l)||^2
  Scalar sup_phibar_l = 0;     // ||phibar(-l)||^2
  Scalar sup_mix = 0;          // (D k(0,l) + phi(+l)^T B)^2
  Scalar sup_phiB_ak = 0;      // (phi(-l)^T B - a k(0,l))^2
  Scalar sup_phi_norm = 0;     // ||phi(-l)||^2
  Scalar sup_dphi1 = 0;        // |phi'_1(-l)|
  Scalar sup_phibar_acc = 0;   // ||int_0^l phibar dx||^2 over partial l
  const Mat2 c0A = c0 * Mat2::Identity() - dc.A;
  VecX acc1 = VecX::Zero(Nq + 1), acc2 = VecX::Zero(Nq + 1);
  for (int d = 1; d <= Nq; ++d) {  // cumulative trapezoid over lag range
    acc1(d) = acc1(d - 1) + 0.5 * inv.h_phys * (inv.phibar1(d - 1) + inv.phibar1(d));
    acc2(d) = acc2(d - 1) + 0.5 * inv.h_phys * (inv.phibar2(d - 1) + inv.phibar2(d));
  }
  for (int i = 1; i <= n_sup; ++i) {
    const Scalar l = l_bar * i / n_sup;
    const auto [v, dv] = km.phi(-l);
    Vec2 vpos;
    km.phi_direct(l, &vpos, nullptr, nullptr);
    const Scalar k0l = -(1.0 / p.D) * v.dot(dc.B);
    sup_c0A_phi = std::max(sup_c0A_phi, (c0A * v).squaredNorm());
    sup_mix = std::max(sup_mix, std::pow(p.D * k0l + vpos.dot(dc.B), 2));
    sup_phiB_ak = std::max(sup_phiB_ak, std::pow(v.dot(dc.B) - p.a * k0l, 2));
    sup_phi_norm = std::max(sup_phi_norm, v.squaredNorm());
    sup_dphi1 = std::max(sup_dphi1, dv.norm());
    const int d = std::min(Nq, static_cast<int>(std::round(l / inv.h_phys)));
    const Vec2 pbl(inv.phibar1(d), inv.phibar2(d));
    sup_phibar_l = std::max(sup_phibar_l, pbl.squaredNorm());
    sup_phibar_acc = std::max(sup_phibar_acc, Vec2(acc1(d), acc2(d)).squaredNorm());
  }
  const Vec2 phibar0(inv.phibar1(0), inv.phibar2(0));  // equals H
  const Scalar q_diag = 1.0 / p.l_c;                   // q(l,l) = q(0,0) = k(0,0)

  ac.alpha[0] = 8.0 * sup_c0A_phi + 32.0 * htb * htb * sup_phibar_l +
                32.0 * sup_mix * phibar0.squaredNorm() +
                64.0 * sup_phiB_ak * phibar0.squaredNorm() +
                12.0 * ac.zeta_norm * sup_phibar_acc;
  ac.alpha[1] = 8.0 * (dc.kappa * dc.kappa * sup_phi_norm +
                       std::pow(p.r_g * sup_dphi1, 2)) +
                16.0 * sup_phiB_ak + 124.0 * ac.k_n * ac.k_n * sup_mix * q_diag * q_diag;
  ac.alpha[2] = 32.0 * htb * htb;
  ac.alpha[3] = 18.0 * ac.zeta_norm * std::pow(1.0 + std::sqrt(ac.qq_int), 2) +
                32.0 * htb * htb * ac.qx0_int;
  ac.alpha[4] = 32.0 * sup_mix;
  for (Scalar a : ac.alpha)
    if (!std::isfinite(a))
      fail(ErrorKind::NonFinite, "alpha_constants: non-finite value (kernel table too coarse?)");
  return ac;
}

Scalar d1_lower_bound(const AlphaConstants& ac, Scalar beta4, const BioParams& p, Scalar l_bar) {
  return 4.0 * p.a * p.a / (p.D * p.D) + (1.0 + l_bar) / l_bar + 4.0 * beta4 / p.g +
         p.D * ac.alpha[3] / (4.0 * p.g * ac.alpha[4]);
}

EtmConfig etm_defaults(const AlphaConstants& ac, Scalar sigma, Scalar eta,
                       const DerivedConstants& dc, const BioParams& p, Scalar d1) {
  if (!(sigma > 0 && sigma < 1)) fail(ErrorKind::InvalidParams, "sigma must lie in (0,1)");
  if (!(eta > 0)) fail(ErrorKind::InvalidParams, "eta must be positive");
  EtmConfig cfg;
  cfg.sigma = sigma;
  cfg.eta = eta;
  cfg.gamma = 2.0 * 16.0 * (ac.alpha[2] + ac.alpha[4]) / (p.D * (1.0 - sigma));
  for (int i = 0; i < 5; ++i) cfg.beta[i] = ac.alpha[i] / (cfg.gamma * (1.0 - sigma));
  cfg.rho = 16.0 * p.D * d1 * d1 + 0.5 * p.a * d1 + 16.0 * p.g / p.D + (16.0 / p.D) * ac.rho1;
  cfg.m0 = -0.5;
  (void)dc;
  return cfg;
}

DerivedEtm etm_derive(const AlphaConstants& ac, Scalar sigma, Scalar eta,
                      const DerivedConstants& dc, const BioParams& p, Scalar l_bar) {
  DerivedEtm out;
  out.config = etm_defaults(ac, sigma, eta, dc, p, /*d1=*/1.0);
  const Scalar beta4 = out.config.beta[3];
  out.d1 = d1_lower_bound(ac, beta4, p, l_bar);
  out.config.rho = 16.0 * p.D * out.d1 * out.d1 + 0.5 * p.a * out.d1 + 16.0 * p.g / p.D +
                   (16.0 / p.D) * ac.rho1;
  return out;
}

EtmState EtmState::init(const EtmConfig& cfg, const TriggerSignals& s0, Scalar t0) {
  cfg.validate();
  EtmState st;
  st.m = cfg.m0;
  st.d = 0.0;
  st.U_held = s0.U_cont;
  st.t_last_event = t0;
  st.events.push_back({0, t0, s0.U_cont, 0.0});
  const Scalar xx = s0.X.squaredNorm();
  st.prev_pump = 0.0;
  st.prev_sink = cfg.beta[0] * xx + cfg.beta[1] * xx * xx + cfg.beta[2] * s0.w0x * s0.w0x +
                 cfg.beta[3] * s0.w_norm2 + cfg.beta[4] * s0.wlx * s0.wlx;
  return st;
}

namespace {

void exp_weights(Scalar z, Scalar* ez, Scalar* w_start, Scalar* w_end) {
  // trapezoid-in-source weights for the exponential integrator:
  //   m+ = m ez + dt [ (phi1 - phi2) S_n + phi2 S_{n+1} ]
  Scalar phi1, phi2;
  *ez = std::exp(-z);
  if (z < 1e-4) {
    phi1 = 1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0;
    phi2 = 0.5 - z / 6.0 + z * z / 24.0 - z * z * z / 120.0;
  } else {
    phi1 = (1.0 - *ez) / z;
    phi2 = (z - 1.0 + *ez) / (z * z);
  }
  *w_start = phi1 - phi2;
  *w_end = phi2;
}

}  // namespace

bool etm_step(EtmState& st, const EtmConfig& cfg, const TriggerSignals& sig, Scalar dt,
              Scalar t_next) {
  if (!(dt > 0)) fail(ErrorKind::InvalidParams, "etm_step: dt must be positive");
  if (!std::isfinite(sig.U_cont) || !sig.X.allFinite() || !std::isfinite(sig.w0x) ||
      !std::isfinite(sig.wlx) || !std::isfinite(sig.w_norm2))
    fail(ErrorKind::NonFinite, "etm_step: signals are not finite");

  st.d = sig.U_cont - st.U_held;
  const Scalar xx = sig.X.squaredNorm();
  const Scalar sink = cfg.beta[0] * xx + cfg.beta[1] * xx * xx + cfg.beta[2] * sig.w0x * sig.w0x +
                      cfg.beta[3] * sig.w_norm2 + cfg.beta[4] * sig.wlx * sig.wlx;
  const Scalar pump = cfg.rho * st.d * st.d;

  Scalar ez, w0, w1;
  exp_weights(cfg.eta * dt, &ez, &w0, &w1);
  Scalar m_next = st.m * ez + dt * (w0 * (st.prev_pump - st.prev_sink) + w1 * (pump - sink));
  bool fired = false;
  if (!(m_next < 0)) {
    // The pump would push m through zero within the step; the continuous
    // trigger fires first. Keep the sink-only update and force an event.
    m_next = st.m * ez - dt * (w0 * st.prev_sink + w1 * sink);
    fired = true;
  }
  if (!std::isfinite(m_next)) fail(ErrorKind::NonFinite, "etm_step: m is not finite");
  st.m = m_next;

  if (st.d * st.d > -cfg.gamma * st.m) fired = true;
  if (fired) {
    st.U_held = sig.U_cont;
    st.d = 0.0;
    const Scalar gap = t_next - st.t_last_event;
    st.events.push_back({static_cast<int>(st.events.size()), t_next, sig.U_cont, gap});
    st.t_last_event = t_next;
  }
  st.prev_pump = cfg.rho * st.d * st.d;
  st.prev_sink = sink;
  return fired;
}

DwellReport dwell_time(const EtmConfig& cfg, const AlphaConstants& ac, Scalar l_bar) {
  cfg.validate();
  DwellReport r;
  r.a1 = cfg.rho * cfg.sigma * cfg.gamma;
  r.a2 = 1.0 + 2.0 * ac.rho1 + (1.0 - cfg.sigma) * cfg.rho + cfg.eta;
  r.a3 = (1.0 + ac.rho1 + cfg.gamma * (1.0 - cfg.sigma) * cfg.rho + cfg.eta) *
         (1.0 - cfg.sigma) / cfg.sigma;
  r.psi_lo = -(1.0 - cfg.sigma) / cfg.sigma;
  r.psi_hi = 1.0;
  auto integrand = [&r](Scalar s) {
    const Scalar den = r.a1 * s * s + r.a2 * s + r.a3;
    if (!(den > 0))
      fail(ErrorKind::InvalidParams, "dwell_time: nonpositive denominator on the psi range");
    return 1.0 / den;
  };
  r.tau = adaptive_simpson(integrand, r.psi_lo, r.psi_hi, 1e-13);
  r.tau_literal = adaptive_simpson(integrand, 0.0, l_bar, 1e-13);
  return r;
}

ZenoReport zeno_report(const std::vector<TriggerEvent>& events, Scalar dt, Scalar tau) {
  ZenoReport r;
  r.tau = tau;
  r.event_count = static_cast<long>(events.size());
  if (events.size() <= 1) {
    r.min_gap = std::numeric_limits<Scalar>::infinity();
    r.mean_gap = 0.0;
    return r;
  }
  Scalar min_gap = std::numeric_limits<Scalar>::infinity();
  Scalar sum = 0.0;
  for (size_t j = 1; j < events.size(); ++j) {
    min_gap = std::min(min_gap, events[j].gap);
    sum += events[j].gap;
    if (events[j].gap < dt * (1.0 - 1e-9)) ++r.violations;
  }
  r.min_gap = min_gap;
  r.mean_gap = sum / static_cast<Scalar>(events.size() - 1);
  r.zeno_free = (r.violations == 0);
  return r;
}

}  // namespace axon
