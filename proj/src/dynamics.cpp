#include "berrylab/dynamics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace berrylab {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

using Vec4 = std::array<cplx, 4>;
using Mat4 = std::array<cplx, 16>;

Mat4 to_mat4(const ComplexMatrix& m) {
  Mat4 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[4 * i + j] = m(i, j);
  return out;
}

// H(phi) = cos(phi) X1 + sin(phi) X2 + X3, with the constant shift folded
// into X3. Kept as flat arrays: this is the RK4 hot loop.
struct FieldGenerator {
  Mat4 x1, x2, x3;

  void hpsi(double c, double s, const Vec4& v, Vec4& out) const {
    for (int i = 0; i < 4; ++i) {
      cplx acc{0.0, 0.0};
      const int row = 4 * i;
      for (int j = 0; j < 4; ++j)
        acc += (c * x1[row + j] + s * x2[row + j] + x3[row + j]) * v[j];
      out[i] = acc;
    }
  }
};

double norm2(const Vec4& v) {
  double s = 0.0;
  for (const cplx& a : v) s += std::norm(a);
  return s;
}

// Projection weight of psi onto the eigenlevel cluster containing `level`.
double cluster_fidelity(const HermEig& eig, int level, const StateVector& psi) {
  double e = eig.eigenvalues[level];
  double w = 0.0;
  for (int m = 0; m < 4; ++m)
    if (std::abs(eig.eigenvalues[m] - e) < 1e-9)
      w += std::norm(inner(eig.eigenvectors[m], psi));
  return std::sqrt(w);
}

}  // namespace

long long default_steps_per_loop(const ModelParams& params) {
  params.validate();
  double hbound = 0.5 * params.b_field + params.g * coupling_norm(params.coupling);
  double period = kTwoPi / params.omega;
  long long steps = static_cast<long long>(std::ceil(period * hbound / 0.05));
  return std::max<long long>(20000, steps);
}

Trajectory evolve_loop(const ModelParams& params, const StateVector& psi0,
                       int loops, long long steps_per_loop,
                       int max_stored_points) {
  params.validate();
  require(psi0.dim() == 4, "evolve_loop: psi0 must have dim 4");
  require(std::abs(psi0.norm() - 1.0) <= 1e-10,
          "evolve_loop: psi0 must be unit norm");
  require(loops >= 1, "evolve_loop: loops must be >= 1");
  require(steps_per_loop >= 1000, "evolve_loop: need steps_per_loop >= 1000");
  require(max_stored_points >= 3, "evolve_loop: max_stored_points too small");

  const double period = kTwoPi / params.omega;
  const double dt = period / static_cast<double>(steps_per_loop);
  const long long total_steps = steps_per_loop * loops;

  ComplexMatrix h0 = hamiltonian(params, 0.0);
  const double e0 = inner(psi0, h0.apply(psi0)).real();
  {
    double hbound = 0.5 * params.b_field +
                    params.g * coupling_norm(params.coupling) + std::abs(e0);
    if (hbound * dt > 0.5) {
      std::ostringstream os;
      os << "evolve_loop: step too coarse (||H - E0|| * dt = " << hbound * dt
         << " > 0.5); raise steps_per_loop to at least "
         << static_cast<long long>(std::ceil(period * hbound / 0.45));
      throw std::invalid_argument(os.str());
    }
  }

  // H(phi) split into constant matrices; E0 shift folded into the constant.
  FieldGenerator gen;
  {
    double half_b = 0.5 * params.b_field;
    double st = std::sin(params.theta), ct = std::cos(params.theta);
    gen.x1 = to_mat4(tensor_product(sigma_x().scaled(half_b * st), identity2()));
    gen.x2 = to_mat4(tensor_product(sigma_y().scaled(half_b * st), identity2()));
    ComplexMatrix x3 =
        tensor_product(sigma_z().scaled(half_b * ct), identity2()) -
        ComplexMatrix::identity(4).scaled(e0);
    if (params.g != 0.0)
      x3 = x3 + coupling_matrix(params.coupling).scaled(params.g);
    gen.x3 = to_mat4(x3);
  }

  Trajectory traj;
  traj.params = params;
  traj.loops = loops;
  traj.steps_per_loop = steps_per_loop;
  {
    HermEig eig = herm_eig(h0);
    int best = 0;
    double best_ov = -1.0;
    for (int m = 0; m < 4; ++m) {
      double ov = std::abs(inner(eig.eigenvectors[m], psi0));
      if (ov > best_ov) { best_ov = ov; best = m; }
    }
    traj.level = best;
  }

  const long long stride =
      std::max<long long>(1, (total_steps + max_stored_points - 2) /
                                 (max_stored_points - 1));
  traj.times.reserve(static_cast<size_t>(total_steps / stride) + 2);
  traj.states.reserve(traj.times.capacity());
  traj.energy_expect.reserve(traj.times.capacity());

  Vec4 psi;
  for (int i = 0; i < 4; ++i) psi[i] = psi0[i];

  const cplx mi{0.0, -1.0};
  Vec4 k1, k2, k3, k4, tmp;
  double cos_t = 1.0, sin_t = 0.0;  // trig of omega * t, reused across steps

  // Kahan-compensated running sum of <H> for the trapezoid rule.
  double esum = 0.0, ecomp = 0.0;
  auto kahan_add = [&](double x) {
    double y = x - ecomp;
    double t = esum + y;
    ecomp = (t - esum) - y;
    esum = t;
  };

  auto energy_at = [&](const Vec4& v, double c, double s) {
    Vec4 hv;
    gen.hpsi(c, s, v, hv);
    double e = 0.0;
    for (int i = 0; i < 4; ++i)
      e += (std::conj(v[i]) * hv[i]).real();
    return e + e0;  // true-H expectation
  };

  auto store_point = [&](long long step, const Vec4& v, double energy) {
    double t = step * dt;
    traj.times.push_back(t);
    // true state: psi = e^{-i E0 t} psi_shifted
    cplx phase = std::polar(1.0, -e0 * t);
    StateVector sv(4);
    for (int i = 0; i < 4; ++i) sv[i] = phase * v[i];
    traj.states.push_back(sv);
    traj.energy_expect.push_back(energy);
  };

  double e_prev = energy_at(psi, cos_t, sin_t);
  store_point(0, psi, e_prev);

  for (long long step = 0; step < total_steps; ++step) {
    const double t = step * dt;
    const double phi_mid = params.omega * (t + 0.5 * dt);
    const double phi_end = params.omega * (t + dt);
    const double cm = std::cos(phi_mid), sm = std::sin(phi_mid);
    const double ce = std::cos(phi_end), se = std::sin(phi_end);

    gen.hpsi(cos_t, sin_t, psi, tmp);
    for (int i = 0; i < 4; ++i) k1[i] = mi * tmp[i];
    for (int i = 0; i < 4; ++i) tmp[i] = psi[i] + 0.5 * dt * k1[i];
    gen.hpsi(cm, sm, tmp, k2);
    for (int i = 0; i < 4; ++i) k2[i] = mi * k2[i];
    for (int i = 0; i < 4; ++i) tmp[i] = psi[i] + 0.5 * dt * k2[i];
    gen.hpsi(cm, sm, tmp, k3);
    for (int i = 0; i < 4; ++i) k3[i] = mi * k3[i];
    for (int i = 0; i < 4; ++i) tmp[i] = psi[i] + dt * k3[i];
    gen.hpsi(ce, se, tmp, k4);
    for (int i = 0; i < 4; ++i) k4[i] = mi * k4[i];

    for (int i = 0; i < 4; ++i)
      psi[i] += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    cos_t = ce;
    sin_t = se;

    double drift = std::abs(std::sqrt(norm2(psi)) - 1.0);
    if (drift > traj.max_norm_drift) traj.max_norm_drift = drift;
    if (drift > 1e-6) {
      std::ostringstream os;
      os << "evolve_loop: norm drift " << drift << " at step " << step + 1
         << " of " << total_steps
         << "; reduce the step (raise steps_per_loop above " << steps_per_loop
         << ")";
      throw std::runtime_error(os.str());
    }

    double e_new = energy_at(psi, cos_t, sin_t);
    kahan_add(0.5 * (e_prev + e_new));
    e_prev = e_new;

    long long done = step + 1;
    if (done % stride == 0 || done == total_steps)
      store_point(done, psi, e_new);
  }

  traj.dynamical_integral = esum * dt;
  return traj;
}

PhaseReport phase_report(const Trajectory& traj) {
  require(traj.states.size() >= 2, "phase_report: empty trajectory");
  const ModelParams& p = traj.params;
  const double period = kTwoPi / p.omega;
  double t_final = traj.times.back();
  require(std::abs(t_final - traj.loops * period) <= 1e-9 * traj.loops * period,
          "phase_report: trajectory does not cover an integer number of loops");

  PhaseReport rep;
  rep.total_phase = std::arg(inner(traj.states.front(), traj.states.back()));
  rep.dynamical_phase = -traj.dynamical_integral;
  rep.geometric_phase = wrap_pi(rep.total_phase - rep.dynamical_phase);

  rep.min_fidelity = std::numeric_limits<double>::infinity();
  double fid = 0.0;
  for (size_t k = 0; k < traj.states.size(); ++k) {
    double phi = p.omega * traj.times[k];
    HermEig eig = herm_eig(hamiltonian(p, phi));
    fid = cluster_fidelity(eig, traj.level, traj.states[k]);
    rep.min_fidelity = std::min(rep.min_fidelity, fid);
  }
  rep.final_fidelity = fid;

  double st = std::sin(p.theta);
  rep.adiabaticity_ratio =
      (p.g > 0.0 && st > 1e-12)
          ? std::abs(p.omega / (p.g * st))
          : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

double adiabaticity_ratio(const ModelParams& params) {
  params.validate();
  double st = std::sin(params.theta);
  if (params.g <= 0.0 || st <= 1e-12)
    throw std::invalid_argument(
        "adiabaticity_ratio: condition undefined; gap closes (g = 0 or "
        "theta in {0, pi})");
  return std::abs(params.omega / (params.g * st));
}

std::vector<BreakdownRow> breakdown_sweep(double theta, double omega,
                                          const std::vector<double>& g_values,
                                          long long steps_per_loop,
                                          double b_field, CouplingKind kind) {
  require(!g_values.empty(), "breakdown_sweep: empty g list");
  for (size_t i = 0; i < g_values.size(); ++i) {
    require(g_values[i] > 0.0, "breakdown_sweep: all g must be > 0");
    if (i > 0)
      require(g_values[i] < g_values[i - 1],
              "breakdown_sweep: g values must be descending");
  }

  std::vector<BreakdownRow> rows;
  rows.reserve(g_values.size());
  for (double g : g_values) {
    ModelParams p;
    p.theta = theta;
    p.g = g;
    p.b_field = b_field;
    p.omega = omega;
    p.coupling = kind;
    HermEig eig = herm_eig(hamiltonian(p, 0.0));
    Trajectory traj = evolve_loop(p, eig.eigenvectors[3], 1, steps_per_loop);
    PhaseReport rep = phase_report(traj);

    BreakdownRow row;
    row.g = g;
    row.ratio = adiabaticity_ratio(p);
    row.final_fidelity = rep.final_fidelity;
    row.min_fidelity = rep.min_fidelity;
    row.geometric_phase = rep.geometric_phase;
    row.loop_duration = kTwoPi / omega;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace berrylab
