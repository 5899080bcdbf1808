// Dirac laboratory - windowed split evolution

#include "dirac/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dirac {

namespace {

double smooth_step_part(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

// Largest reduced dimension for which the exponential scheme diagonalises densely.
constexpr int kDenseLimit = 2500;

double weighted_norm(const CVec& v, const RVec& w) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += w(i) * std::norm(v(i));
  return std::sqrt(s);
}

// w-amplitude of the full vector on radial row ir.
double row_amplitude(const DiscreteHamiltonian& H, const CVec& full, int ir) {
  const int f = H.f();
  const int nth = H.grid.nth();
  double s = 0.0;
  for (int j = 0; j < nth; ++j) {
    const int node = H.grid.node(ir, j);
    for (int c = 0; c < f; ++c) s += H.w_node(node) * std::norm(full(node * f + c));
  }
  return std::sqrt(s);
}

Cplx rk4_factor(double z, long steps) {
  // R(z) = sum_{k<=4} (-i z)^k / k!
  const Cplx iz(0.0, -z);
  const Cplx R = 1.0 + iz + iz * iz / 2.0 + iz * iz * iz / 6.0 + iz * iz * iz * iz / 24.0;
  return std::pow(R, static_cast<double>(steps));
}

long step_count(double tau, double dt) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  return std::max<long>(1, static_cast<long>(std::ceil(std::abs(tau) / dt - 1e-9)));
}

}  // namespace

double CutoffEta::operator()(double rho) const {
  const double a = r_max / 8.0;
  if (rho <= a) return 1.0;
  if (rho >= 2.0 * a) return 0.0;
  const double x = (rho - a) / a;
  const double p = smooth_step_part(1.0 - x);
  const double q = smooth_step_part(x);
  return p / (p + q);
}

double max_radial_speed(const Grid& grid, const MetricClosure& closure) {
  double v = 0.0;
  for (int ir = 0; ir < grid.nr(); ++ir)
    for (int j = 0; j < grid.nth(); ++j)
      v = std::max(v, closure.characteristic_speed(closure.point(grid.spatial(ir, j)), 1));
  return v;
}

double epsilon_from_lightcones(const Grid& grid, const MetricClosure& closure, double r_max,
                               double* v_max) {
  const double v = max_radial_speed(grid, closure);
  if (!std::isfinite(v) || v <= 0.0)
    throw NumericalError("characteristic speed is not finite and positive");
  if (v_max) *v_max = v;
  return r_max / (8.0 * v);
}

SplitData split_initial(const Grid& grid, const CVec& psi0, const CutoffEta& eta) {
  const int f = static_cast<int>(psi0.size()) / grid.nodes();
  if (f * grid.nodes() != psi0.size()) throw ConfigError("initial data size does not match grid");
  const double r0 = grid.r.nodes(0);
  SplitData out{CVec::Zero(psi0.size()), CVec::Zero(psi0.size())};
  for (int ir = 0; ir < grid.nr(); ++ir) {
    const double e = eta(grid.r.nodes(ir) - r0);
    for (int j = 0; j < grid.nth(); ++j) {
      const int node = grid.node(ir, j);
      for (int c = 0; c < f; ++c) {
        const int i = node * f + c;
        out.boundary(i) = e * psi0(i);
        out.interior(i) = psi0(i) - out.boundary(i);
      }
    }
  }
  return out;
}

Scheme parse_scheme(const std::string& s) {
  if (s == "cn" || s == "crank_nicolson") return Scheme::CrankNicolson;
  if (s == "rk4") return Scheme::RK4;
  if (s == "exp" || s == "exponential") return Scheme::Exponential;
  throw ConfigError("unknown scheme '" + s + "' (cn, rk4, exp)");
}

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::CrankNicolson: return "cn";
    case Scheme::RK4: return "rk4";
    case Scheme::Exponential: return "exp";
  }
  return "?";
}

Propagator::Propagator(const DiscreteHamiltonian& H, Scheme scheme) : H_(&H), scheme_(scheme) {
  if (scheme_ == Scheme::Exponential) {
    if (H.reduced_dim() > kDenseLimit) {
      std::ostringstream msg;
      msg << "exponential scheme limited to " << kDenseLimit << " reduced unknowns, got "
          << H.reduced_dim();
      throw ConfigError(msg.str());
    }
    basis_ = std::make_shared<SpectralBasis>(eigendecompose_X(H.H_red, H.w_red));
  }
}

CVec Propagator::advance(const CVec& c, double tau, long n,
                         const std::function<void(const CVec&)>& observe) const {
  if (n < 1) n = 1;
  const double dt = tau / static_cast<double>(n);
  const SpMat& A = H_->H_red;
  CVec x = c;
  switch (scheme_) {
    case Scheme::CrankNicolson: {
      auto it = lu_.find(dt);
      if (it == lu_.end()) {
        SpMat I(A.rows(), A.cols());
        I.setIdentity();
        SpMat L = I + Cplx(0.0, 0.5 * dt) * A;
        auto lu = std::make_shared<Eigen::SparseLU<SpMat>>();
        lu->compute(L);
        if (lu->info() != Eigen::Success) throw NumericalError("Crank-Nicolson factorisation failed");
        it = lu_.emplace(dt, lu).first;
      }
      for (long s = 0; s < n; ++s) {
        CVec rhs = x - Cplx(0.0, 0.5 * dt) * (A * x);
        x = it->second->solve(rhs);
        if (observe) observe(x);
      }
      break;
    }
    case Scheme::RK4: {
      const Cplx mi(0.0, -1.0);
      for (long s = 0; s < n; ++s) {
        CVec k1 = mi * (A * x);
        CVec k2 = mi * (A * (x + 0.5 * dt * k1));
        CVec k3 = mi * (A * (x + 0.5 * dt * k2));
        CVec k4 = mi * (A * (x + dt * k3));
        x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (observe) observe(x);
      }
      break;
    }
    case Scheme::Exponential: {
      const CVec coef = basis_->coefficients(c);
      auto at = [&](double t) {
        CVec cc = coef;
        for (int k = 0; k < basis_->size(); ++k)
          cc(k) *= std::exp(Cplx(0.0, -basis_->omega(k) * t));
        return basis_->synthesize(cc);
      };
      if (observe)
        for (long s = 1; s < n; ++s) observe(at(dt * static_cast<double>(s)));
      x = at(tau);
      if (observe) observe(x);
      break;
    }
  }
  return x;
}

SplitSolver::SplitSolver(const Grid& g, std::shared_ptr<const MetricClosure> cl,
                         const OperatorOptions& opts, double rmax)
    : grid(g), closure(std::move(cl)), options(opts), r_max(rmax) {
  if (!closure) throw ConfigError("split solver needs a metric");
  if (!(r_max > 0.0)) throw ConfigError("r_max must be positive");
  const double r0 = grid.r.nodes(0);
  const double r_end = grid.r.nodes(grid.nr() - 1);
  if (r0 + r_max > r_end + 1e-12 * std::max(1.0, r_end))
    throw ConfigError("r_max exceeds the radial extent of the grid");

  OperatorOptions ref = options;
  ref.inner = FaceCondition::Chiral;
  ref.outer = FaceCondition::Chiral;
  reference = assemble_hamiltonian(grid, *closure, ref);
  OperatorOptions in = ref;
  in.inner = FaceCondition::Free;
  interior = assemble_hamiltonian(grid, *closure, in);

  X = build_region_X(grid, *closure, r_max, ref);
  if (X.r_mid - r0 <= r_max / 4.0) {
    std::ostringstream msg;
    msg << "collar X ends at rho = " << X.r_mid - r0 << ", inside the support of eta (r_max/4 = "
        << r_max / 4.0 << ")";
    throw ConfigError(msg.str());
  }
  basis = eigendecompose_X(X.H.H_red, X.H.w_red);
  epsilon = epsilon_from_lightcones(grid, *closure, r_max, &v_max);
}

double SplitSolver::w_norm(const CVec& full) const {
  return weighted_norm(full, reference.w_full());
}

double SplitSolver::boundary_residual(const CVec& full) const {
  const double a = reference.boundary_residual(full, true);
  const double b = reference.boundary_residual(full, false);
  return std::hypot(a, b);
}

CVec interior_evolve(const SplitSolver& S, const Propagator& P, const CVec& psi_I, double tau,
                     double dt, double threshold, double* excitation) {
  const DiscreteHamiltonian& H = S.interior;
  const long n = step_count(tau, dt);
  // the free inner face keeps all f components, so its reduced unknowns are the first block
  const int n_face = H.grid.nth() * H.f();
  double worst = 0.0;
  auto monitor = [&](const CVec& c) {
    double s = 0.0;
    for (int i = 0; i < n_face; ++i) s += H.w_red(i) * std::norm(c(i));
    worst = std::max(worst, std::sqrt(s));
  };
  CVec c = P.advance(H.reduce(psi_I), tau, n, monitor);
  if (excitation) *excitation = worst;
  if (worst > threshold) {
    std::ostringstream msg;
    msg << "interior part reached the inner face: amplitude " << worst << " > " << threshold;
    throw WindowViolation(msg.str());
  }
  return H.expand(c);
}

CVec boundary_evolve(const SplitSolver& S, Scheme scheme, const CVec& psi_B, double tau,
                     double dt, double threshold, int monitor_samples, double* excitation) {
  const DiscreteHamiltonian& HX = S.X.H;
  const int f = HX.f();
  const int nX = HX.grid.nodes() * f;
  const CVec start_full = psi_B.head(nX);
  // everything beyond X must vanish already
  const double outside = weighted_norm(psi_B.tail(psi_B.size() - nX),
                                       S.reference.w_full().tail(psi_B.size() - nX));
  const long n = step_count(tau, dt);
  const double h = tau / static_cast<double>(n);
  const CVec coef = S.basis.coefficients(HX.reduce(start_full));

  auto at_steps = [&](long steps) {
    CVec c = coef;
    const double t = h * static_cast<double>(steps);
    for (int k = 0; k < S.basis.size(); ++k) {
      const double w = S.basis.omega(k);
      switch (scheme) {
        case Scheme::Exponential: c(k) *= std::exp(Cplx(0.0, -w * t)); break;
        case Scheme::CrankNicolson:
          c(k) *= std::exp(Cplx(0.0, -2.0 * static_cast<double>(steps) * std::atan(0.5 * w * h)));
          break;
        case Scheme::RK4: c(k) *= rk4_factor(w * h, steps); break;
      }
    }
    return HX.expand(S.basis.synthesize(c));
  };

  const int y_row = HX.grid.nr() - 1;
  double worst = std::max(outside, 0.0);
  const int samples = std::max(1, monitor_samples);
  CVec end;
  for (int s = 1; s <= samples; ++s) {
    const long steps = (s == samples) ? n : (n * s) / samples;
    CVec v = at_steps(steps);
    worst = std::max(worst, row_amplitude(HX, v, y_row));
    if (s == samples) end = std::move(v);
  }
  if (excitation) *excitation = worst;
  if (worst > threshold) {
    std::ostringstream msg;
    msg << "collar part reached the face r = " << S.X.r_mid << ": amplitude " << worst << " > "
        << threshold;
    throw WindowViolation(msg.str());
  }
  CVec out = CVec::Zero(psi_B.size());
  out.head(nX) = end;
  return out;
}

namespace {

void record(const SplitSolver& S, EvolutionTrace& tr, double t, const CVec& psi, double gluing,
            double support_threshold) {
  tr.t.push_back(t);
  tr.w_norm.push_back(S.w_norm(psi));
  tr.boundary_residual.push_back(S.boundary_residual(psi));
  auto [lo, hi] = support_interval(S.grid, S.reference.f(), psi, support_threshold);
  tr.support_lo.push_back(lo);
  tr.support_hi.push_back(hi);
  tr.support_radius.push_back(0.5 * (hi - lo));
  tr.gluing_discrepancy.push_back(gluing);
}

void check_config(const SplitSolver& S, const CVec& psi0, const EvolutionConfig& cfg) {
  if (psi0.size() != S.reference.full_dim())
    throw ConfigError("initial data size does not match grid");
  if (!(cfg.dt > 0.0)) throw ConfigError("evolution.dt must be positive");
  if (!(cfg.window_fraction > 0.0 && cfg.window_fraction <= 1.0))
    throw ConfigError("evolution.window_fraction must lie in (0, 1]");
  const double limit = cfg.cfl * S.grid.r.h / S.v_max;
  if (cfg.dt > limit * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "evolution.dt = " << cfg.dt << " exceeds cfl * h / v_max = " << limit;
    throw ConfigError(msg.str());
  }
}

template <class Step>
EvolutionTrace run_windows(const SplitSolver& S, const CVec& psi0, const EvolutionConfig& cfg,
                           Step step) {
  EvolutionTrace tr;
  tr.epsilon = S.epsilon;
  tr.v_max = S.v_max;
  CVec psi = psi0;
  const double n0 = S.w_norm(psi0);
  record(S, tr, 0.0, psi, 0.0, cfg.support_threshold);
  if (cfg.snapshot_every > 0) {
    tr.snapshot_t.push_back(0.0);
    tr.snapshots.push_back(psi);
  }
  const double sign = cfg.T_final >= 0.0 ? 1.0 : -1.0;
  double remaining = std::abs(cfg.T_final);
  const double tiny = 1e-12 * std::max(1.0, remaining);
  double t = 0.0;
  long window = 0;
  while (remaining > tiny) {
    const double tau = sign * std::min(cfg.window_fraction * S.epsilon, remaining);
    double gluing = 0.0;
    psi = step(psi, tau, gluing, tr);
    t += tau;
    remaining -= std::abs(tau);
    ++window;
    record(S, tr, t, psi, gluing, cfg.support_threshold);
    if (n0 > 0.0) {
      const double drift = std::abs(tr.w_norm.back() - n0) / n0;
      if (!std::isfinite(drift) || drift > cfg.norm_tolerance) {
        std::ostringstream msg;
        msg << "w-norm drift " << drift << " at t = " << t << " exceeds "
            << cfg.norm_tolerance << " (instability)";
        throw NumericalError(msg.str());
      }
    }
    if (cfg.snapshot_every > 0 && (window % cfg.snapshot_every == 0 || remaining <= tiny)) {
      tr.snapshot_t.push_back(t);
      tr.snapshots.push_back(psi);
    }
  }
  tr.final_state = psi;
  return tr;
}

}  // namespace

EvolutionTrace evolve_cauchy(const SplitSolver& S, const CVec& psi0, const EvolutionConfig& cfg) {
  check_config(S, psi0, cfg);
  const Propagator inner(S.interior, cfg.scheme);
  const Propagator ref(S.reference, cfg.scheme);
  const CutoffEta eta{S.r_max};
  auto step = [&](const CVec& psi, double tau, double& gluing, EvolutionTrace& tr) {
    const double scale = S.w_norm(psi);
    const double thr = cfg.window_threshold * scale;
    const SplitData parts = split_initial(S.grid, psi, eta);
    double ex_b = 0.0, ex_i = 0.0;
    CVec b = boundary_evolve(S, cfg.scheme, parts.boundary, tau, cfg.dt, thr, cfg.monitor_samples,
                             &ex_b);
    CVec i = interior_evolve(S, inner, parts.interior, tau, cfg.dt, thr, &ex_i);
    if (scale > 0.0)
      tr.max_face_excitation = std::max(tr.max_face_excitation, std::max(ex_b, ex_i) / scale);
    CVec out = b + i;
    const CVec r = S.reference.expand(
        ref.advance(S.reference.reduce(psi), tau, step_count(tau, cfg.dt)));
    gluing = S.w_norm(out - r);
    return out;
  };
  return run_windows(S, psi0, cfg, step);
}

EvolutionTrace reference_evolve(const SplitSolver& S, const CVec& psi0,
                                const EvolutionConfig& cfg) {
  check_config(S, psi0, cfg);
  const Propagator ref(S.reference, cfg.scheme);
  auto step = [&](const CVec& psi, double tau, double& gluing, EvolutionTrace&) {
    gluing = 0.0;
    return CVec(S.reference.expand(
        ref.advance(S.reference.reduce(psi), tau, step_count(tau, cfg.dt))));
  };
  return run_windows(S, psi0, cfg, step);
}

std::pair<double, double> support_interval(const Grid& grid, int f, const CVec& full,
                                           double threshold) {
  double peak = 0.0;
  RVec amp(grid.nodes());
  for (int node = 0; node < grid.nodes(); ++node) {
    amp(node) = full.segment(node * f, f).norm();
    peak = std::max(peak, amp(node));
  }
  const double r0 = grid.r.nodes(0);
  if (peak == 0.0) return {r0, r0};
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int ir = 0; ir < grid.nr(); ++ir)
    for (int j = 0; j < grid.nth(); ++j)
      if (amp(grid.node(ir, j)) > threshold * peak) {
        lo = std::min(lo, grid.r.nodes(ir));
        hi = std::max(hi, grid.r.nodes(ir));
      }
  return {lo, hi};
}

SupportReport support_and_speed_check(const EvolutionTrace& trace, double v_max, double h) {
  SupportReport rep;
  if (trace.t.empty()) return rep;
  rep.worst_excess = -std::numeric_limits<double>::infinity();
  const double lo0 = trace.support_lo.front();
  const double hi0 = trace.support_hi.front();
  const double t0 = trace.t.front();
  for (size_t i = 0; i < trace.t.size(); ++i) {
    const double allowed = v_max * std::abs(trace.t[i] - t0) + 2.0 * h;
    const double excess =
        std::max(trace.support_hi[i] - hi0, lo0 - trace.support_lo[i]) - allowed;
    rep.worst_excess = std::max(rep.worst_excess, excess);
  }
  rep.ok = rep.worst_excess <= 0.0;
  return rep;
}

}  // namespace dirac
