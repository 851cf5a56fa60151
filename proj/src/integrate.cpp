#include "tippetop/integrate.hpp"

#include "tippetop/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace tippetop {

namespace {

// Dormand-Prince 5(4) tableau. b5 is the propagating (5th-order) weight row,
// e = b5 - b4 the embedded error weights (stage 2 never enters either).
constexpr double kC[7] = {0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0};
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0, kA53 = 64448.0 / 6561.0,
                 kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                 kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0,
                 kB5 = -2187.0 / 6784.0, kB6 = 11.0 / 84.0;
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0,
                 kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;

constexpr int kSteadyRun = 10;       // consecutive quiet steps before Converged
constexpr double kEventTol = 1e-9;   // bisection width in t for event times

//! Stages 2..6 and the 5th-order result from (t, y) with k[0] already filled.
//! Returns false if any intermediate state or stage is non-finite.
bool dp_stages(const OdeRhs& rhs, double t, const Eigen::VectorXd& y, double dt,
               std::array<Eigen::VectorXd, 7>& k, Eigen::VectorXd& y5) {
  Eigen::VectorXd ytmp = y + dt * (kA21 * k[0]);
  k[1] = rhs(t + kC[1] * dt, ytmp);
  ytmp = y + dt * (kA31 * k[0] + kA32 * k[1]);
  k[2] = rhs(t + kC[2] * dt, ytmp);
  ytmp = y + dt * (kA41 * k[0] + kA42 * k[1] + kA43 * k[2]);
  k[3] = rhs(t + kC[3] * dt, ytmp);
  ytmp = y + dt * (kA51 * k[0] + kA52 * k[1] + kA53 * k[2] + kA54 * k[3]);
  k[4] = rhs(t + kC[4] * dt, ytmp);
  ytmp = y + dt * (kA61 * k[0] + kA62 * k[1] + kA63 * k[2] + kA64 * k[3] + kA65 * k[4]);
  k[5] = rhs(t + kC[5] * dt, ytmp);
  y5 = y + dt * (kB1 * k[0] + kB3 * k[2] + kB4 * k[3] + kB5 * k[4] + kB6 * k[5]);
  return y5.allFinite();
}

double error_norm(const Eigen::VectorXd& errv, const Eigen::VectorXd& y0,
                  const Eigen::VectorXd& y1, double atol, double rtol) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < errv.size(); ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = errv[i] / sc;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(errv.size()));
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(rtol > 0.0)) throw std::invalid_argument("IntegratorConfig.rtol must be positive");
  if (!(atol > 0.0)) throw std::invalid_argument("IntegratorConfig.atol must be positive");
  if (!(dt_init > 0.0)) throw std::invalid_argument("IntegratorConfig.dt_init must be positive");
  if (!(dt_min > 0.0)) throw std::invalid_argument("IntegratorConfig.dt_min must be positive");
  if (!(dt_min <= dt_max))
    throw std::invalid_argument("IntegratorConfig.dt_min must not exceed dt_max");
  if (!(t_end >= 0.0)) throw std::invalid_argument("IntegratorConfig.t_end must be nonnegative");
  if (stride < 1) throw std::invalid_argument("IntegratorConfig.stride must be >= 1");
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::ReachedTEnd: return "reached_t_end";
    case StopReason::Converged: return "converged";
    case StopReason::StepUnderflow: return "step_underflow";
    case StopReason::Halted: return "halted";
  }
  return "unknown";
}

Eigen::VectorXd dp_step(const OdeRhs& rhs, double t, const Eigen::VectorXd& y, double dt) {
  std::array<Eigen::VectorXd, 7> k;
  k[0] = rhs(t, y);
  Eigen::VectorXd y5;
  dp_stages(rhs, t, y, dt, k, y5);
  return y5;
}

Eigen::VectorXd rk4_step(const OdeRhs& rhs, double t, const Eigen::VectorXd& y, double dt) {
  const Eigen::VectorXd k1 = rhs(t, y);
  const Eigen::VectorXd k2 = rhs(t + 0.5 * dt, y + 0.5 * dt * k1);
  const Eigen::VectorXd k3 = rhs(t + 0.5 * dt, y + 0.5 * dt * k2);
  const Eigen::VectorXd k4 = rhs(t + dt, y + dt * k3);
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

OdeTrajectory integrate_rk4(const OdeRhs& rhs, double t0, Eigen::VectorXd y0, double dt,
                            double t_end, int stride) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_rk4: dt must be positive");
  if (stride < 1) throw std::invalid_argument("integrate_rk4: stride must be >= 1");
  OdeTrajectory traj;
  traj.t.push_back(t0);
  traj.y.push_back(y0);
  double t = t0;
  long since = 0;
  while (t < t_end) {
    const double h = std::min(dt, t_end - t);
    y0 = rk4_step(rhs, t, y0, h);
    t = (t + dt >= t_end) ? t_end : t + h;
    ++traj.accepted;
    if (++since >= stride) {
      traj.t.push_back(t);
      traj.y.push_back(y0);
      since = 0;
    }
  }
  if (traj.t.back() != t) {
    traj.t.push_back(t);
    traj.y.push_back(y0);
  }
  traj.t_final = t;
  traj.y_final = std::move(y0);
  return traj;
}

OdeTrajectory integrate_adaptive(const OdeRhs& rhs, double t0, Eigen::VectorXd y0,
                                 const IntegratorConfig& cfg, const OdeOptions& opts) {
  cfg.validate();
  const bool timed = !opts.t_eval.empty();
  if (timed && !std::is_sorted(opts.t_eval.begin(), opts.t_eval.end()))
    throw std::invalid_argument("integrate_adaptive: t_eval must be sorted");

  OdeTrajectory traj;
  std::size_t eval_idx = 0;
  auto record = [&traj](double t, const Eigen::VectorXd& y) {
    traj.t.push_back(t);
    traj.y.push_back(y);
  };
  auto finalize = [&](double t, Eigen::VectorXd&& y, StopReason why) {
    if (!timed && (traj.t.empty() || traj.t.back() != t)) record(t, y);
    traj.t_final = t;
    traj.y_final = std::move(y);
    traj.stop = why;
    return std::move(traj);
  };

  double t = t0;
  if (timed) {
    while (eval_idx < opts.t_eval.size() && opts.t_eval[eval_idx] <= t) {
      record(t, y0);
      ++eval_idx;
    }
  } else {
    record(t, y0);
  }

  std::array<Eigen::VectorXd, 7> k;
  k[0] = rhs(t, y0);
  if (!k[0].allFinite()) throw NumericalError("integrate: derivative not finite at t0");

  double e_prev = 0.0;
  if (opts.event) e_prev = opts.event(t, y0);

  double dt = std::clamp(cfg.dt_init, cfg.dt_min, cfg.dt_max);
  long since = 0;
  int quiet = 0;
  bool just_rejected = false;
  Eigen::VectorXd y5, errv;

  while (t < cfg.t_end) {
    double target = cfg.t_end;
    if (timed && eval_idx < opts.t_eval.size())
      target = std::min(target, opts.t_eval[eval_idx]);
    const bool capped = (t + dt >= target);
    const double h = capped ? target - t : dt;

    bool ok = dp_stages(rhs, t, y0, h, k, y5);
    double err = std::numeric_limits<double>::infinity();
    if (ok) {
      const double t_new = capped ? target : t + h;
      // project before the FSAL stage so the reused derivative matches the
      // state actually propagated
      if (opts.postprocess) opts.postprocess(y5);
      k[6] = rhs(t_new, y5);
      if (k[6].allFinite()) {
        errv = h * (kE1 * k[0] + kE3 * k[2] + kE4 * k[3] + kE5 * k[4] + kE6 * k[5] + kE7 * k[6]);
        if (errv.allFinite()) err = error_norm(errv, y0, y5, cfg.atol, cfg.rtol);
      }
    }

    if (!(err <= 1.0)) {  // rejected (err may be inf/NaN)
      ++traj.rejected;
      just_rejected = true;
      const double fac =
          std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
      dt *= fac;
      if (dt < cfg.dt_min) return finalize(t, std::move(y0), StopReason::StepUnderflow);
      continue;
    }

    const double t_new = capped ? target : t + h;
    ++traj.accepted;

    if (opts.event) {
      const double e_new = opts.event(t_new, y5);
      if (std::isfinite(e_prev) && std::isfinite(e_new) && e_prev != 0.0 &&
          ((e_prev < 0.0) != (e_new < 0.0))) {
        double lo = 0.0, hi = h;
        for (int it = 0; it < 200 && hi - lo > kEventTol; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double em = opts.event(t + mid, dp_step(rhs, t, y0, mid));
          if (!std::isfinite(em)) break;
          if ((em < 0.0) == (e_prev < 0.0))
            lo = mid;
          else
            hi = mid;
        }
        traj.event_times.push_back(t + 0.5 * (lo + hi));
      }
      e_prev = e_new;
    }

    t = t_new;
    y0.swap(y5);
    k[0].swap(k[6]);  // FSAL

    if (timed) {
      while (eval_idx < opts.t_eval.size() && opts.t_eval[eval_idx] <= t) {
        record(opts.t_eval[eval_idx], y0);
        ++eval_idx;
      }
    } else if (++since >= cfg.stride) {
      record(t, y0);
      since = 0;
    }

    if (cfg.steady_state_eps > 0.0) {
      quiet = (k[0].lpNorm<Eigen::Infinity>() < cfg.steady_state_eps) ? quiet + 1 : 0;
      if (quiet >= kSteadyRun) return finalize(t, std::move(y0), StopReason::Converged);
    }
    if (opts.halt && opts.halt(t, y0)) return finalize(t, std::move(y0), StopReason::Halted);

    double fac = (err == 0.0) ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    if (just_rejected) fac = std::min(fac, 1.0);
    just_rejected = false;
    dt = std::clamp(dt * fac, cfg.dt_min, cfg.dt_max);
  }

  return finalize(t, std::move(y0), StopReason::ReachedTEnd);
}

namespace {

Eigen::VectorXd pack_full(const FullState& s) {
  const bool pose = s.pose.has_value();
  Eigen::VectorXd y(pose ? 17 : 9);
  y.segment<3>(0) = s.v;
  y.segment<3>(3) = s.omega;
  y.segment<3>(6) = s.gamma;
  if (pose) {
    y.segment<3>(9) = s.pose->alpha;
    y.segment<3>(12) = s.pose->beta;
    y[15] = s.pose->x;
    y[16] = s.pose->y;
  }
  return y;
}

FullState unpack_full(const Eigen::VectorXd& y) {
  FullState s;
  s.v = y.segment<3>(0);
  s.omega = y.segment<3>(3);
  s.gamma = y.segment<3>(6);
  if (y.size() == 17) {
    Pose pose;
    pose.alpha = y.segment<3>(9);
    pose.beta = y.segment<3>(12);
    pose.x = y[15];
    pose.y = y[16];
    s.pose = pose;
  }
  return s;
}

void normalize_segment(Eigen::VectorXd& y, int start) {
  const double n = y.segment<3>(start).norm();
  if (n > 0.0) y.segment<3>(start) /= n;
}

}  // namespace

FullTrajectory integrate_full(const FullState& y0, const FrictionModel& model,
                              const BodyParams& p, const IntegratorConfig& cfg,
                              const std::vector<double>& t_eval) {
  p.validate();
  const OdeRhs rhs = [&model, &p](double, const Eigen::VectorXd& yv) -> Eigen::VectorXd {
    try {
      return pack_full(rhs_general(unpack_full(yv), model, p).dot);
    } catch (const NumericalError&) {
      // trial state hit a singular configuration: poison the step so the
      // controller rejects and shrinks (persistent failure -> StepUnderflow)
      return Eigen::VectorXd::Constant(yv.size(), std::numeric_limits<double>::quiet_NaN());
    }
  };
  OdeOptions opts;
  if (cfg.renormalize_gamma)
    opts.postprocess = [](Eigen::VectorXd& yv) { normalize_segment(yv, 6); };
  opts.t_eval = t_eval;

  OdeTrajectory raw = integrate_adaptive(rhs, 0.0, pack_full(y0), cfg, opts);

  FullTrajectory out;
  out.stop = raw.stop;
  out.accepted = raw.accepted;
  out.rejected = raw.rejected;
  out.t = std::move(raw.t);
  out.states.reserve(out.t.size());
  out.N.reserve(out.t.size());
  for (const auto& yv : raw.y) {
    FullState s = unpack_full(yv);
    const double N = resolve_friction(model, s, p).N;
    out.N.push_back(N);
    out.min_N = std::min(out.min_N, N);
    out.states.push_back(std::move(s));
  }
  return out;
}

namespace {

Eigen::VectorXd pack_decoupled(const Vec3& omega, const Vec3& gamma) {
  Eigen::VectorXd y(6);
  y.segment<3>(0) = omega;
  y.segment<3>(3) = gamma;
  return y;
}

OdeRhs decoupled_rhs(const BodyParams& p, bool spinning) {
  return [&p, spinning](double, const Eigen::VectorXd& yv) {
    const Vec3 w = yv.segment<3>(0), g = yv.segment<3>(3);
    const auto [dw, dg] = spinning ? rhs_decoupled_spinning(w, g, p) : rhs_decoupled(w, g, p);
    return pack_decoupled(dw, dg);
  };
}

}  // namespace

DecoupledTrajectory integrate_decoupled(const Vec3& omega0, const Vec3& gamma0,
                                        const BodyParams& p, const IntegratorConfig& cfg,
                                        bool spinning, const std::vector<double>& t_eval) {
  p.validate();
  OdeOptions opts;
  if (cfg.renormalize_gamma)
    opts.postprocess = [](Eigen::VectorXd& yv) { normalize_segment(yv, 3); };
  opts.t_eval = t_eval;

  OdeTrajectory raw =
      integrate_adaptive(decoupled_rhs(p, spinning), 0.0, pack_decoupled(omega0, gamma0), cfg,
                         opts);

  DecoupledTrajectory out;
  out.stop = raw.stop;
  out.accepted = raw.accepted;
  out.rejected = raw.rejected;
  out.t = std::move(raw.t);
  out.omega.reserve(out.t.size());
  out.gamma.reserve(out.t.size());
  for (const auto& yv : raw.y) {
    out.omega.emplace_back(yv.segment<3>(0));
    out.gamma.emplace_back(yv.segment<3>(3));
  }
  return out;
}

namespace {

//! Chart projection tolerant of the poles themselves (K2 -> 0, phi from the
//! horizontal part of gamma); used when reporting full-system fallback states.
ReducedState project_reduced(const Vec3& w, const Vec3& g, const BodyParams& p) {
  ReducedState s;
  s.gamma3 = g[2];
  s.K1 = p.i3 * w[2];
  s.C = p.i1 * (w[0] * g[0] + w[1] * g[1]) + p.i3 * w[2] * g[2];
  const double q = 1.0 - g[2] * g[2];
  s.K2 = (q > 1e-14) ? (g[0] * w[1] - g[1] * w[0]) / chart_k(g[2], p) : 0.0;
  s.phi = std::atan2(g[1], g[0]);
  return s;
}

}  // namespace

ReducedTrajectory integrate_reduced(const ReducedState& y0, const BodyParams& p,
                                    const IntegratorConfig& cfg, bool spinning,
                                    std::optional<double> event_C_threshold,
                                    const std::vector<double>& t_eval) {
  p.validate();
  const int n = spinning ? 5 : 4;  // [gamma3, K1, K2 (, C), phi]
  const double C_fixed = y0.C;

  const auto make_state = [&, n](const Eigen::VectorXd& yv) {
    ReducedState s;
    s.gamma3 = yv[0];
    s.K1 = yv[1];
    s.K2 = yv[2];
    s.C = spinning ? yv[3] : C_fixed;
    s.phi = yv[n - 1];
    return s;
  };
  const OdeRhs rhs = [&, n](double, const Eigen::VectorXd& yv) {
    Eigen::VectorXd dy(n);
    try {
      const ReducedState s = make_state(yv);
      if (spinning) {
        const auto d = rhs_reduced_spinning(s, p);
        dy[0] = d[0];
        dy[1] = d[1];
        dy[2] = d[2];
        dy[3] = d[3];
      } else {
        const auto d = rhs_reduced(s, p);
        dy[0] = d[0];
        dy[1] = d[1];
        dy[2] = d[2];
      }
      dy[n - 1] = rhs_phi(s, p);
    } catch (const ChartError&) {
      // trial state off the chart: poison the step so it is rejected
      dy.setConstant(std::numeric_limits<double>::quiet_NaN());
    }
    return dy;
  };

  ReducedTrajectory out;
  double t_sw = 0.0;
  double phi_sw = y0.phi;
  Vec3 w_sw, g_sw;

  if (std::abs(y0.gamma3) > 1.0 - kPoleSwitch) {
    // starts inside the switch band: go straight to the full system
    std::tie(w_sw, g_sw) = from_reduced(y0, p);
    out.fallback_used = true;
  } else {
    Eigen::VectorXd yv0(n);
    yv0[0] = y0.gamma3;
    yv0[1] = y0.K1;
    yv0[2] = y0.K2;
    if (spinning) yv0[3] = y0.C;
    yv0[n - 1] = y0.phi;

    OdeOptions opts;
    opts.halt = [](double, const Eigen::VectorXd& yv) {
      return std::abs(yv[0]) > 1.0 - kPoleSwitch;
    };
    if (event_C_threshold) {
      const double thr = *event_C_threshold;
      opts.event = [thr, spinning, C_fixed](double, const Eigen::VectorXd& yv) {
        return std::abs(spinning ? yv[3] : C_fixed) - thr;
      };
    }
    opts.t_eval = t_eval;

    OdeTrajectory raw = integrate_adaptive(rhs, 0.0, std::move(yv0), cfg, opts);
    out.accepted = raw.accepted;
    out.rejected = raw.rejected;
    out.event_times = std::move(raw.event_times);
    out.t = std::move(raw.t);
    out.states.reserve(out.t.size());
    for (const auto& yv : raw.y) {
      out.states.push_back(make_state(yv));
      const auto [w, g] = from_reduced(out.states.back(), p);
      out.omega.push_back(w);
      out.gamma.push_back(g);
    }

    if (raw.stop != StopReason::Halted) {
      out.stop = raw.stop;
      return out;
    }
    // pole approach: accepted states are strictly inside the chart, so the
    // inverse is well defined at the switch state
    out.fallback_used = true;
    t_sw = raw.t_final;
    const ReducedState sw = make_state(raw.y_final);
    phi_sw = sw.phi;
    std::tie(w_sw, g_sw) = from_reduced(sw, p);
  }

  // continue in (omega, gamma); chart coordinates are reported by projection,
  // with phi unwrapped against the paper's reversed azimuth orientation
  IntegratorConfig cfg2 = cfg;
  OdeOptions opts2;
  if (cfg.renormalize_gamma)
    opts2.postprocess = [](Eigen::VectorXd& yv) { normalize_segment(yv, 3); };
  if (event_C_threshold) {
    const double thr = *event_C_threshold;
    opts2.event = [thr, &p](double, const Eigen::VectorXd& yv) {
      const Vec3 w = yv.segment<3>(0), g = yv.segment<3>(3);
      return std::abs(p.i1 * (w[0] * g[0] + w[1] * g[1]) + p.i3 * w[2] * g[2]) - thr;
    };
  }
  if (!t_eval.empty()) {
    opts2.t_eval.assign(t_eval.begin() + static_cast<std::ptrdiff_t>(out.t.size()),
                        t_eval.end());
    // all sample times consumed on the chart: keep the run timed so the tail
    // is integrated (stop reason, events) without recording every step
    if (opts2.t_eval.empty())
      opts2.t_eval.push_back(std::numeric_limits<double>::infinity());
  }

  OdeTrajectory raw2 =
      integrate_adaptive(decoupled_rhs(p, spinning), t_sw, pack_decoupled(w_sw, g_sw), cfg2,
                         opts2);
  out.accepted += raw2.accepted;
  out.rejected += raw2.rejected;
  out.event_times.insert(out.event_times.end(), raw2.event_times.begin(),
                         raw2.event_times.end());
  out.stop = raw2.stop;

  constexpr double pi = std::numbers::pi;
  double phi_prev_raw = -std::atan2(g_sw[1], g_sw[0]);
  double offset = phi_sw - phi_prev_raw;
  for (std::size_t i = 0; i < raw2.t.size(); ++i) {
    if (!out.t.empty() && raw2.t[i] == out.t.back()) continue;  // duplicate switch record
    const Vec3 w = raw2.y[i].segment<3>(0), g = raw2.y[i].segment<3>(3);
    ReducedState s = project_reduced(w, g, p);
    const double phi_raw = -std::atan2(g[1], g[0]);
    if (phi_raw - phi_prev_raw > pi) offset -= 2.0 * pi;
    if (phi_raw - phi_prev_raw < -pi) offset += 2.0 * pi;
    phi_prev_raw = phi_raw;
    s.phi = phi_raw + offset;
    out.t.push_back(raw2.t[i]);
    out.states.push_back(s);
    out.omega.push_back(w);
    out.gamma.push_back(g);
  }
  return out;
}

}  // namespace tippetop
