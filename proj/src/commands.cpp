#include "tippetop/commands.hpp"

#include "tippetop/dynamics.hpp"
#include "tippetop/equilibria.hpp"
#include "tippetop/integrals.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <thread>

namespace tippetop {

namespace {

using nlohmann::ordered_json;

//! Shortest round-trippable decimal form; output must never carry NaN/inf.
std::string fmt(double x) {
  if (!std::isfinite(x)) throw NumericalError("non-finite value in output");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double fin(double x) {
  if (!std::isfinite(x)) throw NumericalError("non-finite value in output");
  return x;
}

ordered_json json_vec(const Vec3& v) {
  return ordered_json::array({fin(v[0]), fin(v[1]), fin(v[2])});
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write output file: " + path.string());
  return out;
}

void write_json(const std::filesystem::path& path, const ordered_json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << "\n";
}

//! Index-ordered parallel loop; results must be stored by index so output
//! assembly is deterministic regardless of completion order.
void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Stable: return "stable";
    case Verdict::Unstable: return "unstable";
    case Verdict::Marginal: return "marginal";
  }
  return "unknown";
}

std::string family_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::SigmaU: return "sigma_u";
    case FamilyKind::SigmaL: return "sigma_l";
    case FamilyKind::Sigma0: return "sigma_0";
  }
  return "unknown";
}

std::string integral_name(Integral i) {
  switch (i) {
    case Integral::Jellett: return "jellett";
    case Integral::Lagrange: return "lagrange";
    case Integral::Area: return "area";
  }
  return "unknown";
}

}  // namespace

void cmd_simulate(const Scenario& sc, const CommandOptions& opt) {
  if (!sc.model) throw ValidationError("simulate: scenario.model is required");
  if (!sc.initial_full && !sc.initial_reduced)
    throw ValidationError("simulate: scenario.initial is required");
  std::filesystem::create_directories(opt.out);

  const BodyParams& p = sc.params;
  std::vector<double> times;
  std::vector<FullState> states;
  StopReason stop = StopReason::ReachedTEnd;
  long accepted = 0, rejected = 0;
  std::optional<double> min_N;
  std::optional<bool> fallback_used;

  if (sc.initial_full) {
    FullTrajectory traj = integrate_full(*sc.initial_full, *sc.model, p, sc.integrator);
    times = std::move(traj.t);
    states = std::move(traj.states);
    stop = traj.stop;
    accepted = traj.accepted;
    rejected = traj.rejected;
    min_N = traj.min_N;
  } else {
    bool spinning = sc.model->kind == FrictionKind::SpinningResistance;
    for (const auto& part : sc.model->parts)
      spinning = spinning || part.kind == FrictionKind::SpinningResistance;
    ReducedTrajectory traj = integrate_reduced(*sc.initial_reduced, p, sc.integrator, spinning);
    times = std::move(traj.t);
    states.reserve(times.size());
    const Vec3 av = axis_offset(p);
    for (std::size_t i = 0; i < times.size(); ++i) {
      FullState s;
      s.omega = traj.omega[i];
      s.gamma = traj.gamma[i];
      // zero-horizontal-momentum representative: the constraint fixes only
      // the vertical part of v
      const Vec3 u = s.gamma.cross(av);
      s.v = -(u.dot(s.omega)) * s.gamma;
      states.push_back(std::move(s));
    }
    stop = traj.stop;
    accepted = traj.accepted;
    rejected = traj.rejected;
    fallback_used = traj.fallback_used;
  }

  auto csv = open_out(opt.out / "trajectory.csv");
  csv << "t,gamma1,gamma2,gamma3,omega1,omega2,omega3,E,F,G,C,res_constraint,res_norm\n";

  std::vector<IntegralValues> ivs;
  ivs.reserve(states.size());
  double res_c_max = 0.0, res_u_max = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const FullState& s = states[i];
    const IntegralValues iv = evaluate_integrals(s, *sc.model, p);
    const ConstraintResiduals res = constraint_residuals(s, p);
    res_c_max = std::max(res_c_max, std::abs(res.contact));
    res_u_max = std::max(res_u_max, std::abs(res.unit));
    csv << fmt(times[i]) << ',' << fmt(s.gamma[0]) << ',' << fmt(s.gamma[1]) << ','
        << fmt(s.gamma[2]) << ',' << fmt(s.omega[0]) << ',' << fmt(s.omega[1]) << ','
        << fmt(s.omega[2]) << ',' << fmt(iv.E) << ',' << fmt(iv.F) << ',' << fmt(iv.G) << ','
        << fmt(iv.C) << ',' << fmt(res.contact) << ',' << fmt(res.unit) << '\n';
    ivs.push_back(iv);
  }

  double dE = 0.0, dF = 0.0, dG = 0.0, dC = 0.0, e_step_up = 0.0;
  for (std::size_t i = 0; i < ivs.size(); ++i) {
    dE = std::max(dE, std::abs(ivs[i].E - ivs[0].E));
    dF = std::max(dF, std::abs(ivs[i].F - ivs[0].F));
    dG = std::max(dG, std::abs(ivs[i].G - ivs[0].G));
    dC = std::max(dC, std::abs(ivs[i].C - ivs[0].C));
    if (i > 0) e_step_up = std::max(e_step_up, ivs[i].E - ivs[i - 1].E);
  }

  ordered_json summary;
  summary["command"] = "simulate";
  summary["model"] = friction_kind_name(sc.model->kind);
  summary["stop"] = to_string(stop);
  summary["converged"] = (stop == StopReason::Converged);
  summary["t_final"] = fin(times.back());
  summary["records"] = times.size();
  summary["accepted"] = accepted;
  summary["rejected"] = rejected;
  const FullState& fs = states.back();
  summary["final"] = {{"gamma", json_vec(fs.gamma)},
                      {"omega", json_vec(fs.omega)},
                      {"v", json_vec(fs.v)},
                      {"E", fin(ivs.back().E)},
                      {"F", fin(ivs.back().F)},
                      {"G", fin(ivs.back().G)},
                      {"C", fin(ivs.back().C)}};
  summary["drift"] = {{"E", fin(dE)},
                      {"F", fin(dF)},
                      {"G", fin(dG)},
                      {"C", fin(dC)},
                      {"E_step_increase_max", fin(e_step_up)},
                      {"res_constraint_max", fin(res_c_max)},
                      {"res_norm_max", fin(res_u_max)}};
  if (min_N) summary["min_N"] = fin(*min_N);
  if (fallback_used) summary["fallback_used"] = *fallback_used;
  write_json(opt.out / "summary.json", summary);

  std::cout << "simulate: " << times.size() << " records, stop=" << to_string(stop) << " -> "
            << (opt.out / "trajectory.csv").string() << "\n";
}

void cmd_stability_scan(const Scenario& sc, const CommandOptions& opt) {
  if (!sc.scan) throw ValidationError("stability-scan: scenario.scan is required");
  std::filesystem::create_directories(opt.out);
  const BodyParams& p = sc.params;

  struct Job {
    FamilyKind kind;
    double parameter;
  };
  std::vector<Job> jobs;
  if (sc.scan->C) {
    const auto pts = sc.scan->C->points();
    for (const double C : pts) jobs.push_back({FamilyKind::SigmaU, C});
    for (const double C : pts) jobs.push_back({FamilyKind::SigmaL, C});
  }
  int sigma0_skipped = 0;
  if (sc.scan->c1) {
    if (p.i1 == p.i3) {
      sigma0_skipped = sc.scan->c1->count;  // tilted family absent
    } else {
      const double c0 = sigma0_min_spin(p);
      for (const double c1 : sc.scan->c1->points()) {
        if (std::abs(c1) <= c0 * (1.0 + 1e-12)) {
          ++sigma0_skipped;
          continue;
        }
        jobs.push_back({FamilyKind::Sigma0, c1});
      }
    }
  }

  std::vector<std::string> rows(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), opt.threads, [&](int i) {
    const Job& job = jobs[static_cast<std::size_t>(i)];
    StabilityReport rep;
    double gamma3, C;
    if (job.kind == FamilyKind::Sigma0) {
      rep = sigma0_characteristic(job.parameter, p);
      const Sigma0Coords sc0 = sigma0_coords(job.parameter, p);
      gamma3 = sc0.gamma3;
      C = sc0.C;
    } else {
      rep = hurwitz_vertical(job.kind, job.parameter, p);
      gamma3 = (job.kind == FamilyKind::SigmaU) ? 1.0 : -1.0;
      C = job.parameter;
    }
    std::string row = family_name(job.kind) + ',' + fmt(job.parameter) + ',' + fmt(gamma3) +
                      ',' + fmt(C) + ',' + verdict_name(rep.verdict) + ',' + rep.condition;
    for (std::size_t d = 0; d < 4; ++d)
      row += ',' + fmt(d < rep.conditions.size() ? rep.conditions[d] : 0.0);
    rows[static_cast<std::size_t>(i)] = std::move(row);
  });

  auto csv = open_out(opt.out / "scan.csv");
  csv << "family,parameter,gamma3,C,verdict,condition,det1,det2,det3,det4\n";
  for (const auto& row : rows) csv << row << '\n';

  ordered_json summary;
  summary["command"] = "stability-scan";
  summary["rows"] = rows.size();
  summary["sigma0_skipped_outside_domain"] = sigma0_skipped;
  write_json(opt.out / "summary.json", summary);

  std::cout << "stability-scan: " << rows.size() << " rows -> "
            << (opt.out / "scan.csv").string() << "\n";
}

void cmd_smale(const Scenario& sc, const CommandOptions& opt) {
  if (!sc.smale) throw ValidationError("smale: scenario.smale is required");
  std::filesystem::create_directories(opt.out);
  const BodyParams& p = sc.params;

  struct Job {
    FamilyKind kind;
    double parameter;
  };
  std::vector<Job> jobs;
  const auto c_pts = sc.smale->C.points();
  for (const double C : c_pts) jobs.push_back({FamilyKind::SigmaU, C});
  for (const double C : c_pts) jobs.push_back({FamilyKind::SigmaL, C});
  int sigma0_skipped = 0;
  if (sc.smale->c1) {
    if (p.i1 == p.i3) {
      sigma0_skipped = sc.smale->c1->count;
    } else {
      const double c0 = sigma0_min_spin(p);
      for (const double c1 : sc.smale->c1->points()) {
        if (std::abs(c1) <= c0 * (1.0 + 1e-12)) {
          ++sigma0_skipped;
          continue;
        }
        jobs.push_back({FamilyKind::Sigma0, c1});
      }
    }
  }

  std::vector<std::string> rows(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), opt.threads, [&](int i) {
    const Job& job = jobs[static_cast<std::size_t>(i)];
    double C;
    Verdict verdict;
    if (job.kind == FamilyKind::Sigma0) {
      C = sigma0_coords(job.parameter, p).C;
      verdict = sigma0_characteristic(job.parameter, p).verdict;
    } else {
      C = job.parameter;
      verdict = hurwitz_vertical(job.kind, job.parameter, p).verdict;
    }
    const double E = family_energy(job.kind, job.parameter, p);
    rows[static_cast<std::size_t>(i)] = family_name(job.kind) + ',' + fmt(job.parameter) + ',' +
                                        fmt(C) + ',' + fmt(C * C) + ',' + fmt(E) + ',' +
                                        verdict_name(verdict);
  });

  auto csv = open_out(opt.out / "smale.csv");
  csv << "family,parameter,C,C_squared,E,verdict\n";
  for (const auto& row : rows) csv << row << '\n';

  ordered_json summary;
  summary["command"] = "smale";
  summary["rows"] = rows.size();
  summary["sigma0_skipped_outside_domain"] = sigma0_skipped;
  if (p.a > 0.0) {
    if (const auto cstar = critical_C(p)) {
      summary["C_star"] = fin(*cstar);
      summary["C_star_squared"] = fin(*cstar * *cstar);
    }
  }
  write_json(opt.out / "summary.json", summary);

  std::cout << "smale: " << rows.size() << " rows -> " << (opt.out / "smale.csv").string()
            << "\n";
}

void cmd_phase_portrait(const Scenario& sc, const CommandOptions& opt) {
  if (!sc.portrait) throw ValidationError("phase-portrait: scenario.portrait is required");
  std::filesystem::create_directories(opt.out);
  const BodyParams& p = sc.params;
  const PortraitSpec& spec = *sc.portrait;

  const bool spinning = p.mu_s > 0.0;
  std::optional<double> threshold;
  if (spinning && p.a > 0.0) threshold = critical_C(p);

  const auto k1_pts = spec.K1.points();
  const auto c_pts = spec.C.points();
  struct Start {
    double K1, C;
  };
  std::vector<Start> starts;
  for (const double K1 : k1_pts)
    for (const double C : c_pts) starts.push_back({K1, C});

  const int n = static_cast<int>(starts.size());
  std::vector<std::string> files(starts.size());
  std::vector<ordered_json> entries(starts.size());
  parallel_for(n, opt.threads, [&](int i) {
    const auto idx = static_cast<std::size_t>(i);
    ReducedState rs;
    rs.gamma3 = spec.gamma3_0;
    rs.K1 = starts[idx].K1;
    rs.K2 = spec.K2_0;
    rs.C = starts[idx].C;
    const ReducedTrajectory traj = integrate_reduced(rs, p, sc.integrator, spinning, threshold);

    std::string body = "t,K1,C,gamma3\n";
    for (std::size_t k = 0; k < traj.t.size(); ++k) {
      body += fmt(traj.t[k]) + ',' + fmt(traj.states[k].K1) + ',' + fmt(traj.states[k].C) +
              ',' + fmt(traj.states[k].gamma3) + '\n';
    }
    files[idx] = std::move(body);

    ordered_json e;
    e["index"] = i;
    e["K1_0"] = fin(starts[idx].K1);
    e["C_0"] = fin(starts[idx].C);
    e["stop"] = to_string(traj.stop);
    e["t_final"] = fin(traj.t.back());
    e["final"] = {{"gamma3", fin(traj.states.back().gamma3)},
                  {"K1", fin(traj.states.back().K1)},
                  {"C", fin(traj.states.back().C)}};
    e["fallback_used"] = traj.fallback_used;
    auto crossings = ordered_json::array();
    for (const double tc : traj.event_times) crossings.push_back(fin(tc));
    e["C_star_crossings"] = std::move(crossings);
    entries[idx] = std::move(e);
  });

  for (std::size_t i = 0; i < files.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "traj_%03d.csv", static_cast<int>(i));
    open_out(opt.out / name) << files[i];
  }

  int curve_rows = 0;
  if (spec.c1_curve && p.i1 != p.i3) {
    const double c0 = sigma0_min_spin(p);
    auto csv = open_out(opt.out / "sigma0_curve.csv");
    csv << "c1,K1,C\n";
    for (const double c1 : spec.c1_curve->points()) {
      if (std::abs(c1) <= c0 * (1.0 + 1e-12)) continue;
      const Sigma0Coords sc0 = sigma0_coords(c1, p);
      csv << fmt(c1) << ',' << fmt(sc0.K1) << ',' << fmt(sc0.C) << '\n';
      ++curve_rows;
    }
  }

  ordered_json summary;
  summary["command"] = "phase-portrait";
  summary["trajectories"] = n;
  summary["spinning"] = spinning;
  if (threshold) summary["C_star"] = fin(*threshold);
  summary["sigma0_curve_rows"] = curve_rows;
  summary["runs"] = ordered_json::array();
  for (auto& e : entries) summary["runs"].push_back(std::move(e));
  write_json(opt.out / "summary.json", summary);

  std::cout << "phase-portrait: " << n << " trajectories -> " << opt.out.string() << "\n";
}

void cmd_conservation_check(const Scenario& sc, const CommandOptions& opt) {
  std::filesystem::create_directories(opt.out);
  const BodyParams& p = sc.params;
  if (!(p.mu > 0.0 && p.mu_r > 0.0 && p.mu_s > 0.0))
    throw ValidationError(
        "conservation-check: params.mu, params.mu_r, params.mu_s must all be positive so "
        "every variant actually dissipates");

  const std::vector<FrictionModel> roster = {
      FrictionModel::smooth(),
      FrictionModel::viscous_sliding(),
      FrictionModel::dry_sliding(),
      FrictionModel::contact_torque(),
      FrictionModel::anisotropic_axis(),
      FrictionModel::rolling_resistance(),
      FrictionModel::spinning_resistance(),
      FrictionModel::composite(
          {FrictionModel::rolling_resistance(), FrictionModel::spinning_resistance()}),
  };
  const std::array<Integral, 3> all_integrals = {Integral::Jellett, Integral::Lagrange,
                                                 Integral::Area};

  IntegratorConfig cfg = sc.integrator;
  cfg.t_end = sc.check.t_end;
  cfg.steady_state_eps = 0.0;  // drift must be observed over the full horizon

  struct Result {
    std::string name;
    std::set<Integral> claimed, observed;
    std::map<Integral, double> drift;
    bool match = false;
  };
  std::vector<Result> results(roster.size());

  parallel_for(static_cast<int>(roster.size()), opt.threads, [&](int im) {
    const auto idx = static_cast<std::size_t>(im);
    const FrictionModel& model = roster[idx];
    Result r;
    r.name = friction_kind_name(model.kind);
    r.claimed = conservation_signature(model, p, 40, opt.seed);
    for (const Integral Iq : all_integrals) r.drift[Iq] = 0.0;

    for (int is = 0; is < sc.check.states; ++is) {
      std::mt19937_64 rng(opt.seed ^
                          (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(
                                                       im * sc.check.states + is + 1)));
      const FullState s0 = random_admissible_state(rng, p);
      const FullTrajectory traj = integrate_full(s0, model, p, cfg);
      const IntegralValues iv0 = evaluate_integrals(traj.states.front(), model, p);
      for (const FullState& s : traj.states) {
        const IntegralValues iv = evaluate_integrals(s, model, p);
        r.drift[Integral::Jellett] =
            std::max(r.drift[Integral::Jellett], std::abs(iv.G - iv0.G));
        r.drift[Integral::Lagrange] =
            std::max(r.drift[Integral::Lagrange], std::abs(iv.F - iv0.F));
        r.drift[Integral::Area] = std::max(r.drift[Integral::Area], std::abs(iv.C - iv0.C));
      }
    }
    for (const Integral Iq : all_integrals)
      if (r.drift[Iq] <= sc.check.drift_tol) r.observed.insert(Iq);
    r.match = (r.observed == r.claimed);
    for (const Integral Iq : all_integrals)
      if (!r.claimed.count(Iq) && r.drift[Iq] < sc.check.vary_tol) r.match = false;
    results[idx] = std::move(r);
  });

  ordered_json report;
  report["command"] = "conservation-check";
  report["seed"] = opt.seed;
  report["states_per_model"] = sc.check.states;
  report["t_end"] = fin(sc.check.t_end);
  report["drift_tol"] = fin(sc.check.drift_tol);
  report["vary_tol"] = fin(sc.check.vary_tol);
  report["models"] = ordered_json::array();
  bool all_match = true;
  std::string failed;
  for (const Result& r : results) {
    ordered_json names_claimed = ordered_json::array(), names_observed = ordered_json::array();
    for (const Integral Iq : r.claimed) names_claimed.push_back(integral_name(Iq));
    for (const Integral Iq : r.observed) names_observed.push_back(integral_name(Iq));
    ordered_json drifts;
    for (const auto& [Iq, d] : r.drift) drifts[integral_name(Iq)] = fin(d);
    report["models"].push_back({{"model", r.name},
                                {"claimed", names_claimed},
                                {"observed", names_observed},
                                {"max_drift", drifts},
                                {"match", r.match}});
    std::cout << "conservation-check: " << r.name << " claimed={";
    for (const Integral Iq : r.claimed) std::cout << ' ' << integral_name(Iq);
    std::cout << " } observed={";
    for (const Integral Iq : r.observed) std::cout << ' ' << integral_name(Iq);
    std::cout << " } " << (r.match ? "OK" : "MISMATCH") << "\n";
    if (!r.match) {
      all_match = false;
      failed += (failed.empty() ? "" : ", ") + r.name;
    }
  }
  report["all_match"] = all_match;
  write_json(opt.out / "report.json", report);

  if (!all_match)
    throw NumericalError("conservation check failed for: " + failed);
  std::cout << "conservation-check: all models match -> "
            << (opt.out / "report.json").string() << "\n";
}

}  // namespace tippetop
