#pragma once

#include "tippetop/friction.hpp"
#include "tippetop/reduction.hpp"
#include "tippetop/types.hpp"

#include <Eigen/Core>

#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace tippetop {

//! Adaptive-step configuration shared by every integration entry point.
struct IntegratorConfig {
  double rtol = 1e-10;
  double atol = 1e-10;
  double dt_init = 1e-3;
  double dt_min = 1e-12;
  double dt_max = std::numeric_limits<double>::infinity();
  double t_end = 50.0;
  bool renormalize_gamma = true;  //!< project gamma back to the unit sphere after accepted steps
  double steady_state_eps = 1e-10;  //!< early stop once the derivative max-norm stays below
                                    //!< this for 10 consecutive accepted steps; <= 0 disables
  int stride = 1;  //!< record every stride-th accepted step

  void validate() const;  //!< throws std::invalid_argument naming the field
};

enum class StopReason {
  ReachedTEnd,    //!< integrated through t_end
  Converged,      //!< steady-state detector fired
  StepUnderflow,  //!< error control pushed dt below dt_min (stiff point)
  Halted,         //!< a caller-supplied halt predicate fired (internal use)
};
const char* to_string(StopReason r);

using OdeRhs = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;

//! Raw integration record on a flat state vector.
struct OdeTrajectory {
  std::vector<double> t;
  std::vector<Eigen::VectorXd> y;
  StopReason stop = StopReason::ReachedTEnd;
  long accepted = 0;
  long rejected = 0;
  std::vector<double> event_times;
  double t_final = 0.0;     //!< state actually reached, recorded or not
  Eigen::VectorXd y_final;  //!< (t_eval mode records only listed times)
};

//! Optional hooks for the adaptive core.
struct OdeOptions {
  //! Applied to the state after every accepted step (e.g. gamma projection).
  std::function<void(Eigen::VectorXd&)> postprocess;
  //! Scalar whose sign changes are localized by bisection to 1e-9 in t.
  std::function<double(double, const Eigen::VectorXd&)> event;
  //! Stop integration once this returns true on an accepted state.
  std::function<bool(double, const Eigen::VectorXd&)> halt;
  //! When non-empty: record exactly at these (sorted, increasing) times
  //! instead of stride-based sampling; steps land on them exactly.
  std::vector<double> t_eval;
};

//! Dormand-Prince 5(4) driver: standard controller, FSAL, gamma-agnostic.
//! Non-finite stages or error estimates reject the step and shrink dt.
OdeTrajectory integrate_adaptive(const OdeRhs& rhs, double t0, Eigen::VectorXd y0,
                                 const IntegratorConfig& cfg, const OdeOptions& opts = {});

//! Single Dormand-Prince step without error control (5th-order result);
//! used for event bisection and finite-difference oracles. dt may be negative.
Eigen::VectorXd dp_step(const OdeRhs& rhs, double t, const Eigen::VectorXd& y, double dt);

//! Classical fixed-step RK4, kept as an independent cross-check.
Eigen::VectorXd rk4_step(const OdeRhs& rhs, double t, const Eigen::VectorXd& y, double dt);
OdeTrajectory integrate_rk4(const OdeRhs& rhs, double t0, Eigen::VectorXd y0, double dt,
                            double t_end, int stride = 1);

//! Full-system trajectory (v, omega, gamma [, pose]) under any friction model.
struct FullTrajectory {
  std::vector<double> t;
  std::vector<FullState> states;
  std::vector<double> N;  //!< normal force at each record
  StopReason stop = StopReason::ReachedTEnd;
  long accepted = 0;
  long rejected = 0;
  double min_N = std::numeric_limits<double>::infinity();  //!< over records
};
FullTrajectory integrate_full(const FullState& y0, const FrictionModel& model,
                              const BodyParams& p, const IntegratorConfig& cfg,
                              const std::vector<double>& t_eval = {});

//! Torque-only (omega, gamma) trajectory; rolling resistance, optionally with
//! spinning resistance.
struct DecoupledTrajectory {
  std::vector<double> t;
  std::vector<Vec3> omega;
  std::vector<Vec3> gamma;
  StopReason stop = StopReason::ReachedTEnd;
  long accepted = 0;
  long rejected = 0;
};
DecoupledTrajectory integrate_decoupled(const Vec3& omega0, const Vec3& gamma0,
                                        const BodyParams& p, const IntegratorConfig& cfg,
                                        bool spinning = false,
                                        const std::vector<double>& t_eval = {});

//! Reduced-chart trajectory. Integrates (gamma3, K1, K2 [, C]) with phi
//! carried passively. When the trajectory approaches a pole (|gamma3| >
//! 1 - 1e-6) it switches automatically to the full (omega, gamma) system and
//! keeps reporting chart projections. event_C_threshold, when set, records
//! the times at which |C| crosses that value.
struct ReducedTrajectory {
  std::vector<double> t;
  std::vector<ReducedState> states;
  std::vector<Vec3> omega;  //!< reconstructed (exact during fallback, where the
  std::vector<Vec3> gamma;  //!< chart projection alone loses information)
  StopReason stop = StopReason::ReachedTEnd;
  long accepted = 0;
  long rejected = 0;
  std::vector<double> event_times;
  bool fallback_used = false;
};
ReducedTrajectory integrate_reduced(const ReducedState& y0, const BodyParams& p,
                                    const IntegratorConfig& cfg, bool spinning = false,
                                    std::optional<double> event_C_threshold = std::nullopt,
                                    const std::vector<double>& t_eval = {});

//! Pole-switch threshold of integrate_reduced.
inline constexpr double kPoleSwitch = 1e-6;

}  // namespace tippetop
