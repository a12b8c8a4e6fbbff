#pragma once

// Time integration: an embedded Runge–Kutta 5(4) pair (Tsitouras) for the polynomial
// Flaschka systems and fixed-step Störmer–Verlet for canonical separable
// Hamiltonians, plus drift diagnostics over the resulting trajectories.

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace birkhoff {

enum class Method { leapfrog, adaptive_rk };

struct IntegratorConfig {
  Method method = Method::adaptive_rk;
  double t_end = 1.0;
  double initial_step = 1e-2;
  double rtol = 1e-10;
  double atol = 1e-12;
  long max_steps = 10'000'000;
  int sample_stride = 1;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  /// One named series per attached invariant, aligned with `times`.
  std::vector<std::pair<std::string, std::vector<double>>> invariant_series;
  long accepted = 0;
  long rejected = 0;
  std::vector<std::string> warnings;
};

/// Step-count exhaustion or step-size underflow. Carries everything
/// integrated so far; the last state is `partial.states.back()`.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, Trajectory partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const noexcept { return partial_; }

 private:
  Trajectory partial_;
};

using VectorField = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Coordinates [begin, begin+count) are expected to keep the sign `sign`;
/// crossings by more than 1e-12 are recorded as trajectory warnings.
struct SignConstraint {
  int begin = 0;
  int count = 0;
  double sign = 1.0;
};

Trajectory integrate_flaschka(const VectorField& field, const Eigen::VectorXd& x0,
                              const IntegratorConfig& cfg, SignConstraint constraint = {});

/// Kick-drift-kick Störmer–Verlet for H = ½|p|² + V(q), `force` = -∇V.
/// Uses ceil(t_end / initial_step) equal steps so the run ends exactly at t_end.
/// States are (q, p) stacked.
Trajectory integrate_canonical(const VectorField& force, const Eigen::VectorXd& q0,
                               const Eigen::VectorXd& p0, const IntegratorConfig& cfg);

struct NamedInvariant {
  std::string name;
  std::function<double(const Eigen::VectorXd&)> eval;
};

/// Evaluates each invariant on every sampled state into traj.invariant_series.
void attach_invariants(Trajectory& traj, const std::vector<NamedInvariant>& invariants);

struct DriftEntry {
  std::string name;
  double initial = 0.0;
  /// max_t |f(x(t)) - f(x0)| / max(1, |f(x0)|)
  double max_relative_drift = 0.0;
  double time_of_max = 0.0;
};

std::vector<DriftEntry> drift_report(const Trajectory& traj,
                                     const std::vector<NamedInvariant>& invariants);

struct EigenDrift {
  /// max_t ‖λ(t) - λ(0)‖_∞ over ascending-sorted eigenvalues.
  double max_drift = 0.0;
  double time_of_max = 0.0;
};

/// Throws DiagnosticError when a built matrix is non-Hermitian by more than 1e-8.
EigenDrift eigenvalue_drift(const Trajectory& traj,
                            const std::function<Eigen::MatrixXcd(const Eigen::VectorXd&)>& builder);

class DiagnosticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace birkhoff

namespace birkhoff {

/// Finite-difference check that a coordinate change carries a canonical flow
/// onto a target vector field: ‖(F(z+hż) - F(z-hż))/2h - field(F(z))‖_∞ / (1 + ‖field(F(z))‖_∞).
double pullback_residual(const VectorField& transform, const VectorField& canonical_field,
                         const VectorField& target_field, const Eigen::VectorXd& z, double step = 1e-5);

/// (q, p) ↦ (p, force(q)) for H = ½|p|² + V(q).
VectorField canonical_field(VectorField force);

}  // namespace birkhoff
