// Copyright 2026 The goalcast Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GOALCAST_QUADROTOR_HPP_
#define GOALCAST_QUADROTOR_HPP_

#include <array>
#include <cmath>

#include <Eigen/Core>

#include "goalcast/dual.hpp"
#include "goalcast/model.hpp"
#include "goalcast/theta.hpp"

namespace goalcast {

// State layout: [p_I (3, m), v_I (3, m/s), q_B/I (4, unit quaternion,
// scalar first), omega_B (3, rad/s)]. Controls are the four propeller
// thrusts in N. Dynamics parameters: [J1, J2, J3 (kg m^2), m (kg),
// l_w (m), c (m)].
//
// Frame convention: the inertial z axis is aligned with gravity
// (g_I = [0, 0, g] with g = 10), and thrust acts along -z_B, so
// F_I = -R(q) [0, 0, f]'. Hover then balances at f = m g with positive
// thrusts.
namespace quad {

inline constexpr int kStateDim = 13;
inline constexpr int kControlDim = 4;
inline constexpr int kDynamicsParamDim = 6;
inline constexpr double kGravity = 10.0;

enum class Integrator { kRk4, kEuler };

template <class S>
using State = std::array<S, kStateDim>;
template <class S>
using Control = std::array<S, kControlDim>;
template <class S>
using Params = std::array<S, kDynamicsParamDim>;

// Continuous-time state derivative.
template <class S>
State<S> derivative(const State<S>& x, const Control<S>& u,
                    const Params<S>& p) {
  const S& j1 = p[0];
  const S& j2 = p[1];
  const S& j3 = p[2];
  const S& mass = p[3];
  const S& wing = p[4];
  const S& coeff = p[5];

  // thrust mixing: [f, Mx, My, Mz]
  const S f = u[0] + u[1] + u[2] + u[3];
  const S mx = 0.5 * wing * (u[3] - u[1]);
  const S my = 0.5 * wing * (u[2] - u[0]);
  const S mz = coeff * (u[0] - u[1] + u[2] - u[3]);

  const S& q0 = x[6];
  const S& q1 = x[7];
  const S& q2 = x[8];
  const S& q3 = x[9];
  const S& wx = x[10];
  const S& wy = x[11];
  const S& wz = x[12];

  State<S> dx;
  dx[0] = x[3];
  dx[1] = x[4];
  dx[2] = x[5];

  const S f_over_m = f / mass;
  dx[3] = -f_over_m * (2.0 * (q1 * q3 + q0 * q2));
  dx[4] = -f_over_m * (2.0 * (q2 * q3 - q0 * q1));
  dx[5] = kGravity - f_over_m * (1.0 - 2.0 * (q1 * q1 + q2 * q2));

  // qdot = 1/2 Omega(omega) q
  dx[6] = 0.5 * (-wx * q1 - wy * q2 - wz * q3);
  dx[7] = 0.5 * (wx * q0 + wz * q2 - wy * q3);
  dx[8] = 0.5 * (wy * q0 - wz * q1 + wx * q3);
  dx[9] = 0.5 * (wz * q0 + wy * q1 - wx * q2);

  // J omegadot = M - omega x J omega, diagonal J
  const S gx = wy * (j3 * wz) - wz * (j2 * wy);
  const S gy = wz * (j1 * wx) - wx * (j3 * wz);
  const S gz = wx * (j2 * wy) - wy * (j1 * wx);
  dx[10] = (mx - gx) / j1;
  dx[11] = (my - gy) / j2;
  dx[12] = (mz - gz) / j3;
  return dx;
}

// One integration step followed by quaternion renormalization.
template <class S>
State<S> step(const State<S>& x, const Control<S>& u, const Params<S>& p,
              double dt, Integrator integrator) {
  using std::sqrt;
  State<S> out;
  if (integrator == Integrator::kEuler) {
    const State<S> k1 = derivative(x, u, p);
    for (int i = 0; i < kStateDim; ++i) out[i] = x[i] + dt * k1[i];
  } else {
    const State<S> k1 = derivative(x, u, p);
    State<S> mid;
    for (int i = 0; i < kStateDim; ++i) mid[i] = x[i] + 0.5 * dt * k1[i];
    const State<S> k2 = derivative(mid, u, p);
    for (int i = 0; i < kStateDim; ++i) mid[i] = x[i] + 0.5 * dt * k2[i];
    const State<S> k3 = derivative(mid, u, p);
    for (int i = 0; i < kStateDim; ++i) mid[i] = x[i] + dt * k3[i];
    const State<S> k4 = derivative(mid, u, p);
    for (int i = 0; i < kStateDim; ++i) {
      out[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
  }
  const S norm = sqrt(out[6] * out[6] + out[7] * out[7] + out[8] * out[8] +
                      out[9] * out[9]);
  out[6] = out[6] / norm;
  out[7] = out[7] / norm;
  out[8] = out[8] / norm;
  out[9] = out[9] / norm;
  return out;
}

}  // namespace quad

// The 4x4 quaternion-rate matrix Omega(omega), skew-symmetric.
Eigen::Matrix4d omega_matrix(const Eigen::Vector3d& omega);

// Maps propeller thrusts to [f, Mx, My, Mz].
Eigen::Vector4d thrust_mixer(const Eigen::Vector4d& thrusts,
                             double wing_length, double torque_coeff);

// Continuous derivative and discrete step on Eigen vectors.
Eigen::VectorXd quad_derivative(const Eigen::VectorXd& x,
                                const Eigen::VectorXd& u,
                                const Eigen::VectorXd& params);
Eigen::VectorXd quad_discrete_step(const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& u,
                                   const Eigen::VectorXd& params, double dt,
                                   quad::Integrator integrator);

// Objective features shared by the analytic and learned dynamics variants.
// Running feature: squared control norm. Final features: squared distances
// to the goal on the position / velocity / attitude / rate blocks.
Eigen::VectorXd standard_running_features(const Eigen::VectorXd& u);
Eigen::VectorXd standard_final_features(const Eigen::VectorXd& x,
                                        const Eigen::VectorXd& goal);

double standard_final_cost(const ThetaLayout& layout, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& theta);
Eigen::VectorXd standard_final_gradient(const ThetaLayout& layout,
                                        const Eigen::VectorXd& x,
                                        const Eigen::VectorXd& theta);
FinalQuadratics standard_final_quadratics(const ThetaLayout& layout,
                                          const Eigen::VectorXd& x,
                                          const Eigen::VectorXd& theta);

struct QuadrotorOptions {
  double dt = 0.15;
  quad::Integrator integrator = quad::Integrator::kRk4;
  // Adds the fixed (non-identified) altitude-hold and no-fly-zone running
  // penalties used by the hardware-style scenario.
  bool hardware_cost = false;
  Eigen::Vector2d obstacle_xy{0.0, 5.0};
  double altitude_target = 0.6;
  double altitude_weight = 100.0;
  double obstacle_weight = 0.1;
};

// Analytic quadrotor with theta = [J1,J2,J3,m,l_w,c, w_r, w_f(4), goal(13)],
// 24 entries in total.
class QuadrotorModel : public Model {
 public:
  explicit QuadrotorModel(QuadrotorOptions options = {});

  int state_dim() const override { return quad::kStateDim; }
  int control_dim() const override { return quad::kControlDim; }
  const ThetaLayout& theta_layout() const override { return layout_; }
  const QuadrotorOptions& options() const { return options_; }

  Eigen::VectorXd step(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                       const Eigen::VectorXd& theta) const override;
  DynamicsJacobians dynamics_jacobians(
      const Eigen::VectorXd& x, const Eigen::VectorXd& u,
      const Eigen::VectorXd& theta) const override;
  Eigen::MatrixXd dynamics_theta_jacobian(
      const Eigen::VectorXd& x, const Eigen::VectorXd& u,
      const Eigen::VectorXd& theta) const override;

  double running_cost(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                      const Eigen::VectorXd& theta) const override;
  double final_cost(const Eigen::VectorXd& x,
                    const Eigen::VectorXd& theta) const override;
  void running_gradients(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                         const Eigen::VectorXd& theta, Eigen::VectorXd* cx,
                         Eigen::VectorXd* cu) const override;
  Eigen::VectorXd final_gradient(const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& theta) const override;

  RunningQuadratics running_quadratics(
      const Eigen::VectorXd& x, const Eigen::VectorXd& u,
      const Eigen::VectorXd& theta) const override;
  FinalQuadratics final_quadratics(const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& theta) const override;
  HamiltonianQuadratics hamiltonian_quadratics(
      const Eigen::VectorXd& x, const Eigen::VectorXd& u,
      const Eigen::VectorXd& theta,
      const Eigen::VectorXd& lambda_next) const override;

  // Hover thrust split equally across the propellers, using the mass
  // estimate carried in theta.
  Eigen::VectorXd initial_control(const Eigen::VectorXd& theta) const override;

 private:
  QuadrotorOptions options_;
  ThetaLayout layout_;
};

// Nominal parameter set: J = I3, m = 1 kg, l_w = 0.4 m, c = 0.01 m,
// w_r = 0.1, w_f = [10, 1, 5, 1], stacked with the given goal state.
Eigen::VectorXd quadrotor_nominal_theta(const Eigen::VectorXd& goal);

// Rest state at the given position, identity attitude.
Eigen::VectorXd quadrotor_rest_state(const Eigen::Vector3d& position);

}  // namespace goalcast

#endif  // GOALCAST_QUADROTOR_HPP_
