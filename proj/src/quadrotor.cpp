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

#include "goalcast/quadrotor.hpp"

#include <stdexcept>

namespace goalcast {
namespace {

using quad::kControlDim;
using quad::kDynamicsParamDim;
using quad::kStateDim;

// Active-variable packing for the per-step Hamiltonian: x, u, dynamics
// params, running weight.
constexpr int kHamiltonianVars =
    kStateDim + kControlDim + kDynamicsParamDim + 1;
// Active-variable packing for the final cost: x, final weights, goal.
constexpr int kFinalVars = kStateDim + 4 + kStateDim;

template <class S>
S running_cost_expr(const QuadrotorOptions& options, const quad::State<S>& x,
                    const quad::Control<S>& u, const S& running_weight) {
  S cost =
      running_weight * (u[0] * u[0] + u[1] * u[1] + u[2] * u[2] + u[3] * u[3]);
  if (options.hardware_cost) {
    const S dz = x[2] - options.altitude_target;
    const S dx = x[0] - options.obstacle_xy(0);
    const S dy = x[1] - options.obstacle_xy(1);
    cost += options.altitude_weight * dz * dz +
            options.obstacle_weight * (dx * dx + dy * dy);
  }
  return cost;
}

template <class S>
S final_cost_expr(const std::array<S, kStateDim>& x,
                  const std::array<S, 4>& weights,
                  const std::array<S, kStateDim>& goal) {
  const int starts[5] = {0, 3, 6, 10, 13};
  S cost(0.0);
  for (int b = 0; b < 4; ++b) {
    S block(0.0);
    for (int i = starts[b]; i < starts[b + 1]; ++i) {
      const S diff = x[i] - goal[i];
      block += diff * diff;
    }
    cost += weights[b] * block;
  }
  return cost;
}

quad::State<double> to_state(const Eigen::VectorXd& x) {
  quad::State<double> out;
  for (int i = 0; i < kStateDim; ++i) out[i] = x(i);
  return out;
}

quad::Control<double> to_control(const Eigen::VectorXd& u) {
  quad::Control<double> out;
  for (int i = 0; i < kControlDim; ++i) out[i] = u(i);
  return out;
}

quad::Params<double> to_params(const Eigen::VectorXd& theta) {
  quad::Params<double> out;
  for (int i = 0; i < kDynamicsParamDim; ++i) out[i] = theta(i);
  return out;
}

}  // namespace

Eigen::Matrix4d omega_matrix(const Eigen::Vector3d& omega) {
  const double wx = omega(0), wy = omega(1), wz = omega(2);
  Eigen::Matrix4d out;
  out << 0.0, -wx, -wy, -wz,  //
      wx, 0.0, wz, -wy,       //
      wy, -wz, 0.0, wx,       //
      wz, wy, -wx, 0.0;
  return out;
}

Eigen::Vector4d thrust_mixer(const Eigen::Vector4d& thrusts,
                             double wing_length, double torque_coeff) {
  Eigen::Matrix4d mix;
  const double half = 0.5 * wing_length;
  mix << 1.0, 1.0, 1.0, 1.0,             //
      0.0, -half, 0.0, half,             //
      -half, 0.0, half, 0.0,             //
      torque_coeff, -torque_coeff, torque_coeff, -torque_coeff;
  return mix * thrusts;
}

Eigen::VectorXd quad_derivative(const Eigen::VectorXd& x,
                                const Eigen::VectorXd& u,
                                const Eigen::VectorXd& params) {
  quad::Params<double> p;
  for (int i = 0; i < kDynamicsParamDim; ++i) p[i] = params(i);
  const auto dx = quad::derivative(to_state(x), to_control(u), p);
  Eigen::VectorXd out(kStateDim);
  for (int i = 0; i < kStateDim; ++i) out(i) = dx[i];
  if (!out.allFinite()) {
    throw std::runtime_error("quad_derivative: non-finite output");
  }
  return out;
}

Eigen::VectorXd quad_discrete_step(const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& u,
                                   const Eigen::VectorXd& params, double dt,
                                   quad::Integrator integrator) {
  if (dt <= 0.0) throw std::invalid_argument("quad_discrete_step: dt <= 0");
  quad::Params<double> p;
  for (int i = 0; i < kDynamicsParamDim; ++i) p[i] = params(i);
  const auto next = quad::step(to_state(x), to_control(u), p, dt, integrator);
  Eigen::VectorXd out(kStateDim);
  for (int i = 0; i < kStateDim; ++i) out(i) = next[i];
  return out;
}

Eigen::VectorXd standard_running_features(const Eigen::VectorXd& u) {
  Eigen::VectorXd features(1);
  features(0) = u.squaredNorm();
  return features;
}

Eigen::VectorXd standard_final_features(const Eigen::VectorXd& x,
                                        const Eigen::VectorXd& goal) {
  Eigen::VectorXd features(4);
  features(0) = (x.segment(0, 3) - goal.segment(0, 3)).squaredNorm();
  features(1) = (x.segment(3, 3) - goal.segment(3, 3)).squaredNorm();
  features(2) = (x.segment(6, 4) - goal.segment(6, 4)).squaredNorm();
  features(3) = (x.segment(10, 3) - goal.segment(10, 3)).squaredNorm();
  return features;
}

double standard_final_cost(const ThetaLayout& layout, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& theta) {
  const Eigen::VectorXd weights =
      theta.segment(layout.final_offset(), layout.final_dim);
  const Eigen::VectorXd goal =
      theta.segment(layout.goal_offset(), layout.goal_dim);
  return weights.dot(standard_final_features(x, goal));
}

Eigen::VectorXd standard_final_gradient(const ThetaLayout& layout,
                                        const Eigen::VectorXd& x,
                                        const Eigen::VectorXd& theta) {
  const Eigen::VectorXd goal =
      theta.segment(layout.goal_offset(), layout.goal_dim);
  const int starts[5] = {0, 3, 6, 10, 13};
  Eigen::VectorXd grad(kStateDim);
  for (int b = 0; b < 4; ++b) {
    const double w = theta(layout.final_offset() + b);
    for (int i = starts[b]; i < starts[b + 1]; ++i) {
      grad(i) = 2.0 * w * (x(i) - goal(i));
    }
  }
  return grad;
}

FinalQuadratics standard_final_quadratics(const ThetaLayout& layout,
                                          const Eigen::VectorXd& x,
                                          const Eigen::VectorXd& theta) {
  using D2 = Dual2<kFinalVars>;
  std::array<D2, kStateDim> xs;
  std::array<D2, 4> ws;
  std::array<D2, kStateDim> gs;
  for (int i = 0; i < kStateDim; ++i) xs[i] = D2::Variable(x(i), i);
  for (int i = 0; i < 4; ++i) {
    ws[i] = D2::Variable(theta(layout.final_offset() + i), kStateDim + i);
  }
  for (int i = 0; i < kStateDim; ++i) {
    gs[i] = D2::Variable(theta(layout.goal_offset() + i), kStateDim + 4 + i);
  }
  const D2 cost = final_cost_expr(xs, ws, gs);

  FinalQuadratics out;
  out.value = cost.v;
  out.x = cost.g.segment(0, kStateDim);
  out.xx = cost.h.block(0, 0, kStateDim, kStateDim);
  out.xtheta = Eigen::MatrixXd::Zero(kStateDim, layout.size());
  out.xtheta.block(0, layout.final_offset(), kStateDim, 4) =
      cost.h.block(0, kStateDim, kStateDim, 4);
  out.xtheta.block(0, layout.goal_offset(), kStateDim, kStateDim) =
      cost.h.block(0, kStateDim + 4, kStateDim, kStateDim);
  return out;
}

QuadrotorModel::QuadrotorModel(QuadrotorOptions options)
    : options_(options),
      layout_{kDynamicsParamDim, 1, 4, kStateDim} {}

Eigen::VectorXd QuadrotorModel::step(const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& u,
                                     const Eigen::VectorXd& theta) const {
  const auto next = quad::step(to_state(x), to_control(u), to_params(theta),
                               options_.dt, options_.integrator);
  Eigen::VectorXd out(kStateDim);
  for (int i = 0; i < kStateDim; ++i) out(i) = next[i];
  return out;
}

DynamicsJacobians QuadrotorModel::dynamics_jacobians(
    const Eigen::VectorXd& x, const Eigen::VectorXd& u,
    const Eigen::VectorXd& theta) const {
  constexpr int kVars = kStateDim + kControlDim;
  using D = Dual<kVars>;
  quad::State<D> xs;
  quad::Control<D> us;
  quad::Params<D> ps;
  for (int i = 0; i < kStateDim; ++i) xs[i] = D::Variable(x(i), i);
  for (int i = 0; i < kControlDim; ++i) {
    us[i] = D::Variable(u(i), kStateDim + i);
  }
  for (int i = 0; i < kDynamicsParamDim; ++i) ps[i] = D(theta(i));
  const auto next = quad::step(xs, us, ps, options_.dt, options_.integrator);

  DynamicsJacobians out;
  out.F.resize(kStateDim, kStateDim);
  out.G.resize(kStateDim, kControlDim);
  for (int i = 0; i < kStateDim; ++i) {
    out.F.row(i) = next[i].d.segment(0, kStateDim).transpose();
    out.G.row(i) = next[i].d.segment(kStateDim, kControlDim).transpose();
  }
  return out;
}

Eigen::MatrixXd QuadrotorModel::dynamics_theta_jacobian(
    const Eigen::VectorXd& x, const Eigen::VectorXd& u,
    const Eigen::VectorXd& theta) const {
  using D = Dual<kDynamicsParamDim>;
  quad::State<D> xs;
  quad::Control<D> us;
  quad::Params<D> ps;
  for (int i = 0; i < kStateDim; ++i) xs[i] = D(x(i));
  for (int i = 0; i < kControlDim; ++i) us[i] = D(u(i));
  for (int i = 0; i < kDynamicsParamDim; ++i) {
    ps[i] = D::Variable(theta(i), i);
  }
  const auto next = quad::step(xs, us, ps, options_.dt, options_.integrator);

  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(kStateDim, layout_.size());
  for (int i = 0; i < kStateDim; ++i) {
    jac.block(i, layout_.dynamics_offset(), 1, kDynamicsParamDim) =
        next[i].d.transpose();
  }
  return jac;
}

double QuadrotorModel::running_cost(const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& u,
                                    const Eigen::VectorXd& theta) const {
  return running_cost_expr(options_, to_state(x), to_control(u),
                           theta(layout_.running_offset()));
}

double QuadrotorModel::final_cost(const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& theta) const {
  return standard_final_cost(layout_, x, theta);
}

void QuadrotorModel::running_gradients(const Eigen::VectorXd& x,
                                       const Eigen::VectorXd& u,
                                       const Eigen::VectorXd& theta,
                                       Eigen::VectorXd* cx,
                                       Eigen::VectorXd* cu) const {
  constexpr int kVars = kStateDim + kControlDim;
  using D = Dual<kVars>;
  quad::State<D> xs;
  quad::Control<D> us;
  for (int i = 0; i < kStateDim; ++i) xs[i] = D::Variable(x(i), i);
  for (int i = 0; i < kControlDim; ++i) {
    us[i] = D::Variable(u(i), kStateDim + i);
  }
  const D cost =
      running_cost_expr(options_, xs, us, D(theta(layout_.running_offset())));
  *cx = cost.d.segment(0, kStateDim);
  *cu = cost.d.segment(kStateDim, kControlDim);
}

Eigen::VectorXd QuadrotorModel::final_gradient(
    const Eigen::VectorXd& x, const Eigen::VectorXd& theta) const {
  return standard_final_gradient(layout_, x, theta);
}

RunningQuadratics QuadrotorModel::running_quadratics(
    const Eigen::VectorXd& x, const Eigen::VectorXd& u,
    const Eigen::VectorXd& theta) const {
  constexpr int kVars = kStateDim + kControlDim;
  using D2 = Dual2<kVars>;
  quad::State<D2> xs;
  quad::Control<D2> us;
  for (int i = 0; i < kStateDim; ++i) xs[i] = D2::Variable(x(i), i);
  for (int i = 0; i < kControlDim; ++i) {
    us[i] = D2::Variable(u(i), kStateDim + i);
  }
  const D2 cost =
      running_cost_expr(options_, xs, us, D2(theta(layout_.running_offset())));

  RunningQuadratics out;
  out.value = cost.v;
  out.x = cost.g.segment(0, kStateDim);
  out.u = cost.g.segment(kStateDim, kControlDim);
  out.xx = cost.h.block(0, 0, kStateDim, kStateDim);
  out.uu = cost.h.block(kStateDim, kStateDim, kControlDim, kControlDim);
  out.xu = cost.h.block(0, kStateDim, kStateDim, kControlDim);
  return out;
}

FinalQuadratics QuadrotorModel::final_quadratics(
    const Eigen::VectorXd& x, const Eigen::VectorXd& theta) const {
  return standard_final_quadratics(layout_, x, theta);
}

HamiltonianQuadratics QuadrotorModel::hamiltonian_quadratics(
    const Eigen::VectorXd& x, const Eigen::VectorXd& u,
    const Eigen::VectorXd& theta, const Eigen::VectorXd& lambda_next) const {
  using D2 = Dual2<kHamiltonianVars>;
  quad::State<D2> xs;
  quad::Control<D2> us;
  quad::Params<D2> ps;
  for (int i = 0; i < kStateDim; ++i) xs[i] = D2::Variable(x(i), i);
  for (int i = 0; i < kControlDim; ++i) {
    us[i] = D2::Variable(u(i), kStateDim + i);
  }
  for (int i = 0; i < kDynamicsParamDim; ++i) {
    ps[i] = D2::Variable(theta(i), kStateDim + kControlDim + i);
  }
  const D2 weight = D2::Variable(theta(layout_.running_offset()),
                                 kStateDim + kControlDim + kDynamicsParamDim);

  D2 ham = running_cost_expr(options_, xs, us, weight);
  const auto next = quad::step(xs, us, ps, options_.dt, options_.integrator);
  for (int i = 0; i < kStateDim; ++i) ham += lambda_next(i) * next[i];

  const int n = kStateDim, m = kControlDim;
  const int param_col = n + m;
  HamiltonianQuadratics out;
  out.xx = ham.h.block(0, 0, n, n);
  out.uu = ham.h.block(n, n, m, m);
  out.xu = ham.h.block(0, n, n, m);
  out.xtheta = Eigen::MatrixXd::Zero(n, layout_.size());
  out.utheta = Eigen::MatrixXd::Zero(m, layout_.size());
  out.xtheta.block(0, layout_.dynamics_offset(), n, kDynamicsParamDim) =
      ham.h.block(0, param_col, n, kDynamicsParamDim);
  out.xtheta.col(layout_.running_offset()) =
      ham.h.col(param_col + kDynamicsParamDim).segment(0, n);
  out.utheta.block(0, layout_.dynamics_offset(), m, kDynamicsParamDim) =
      ham.h.block(n, param_col, m, kDynamicsParamDim);
  out.utheta.col(layout_.running_offset()) =
      ham.h.col(param_col + kDynamicsParamDim).segment(n, m);
  return out;
}

Eigen::VectorXd QuadrotorModel::initial_control(
    const Eigen::VectorXd& theta) const {
  const double mass = theta(3);
  return Eigen::VectorXd::Constant(kControlDim,
                                   mass * quad::kGravity / kControlDim);
}

Eigen::VectorXd quadrotor_nominal_theta(const Eigen::VectorXd& goal) {
  Eigen::VectorXd theta(24);
  theta << 1.0, 1.0, 1.0, 1.0, 0.4, 0.01,  // J, m, l_w, c
      0.1,                                 // running weight
      10.0, 1.0, 5.0, 1.0,                 // final weights
      goal;
  return theta;
}

Eigen::VectorXd quadrotor_rest_state(const Eigen::Vector3d& position) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(quad::kStateDim);
  x.segment(0, 3) = position;
  x(6) = 1.0;
  return x;
}

}  // namespace goalcast
