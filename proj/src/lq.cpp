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

#include "goalcast/lq.hpp"

#include <stdexcept>
#include <utility>

namespace goalcast {

LinearQuadraticModel::LinearQuadraticModel(Eigen::MatrixXd A,
                                           Eigen::MatrixXd B)
    : A_(std::move(A)), B_(std::move(B)) {
  if (A_.rows() != A_.cols() || A_.rows() != B_.rows()) {
    throw std::invalid_argument("LinearQuadraticModel: dimension mismatch");
  }
  const int n = static_cast<int>(A_.rows());
  layout_ = ThetaLayout{n, 1, 1, n};
}

Eigen::VectorXd LinearQuadraticModel::step(const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& u,
                                           const Eigen::VectorXd& theta) const {
  return A_ * x + B_ * u + theta.segment(0, state_dim());
}

DynamicsJacobians LinearQuadraticModel::dynamics_jacobians(
    const Eigen::VectorXd&, const Eigen::VectorXd&,
    const Eigen::VectorXd&) const {
  return DynamicsJacobians{A_, B_};
}

Eigen::MatrixXd LinearQuadraticModel::dynamics_theta_jacobian(
    const Eigen::VectorXd&, const Eigen::VectorXd&,
    const Eigen::VectorXd&) const {
  const int n = state_dim();
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, layout_.size());
  jac.block(0, layout_.dynamics_offset(), n, n) =
      Eigen::MatrixXd::Identity(n, n);
  return jac;
}

double LinearQuadraticModel::running_cost(const Eigen::VectorXd&,
                                          const Eigen::VectorXd& u,
                                          const Eigen::VectorXd& theta) const {
  return theta(layout_.running_offset()) * u.squaredNorm();
}

double LinearQuadraticModel::final_cost(const Eigen::VectorXd& x,
                                        const Eigen::VectorXd& theta) const {
  const Eigen::VectorXd goal =
      theta.segment(layout_.goal_offset(), layout_.goal_dim);
  return theta(layout_.final_offset()) * (x - goal).squaredNorm();
}

void LinearQuadraticModel::running_gradients(const Eigen::VectorXd&,
                                             const Eigen::VectorXd& u,
                                             const Eigen::VectorXd& theta,
                                             Eigen::VectorXd* cx,
                                             Eigen::VectorXd* cu) const {
  *cx = Eigen::VectorXd::Zero(state_dim());
  *cu = 2.0 * theta(layout_.running_offset()) * u;
}

Eigen::VectorXd LinearQuadraticModel::final_gradient(
    const Eigen::VectorXd& x, const Eigen::VectorXd& theta) const {
  const Eigen::VectorXd goal =
      theta.segment(layout_.goal_offset(), layout_.goal_dim);
  return 2.0 * theta(layout_.final_offset()) * (x - goal);
}

RunningQuadratics LinearQuadraticModel::running_quadratics(
    const Eigen::VectorXd& x, const Eigen::VectorXd& u,
    const Eigen::VectorXd& theta) const {
  const int n = state_dim(), m = control_dim();
  const double wr = theta(layout_.running_offset());
  RunningQuadratics out;
  out.value = wr * u.squaredNorm();
  out.x = Eigen::VectorXd::Zero(n);
  out.u = 2.0 * wr * u;
  out.xx = Eigen::MatrixXd::Zero(n, n);
  out.uu = 2.0 * wr * Eigen::MatrixXd::Identity(m, m);
  out.xu = Eigen::MatrixXd::Zero(n, m);
  (void)x;
  return out;
}

FinalQuadratics LinearQuadraticModel::final_quadratics(
    const Eigen::VectorXd& x, const Eigen::VectorXd& theta) const {
  const int n = state_dim();
  const double wf = theta(layout_.final_offset());
  const Eigen::VectorXd goal =
      theta.segment(layout_.goal_offset(), layout_.goal_dim);
  FinalQuadratics out;
  out.value = wf * (x - goal).squaredNorm();
  out.x = 2.0 * wf * (x - goal);
  out.xx = 2.0 * wf * Eigen::MatrixXd::Identity(n, n);
  out.xtheta = Eigen::MatrixXd::Zero(n, layout_.size());
  out.xtheta.col(layout_.final_offset()) = 2.0 * (x - goal);
  out.xtheta.block(0, layout_.goal_offset(), n, n) =
      -2.0 * wf * Eigen::MatrixXd::Identity(n, n);
  return out;
}

HamiltonianQuadratics LinearQuadraticModel::hamiltonian_quadratics(
    const Eigen::VectorXd&, const Eigen::VectorXd& u,
    const Eigen::VectorXd& theta, const Eigen::VectorXd&) const {
  const int n = state_dim(), m = control_dim();
  const double wr = theta(layout_.running_offset());
  HamiltonianQuadratics out;
  out.xx = Eigen::MatrixXd::Zero(n, n);
  out.uu = 2.0 * wr * Eigen::MatrixXd::Identity(m, m);
  out.xu = Eigen::MatrixXd::Zero(n, m);
  out.xtheta = Eigen::MatrixXd::Zero(n, layout_.size());
  out.utheta = Eigen::MatrixXd::Zero(m, layout_.size());
  out.utheta.col(layout_.running_offset()) = 2.0 * u;
  return out;
}

}  // namespace goalcast
