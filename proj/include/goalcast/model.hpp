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

#ifndef GOALCAST_MODEL_HPP_
#define GOALCAST_MODEL_HPP_

#include <Eigen/Core>

#include "goalcast/theta.hpp"

namespace goalcast {

struct DynamicsJacobians {
  Eigen::MatrixXd F;  // d step / d x, n x n
  Eigen::MatrixXd G;  // d step / d u, n x m
};

// Running cost value, gradients and second derivatives with respect to
// (x, u) only. This is what the trajectory solver consumes per iteration.
struct RunningQuadratics {
  double value = 0.0;
  Eigen::VectorXd x;   // n
  Eigen::VectorXd u;   // m
  Eigen::MatrixXd xx;  // n x n
  Eigen::MatrixXd uu;  // m x m
  Eigen::MatrixXd xu;  // n x m
};

struct FinalQuadratics {
  double value = 0.0;
  Eigen::VectorXd x;       // n
  Eigen::MatrixXd xx;      // n x n
  Eigen::MatrixXd xtheta;  // n x s
};

// Second derivatives of the per-step Hamiltonian
//   c(x, u, theta) + lambda' f(x, u, theta)
// evaluated at a fixed next costate lambda.
struct HamiltonianQuadratics {
  Eigen::MatrixXd xx;      // n x n
  Eigen::MatrixXd uu;      // m x m
  Eigen::MatrixXd xu;      // n x m
  Eigen::MatrixXd xtheta;  // n x s
  Eigen::MatrixXd utheta;  // m x s
};

// A parametric discrete-time system with a feature-weighted objective. All
// methods are pure functions of their arguments; instances are immutable
// after construction and safe to share across threads.
class Model {
 public:
  virtual ~Model() = default;

  virtual int state_dim() const = 0;
  virtual int control_dim() const = 0;
  virtual const ThetaLayout& theta_layout() const = 0;

  virtual Eigen::VectorXd step(const Eigen::VectorXd& x,
                               const Eigen::VectorXd& u,
                               const Eigen::VectorXd& theta) const = 0;
  virtual DynamicsJacobians dynamics_jacobians(
      const Eigen::VectorXd& x, const Eigen::VectorXd& u,
      const Eigen::VectorXd& theta) const = 0;
  // E = d step / d theta, n x s. Columns outside the dynamics segment are 0.
  virtual Eigen::MatrixXd dynamics_theta_jacobian(
      const Eigen::VectorXd& x, const Eigen::VectorXd& u,
      const Eigen::VectorXd& theta) const = 0;

  virtual double running_cost(const Eigen::VectorXd& x,
                              const Eigen::VectorXd& u,
                              const Eigen::VectorXd& theta) const = 0;
  virtual double final_cost(const Eigen::VectorXd& x,
                            const Eigen::VectorXd& theta) const = 0;
  virtual void running_gradients(const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& u,
                                 const Eigen::VectorXd& theta,
                                 Eigen::VectorXd* cx,
                                 Eigen::VectorXd* cu) const = 0;
  virtual Eigen::VectorXd final_gradient(
      const Eigen::VectorXd& x, const Eigen::VectorXd& theta) const = 0;

  virtual RunningQuadratics running_quadratics(
      const Eigen::VectorXd& x, const Eigen::VectorXd& u,
      const Eigen::VectorXd& theta) const = 0;
  virtual FinalQuadratics final_quadratics(
      const Eigen::VectorXd& x, const Eigen::VectorXd& theta) const = 0;
  virtual HamiltonianQuadratics hamiltonian_quadratics(
      const Eigen::VectorXd& x, const Eigen::VectorXd& u,
      const Eigen::VectorXd& theta,
      const Eigen::VectorXd& lambda_next) const = 0;

  // Cold-start control guess for the trajectory solver.
  virtual Eigen::VectorXd initial_control(const Eigen::VectorXd& theta) const {
    (void)theta;
    return Eigen::VectorXd::Zero(control_dim());
  }
};

}  // namespace goalcast

#endif  // GOALCAST_MODEL_HPP_
