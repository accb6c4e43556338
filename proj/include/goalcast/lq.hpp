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

#ifndef GOALCAST_LQ_HPP_
#define GOALCAST_LQ_HPP_

#include <Eigen/Core>

#include "goalcast/model.hpp"

namespace goalcast {

// Linear dynamics x+ = A x + B u + d with quadratic objective
// w_r |u|^2 per step and w_f |x_T - x_g|^2 at the end.
// theta = [d (n), w_r, w_f, x_g (n)]. Closed-form optima exist, which makes
// this the reference instance for solver and sensitivity checks.
class LinearQuadraticModel : public Model {
 public:
  LinearQuadraticModel(Eigen::MatrixXd A, Eigen::MatrixXd B);

  int state_dim() const override { return static_cast<int>(A_.rows()); }
  int control_dim() const override { return static_cast<int>(B_.cols()); }
  const ThetaLayout& theta_layout() const override { return layout_; }
  const Eigen::MatrixXd& A() const { return A_; }
  const Eigen::MatrixXd& B() const { return B_; }

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

 private:
  Eigen::MatrixXd A_;
  Eigen::MatrixXd B_;
  ThetaLayout layout_;
};

}  // namespace goalcast

#endif  // GOALCAST_LQ_HPP_
