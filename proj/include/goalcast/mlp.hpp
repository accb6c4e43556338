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

#ifndef GOALCAST_MLP_HPP_
#define GOALCAST_MLP_HPP_

#include <vector>

#include <Eigen/Core>

#include "goalcast/model.hpp"
#include "goalcast/rng.hpp"

namespace goalcast {

// Fully connected network x_{t+1} = MLP([x; u]) with tanh hidden layers and
// an identity output layer. Weights are packed layer by layer, each as the
// row-major weight matrix followed by the bias vector.
struct MlpArchitecture {
  int input_dim = 0;
  std::vector<int> hidden;
  int output_dim = 0;

  int parameter_count() const {
    int count = 0;
    int in = input_dim;
    for (int h : hidden) {
      count += h * (in + 1);
      in = h;
    }
    count += output_dim * (in + 1);
    return count;
  }

  // Hidden widths used with the 13-state / 4-control vehicle: one to three
  // hidden layers with 2121, 3889 and 5793 weights respectively.
  static MlpArchitecture quadrotor_sized(int hidden_layers);
};

// Applies the network. Throws std::invalid_argument on a weight-length
// mismatch.
Eigen::VectorXd mlp_step(const MlpArchitecture& arch,
                         const Eigen::VectorXd& weights,
                         const Eigen::VectorXd& x, const Eigen::VectorXd& u);

Eigen::VectorXd random_initial_weights(const MlpArchitecture& arch,
                                       double half_range, RngStream& rng);

struct MlpOptions {
  double fixed_running_weight = 0.1;  // known control penalty, not identified
};

// Learned-dynamics model: theta = [weights, w_f (4), goal (13)]; the running
// weight is fixed. Uses the standard quadrotor objective features.
class MlpModel : public Model {
 public:
  MlpModel(MlpArchitecture arch, MlpOptions options = {});

  int state_dim() const override { return arch_.output_dim; }
  int control_dim() const override { return arch_.input_dim - arch_.output_dim; }
  const ThetaLayout& theta_layout() const override { return layout_; }
  const MlpArchitecture& architecture() const { return arch_; }

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
  MlpArchitecture arch_;
  MlpOptions options_;
  ThetaLayout layout_;
};

}  // namespace goalcast

#endif  // GOALCAST_MLP_HPP_
