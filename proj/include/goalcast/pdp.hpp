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

#ifndef GOALCAST_PDP_HPP_
#define GOALCAST_PDP_HPP_

#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "goalcast/model.hpp"
#include "goalcast/ocp.hpp"

namespace goalcast {

// Stationarity levels for trusting the sensitivity recursions, which are
// exact only at an optimal trajectory.
inline constexpr double kStationarityWarn = 1e-5;
inline constexpr double kStationarityLimit = 1e-3;

struct CostateResult {
  // lambdas[k] is the costate at relative index k, k = 0..horizon. The
  // Hamiltonian at step k contracts the dynamics with lambdas[k + 1].
  std::vector<Eigen::VectorXd> lambdas;
  // max over steps of |dH/du|_inf
  double stationarity = 0.0;
};

// Backward costate recursion at a (near-)optimal trajectory.
CostateResult compute_costates(const Model& model, const Trajectory& traj,
                               const Eigen::VectorXd& theta);

// Per-step Hamiltonian second derivatives and dynamics Jacobians.
struct SensitivityBundle {
  int n = 0, m = 0, s = 0, horizon = 0;
  std::vector<HamiltonianQuadratics> hamiltonian;  // per step, uu regularized
  std::vector<DynamicsJacobians> dynamics;
  std::vector<Eigen::MatrixXd> dynamics_theta;  // E, n x s
  Eigen::MatrixXd terminal_xx;                  // n x n
  Eigen::MatrixXd terminal_xtheta;              // n x s
  std::vector<Eigen::VectorXd> costates;        // as in CostateResult
  double stationarity = 0.0;
  double uu_fallback_regularization = 0.0;
};

// uu_fallback_regularization is the final mu of the solve that produced the
// trajectory. A converged trajectory is stationary for the unregularized
// objective, so H_uu is used as-is; the fallback is applied (and escalated)
// only when a step's H_uu fails its factorization.
SensitivityBundle build_sensitivity_bundle(const Model& model,
                                           const Trajectory& traj,
                                           const Eigen::VectorXd& theta,
                                           const CostateResult& costates,
                                           double uu_fallback_regularization);

struct BackwardRecursion {
  std::vector<Eigen::MatrixXd> V;  // horizon + 1, n x n, symmetric
  std::vector<Eigen::MatrixXd> W;  // horizon + 1, n x s
  // cached per-step quantities reused in the forward sweep
  std::vector<Eigen::MatrixXd> A;                    // n x n
  std::vector<Eigen::MatrixXd> B;                    // n x n
  std::vector<Eigen::MatrixXd> M;                    // n x s
  std::vector<Eigen::LLT<Eigen::MatrixXd>> uu_llt;   // per step
  std::vector<Eigen::FullPivLU<Eigen::MatrixXd>> ivb_lu;  // I + V_{k+1} B_k
  double wall_ms = 0.0;
};

// Throws std::runtime_error on a singular H_uu or (I + V B).
BackwardRecursion backward_recursion(const SensitivityBundle& bundle);

struct SensitivitySolution {
  std::vector<Eigen::MatrixXd> X;  // d x_k / d theta, n x s, X[0] = 0
  std::vector<Eigen::MatrixXd> U;  // d u_k / d theta, m x s
  double wall_ms = 0.0;
};

// Runs the forward recursion up to max_steps state sensitivities (the whole
// horizon when max_steps < 0).
SensitivitySolution forward_sensitivity(const SensitivityBundle& bundle,
                                        const BackwardRecursion& backward,
                                        int max_steps = -1);

// Jacobian of the residual obs - x_hat(theta) at the given relative index:
// the residual is linear in the state with slope -I.
Eigen::MatrixXd residual_jacobian(const SensitivitySolution& sens, int offset);

}  // namespace goalcast

#endif  // GOALCAST_PDP_HPP_
