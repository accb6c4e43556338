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

#include "goalcast/pdp.hpp"

#include <chrono>
#include <stdexcept>

namespace goalcast {
namespace {

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

CostateResult compute_costates(const Model& model, const Trajectory& traj,
                               const Eigen::VectorXd& theta) {
  const int horizon = traj.horizon();
  CostateResult result;
  result.lambdas.resize(static_cast<size_t>(horizon) + 1);
  result.lambdas[static_cast<size_t>(horizon)] =
      model.final_gradient(traj.states.back(), theta);

  Eigen::VectorXd cx, cu;
  for (int k = horizon - 1; k >= 0; --k) {
    const DynamicsJacobians dyn = model.dynamics_jacobians(
        traj.states[static_cast<size_t>(k)],
        traj.controls[static_cast<size_t>(k)], theta);
    model.running_gradients(traj.states[static_cast<size_t>(k)],
                            traj.controls[static_cast<size_t>(k)], theta, &cx,
                            &cu);
    const Eigen::VectorXd& next = result.lambdas[static_cast<size_t>(k) + 1];
    const Eigen::VectorXd hu = cu + dyn.G.transpose() * next;
    result.stationarity =
        std::max(result.stationarity, hu.lpNorm<Eigen::Infinity>());
    result.lambdas[static_cast<size_t>(k)] = cx + dyn.F.transpose() * next;
  }
  return result;
}

SensitivityBundle build_sensitivity_bundle(const Model& model,
                                           const Trajectory& traj,
                                           const Eigen::VectorXd& theta,
                                           const CostateResult& costates,
                                           double uu_fallback_regularization) {
  SensitivityBundle bundle;
  bundle.n = model.state_dim();
  bundle.m = model.control_dim();
  bundle.s = model.theta_layout().size();
  bundle.horizon = traj.horizon();
  bundle.costates = costates.lambdas;
  bundle.stationarity = costates.stationarity;
  bundle.uu_fallback_regularization = uu_fallback_regularization;

  bundle.hamiltonian.reserve(bundle.horizon);
  bundle.dynamics.reserve(bundle.horizon);
  bundle.dynamics_theta.reserve(bundle.horizon);
  for (int k = 0; k < bundle.horizon; ++k) {
    const auto& x = traj.states[static_cast<size_t>(k)];
    const auto& u = traj.controls[static_cast<size_t>(k)];
    HamiltonianQuadratics ham = model.hamiltonian_quadratics(
        x, u, theta, costates.lambdas[static_cast<size_t>(k) + 1]);
    ham.xx = 0.5 * (ham.xx + ham.xx.transpose()).eval();
    ham.uu = 0.5 * (ham.uu + ham.uu.transpose()).eval();
    bundle.hamiltonian.push_back(std::move(ham));
    bundle.dynamics.push_back(model.dynamics_jacobians(x, u, theta));
    bundle.dynamics_theta.push_back(model.dynamics_theta_jacobian(x, u, theta));
  }

  const FinalQuadratics fq = model.final_quadratics(traj.states.back(), theta);
  bundle.terminal_xx = 0.5 * (fq.xx + fq.xx.transpose());
  bundle.terminal_xtheta = fq.xtheta;
  return bundle;
}

BackwardRecursion backward_recursion(const SensitivityBundle& bundle) {
  const auto start = std::chrono::steady_clock::now();
  const int horizon = bundle.horizon;
  const int n = bundle.n;
  BackwardRecursion out;
  out.V.resize(static_cast<size_t>(horizon) + 1);
  out.W.resize(static_cast<size_t>(horizon) + 1);
  out.A.resize(static_cast<size_t>(horizon));
  out.B.resize(static_cast<size_t>(horizon));
  out.M.resize(static_cast<size_t>(horizon));
  out.uu_llt.resize(static_cast<size_t>(horizon));
  out.ivb_lu.resize(static_cast<size_t>(horizon));

  out.V[static_cast<size_t>(horizon)] = bundle.terminal_xx;
  out.W[static_cast<size_t>(horizon)] = bundle.terminal_xtheta;

  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
  for (int k = horizon - 1; k >= 0; --k) {
    const size_t i = static_cast<size_t>(k);
    const HamiltonianQuadratics& ham = bundle.hamiltonian[i];
    const Eigen::MatrixXd& F = bundle.dynamics[i].F;
    const Eigen::MatrixXd& G = bundle.dynamics[i].G;
    const Eigen::MatrixXd& E = bundle.dynamics_theta[i];

    out.uu_llt[i].compute(ham.uu);
    if (out.uu_llt[i].info() != Eigen::Success) {
      // escalate from the solver's final regularization until factorizable
      double reg = std::max(bundle.uu_fallback_regularization, 1e-8);
      const Eigen::MatrixXd identity_m =
          Eigen::MatrixXd::Identity(bundle.m, bundle.m);
      while (reg <= 1e6) {
        out.uu_llt[i].compute(ham.uu + reg * identity_m);
        if (out.uu_llt[i].info() == Eigen::Success) break;
        reg *= 10.0;
      }
      if (out.uu_llt[i].info() != Eigen::Success) {
        throw std::runtime_error(
            "backward_recursion: H_uu not positive definite");
      }
    }
    const Eigen::MatrixXd uu_inv_ux = out.uu_llt[i].solve(ham.xu.transpose());
    const Eigen::MatrixXd uu_inv_gt = out.uu_llt[i].solve(G.transpose());
    const Eigen::MatrixXd uu_inv_utheta = out.uu_llt[i].solve(ham.utheta);

    out.A[i] = F - G * uu_inv_ux;
    out.B[i] = G * uu_inv_gt;
    out.M[i] = E - G * uu_inv_utheta;
    const Eigen::MatrixXd C = ham.xx - ham.xu * uu_inv_ux;
    const Eigen::MatrixXd N = ham.xtheta - ham.xu * uu_inv_utheta;

    const Eigen::MatrixXd& v_next = out.V[i + 1];
    const Eigen::MatrixXd& w_next = out.W[i + 1];
    out.ivb_lu[i].compute(identity + v_next * out.B[i]);
    if (!out.ivb_lu[i].isInvertible()) {
      throw std::runtime_error("backward_recursion: singular (I + V B)");
    }
    Eigen::MatrixXd v = C + out.A[i].transpose() *
                                out.ivb_lu[i].solve(v_next * out.A[i]);
    out.V[i] = 0.5 * (v + v.transpose());
    out.W[i] = out.A[i].transpose() *
                   out.ivb_lu[i].solve(w_next + v_next * out.M[i]) +
               N;
  }
  out.wall_ms = elapsed_ms(start);
  return out;
}

SensitivitySolution forward_sensitivity(const SensitivityBundle& bundle,
                                        const BackwardRecursion& backward,
                                        int max_steps) {
  const auto start = std::chrono::steady_clock::now();
  const int horizon = bundle.horizon;
  const int steps = (max_steps < 0 || max_steps > horizon) ? horizon : max_steps;

  SensitivitySolution out;
  out.X.resize(static_cast<size_t>(steps) + 1);
  out.U.resize(static_cast<size_t>(steps));
  out.X[0] = Eigen::MatrixXd::Zero(bundle.n, bundle.s);

  for (int k = 0; k < steps; ++k) {
    const size_t i = static_cast<size_t>(k);
    const HamiltonianQuadratics& ham = bundle.hamiltonian[i];
    const Eigen::MatrixXd& F = bundle.dynamics[i].F;
    const Eigen::MatrixXd& G = bundle.dynamics[i].G;
    const Eigen::MatrixXd& E = bundle.dynamics_theta[i];

    const Eigen::MatrixXd gamma = backward.V[i + 1] * (backward.A[i] * out.X[i]) +
                                  backward.V[i + 1] * backward.M[i] +
                                  backward.W[i + 1];
    out.U[i] = -backward.uu_llt[i].solve(
        ham.xu.transpose() * out.X[i] + ham.utheta +
        G.transpose() * backward.ivb_lu[i].solve(gamma));
    out.X[i + 1] = F * out.X[i] + G * out.U[i] + E;
  }
  out.wall_ms = elapsed_ms(start);
  return out;
}

Eigen::MatrixXd residual_jacobian(const SensitivitySolution& sens,
                                  int offset) {
  return -sens.X.at(static_cast<size_t>(offset));
}

}  // namespace goalcast
