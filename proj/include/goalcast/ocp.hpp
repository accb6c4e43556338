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

#ifndef GOALCAST_OCP_HPP_
#define GOALCAST_OCP_HPP_

#include <vector>

#include <Eigen/Core>

#include "goalcast/model.hpp"

namespace goalcast {

// Finite-horizon parametric optimal control problem over time indices
// [start_index, end_index], anchored at initial_state.
struct OcpProblem {
  const Model* model = nullptr;
  Eigen::VectorXd theta;
  Eigen::VectorXd initial_state;
  int start_index = 0;
  int end_index = 0;

  int horizon() const { return end_index - start_index; }
};

struct SolveDiagnostics {
  bool converged = false;
  bool finite = true;
  bool regularization_failed = false;
  int iterations = 0;
  double gradient_norm = 0.0;
  double step_norm = 0.0;
  double regularization = 0.0;  // mu used in the last accepted backward pass
};

// States are rollouts of the controls from the anchor, never free variables,
// so x[k+1] = f(x[k], u[k], theta) holds by construction.
struct Trajectory {
  int start_index = 0;
  std::vector<Eigen::VectorXd> states;    // horizon + 1
  std::vector<Eigen::VectorXd> controls;  // horizon
  double cost = 0.0;
  SolveDiagnostics diagnostics;

  int horizon() const { return static_cast<int>(controls.size()); }
  const Eigen::VectorXd& state_at(int absolute_index) const {
    return states.at(static_cast<size_t>(absolute_index - start_index));
  }
};

// Iterative LQR with Levenberg-style regularization on Quu and backtracking
// line search on the rollout. A solver instance is stateless between calls;
// problems and trajectories are immutable values.
class IlqrSolver {
 public:
  struct Options {
    int max_iterations = 100;
    double gradient_tolerance = 1e-6;
    double mu_init = 1e-6;
    double mu_min = 1e-6;
    double mu_max = 1e6;
    double mu_increase = 10.0;
    double mu_decrease = 3.0;
    int line_search_steps = 11;  // alpha = 1, 1/2, ..., 2^-10
    // Extra full steps after the main loop, accepted on gradient decrease
    // alone. Cost-decrease acceptance cannot certify progress once cost
    // differences fall below double precision, so reference solves that feed
    // finite-difference checks enable a few of these.
    int polish_iterations = 0;
  };

  IlqrSolver() = default;
  explicit IlqrSolver(Options options) : options_(options) {}
  const Options& options() const { return options_; }

  // Solves to local optimality. If warm_start is given its controls seed the
  // iteration (re-anchored and re-rolled as needed). Never throws on
  // numerical failure: inspect Trajectory::diagnostics.
  Trajectory solve(const OcpProblem& problem,
                   const Trajectory* warm_start = nullptr) const;

  // Simulates the given control sequence from the problem anchor.
  static Trajectory rollout(const OcpProblem& problem,
                            const std::vector<Eigen::VectorXd>& controls);

  // Re-anchors a previous solution onto a new problem span: controls inside
  // the previous span are reused, controls beyond it repeat the last one,
  // and the result is re-simulated from the new anchor.
  static Trajectory shift_warm_start(const OcpProblem& new_problem,
                                     const Trajectory& previous);

 private:
  Options options_;
};

}  // namespace goalcast

#endif  // GOALCAST_OCP_HPP_
