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

#ifndef GOALCAST_CHECKS_HPP_
#define GOALCAST_CHECKS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "goalcast/lq.hpp"

namespace goalcast {

// Closed-form optimum of a linear-quadratic instance via the stacked
// least-squares system, together with its analytic parameter sensitivities.
// Independent of the iterative solver and of the sensitivity recursions it
// is used to check.
struct LqClosedForm {
  Eigen::VectorXd stacked_controls;         // m * horizon
  Eigen::VectorXd final_state;              // n
  double cost = 0.0;
  Eigen::MatrixXd control_sensitivity;      // (m * horizon) x s
  Eigen::MatrixXd final_state_sensitivity;  // n x s
};

LqClosedForm lq_closed_form(const LinearQuadraticModel& model,
                            const Eigen::VectorXd& theta,
                            const Eigen::VectorXd& initial_state, int horizon);

struct LqOracleReport {
  double scalar_solve_error = 0.0;
  double scalar_sensitivity_error = 0.0;
  double two_state_solve_error = 0.0;
  double two_state_sensitivity_error = 0.0;
  bool pass = false;

  std::string summary() const;
};

// Solves scalar and two-state instances with the trajectory solver and
// differentiates them with the sensitivity recursions, comparing both
// against the closed form. pass requires every error below 1e-6.
LqOracleReport run_lq_oracle_check();

struct GradientCheckReport {
  int instances = 0;
  std::vector<double> per_instance_error;
  double max_error = 0.0;  // corrected relative error, absolute floor 1e-6
  double seconds = 0.0;
  bool pass = false;  // max_error < 1e-3

  std::string summary() const;
};

// Compares the sensitivity recursions against central finite differences of
// re-solved trajectory optimizations on seeded vehicle instances.
GradientCheckReport run_pdp_gradient_check(int instances = 5,
                                           int max_horizon = 15,
                                           std::uint64_t seed = 1);

}  // namespace goalcast

#endif  // GOALCAST_CHECKS_HPP_
