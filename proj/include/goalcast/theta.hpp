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

#ifndef GOALCAST_THETA_HPP_
#define GOALCAST_THETA_HPP_

#include <stdexcept>

#include <Eigen/Core>

namespace goalcast {

// Lower bound applied to dynamics and objective parameters. The goal segment
// is never clamped.
inline constexpr double kParameterFloor = 1e-8;

// Layout of the stacked parameter vector theta = [dynamics params, running
// cost weights, final cost weights, goal state]. The running segment may be
// empty (fixed running weights identified nowhere).
struct ThetaLayout {
  int dynamics_dim = 0;
  int running_dim = 0;
  int final_dim = 0;
  int goal_dim = 0;
  // Physical dynamics parameters are floored; network weights are not, so a
  // learned-dynamics model clears this.
  bool floor_dynamics_segment = true;

  int size() const { return dynamics_dim + running_dim + final_dim + goal_dim; }
  int dynamics_offset() const { return 0; }
  int running_offset() const { return dynamics_dim; }
  int final_offset() const { return dynamics_dim + running_dim; }
  int goal_offset() const { return dynamics_dim + running_dim + final_dim; }
  // Entry range [floor_begin, floor_end) subject to the parameter floor.
  int floor_begin() const { return floor_dynamics_segment ? 0 : dynamics_dim; }
  int floor_end() const { return goal_offset(); }
};

inline Eigen::VectorXd pack_theta(const Eigen::VectorXd& dynamics,
                                  const Eigen::VectorXd& running,
                                  const Eigen::VectorXd& final_weights,
                                  const Eigen::VectorXd& goal) {
  Eigen::VectorXd theta(dynamics.size() + running.size() +
                        final_weights.size() + goal.size());
  theta << dynamics, running, final_weights, goal;
  return theta;
}

struct ThetaView {
  Eigen::VectorXd dynamics;
  Eigen::VectorXd running;
  Eigen::VectorXd final_weights;
  Eigen::VectorXd goal;
};

inline ThetaView unpack_theta(const ThetaLayout& layout,
                              const Eigen::VectorXd& theta) {
  if (theta.size() != layout.size()) {
    throw std::invalid_argument("unpack_theta: length mismatch");
  }
  return ThetaView{
      theta.segment(layout.dynamics_offset(), layout.dynamics_dim),
      theta.segment(layout.running_offset(), layout.running_dim),
      theta.segment(layout.final_offset(), layout.final_dim),
      theta.segment(layout.goal_offset(), layout.goal_dim)};
}

inline Eigen::VectorXd extract_goal(const ThetaLayout& layout,
                                    const Eigen::VectorXd& theta) {
  if (theta.size() != layout.size()) {
    throw std::invalid_argument("extract_goal: length mismatch");
  }
  return theta.segment(layout.goal_offset(), layout.goal_dim);
}

// Floors the dynamics/objective segments at kParameterFloor; the goal
// segment passes through untouched.
inline Eigen::VectorXd clamp_floors(const ThetaLayout& layout,
                                    Eigen::VectorXd theta) {
  for (int i = layout.floor_begin(); i < layout.floor_end(); ++i) {
    if (theta(i) < kParameterFloor) theta(i) = kParameterFloor;
  }
  return theta;
}

}  // namespace goalcast

#endif  // GOALCAST_THETA_HPP_
