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

#include "goalcast/mlp.hpp"

#include <stdexcept>
#include <utility>

#include "goalcast/dual.hpp"
#include "goalcast/quadrotor.hpp"

namespace goalcast {
namespace {

// Input width of the vehicle-sized networks: 13 states + 4 controls. The
// derivative paths are instantiated for this width.
constexpr int kInput = 17;
constexpr int kOutput = 13;

std::vector<int> layer_widths(const MlpArchitecture& arch) {
  std::vector<int> widths = arch.hidden;
  widths.push_back(arch.output_dim);
  return widths;
}

// Parameter offset of each linear layer inside the packed weight vector.
std::vector<int> layer_offsets(const MlpArchitecture& arch) {
  std::vector<int> offsets;
  int offset = 0;
  int in = arch.input_dim;
  for (int out : layer_widths(arch)) {
    offsets.push_back(offset);
    offset += out * (in + 1);
    in = out;
  }
  return offsets;
}

// Forward pass keeping every layer input. activations[l] is the input to
// linear layer l; the network output is returned separately.
template <class S>
std::vector<std::vector<S>> apply_layers(const MlpArchitecture& arch,
                                         const double* w,
                                         std::vector<S> input,
                                         std::vector<S>* output) {
  using std::tanh;
  const std::vector<int> widths = layer_widths(arch);
  std::vector<std::vector<S>> activations;
  activations.reserve(widths.size());
  activations.push_back(std::move(input));
  const double* ptr = w;
  int in = arch.input_dim;
  for (size_t l = 0; l < widths.size(); ++l) {
    const int out = widths[l];
    const bool last = l + 1 == widths.size();
    const double* bias = ptr + out * in;
    std::vector<S> next(static_cast<size_t>(out));
    const std::vector<S>& prev = activations.back();
    for (int i = 0; i < out; ++i) {
      S acc(bias[i]);
      const double* row = ptr + i * in;
      for (int j = 0; j < in; ++j) acc += row[j] * prev[static_cast<size_t>(j)];
      next[static_cast<size_t>(i)] = last ? acc : tanh(acc);
    }
    ptr += out * (in + 1);
    in = out;
    if (last) {
      *output = std::move(next);
    } else {
      activations.push_back(std::move(next));
    }
  }
  return activations;
}

// Gradient of lambda' f with respect to every weight, with the activation
// scalar left generic so the same sweep yields mixed input derivatives when
// run on duals.
template <class S>
void weight_gradient(const MlpArchitecture& arch, const double* w,
                     const std::vector<std::vector<S>>& activations,
                     const Eigen::VectorXd& lambda, std::vector<S>* grad) {
  const std::vector<int> widths = layer_widths(arch);
  const std::vector<int> offsets = layer_offsets(arch);
  grad->assign(static_cast<size_t>(arch.parameter_count()), S(0.0));

  std::vector<S> delta(static_cast<size_t>(arch.output_dim));
  for (int i = 0; i < arch.output_dim; ++i) delta[static_cast<size_t>(i)] = S(lambda(i));

  for (int l = static_cast<int>(widths.size()) - 1; l >= 0; --l) {
    const int out = widths[static_cast<size_t>(l)];
    const int in = l == 0 ? arch.input_dim : widths[static_cast<size_t>(l) - 1];
    const std::vector<S>& prev = activations[static_cast<size_t>(l)];
    const double* wl = w + offsets[static_cast<size_t>(l)];
    S* gw = grad->data() + offsets[static_cast<size_t>(l)];
    for (int i = 0; i < out; ++i) {
      for (int j = 0; j < in; ++j) {
        gw[i * in + j] = delta[static_cast<size_t>(i)] * prev[static_cast<size_t>(j)];
      }
      gw[out * in + i] = delta[static_cast<size_t>(i)];
    }
    if (l > 0) {
      // prev entries are tanh outputs, so sigma' = 1 - prev^2
      std::vector<S> next(static_cast<size_t>(in));
      for (int j = 0; j < in; ++j) {
        S acc(0.0);
        for (int i = 0; i < out; ++i) {
          acc += wl[i * in + j] * delta[static_cast<size_t>(i)];
        }
        const S& a = prev[static_cast<size_t>(j)];
        next[static_cast<size_t>(j)] = acc * (1.0 - a * a);
      }
      delta = std::move(next);
    }
  }
}

// d output / d pre-activation of each linear layer, accumulated backwards.
std::vector<Eigen::MatrixXd> output_jacobians(
    const MlpArchitecture& arch, const double* w,
    const std::vector<std::vector<double>>& activations) {
  const std::vector<int> widths = layer_widths(arch);
  const std::vector<int> offsets = layer_offsets(arch);
  const int layers = static_cast<int>(widths.size());
  std::vector<Eigen::MatrixXd> post(static_cast<size_t>(layers));
  post[static_cast<size_t>(layers) - 1] =
      Eigen::MatrixXd::Identity(arch.output_dim, arch.output_dim);
  for (int l = layers - 1; l > 0; --l) {
    const int out = widths[static_cast<size_t>(l)];
    const int in = widths[static_cast<size_t>(l) - 1];
    const double* wl = w + offsets[static_cast<size_t>(l)];
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic,
                                         Eigen::Dynamic, Eigen::RowMajor>>
        weight(wl, out, in);
    Eigen::MatrixXd prev = post[static_cast<size_t>(l)] * weight;
    const std::vector<double>& act = activations[static_cast<size_t>(l)];
    for (int j = 0; j < in; ++j) {
      prev.col(j) *= 1.0 - act[static_cast<size_t>(j)] * act[static_cast<size_t>(j)];
    }
    post[static_cast<size_t>(l) - 1] = std::move(prev);
  }
  return post;
}

template <class S>
std::vector<S> join_input(const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
  std::vector<S> z(static_cast<size_t>(x.size() + u.size()));
  for (int i = 0; i < x.size(); ++i) z[static_cast<size_t>(i)] = S(x(i));
  for (int i = 0; i < u.size(); ++i) {
    z[static_cast<size_t>(x.size() + i)] = S(u(i));
  }
  return z;
}

}  // namespace

MlpArchitecture MlpArchitecture::quadrotor_sized(int hidden_layers) {
  MlpArchitecture arch;
  arch.input_dim = kInput;
  arch.output_dim = kOutput;
  switch (hidden_layers) {
    case 1:
      arch.hidden = {4 * kInput};
      break;
    case 2:
      arch.hidden = {2 * kInput, 4 * kInput};
      break;
    case 3:
      arch.hidden = {2 * kInput, 4 * kInput, 2 * kInput};
      break;
    default:
      throw std::invalid_argument("quadrotor_sized: 1 to 3 hidden layers");
  }
  return arch;
}

Eigen::VectorXd mlp_step(const MlpArchitecture& arch,
                         const Eigen::VectorXd& weights,
                         const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
  if (weights.size() != arch.parameter_count()) {
    throw std::invalid_argument("mlp_step: weight length mismatch");
  }
  if (x.size() + u.size() != arch.input_dim) {
    throw std::invalid_argument("mlp_step: input length mismatch");
  }
  std::vector<double> out;
  apply_layers<double>(arch, weights.data(), join_input<double>(x, u), &out);
  return Eigen::Map<const Eigen::VectorXd>(out.data(),
                                           static_cast<long>(out.size()));
}

Eigen::VectorXd random_initial_weights(const MlpArchitecture& arch,
                                       double half_range, RngStream& rng) {
  Eigen::VectorXd w(arch.parameter_count());
  for (int i = 0; i < w.size(); ++i) {
    w(i) = rng.uniform(-half_range, half_range);
  }
  return w;
}

MlpModel::MlpModel(MlpArchitecture arch, MlpOptions options)
    : arch_(std::move(arch)), options_(options) {
  if (arch_.input_dim != kInput || arch_.output_dim != kOutput) {
    throw std::invalid_argument(
        "MlpModel: expected the 17-input / 13-output vehicle shape");
  }
  layout_ = ThetaLayout{arch_.parameter_count(), 0, 4, kOutput};
  layout_.floor_dynamics_segment = false;  // weights may be negative
}

Eigen::VectorXd MlpModel::step(const Eigen::VectorXd& x,
                               const Eigen::VectorXd& u,
                               const Eigen::VectorXd& theta) const {
  std::vector<double> out;
  apply_layers<double>(arch_, theta.data(), join_input<double>(x, u), &out);
  return Eigen::Map<const Eigen::VectorXd>(out.data(),
                                           static_cast<long>(out.size()));
}

DynamicsJacobians MlpModel::dynamics_jacobians(
    const Eigen::VectorXd& x, const Eigen::VectorXd& u,
    const Eigen::VectorXd& theta) const {
  std::vector<double> out;
  const auto activations =
      apply_layers<double>(arch_, theta.data(), join_input<double>(x, u), &out);
  const auto post = output_jacobians(arch_, theta.data(), activations);
  const int first_width = layer_widths(arch_).front();
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                       Eigen::RowMajor>>
      w0(theta.data(), first_width, arch_.input_dim);
  Eigen::MatrixXd jac = post.front() * w0;  // n x input
  DynamicsJacobians result;
  result.F = jac.leftCols(kOutput);
  result.G = jac.rightCols(kInput - kOutput);
  return result;
}

Eigen::MatrixXd MlpModel::dynamics_theta_jacobian(
    const Eigen::VectorXd& x, const Eigen::VectorXd& u,
    const Eigen::VectorXd& theta) const {
  std::vector<double> out;
  const auto activations =
      apply_layers<double>(arch_, theta.data(), join_input<double>(x, u), &out);
  const auto post = output_jacobians(arch_, theta.data(), activations);
  const std::vector<int> widths = layer_widths(arch_);
  const std::vector<int> offsets = layer_offsets(arch_);

  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(kOutput, layout_.size());
  int in = arch_.input_dim;
  for (size_t l = 0; l < widths.size(); ++l) {
    const int out_width = widths[l];
    const int base = offsets[l];
    const std::vector<double>& act = activations[l];
    for (int i = 0; i < out_width; ++i) {
      for (int j = 0; j < in; ++j) {
        jac.col(base + i * in + j) = post[l].col(i) * act[static_cast<size_t>(j)];
      }
      jac.col(base + out_width * in + i) = post[l].col(i);
    }
    in = out_width;
  }
  return jac;
}

double MlpModel::running_cost(const Eigen::VectorXd&, const Eigen::VectorXd& u,
                              const Eigen::VectorXd&) const {
  return options_.fixed_running_weight * u.squaredNorm();
}

double MlpModel::final_cost(const Eigen::VectorXd& x,
                            const Eigen::VectorXd& theta) const {
  return standard_final_cost(layout_, x, theta);
}

void MlpModel::running_gradients(const Eigen::VectorXd&,
                                 const Eigen::VectorXd& u,
                                 const Eigen::VectorXd&, Eigen::VectorXd* cx,
                                 Eigen::VectorXd* cu) const {
  *cx = Eigen::VectorXd::Zero(kOutput);
  *cu = 2.0 * options_.fixed_running_weight * u;
}

Eigen::VectorXd MlpModel::final_gradient(const Eigen::VectorXd& x,
                                         const Eigen::VectorXd& theta) const {
  return standard_final_gradient(layout_, x, theta);
}

RunningQuadratics MlpModel::running_quadratics(
    const Eigen::VectorXd&, const Eigen::VectorXd& u,
    const Eigen::VectorXd&) const {
  const int m = control_dim();
  RunningQuadratics out;
  out.value = options_.fixed_running_weight * u.squaredNorm();
  out.x = Eigen::VectorXd::Zero(kOutput);
  out.u = 2.0 * options_.fixed_running_weight * u;
  out.xx = Eigen::MatrixXd::Zero(kOutput, kOutput);
  out.uu = 2.0 * options_.fixed_running_weight *
           Eigen::MatrixXd::Identity(m, m);
  out.xu = Eigen::MatrixXd::Zero(kOutput, m);
  return out;
}

FinalQuadratics MlpModel::final_quadratics(const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& theta) const {
  return standard_final_quadratics(layout_, x, theta);
}

HamiltonianQuadratics MlpModel::hamiltonian_quadratics(
    const Eigen::VectorXd& x, const Eigen::VectorXd& u,
    const Eigen::VectorXd& theta, const Eigen::VectorXd& lambda_next) const {
  using D2 = Dual2<kInput>;
  using D = Dual<kInput>;
  const int m = control_dim();

  // (x, u) blocks from one second-order sweep of lambda' f
  std::vector<D2> z2 = join_input<D2>(x, u);
  for (int i = 0; i < kInput; ++i) z2[static_cast<size_t>(i)].g(i) = 1.0;
  std::vector<D2> out2;
  apply_layers<D2>(arch_, theta.data(), std::move(z2), &out2);
  D2 contracted(0.0);
  for (int i = 0; i < kOutput; ++i) {
    contracted += lambda_next(i) * out2[static_cast<size_t>(i)];
  }

  HamiltonianQuadratics result;
  result.xx = contracted.h.block(0, 0, kOutput, kOutput);
  result.uu = contracted.h.block(kOutput, kOutput, m, m) +
              2.0 * options_.fixed_running_weight *
                  Eigen::MatrixXd::Identity(m, m);
  result.xu = contracted.h.block(0, kOutput, kOutput, m);

  // mixed input/weight block from the weight-gradient sweep on duals
  std::vector<D> z1 = join_input<D>(x, u);
  for (int i = 0; i < kInput; ++i) z1[static_cast<size_t>(i)].d(i) = 1.0;
  std::vector<D> out1;
  const auto activations =
      apply_layers<D>(arch_, theta.data(), std::move(z1), &out1);
  std::vector<D> grad;
  weight_gradient<D>(arch_, theta.data(), activations, lambda_next, &grad);

  result.xtheta = Eigen::MatrixXd::Zero(kOutput, layout_.size());
  result.utheta = Eigen::MatrixXd::Zero(m, layout_.size());
  for (int k = 0; k < layout_.dynamics_dim; ++k) {
    const auto& tangent = grad[static_cast<size_t>(k)].d;
    result.xtheta.col(k) = tangent.segment(0, kOutput);
    result.utheta.col(k) = tangent.segment(kOutput, m);
  }
  return result;
}

}  // namespace goalcast
