/* Copyright 2026 The clinaug Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "clinaug/gan.hpp"

#include "clinaug/errors.hpp"

namespace clinaug {

torch::Tensor interpolate(const torch::Tensor& real, const torch::Tensor& fake,
                          const torch::Tensor& eps) {
  if (real.sizes() != fake.sizes()) throw Error("interpolate: real and fake shapes differ");
  if (eps.dim() != 1 || eps.size(0) != real.size(0)) {
    throw Error("interpolate: expected one eps per sample");
  }
  std::vector<std::int64_t> shape(static_cast<std::size_t>(real.dim()), 1);
  shape[0] = real.size(0);
  const auto e = eps.to(real.dtype()).view(shape);
  return e * real + (1 - e) * fake;
}

torch::Tensor gradient_penalty(const CriticFn& critic, const torch::Tensor& x_hat,
                               const torch::Tensor& labels, double weight) {
  auto x = x_hat.detach().requires_grad_(true);
  const auto scores = critic(x, labels);
  torch::Tensor grads;
  if (scores.requires_grad()) {
    grads = torch::autograd::grad({scores.sum()}, {x}, /*grad_outputs=*/{},
                                  /*retain_graph=*/true, /*create_graph=*/true,
                                  /*allow_unused=*/true)[0];
  }
  // A critic independent of its input has zero gradient.
  if (!grads.defined()) grads = torch::zeros_like(x);
  const auto norms = grads.flatten(1).norm(2, 1);
  const auto penalty = weight * (norms - 1).pow(2).mean();
  if (!torch::isfinite(penalty).item<bool>()) throw Error("gradient penalty is not finite");
  return penalty;
}

torch::Tensor critic_loss(const torch::Tensor& d_real, const torch::Tensor& d_fake,
                          const torch::Tensor& gp) {
  if (d_real.numel() == 0 || d_fake.numel() == 0) throw Error("critic_loss: empty batch");
  return d_fake.mean() - d_real.mean() + gp;
}

torch::Tensor generator_loss(const torch::Tensor& d_fake) {
  if (d_fake.numel() == 0) throw Error("generator_loss: empty batch");
  return -d_fake.mean();
}

}  // namespace clinaug
