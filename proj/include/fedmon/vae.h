//
// Copyright 2026 The FedMon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef FEDMON_VAE_H_
#define FEDMON_VAE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace fedmon {

// Encoder D -> H (tanh) -> 2L (linear; first L outputs are the mean, last L
// the log-variance). Decoder L -> H (tanh) -> D (linear).
struct VaeShape {
  int input_dim = 0;
  int hidden_dim = 32;
  int latent_dim = 8;

  int64_t ParamCount() const;
  bool operator==(const VaeShape&) const = default;
};

// Parameter block offsets inside the flat vector, in storage order.
// Weight matrices are row-major with one row per output unit.
struct VaeLayout {
  int64_t enc_w, enc_b, head_w, head_b, dec_w, dec_b, out_w, out_b, total;
  static VaeLayout For(const VaeShape& shape);
};

class VaeParams {
 public:
  static VaeParams Zeros(const VaeShape& shape);
  // Glorot-uniform weights, zero biases.
  static VaeParams Initialize(const VaeShape& shape, uint64_t seed);
  static absl::StatusOr<VaeParams> FromFlat(const VaeShape& shape,
                                            std::vector<double> flat);

  const VaeShape& shape() const { return shape_; }
  const VaeLayout& layout() const { return layout_; }
  std::span<const double> flat() const { return flat_; }
  std::span<double> mutable_flat() { return flat_; }
  std::vector<double> Flatten() const { return flat_; }

  bool AllFinite() const;
  bool operator==(const VaeParams& other) const {
    return shape_ == other.shape_ && flat_ == other.flat_;
  }

 private:
  VaeParams(const VaeShape& shape, std::vector<double> flat);

  VaeShape shape_;
  VaeLayout layout_;
  std::vector<double> flat_;
};

absl::Status ValidateShape(const VaeShape& shape);

struct VaeOutput {
  std::vector<double> reconstruction;
  std::vector<double> mu;
  std::vector<double> logvar;
  std::vector<double> z;  // mu + exp(logvar / 2) * eps
};

absl::StatusOr<VaeOutput> VaeForward(const VaeParams& params,
                                     std::span<const double> x,
                                     std::span<const double> eps);

struct ElboTerms {
  double reconstruction = 0.0;  // sum over features of squared error
  double kl = 0.0;              // KL(N(mu, exp(logvar)) || N(0, I))
  double total = 0.0;           // reconstruction + beta * kl
};

ElboTerms ElboLoss(std::span<const double> x,
                   std::span<const double> reconstruction,
                   std::span<const double> mu, std::span<const double> logvar,
                   double beta);

// Mean ELBO loss over `rows` with fixed noise `eps` (one vector per row) and
// its exact gradient with respect to the flat parameters, written to `grad`.
absl::StatusOr<double> VaeLossAndGradient(
    const VaeParams& params, std::span<const std::vector<double>> rows,
    std::span<const std::vector<double>> eps, double beta,
    std::span<double> grad);

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  int64_t step = 0;
};

struct TrainOptions {
  double learning_rate = 1e-3;
  double beta = 1.0;
  int batch_size = 32;
};

struct EpochResult {
  VaeParams params;
  double mean_loss = 0.0;
};

// One pass over `rows` in seeded shuffled mini-batches, Adam updates
// (beta1 = 0.9, beta2 = 0.999, eps = 1e-8). Latent noise is drawn from the
// same seeded stream. Pass `state` to carry Adam moments across epochs; when
// null a fresh state is used. A non-finite loss aborts with the step index.
absl::StatusOr<EpochResult> VaeTrainEpoch(
    const VaeParams& params, std::span<const std::vector<double>> rows,
    const TrainOptions& options, uint64_t seed, AdamState* state = nullptr);

// Latent mean of x (the deterministic embedding).
absl::StatusOr<std::vector<double>> VaeEmbed(const VaeParams& params,
                                             std::span<const double> x);

// Mean squared reconstruction error over the D features. With
// n_eval_samples == 1 the latent is its mean (eps = 0); more samples average
// the error over seeded draws.
absl::StatusOr<double> ReconstructionMse(const VaeParams& params,
                                         std::span<const double> x,
                                         int n_eval_samples = 1,
                                         uint64_t seed = 0);

// 1 - exp(-mse / temperature).
double ReconScoreFromMse(double mse, double temperature);

absl::StatusOr<double> ReconScore(const VaeParams& params,
                                  std::span<const double> x,
                                  double temperature, int n_eval_samples = 1,
                                  uint64_t seed = 0);

}  // namespace fedmon

#endif  // FEDMON_VAE_H_
