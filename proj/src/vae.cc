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

#include "fedmon/vae.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "fedmon/random.h"

namespace fedmon {
namespace {

// Activations kept from a forward pass for the backward pass.
struct Cache {
  std::vector<double> hidden;  // H, tanh
  std::vector<double> head;    // 2L: mu then logvar
  std::vector<double> z;       // L
  std::vector<double> dec;     // H, tanh
  std::vector<double> recon;   // D
};

// out[r] = b[r] + sum_c w[r * cols + c] * in[c]
void Affine(const double* w, const double* b, const double* in, int rows,
            int cols, double* out) {
  for (int r = 0; r < rows; ++r) {
    const double* row = w + static_cast<int64_t>(r) * cols;
    double acc = b[r];
    for (int c = 0; c < cols; ++c) acc += row[c] * in[c];
    out[r] = acc;
  }
}

void Forward(const VaeParams& params, const double* x, const double* eps,
             Cache& cache) {
  const VaeShape& s = params.shape();
  const VaeLayout& o = params.layout();
  const double* p = params.flat().data();
  const int D = s.input_dim, H = s.hidden_dim, L = s.latent_dim;
  cache.hidden.resize(H);
  cache.head.resize(2 * L);
  cache.z.resize(L);
  cache.dec.resize(H);
  cache.recon.resize(D);

  Affine(p + o.enc_w, p + o.enc_b, x, H, D, cache.hidden.data());
  for (double& h : cache.hidden) h = std::tanh(h);
  Affine(p + o.head_w, p + o.head_b, cache.hidden.data(), 2 * L, H,
         cache.head.data());
  for (int l = 0; l < L; ++l) {
    const double e = eps == nullptr ? 0.0 : eps[l];
    cache.z[l] = cache.head[l] + std::exp(0.5 * cache.head[L + l]) * e;
  }
  Affine(p + o.dec_w, p + o.dec_b, cache.z.data(), H, L, cache.dec.data());
  for (double& g : cache.dec) g = std::tanh(g);
  Affine(p + o.out_w, p + o.out_b, cache.dec.data(), D, H, cache.recon.data());
}

// Accumulates scale * d(loss of one sample)/d(params) into grad and returns
// the sample's loss.
double Backward(const VaeParams& params, const double* x, const double* eps,
                double beta, double scale, const Cache& cache, double* grad) {
  const VaeShape& s = params.shape();
  const VaeLayout& o = params.layout();
  const double* p = params.flat().data();
  const int D = s.input_dim, H = s.hidden_dim, L = s.latent_dim;

  std::vector<double> d_recon(D), d_dec(H, 0.0), d_z(L, 0.0), d_head(2 * L),
      d_hidden(H, 0.0);

  double recon_loss = 0.0;
  for (int d = 0; d < D; ++d) {
    const double diff = cache.recon[d] - x[d];
    recon_loss += diff * diff;
    d_recon[d] = 2.0 * diff * scale;
  }
  double kl = 0.0;
  for (int l = 0; l < L; ++l) {
    const double mu = cache.head[l], lv = cache.head[L + l];
    kl += 0.5 * (std::exp(lv) + mu * mu - 1.0 - lv);
  }

  // Output layer.
  for (int d = 0; d < D; ++d) {
    const double g = d_recon[d];
    double* gw = grad + o.out_w + static_cast<int64_t>(d) * H;
    const double* w = p + o.out_w + static_cast<int64_t>(d) * H;
    for (int h = 0; h < H; ++h) {
      gw[h] += g * cache.dec[h];
      d_dec[h] += w[h] * g;
    }
    grad[o.out_b + d] += g;
  }
  // Decoder hidden layer.
  for (int h = 0; h < H; ++h) {
    const double a = d_dec[h] * (1.0 - cache.dec[h] * cache.dec[h]);
    double* gw = grad + o.dec_w + static_cast<int64_t>(h) * L;
    const double* w = p + o.dec_w + static_cast<int64_t>(h) * L;
    for (int l = 0; l < L; ++l) {
      gw[l] += a * cache.z[l];
      d_z[l] += w[l] * a;
    }
    grad[o.dec_b + h] += a;
  }
  // Reparameterization and KL.
  for (int l = 0; l < L; ++l) {
    const double mu = cache.head[l], lv = cache.head[L + l];
    const double e = eps == nullptr ? 0.0 : eps[l];
    d_head[l] = d_z[l] + beta * scale * mu;
    d_head[L + l] = d_z[l] * e * 0.5 * std::exp(0.5 * lv) +
                    beta * scale * 0.5 * (std::exp(lv) - 1.0);
  }
  // Encoder head.
  for (int k = 0; k < 2 * L; ++k) {
    const double g = d_head[k];
    double* gw = grad + o.head_w + static_cast<int64_t>(k) * H;
    const double* w = p + o.head_w + static_cast<int64_t>(k) * H;
    for (int h = 0; h < H; ++h) {
      gw[h] += g * cache.hidden[h];
      d_hidden[h] += w[h] * g;
    }
    grad[o.head_b + k] += g;
  }
  // Encoder hidden layer.
  for (int h = 0; h < H; ++h) {
    const double a = d_hidden[h] * (1.0 - cache.hidden[h] * cache.hidden[h]);
    double* gw = grad + o.enc_w + static_cast<int64_t>(h) * D;
    for (int d = 0; d < D; ++d) gw[d] += a * x[d];
    grad[o.enc_b + h] += a;
  }
  return recon_loss + beta * kl;
}

absl::Status CheckInput(const VaeParams& params, std::span<const double> x,
                        std::span<const double> eps) {
  if (static_cast<int>(x.size()) != params.shape().input_dim) {
    return absl::InvalidArgumentError(absl::StrCat(
        "input has dimension ", x.size(), ", model expects ",
        params.shape().input_dim));
  }
  if (static_cast<int>(eps.size()) != params.shape().latent_dim) {
    return absl::InvalidArgumentError(absl::StrCat(
        "noise has dimension ", eps.size(), ", model expects ",
        params.shape().latent_dim));
  }
  return absl::OkStatus();
}

}  // namespace

int64_t VaeShape::ParamCount() const { return VaeLayout::For(*this).total; }

VaeLayout VaeLayout::For(const VaeShape& s) {
  const int64_t D = s.input_dim, H = s.hidden_dim, L = s.latent_dim;
  VaeLayout o{};
  o.enc_w = 0;
  o.enc_b = o.enc_w + H * D;
  o.head_w = o.enc_b + H;
  o.head_b = o.head_w + 2 * L * H;
  o.dec_w = o.head_b + 2 * L;
  o.dec_b = o.dec_w + H * L;
  o.out_w = o.dec_b + H;
  o.out_b = o.out_w + D * H;
  o.total = o.out_b + D;
  return o;
}

absl::Status ValidateShape(const VaeShape& shape) {
  if (shape.input_dim <= 0 || shape.hidden_dim <= 0 || shape.latent_dim <= 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "VAE dimensions must be positive (D=", shape.input_dim,
        ", H=", shape.hidden_dim, ", L=", shape.latent_dim, ")"));
  }
  return absl::OkStatus();
}

VaeParams::VaeParams(const VaeShape& shape, std::vector<double> flat)
    : shape_(shape), layout_(VaeLayout::For(shape)), flat_(std::move(flat)) {}

VaeParams VaeParams::Zeros(const VaeShape& shape) {
  return VaeParams(shape, std::vector<double>(VaeLayout::For(shape).total, 0.0));
}

VaeParams VaeParams::Initialize(const VaeShape& shape, uint64_t seed) {
  VaeParams params = Zeros(shape);
  RandomStream rng(seed);
  const VaeLayout& o = params.layout_;
  auto fill = [&](int64_t offset, int64_t fan_out, int64_t fan_in) {
    const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (int64_t i = 0; i < fan_out * fan_in; ++i) {
      params.flat_[offset + i] = (2.0 * rng.Uniform() - 1.0) * a;
    }
  };
  fill(o.enc_w, shape.hidden_dim, shape.input_dim);
  fill(o.head_w, 2 * shape.latent_dim, shape.hidden_dim);
  fill(o.dec_w, shape.hidden_dim, shape.latent_dim);
  fill(o.out_w, shape.input_dim, shape.hidden_dim);
  return params;
}

absl::StatusOr<VaeParams> VaeParams::FromFlat(const VaeShape& shape,
                                              std::vector<double> flat) {
  if (absl::Status s = ValidateShape(shape); !s.ok()) return s;
  const int64_t expected = shape.ParamCount();
  if (static_cast<int64_t>(flat.size()) != expected) {
    return absl::InvalidArgumentError(absl::StrCat(
        "flat parameter vector has ", flat.size(), " entries, shape needs ",
        expected));
  }
  return VaeParams(shape, std::move(flat));
}

bool VaeParams::AllFinite() const {
  return std::all_of(flat_.begin(), flat_.end(),
                     [](double v) { return std::isfinite(v); });
}

absl::StatusOr<VaeOutput> VaeForward(const VaeParams& params,
                                     std::span<const double> x,
                                     std::span<const double> eps) {
  if (absl::Status s = CheckInput(params, x, eps); !s.ok()) return s;
  Cache cache;
  Forward(params, x.data(), eps.data(), cache);
  const int L = params.shape().latent_dim;
  VaeOutput out;
  out.reconstruction = std::move(cache.recon);
  out.mu.assign(cache.head.begin(), cache.head.begin() + L);
  out.logvar.assign(cache.head.begin() + L, cache.head.end());
  out.z = std::move(cache.z);
  return out;
}

ElboTerms ElboLoss(std::span<const double> x,
                   std::span<const double> reconstruction,
                   std::span<const double> mu, std::span<const double> logvar,
                   double beta) {
  ElboTerms t;
  for (size_t d = 0; d < x.size(); ++d) {
    const double diff = reconstruction[d] - x[d];
    t.reconstruction += diff * diff;
  }
  for (size_t l = 0; l < mu.size(); ++l) {
    t.kl += 0.5 * (std::exp(logvar[l]) + mu[l] * mu[l] - 1.0 - logvar[l]);
  }
  // Each KL summand is >= 0 analytically; clamp rounding noise.
  t.kl = std::max(t.kl, 0.0);
  t.total = t.reconstruction + beta * t.kl;
  return t;
}

absl::StatusOr<double> VaeLossAndGradient(
    const VaeParams& params, std::span<const std::vector<double>> rows,
    std::span<const std::vector<double>> eps, double beta,
    std::span<double> grad) {
  if (rows.empty()) return absl::InvalidArgumentError("empty batch");
  if (rows.size() != eps.size()) {
    return absl::InvalidArgumentError("one noise vector per row required");
  }
  if (static_cast<int64_t>(grad.size()) != params.layout().total) {
    return absl::InvalidArgumentError("gradient buffer has the wrong length");
  }
  std::fill(grad.begin(), grad.end(), 0.0);
  const double scale = 1.0 / static_cast<double>(rows.size());
  Cache cache;
  double loss = 0.0;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (absl::Status s = CheckInput(params, rows[i], eps[i]); !s.ok()) return s;
    Forward(params, rows[i].data(), eps[i].data(), cache);
    loss += Backward(params, rows[i].data(), eps[i].data(), beta, scale, cache,
                     grad.data());
  }
  return loss * scale;
}

absl::StatusOr<EpochResult> VaeTrainEpoch(
    const VaeParams& params, std::span<const std::vector<double>> rows,
    const TrainOptions& options, uint64_t seed, AdamState* state) {
  if (rows.empty()) return absl::InvalidArgumentError("empty training batch");
  if (options.batch_size <= 0) {
    return absl::InvalidArgumentError("batch_size must be positive");
  }
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kAdamEps = 1e-8;

  AdamState local;
  AdamState& adam = state != nullptr ? *state : local;
  const int64_t P = params.layout().total;
  if (static_cast<int64_t>(adam.m.size()) != P) {
    adam.m.assign(P, 0.0);
    adam.v.assign(P, 0.0);
    adam.step = 0;
  }

  RandomStream rng(seed);
  std::vector<size_t> order(rows.size());
  std::iota(order.begin(), order.end(), size_t{0});
  for (size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.UniformInt(i)]);
  }

  EpochResult result{params, 0.0};
  const int L = params.shape().latent_dim;
  std::vector<double> grad(P);
  std::vector<std::vector<double>> batch, noise;
  double loss_sum = 0.0;
  int64_t local_step = 0;
  for (size_t begin = 0; begin < order.size();
       begin += static_cast<size_t>(options.batch_size)) {
    const size_t end =
        std::min(order.size(), begin + static_cast<size_t>(options.batch_size));
    batch.clear();
    noise.clear();
    for (size_t i = begin; i < end; ++i) {
      batch.push_back(rows[order[i]]);
      std::vector<double> e(L);
      for (double& v : e) v = rng.Gaussian();
      noise.push_back(std::move(e));
    }
    absl::StatusOr<double> loss =
        VaeLossAndGradient(result.params, batch, noise, options.beta, grad);
    if (!loss.ok()) return loss.status();
    if (!std::isfinite(*loss)) {
      return absl::InternalError(absl::StrCat(
          "non-finite training loss at step ", local_step, " (batch starting at ",
          begin, ")"));
    }
    loss_sum += *loss * static_cast<double>(end - begin);
    ++local_step;

    if (options.learning_rate != 0.0) {
      ++adam.step;
      const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(adam.step));
      const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(adam.step));
      std::span<double> theta = result.params.mutable_flat();
      for (int64_t k = 0; k < P; ++k) {
        adam.m[k] = kBeta1 * adam.m[k] + (1.0 - kBeta1) * grad[k];
        adam.v[k] = kBeta2 * adam.v[k] + (1.0 - kBeta2) * grad[k] * grad[k];
        theta[k] -= options.learning_rate * (adam.m[k] / c1) /
                    (std::sqrt(adam.v[k] / c2) + kAdamEps);
      }
    }
  }
  result.mean_loss = loss_sum / static_cast<double>(rows.size());
  return result;
}

absl::StatusOr<std::vector<double>> VaeEmbed(const VaeParams& params,
                                             std::span<const double> x) {
  if (static_cast<int>(x.size()) != params.shape().input_dim) {
    return absl::InvalidArgumentError("input dimension mismatch");
  }
  Cache cache;
  Forward(params, x.data(), nullptr, cache);
  return std::vector<double>(cache.head.begin(),
                             cache.head.begin() + params.shape().latent_dim);
}

absl::StatusOr<double> ReconstructionMse(const VaeParams& params,
                                         std::span<const double> x,
                                         int n_eval_samples, uint64_t seed) {
  if (static_cast<int>(x.size()) != params.shape().input_dim) {
    return absl::InvalidArgumentError("input dimension mismatch");
  }
  if (n_eval_samples < 1) {
    return absl::InvalidArgumentError("n_eval_samples must be at least 1");
  }
  Cache cache;
  auto mse_of = [&](const double* eps) {
    Forward(params, x.data(), eps, cache);
    double ss = 0.0;
    for (size_t d = 0; d < x.size(); ++d) {
      const double diff = cache.recon[d] - x[d];
      ss += diff * diff;
    }
    return ss / static_cast<double>(x.size());
  };
  if (n_eval_samples == 1) return mse_of(nullptr);
  RandomStream rng(seed);
  std::vector<double> eps(params.shape().latent_dim);
  double total = 0.0;
  for (int s = 0; s < n_eval_samples; ++s) {
    for (double& e : eps) e = rng.Gaussian();
    total += mse_of(eps.data());
  }
  return total / n_eval_samples;
}

double ReconScoreFromMse(double mse, double temperature) {
  if (std::isnan(mse)) return 1.0;
  return -std::expm1(-std::max(mse, 0.0) / temperature);
}

absl::StatusOr<double> ReconScore(const VaeParams& params,
                                  std::span<const double> x, double temperature,
                                  int n_eval_samples, uint64_t seed) {
  if (!(temperature > 0.0)) {
    return absl::InvalidArgumentError("temperature must be positive");
  }
  absl::StatusOr<double> mse = ReconstructionMse(params, x, n_eval_samples, seed);
  if (!mse.ok()) return mse.status();
  return ReconScoreFromMse(*mse, temperature);
}

}  // namespace fedmon
