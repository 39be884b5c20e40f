/*
 * Copyright 2026 The FedMark Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "support/oracles.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <gmp.h>

namespace fedmark::testing {
namespace {

class Rational {
 public:
  Rational() { mpq_init(v_); }
  explicit Rational(double d) : Rational() { mpq_set_d(v_, d); }
  ~Rational() { mpq_clear(v_); }
  Rational(const Rational&) = delete;
  Rational& operator=(const Rational&) = delete;
  mpq_ptr get() { return v_; }
  mpq_srcptr get() const { return v_; }

 private:
  mpq_t v_;
};

// tail[d] = P[X >= d] for d = 0..n+1, given per-count multiplicities.
void TailFromCounts(const std::vector<unsigned long>& counts, int n, int k,
                    std::vector<Rational>& tail) {
  // P[X = d] = counts[d] * (k - 1)^(n - d) / k^n.
  mpz_t num, kn, pw;
  mpz_inits(num, kn, pw, nullptr);
  mpz_ui_pow_ui(kn, k, n);
  tail = std::vector<Rational>(n + 2);
  mpq_set_ui(tail[n + 1].get(), 0, 1);
  for (int d = n; d >= 0; --d) {
    mpz_ui_pow_ui(pw, k - 1, n - d);
    mpz_mul_ui(num, pw, counts[d]);
    Rational term;
    mpq_set_num(term.get(), num);
    mpq_set_den(term.get(), kn);
    mpq_canonicalize(term.get());
    mpq_add(tail[d].get(), tail[d + 1].get(), term.get());
  }
  mpz_clears(num, kn, pw, nullptr);
}

void TailFromBinomials(int n, int k, std::vector<Rational>& tail) {
  mpz_t num, kn, pw, binom;
  mpz_inits(num, kn, pw, binom, nullptr);
  mpz_ui_pow_ui(kn, k, n);
  tail = std::vector<Rational>(n + 2);
  mpq_set_ui(tail[n + 1].get(), 0, 1);
  for (int d = n; d >= 0; --d) {
    mpz_bin_uiui(binom, n, d);
    mpz_ui_pow_ui(pw, k - 1, n - d);
    mpz_mul(num, pw, binom);
    Rational term;
    mpq_set_num(term.get(), num);
    mpq_set_den(term.get(), kn);
    mpq_canonicalize(term.get());
    mpq_add(tail[d].get(), tail[d + 1].get(), term.get());
  }
  mpz_clears(num, kn, pw, binom, nullptr);
}

int FirstAtMost(const std::vector<Rational>& tail, int n, double epsilon) {
  Rational eps(epsilon);
  for (int d = 1; d <= n; ++d) {
    if (mpq_cmp(tail[d].get(), eps.get()) <= 0) return d;
  }
  return -1;
}

}  // namespace

int BruteForceMinCorrect(int n, int k, double epsilon) {
  if (n < 1 || n > 24) throw std::invalid_argument("enumeration supports 1 <= n <= 24");
  std::vector<unsigned long> counts(n + 1, 0);
  const std::uint32_t patterns = 1u << n;
  for (std::uint32_t mask = 0; mask < patterns; ++mask) ++counts[std::popcount(mask)];
  std::vector<Rational> tail;
  TailFromCounts(counts, n, k, tail);
  return FirstAtMost(tail, n, epsilon);
}

int ExactMinCorrect(int n, int k, double epsilon) {
  std::vector<Rational> tail;
  TailFromBinomials(n, k, tail);
  return FirstAtMost(tail, n, epsilon);
}

double ExactUpperTail(int n, int d, int k) {
  std::vector<Rational> tail;
  TailFromBinomials(n, k, tail);
  return mpq_get_d(tail[std::clamp(d, 0, n + 1)].get());
}

std::string FactorialKeyspace(int k, int m) {
  mpz_t fm, fk, fmk, result;
  mpz_inits(fm, fk, fmk, result, nullptr);
  mpz_fac_ui(fm, m);
  mpz_fac_ui(fk, k);
  mpz_fac_ui(fmk, m - k);
  mpz_mul(result, fm, fk);
  mpz_divexact(result, result, fmk);
  char* text = mpz_get_str(nullptr, 10, result);
  std::string out(text);
  void (*freefunc)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefunc);
  freefunc(text, out.size() + 1);
  mpz_clears(fm, fk, fmk, result, nullptr);
  return out;
}

std::uint64_t EnumeratedKeyspace(int k, int m) {
  std::uint64_t arrangements = 0;
  std::vector<int> cells(k, 0);
  // Odometer over all k-tuples of cells, keeping those with distinct entries.
  while (true) {
    std::vector<int> sorted = cells;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) ++arrangements;
    int pos = k - 1;
    while (pos >= 0 && ++cells[pos] == m) cells[pos--] = 0;
    if (pos < 0) break;
  }
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t perms = 0;
  do {
    ++perms;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return arrangements * perms;
}

std::vector<double> NaiveLogits(const nn::ModelParams& model, std::span<const float> image) {
  std::vector<double> act(image.begin(), image.end());
  for (const auto& p : model.arch.plan()) {
    const float* w = model.values.data() + p.offset;
    const float* b = w + p.weights;
    std::vector<double> next(p.out.pixels(), 0.0);
    switch (p.spec.kind) {
      case nn::LayerKind::kConv:
        for (int co = 0; co < p.out.channels; ++co) {
          for (int oy = 0; oy < p.out.height; ++oy) {
            for (int ox = 0; ox < p.out.width; ++ox) {
              double s = b[co];
              for (int ci = 0; ci < p.in.channels; ++ci) {
                for (int ky = 0; ky < p.spec.kernel; ++ky) {
                  for (int kx = 0; kx < p.spec.kernel; ++kx) {
                    const int y = oy * p.spec.stride + ky;
                    const int x = ox * p.spec.stride + kx;
                    s += w[((co * p.in.channels + ci) * p.spec.kernel + ky) * p.spec.kernel + kx] *
                         act[(ci * p.in.height + y) * p.in.width + x];
                  }
                }
              }
              next[(co * p.out.height + oy) * p.out.width + ox] = s;
            }
          }
        }
        break;
      case nn::LayerKind::kDense: {
        const std::size_t fan_in = p.in.pixels();
        for (int o = 0; o < p.out.channels; ++o) {
          double s = b[o];
          for (std::size_t i = 0; i < fan_in; ++i) s += w[o * fan_in + i] * act[i];
          next[o] = s;
        }
        break;
      }
      case nn::LayerKind::kMaxPool: {
        const int win = p.spec.size;
        for (int c = 0; c < p.out.channels; ++c) {
          for (int oy = 0; oy < p.out.height; ++oy) {
            for (int ox = 0; ox < p.out.width; ++ox) {
              double best = -INFINITY;
              for (int dy = 0; dy < win; ++dy) {
                for (int dx = 0; dx < win; ++dx) {
                  best = std::max(
                      best, act[(c * p.in.height + oy * win + dy) * p.in.width + ox * win + dx]);
                }
              }
              next[(c * p.out.height + oy) * p.out.width + ox] = best;
            }
          }
        }
        break;
      }
      case nn::LayerKind::kRelu:
        for (std::size_t i = 0; i < act.size(); ++i) next[i] = std::max(0.0, act[i]);
        break;
    }
    act = std::move(next);
  }
  return act;
}

}  // namespace fedmark::testing
