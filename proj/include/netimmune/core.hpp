// Copyright 2026 The Authors.
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

// Shared vocabulary: ids, the error type, the counter-based RNG and the
// deterministic chunked parallel loop used by every estimator.

#ifndef NETIMMUNE_CORE_HPP_
#define NETIMMUNE_CORE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace netimmune {

using NodeId = std::uint32_t;
using GroupId = std::uint32_t;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class ErrorKind {
  kInvalidProbability,
  kConfig,
  kParse,
  kBudget,
  kThreshold,
  kSizeCap,
  kDomain,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// SplitMix64 finalizer. Used both as the stream generator and to derive
// independent stream keys from (seed, index, ...) tuples.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed) noexcept {
  return mix64(seed);
}

template <typename... Rest>
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t next,
                                    Rest... rest) noexcept {
  return derive_seed(mix64(seed) ^ (next * 0xd1342543de82ef95ULL + 1), rest...);
}

// Counter-based stream: the i-th output is a pure function of (key, i), so a
// replicate's draws never depend on scheduling.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t key) noexcept : key_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    return mix64(key_ + 0x632be59bd9b4e019ULL * ++counter_);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  // Bernoulli(p); p = 1 always succeeds and p = 0 never does.
  bool coin(double p) noexcept { return uniform() < p; }

  // Uniform integer in [0, bound) by rejection, identical on every platform.
  std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t x;
    do {
      x = (*this)();
    } while (x >= limit);
    return x % bound;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Runs fn(begin, end, chunk_index) over fixed-size chunks of [0, count).
// Chunk boundaries depend only on count and chunk_size, never on the thread
// count, so per-chunk results reduced in chunk order are bit-stable.
template <typename Fn>
void for_each_chunk(std::size_t count, std::size_t chunk_size,
                    unsigned threads, Fn&& fn) {
  if (count == 0) return;
  chunk_size = std::max<std::size_t>(chunk_size, 1);
  const std::size_t chunks = (count + chunk_size - 1) / chunk_size;
  auto run = [&](std::size_t c) {
    const std::size_t begin = c * chunk_size;
    fn(begin, std::min(count, begin + chunk_size), c);
  };
  if (threads <= 1 || chunks == 1) {
    for (std::size_t c = 0; c < chunks; ++c) run(c);
    return;
  }
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(threads, chunks));
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t c = w; c < chunks; c += workers) run(c);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Welford accumulator with Chan's pairwise merge; merged in a fixed order.
struct Moments {
  double mean_value = 0.0;
  double m2 = 0.0;
  std::size_t count = 0;

  void add(double x) noexcept {
    ++count;
    const double delta = x - mean_value;
    mean_value += delta / static_cast<double>(count);
    m2 += delta * (x - mean_value);
  }
  void merge(const Moments& o) noexcept {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    const double n1 = static_cast<double>(count);
    const double n2 = static_cast<double>(o.count);
    const double delta = o.mean_value - mean_value;
    const double n = n1 + n2;
    mean_value += delta * n2 / n;
    m2 += o.m2 + delta * delta * n1 * n2 / n;
    count += o.count;
  }
  double mean() const noexcept { return mean_value; }
  // (n-1)-normalized sample standard deviation.
  double stddev() const noexcept {
    if (count < 2) return 0.0;
    return std::sqrt(std::max(0.0, m2 / static_cast<double>(count - 1)));
  }
  // Standard error of the mean from the (n-1)-normalized sample variance.
  double stderr_of_mean() const noexcept {
    if (count < 2) return 0.0;
    const double n = static_cast<double>(count);
    return std::sqrt(std::max(0.0, m2 / (n - 1.0)) / n);
  }
};

}  // namespace netimmune

#endif  // NETIMMUNE_CORE_HPP_
