#pragma once

#include <cstdint>

#include <boost/random/chi_squared_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace gwish {

// Counter-based sfc64 generator. The engines in <random> are slow and their
// distributions are not portable across standard libraries, so we pair this
// generator with Boost distributions, which draw the same stream everywhere.
class Sfc64 {
 public:
  using result_type = std::uint64_t;

  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

  explicit Sfc64(std::uint64_t seed) : a_(seed), b_(seed), c_(seed), counter_(1) {
    for (int i = 0; i < 12; ++i) operator()();
  }

  std::uint64_t operator()() noexcept {
    const std::uint64_t tmp = a_ + b_ + counter_++;
    a_ = b_ ^ (b_ >> 11);
    b_ = c_ + (c_ << 3);
    c_ = ((c_ << 24) | (c_ >> 40)) + tmp;
    return tmp;
  }

 private:
  std::uint64_t a_, b_, c_, counter_;
};

// Seedable stream of scalar draws, owned by exactly one chain. An identical
// seed and call sequence reproduces the draws bit for bit.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  double normal() { return boost::random::normal_distribution<>(0.0, 1.0)(gen_); }

  double normal(double mean, double sd) {
    return boost::random::normal_distribution<>(mean, sd)(gen_);
  }

  double chi_squared(double df) {
    return boost::random::chi_squared_distribution<>(df)(gen_);
  }

  double uniform01() { return boost::random::uniform_01<double>()(gen_); }

  // Uniform over {0, ..., n - 1}.
  int uniform_below(int n) {
    return boost::random::uniform_int_distribution<int>(0, n - 1)(gen_);
  }

 private:
  Sfc64 gen_;
};

}  // namespace gwish
