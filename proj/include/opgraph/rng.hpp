#pragma once

#include <cstdint>
#include <random>

#include "opgraph/scalar.hpp"

namespace opgraph {

// Deterministic randomness for the probabilistic parts of the pipeline
// (random central elements, randomized checks).  Seeded once per run so
// results reproduce.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  long uniform_int(long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(eng_);
  }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }

  // Small Gaussian rational with numerators in [-9, 9] and denominators in
  // [1, 9]; float backend receives the same value rounded to double.
  Scalar small_scalar(Backend backend) {
    mpq_class re(uniform_int(-9, 9), uniform_int(1, 9));
    mpq_class im(uniform_int(-9, 9), uniform_int(1, 9));
    re.canonicalize();
    im.canonicalize();
    if (backend == Backend::kExact) return Scalar::exact(re, im);
    return Scalar::floating(re.get_d(), im.get_d());
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace opgraph
