#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bimdecomp/mat3.hpp"

namespace bimdecomp {

// Deterministic input generators shared by the `check` verb and the test
// suites.
class RandomGen {
public:
  explicit RandomGen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double a, double b) {
    return a + (b - a) * std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }

private:
  std::mt19937_64 rng_;
};

Mat3 random_rotation(RandomGen& g);

// Symmetric positive definite with condition number up to cond_max and
// largest eigenvalue log-uniform in [scale_min, scale_max].
SymMat3 random_spd(RandomGen& g, double cond_max, double scale_min,
                   double scale_max);

// Invertible with singular values spanning up to cond_max.
Mat3 random_invertible(RandomGen& g, double cond_max, double scale_min,
                       double scale_max);

// Upper-triangular positive-diagonal vielbein with condition number kept
// below roughly cond_cap.
Mat3 random_vielbein(RandomGen& g, double cond_cap);

// One named property check: worst observed value against its bound.
struct SelfTestResult {
  std::string name;
  double worst = 0.0;
  double bound = 0.0;
  bool pass = false;
};

// Property sweeps behind `check --suite ...`; `n` scales the sample count.
std::vector<SelfTestResult> selftest_mat3(int n, std::uint64_t seed = 20240801);
std::vector<SelfTestResult> selftest_frame(int n, std::uint64_t seed = 20240802);
std::vector<SelfTestResult> selftest_geometry();

bool all_passed(const std::vector<SelfTestResult>& results);

} // namespace bimdecomp
