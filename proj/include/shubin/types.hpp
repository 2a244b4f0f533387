#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace shubin {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Index = Eigen::Index;

// Exponent pair of the anisotropic oscillator (-d2/dx2)^m + |x|^(2k),
// plus the fractional power s applied to its eigenvalues downstream.
struct ShubinParams {
  int k = 1;
  int m = 1;
  double s = 1.0;

  // critical diffusion exponent s* = (1/k + 1/m)/2
  double critical_s() const { return 0.5 * (1.0 / k + 1.0 / m); }

  void validate() const {
    if (k < 1) throw std::invalid_argument("ShubinParams: k must be >= 1");
    if (m < 1) throw std::invalid_argument("ShubinParams: m must be >= 1");
    if (!(s > 0.0)) throw std::invalid_argument("ShubinParams: s must be > 0");
  }
};

struct sizing_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct truncation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct singular_region_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ill_conditioned_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// exponential weight grows faster than the resolved decay of the basis
struct instability_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Verdict { PASS, FAIL, INCONCLUSIVE };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::PASS: return "PASS";
    case Verdict::FAIL: return "FAIL";
    default: return "INCONCLUSIVE";
  }
}

}  // namespace shubin
