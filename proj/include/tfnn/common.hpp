#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tfnn {

// A sampled point: real coordinate tuple, finite-space label tuple (stored as
// label indices), or the value vector of a sampled function.
using Point = std::vector<double>;

// Error with a machine-checkable kind tag ("LengthMismatch", "NoKLPoint", ...).
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

private:
  std::string kind_;
};

[[noreturn]] inline void fail(const std::string& kind, const std::string& msg) {
  throw Error(kind, msg);
}

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = a;
    return out;
  }
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = a + i * (b - a) / (n - 1);
  return out;
}

}  // namespace tfnn
