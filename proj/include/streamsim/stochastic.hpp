#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace streamsim {

enum class DistKind { exponential, deterministic, hyperexponential2 };

// A positive-valued distribution with closed-form mean and squared
// coefficient of variation. hyperexponential2 is a two-phase mixture of
// exponentials: Exp(mean1) with probability p1, else Exp(mean2).
struct Distribution {
  DistKind kind = DistKind::exponential;
  double rate = 1.0;    // exponential
  double value = 0.0;   // deterministic
  double p1 = 0.0;      // hyperexponential2
  double mean1 = 0.0;
  double mean2 = 0.0;

  static Distribution exponential(double rate);
  static Distribution deterministic(double value);
  static Distribution hyperexponential2(double p1, double mean1, double mean2);

  double mean() const;
  double scv() const;
};

// One independent variate source. Identical (seed, stream_id) pairs
// reproduce identical sequences; distinct stream ids decorrelate sources so
// that policy decisions cannot perturb unrelated inputs.
class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  double uniform();  // [0, 1)
  double sample(const Distribution& d);

 private:
  std::mt19937_64 eng_;
};

double sample(const Distribution& d, RngStream& r);

}  // namespace streamsim
