#include "streamsim/stochastic.hpp"

#include <cmath>

namespace streamsim {

Distribution Distribution::exponential(double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be > 0");
  Distribution d;
  d.kind = DistKind::exponential;
  d.rate = rate;
  return d;
}

Distribution Distribution::deterministic(double value) {
  if (!(value >= 0.0)) throw std::invalid_argument("deterministic: value must be >= 0");
  Distribution d;
  d.kind = DistKind::deterministic;
  d.value = value;
  return d;
}

Distribution Distribution::hyperexponential2(double p1, double mean1, double mean2) {
  if (!(p1 >= 0.0 && p1 <= 1.0))
    throw std::invalid_argument("hyperexponential2: p1 must be in [0, 1]");
  if (!(mean1 > 0.0) || !(mean2 > 0.0))
    throw std::invalid_argument("hyperexponential2: phase means must be > 0");
  Distribution d;
  d.kind = DistKind::hyperexponential2;
  d.p1 = p1;
  d.mean1 = mean1;
  d.mean2 = mean2;
  return d;
}

double Distribution::mean() const {
  switch (kind) {
    case DistKind::exponential: return 1.0 / rate;
    case DistKind::deterministic: return value;
    case DistKind::hyperexponential2: return p1 * mean1 + (1.0 - p1) * mean2;
  }
  throw std::logic_error("Distribution::mean: bad kind");
}

double Distribution::scv() const {
  switch (kind) {
    case DistKind::exponential: return 1.0;
    case DistKind::deterministic: return 0.0;
    case DistKind::hyperexponential2: {
      // E[X^2] of the mixture is 2*(p1*mean1^2 + (1-p1)*mean2^2).
      const double m = mean();
      const double m2 = 2.0 * (p1 * mean1 * mean1 + (1.0 - p1) * mean2 * mean2);
      return m2 / (m * m) - 1.0;
    }
  }
  throw std::logic_error("Distribution::scv: bad kind");
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32)};
  eng_.seed(seq);
}

double RngStream::uniform() {
  // 53 random bits mapped onto [0, 1); never returns 1.0, so log1p below
  // never sees -1.
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

namespace {

double exponential_variate(double mean, RngStream& r) {
  return -mean * std::log1p(-r.uniform());
}

}  // namespace

double RngStream::sample(const Distribution& d) {
  switch (d.kind) {
    case DistKind::exponential: return exponential_variate(1.0 / d.rate, *this);
    case DistKind::deterministic: return d.value;
    case DistKind::hyperexponential2: {
      // Phase draw first, then the variate: two uniforms per sample, always
      // in the same order, so sequences stay aligned across runs.
      const double u = uniform();
      const double m = u < d.p1 ? d.mean1 : d.mean2;
      return exponential_variate(m, *this);
    }
  }
  throw std::logic_error("RngStream::sample: bad kind");
}

double sample(const Distribution& d, RngStream& r) { return r.sample(d); }

}  // namespace streamsim
