#pragma once

#include <cstdint>
#include <random>

namespace affine2f {

// Independent driver sub-streams of one replication.
enum class Substream : int { kW = 0, kB = 1, kL = 2 };

// Reproducible random stream keyed by (seed, stream_id). Each of the three
// driving Wiener processes owns a Mersenne Twister seeded through seed_seq
// from (seed, stream_id, substream), so replications never share state and
// identical keys reproduce identical draws on the same build.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Standard normal draw.
  double normal(Substream s);
  // Gamma(shape, scale 1) draw; shape > 0.
  double gamma(Substream s, double shape);
  // Poisson(mean) draw; mean >= 0.
  std::int64_t poisson(Substream s, double mean);
  // Uniform draw on [0, 1).
  double uniform(Substream s);

 private:
  std::mt19937_64& engine(Substream s) { return engines_[static_cast<int>(s)]; }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engines_[3];
  std::normal_distribution<double> normals_[3];
};

}  // namespace affine2f
