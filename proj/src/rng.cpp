#include "affine2f/rng.hpp"

namespace affine2f {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id, int sub) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32), static_cast<std::uint32_t>(sub)};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed),
      stream_id_(stream_id),
      engines_{make_engine(seed, stream_id, 0), make_engine(seed, stream_id, 1),
               make_engine(seed, stream_id, 2)} {}

double RngStream::normal(Substream s) { return normals_[static_cast<int>(s)](engine(s)); }

double RngStream::gamma(Substream s, double shape) {
  std::gamma_distribution<double> dist(shape, 1.0);
  return dist(engine(s));
}

std::int64_t RngStream::poisson(Substream s, double mean) {
  if (mean <= 0.0) return 0;
  std::poisson_distribution<std::int64_t> dist(mean);
  return dist(engine(s));
}

double RngStream::uniform(Substream s) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine(s));
}

}  // namespace affine2f
