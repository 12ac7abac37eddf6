// SPDX-License-Identifier: Apache-2.0
//
// Training-phase signal generation: Rayleigh channels, semi-unitary pilots
// and the matched-filtered received tensor.
#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <random>

#include "risce/phase_design.hpp"
#include "risce/tensor.hpp"
#include "risce/types.hpp"

namespace risce {

struct SystemDims {
  Index mt = 10;  // transmit antennas (UT)
  Index mr = 10;  // receive antennas (BS)
  Index n = 10;   // RIS elements
  Index t = 10;   // pilot slots per block
  Index k = 10;   // blocks

  /// Throws DomainError when a count is < 1 or T < Mt.
  void validate() const;
};

struct ChannelPair {
  CMatrix h;  // Mr x N, RIS -> BS
  CMatrix g;  // Mt x N, UT -> RIS
};

struct NoiseSpec {
  std::optional<double> snr_db;  // nullopt: noiseless
  std::uint64_t seed = 0;
};

using Rng = std::mt19937_64;

/// Mixes the given words into a seed with the splitmix64 finalizer.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> words);

/// i.i.d. CN(0, 1) entries drawn from `rng`.
CMatrix complex_gaussian(Index rows, Index cols, Rng& rng);

/// i.i.d. CN(0, 1) entries, deterministic per seed.
CMatrix rayleigh_channel(Index rows, Index cols, std::uint64_t seed);

/// First Mt rows of the T x T DFT matrix scaled by 1/sqrt(T); X X^H = I.
CMatrix pilot_matrix(Index mt, Index t);

/// Noise variance per entry of Z_k that realizes `snr_db` against the mean
/// noiseless block power of the given channels and schedule.
double noise_variance(const ChannelPair& channels, const CMatrix& s, const CMatrix& pilots,
                      double snr_db);

/// Y_k = H diag(s_k) G^T X + Z_k, filtered as Y_k X^H, stacked as frontal
/// slices of an Mr x Mt x K tensor. Noise blocks are drawn in block order
/// from a generator seeded with noise.seed.
Tensor3 received_tensor(const ChannelPair& channels, const CMatrix& s, const CMatrix& pilots,
                        const NoiseSpec& noise);

/// Header `i,n,re,im`, 1-based indices.
void write_channel_csv(std::ostream& out, const CMatrix& channel);

/// Header `i,j,k,re,im`, 1-based indices, mode-1 fastest.
void write_tensor_csv(std::ostream& out, const Tensor3& t);

}  // namespace risce
