// SPDX-License-Identifier: Apache-2.0
#include "risce/simulation.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "risce/csv.hpp"
#include "risce/error.hpp"

namespace risce {
namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void require_shape(const CMatrix& m, Index rows, Index cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    std::ostringstream msg;
    msg << name << " is " << m.rows() << "x" << m.cols() << ", expected " << rows << "x" << cols;
    throw DimensionError(msg.str());
  }
  if (!m.allFinite()) throw DomainError(std::string(name) + " has non-finite entries");
}

// H diag(s_k) G^T
CMatrix cascaded_block(const ChannelPair& ch, const CMatrix& s, Index k) {
  return ch.h * s.row(k).transpose().asDiagonal() * ch.g.transpose();
}

void check_inputs(const ChannelPair& ch, const CMatrix& s, const CMatrix& pilots) {
  const Index n = ch.h.cols();
  if (n < 1) throw DimensionError("channels need at least one RIS element");
  require_shape(ch.h, ch.h.rows(), n, "H");
  require_shape(ch.g, ch.g.rows(), n, "G");
  require_shape(s, s.rows(), n, "S");
  require_shape(pilots, ch.g.rows(), pilots.cols(), "X");
  if (pilots.cols() < pilots.rows()) throw DimensionError("pilot matrix needs T >= Mt");
}

}  // namespace

void SystemDims::validate() const {
  if (mt < 1 || mr < 1 || n < 1 || t < 1 || k < 1) {
    throw DomainError("system dimensions must all be >= 1");
  }
  if (t < mt) throw DomainError("semi-unitary pilots need T >= Mt");
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = splitmix64(master);
  for (auto w : words) h = splitmix64(h ^ w);
  return h;
}

CMatrix complex_gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CMatrix out(rows, cols);
  for (Index c = 0; c < cols; ++c) {
    for (Index r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      out(r, c) = {re, im};
    }
  }
  return out;
}

CMatrix rayleigh_channel(Index rows, Index cols, std::uint64_t seed) {
  if (rows < 1 || cols < 1) throw DimensionError("channel needs rows, cols >= 1");
  Rng rng(seed);
  return complex_gaussian(rows, cols, rng);
}

CMatrix pilot_matrix(Index mt, Index t) {
  if (mt < 1 || t < mt) throw DomainError("pilot matrix needs 1 <= Mt <= T");
  const double scale = 1.0 / std::sqrt(static_cast<double>(t));
  CMatrix x(mt, t);
  for (Index m = 0; m < mt; ++m) {
    for (Index tau = 0; tau < t; ++tau) {
      const Index idx = (m * tau) % t;
      x(m, tau) = std::polar(scale, -2.0 * kPi * static_cast<double>(idx) / static_cast<double>(t));
    }
  }
  return x;
}

double noise_variance(const ChannelPair& channels, const CMatrix& s, const CMatrix& pilots,
                      double snr_db) {
  check_inputs(channels, s, pilots);
  if (!std::isfinite(snr_db)) throw DomainError("SNR must be finite (use the noiseless mode)");
  double power = 0.0;
  for (Index k = 0; k < s.rows(); ++k) power += (cascaded_block(channels, s, k) * pilots).squaredNorm();
  power /= static_cast<double>(s.rows());
  const double entries = static_cast<double>(channels.h.rows() * pilots.cols());
  return power / (entries * std::pow(10.0, snr_db / 10.0));
}

Tensor3 received_tensor(const ChannelPair& channels, const CMatrix& s, const CMatrix& pilots,
                        const NoiseSpec& noise) {
  check_inputs(channels, s, pilots);
  const Index mr = channels.h.rows();
  const Index mt = channels.g.rows();
  const Index k_blocks = s.rows();

  const double sigma =
      noise.snr_db ? std::sqrt(noise_variance(channels, s, pilots, *noise.snr_db)) : 0.0;
  Rng rng(noise.seed);
  const CMatrix pilots_h = pilots.adjoint();

  Tensor3 y(mr, mt, k_blocks);
  for (Index k = 0; k < k_blocks; ++k) {
    CMatrix block = cascaded_block(channels, s, k) * pilots;
    if (noise.snr_db) block += sigma * complex_gaussian(mr, pilots.cols(), rng);
    y.set_frontal_slice(k, block * pilots_h);
  }
  return y;
}

void write_channel_csv(std::ostream& out, const CMatrix& channel) {
  out << "i,n,re,im\n";
  for (Index i = 0; i < channel.rows(); ++i)
    for (Index n = 0; n < channel.cols(); ++n)
      out << i + 1 << ',' << n + 1 << ',' << csv::format_double(channel(i, n).real()) << ','
          << csv::format_double(channel(i, n).imag()) << '\n';
}

void write_tensor_csv(std::ostream& out, const Tensor3& t) {
  out << "i,j,k,re,im\n";
  for (Index k = 0; k < t.dim(3); ++k)
    for (Index j = 0; j < t.dim(2); ++j)
      for (Index i = 0; i < t.dim(1); ++i)
        out << i + 1 << ',' << j + 1 << ',' << k + 1 << ',' << csv::format_double(t(i, j, k).real())
            << ',' << csv::format_double(t(i, j, k).imag()) << '\n';
}

}  // namespace risce
