// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

namespace qfl::qc {

using Amplitude = std::complex<double>;

/// Row-major 2x2 unitary {m00, m01, m10, m11}.
using Mat2 = std::array<Amplitude, 4>;

inline constexpr int kMaxQubits = 16;

/// Dense pure state over n qubits. Wire 0 is the most significant bit of the
/// basis index, so |q0 q1 ... q(n-1)> reads left to right as a binary number.
class Statevector {
 public:
  /// |0...0>. Throws ConfigError unless 1 <= n_qubits <= kMaxQubits.
  explicit Statevector(int n_qubits);

  /// Adopts raw amplitudes; length must be a power of two and the norm must be 1.
  static Statevector from_amplitudes(std::vector<Amplitude> amplitudes);

  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return amps_.size(); }
  std::span<const Amplitude> amplitudes() const { return amps_; }
  const Amplitude& operator[](std::size_t i) const { return amps_[i]; }

  double norm_squared() const;

  void apply_single(int wire, const Mat2& m);
  void apply_cnot(int control, int target);

  /// <Z> on one wire: sum of |amp|^2 weighted +1 where the wire bit is 0, -1 otherwise.
  double expval_z(int wire) const;

  /// <Z> on every wire in one pass over the amplitudes.
  std::vector<double> expval_z_all() const;

 private:
  Statevector() = default;
  std::size_t wire_mask(int wire) const;
  void check_wire(int wire) const;

  int n_qubits_ = 0;
  std::vector<Amplitude> amps_;
};

Mat2 rx_matrix(double theta);
Mat2 ry_matrix(double theta);
Mat2 rz_matrix(double theta);
/// Rot(phi, theta, omega) = RZ(omega) RY(theta) RZ(phi); RZ(phi) acts first.
Mat2 rot_matrix(double phi, double theta, double omega);

Mat2 matmul(const Mat2& a, const Mat2& b);

}  // namespace qfl::qc
