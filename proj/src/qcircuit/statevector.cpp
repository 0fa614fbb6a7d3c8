// SPDX-License-Identifier: Apache-2.0
#include "qfl/qcircuit/statevector.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "qfl/common/error.hpp"

namespace qfl::qc {

namespace {
constexpr Amplitude kI{0.0, 1.0};
}

Statevector::Statevector(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw ConfigError("qubit count " + std::to_string(n_qubits) + " outside [1, " +
                      std::to_string(kMaxQubits) + "]");
  }
  amps_.assign(std::size_t{1} << n_qubits, Amplitude{0.0, 0.0});
  amps_[0] = 1.0;
}

Statevector Statevector::from_amplitudes(std::vector<Amplitude> amplitudes) {
  const std::size_t n = amplitudes.size();
  if (n < 2 || !std::has_single_bit(n)) {
    throw ShapeError("amplitude count must be a power of two >= 2, got " + std::to_string(n));
  }
  const int qubits = std::countr_zero(n);
  if (qubits > kMaxQubits) throw ConfigError("too many qubits: " + std::to_string(qubits));
  Statevector s;
  s.n_qubits_ = qubits;
  s.amps_ = std::move(amplitudes);
  if (std::abs(s.norm_squared() - 1.0) > 1e-10) throw ConfigError("amplitudes are not normalized");
  return s;
}

double Statevector::norm_squared() const {
  double acc = 0.0;
  for (const auto& a : amps_) acc += std::norm(a);
  return acc;
}

void Statevector::check_wire(int wire) const {
  if (wire < 0 || wire >= n_qubits_) {
    throw IndexError("wire " + std::to_string(wire) + " out of range for " +
                     std::to_string(n_qubits_) + " qubits");
  }
}

std::size_t Statevector::wire_mask(int wire) const {
  return std::size_t{1} << (n_qubits_ - 1 - wire);
}

void Statevector::apply_single(int wire, const Mat2& m) {
  check_wire(wire);
  const std::size_t stride = wire_mask(wire);
  const std::size_t n = amps_.size();
  for (std::size_t block = 0; block < n; block += 2 * stride) {
    for (std::size_t i = block; i < block + stride; ++i) {
      const Amplitude a0 = amps_[i];
      const Amplitude a1 = amps_[i + stride];
      amps_[i] = m[0] * a0 + m[1] * a1;
      amps_[i + stride] = m[2] * a0 + m[3] * a1;
    }
  }
}

void Statevector::apply_cnot(int control, int target) {
  check_wire(control);
  check_wire(target);
  if (control == target) throw IndexError("CNOT control and target must differ");
  const std::size_t cmask = wire_mask(control);
  const std::size_t tmask = wire_mask(target);
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if ((i & cmask) && !(i & tmask)) std::swap(amps_[i], amps_[i | tmask]);
  }
}

double Statevector::expval_z(int wire) const {
  check_wire(wire);
  const std::size_t mask = wire_mask(wire);
  double acc = 0.0;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    const double p = std::norm(amps_[i]);
    acc += (i & mask) ? -p : p;
  }
  return acc;
}

std::vector<double> Statevector::expval_z_all() const {
  std::vector<double> out(static_cast<std::size_t>(n_qubits_), 0.0);
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    const double p = std::norm(amps_[i]);
    for (int w = 0; w < n_qubits_; ++w) {
      out[static_cast<std::size_t>(w)] += (i & wire_mask(w)) ? -p : p;
    }
  }
  return out;
}

Mat2 rx_matrix(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return {Amplitude{c, 0}, -kI * s, -kI * s, Amplitude{c, 0}};
}

Mat2 ry_matrix(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return {Amplitude{c, 0}, Amplitude{-s, 0}, Amplitude{s, 0}, Amplitude{c, 0}};
}

Mat2 rz_matrix(double theta) {
  return {std::exp(-kI * (theta / 2)), Amplitude{0, 0}, Amplitude{0, 0}, std::exp(kI * (theta / 2))};
}

Mat2 matmul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Mat2 rot_matrix(double phi, double theta, double omega) {
  return matmul(rz_matrix(omega), matmul(ry_matrix(theta), rz_matrix(phi)));
}

}  // namespace qfl::qc
