#pragma once

// Test-only oracles, kept independent of the library's simulation path:
// gates are expanded to full 2^n x 2^n matrices with explicit Kronecker
// products and applied by dense matrix-vector products, marginals are brute
// force sums over discarded bit assignments, and derivatives come from
// central finite differences.

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "dualpqc/qsim.hpp"
#include "dualpqc/rng.hpp"

namespace oracle {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

inline MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Full-space operator with the given single-qubit matrices at the listed
// qubit positions and identity elsewhere. Qubit 0 is the least significant
// index bit, so it is the last Kronecker factor.
inline MatrixXcd embed(int num_qubits, const std::vector<int>& positions,
                       const std::vector<Eigen::Matrix2cd>& ops) {
  MatrixXcd out = MatrixXcd::Identity(1, 1);
  for (int q = num_qubits - 1; q >= 0; --q) {
    Eigen::Matrix2cd factor = Eigen::Matrix2cd::Identity();
    for (std::size_t i = 0; i < positions.size(); ++i) {
      if (positions[i] == q) factor = ops[i];
    }
    out = kron(out, factor.cast<std::complex<double>>());
  }
  return out;
}

inline MatrixXcd dense_gate_matrix(const dualpqc::qsim::GateOp& gate, int num_qubits) {
  using Kind = dualpqc::qsim::GateOp::Kind;
  Eigen::Matrix2cd m;
  switch (gate.kind) {
    case Kind::Ry: {
      const double c = std::cos(gate.angle / 2.0), s = std::sin(gate.angle / 2.0);
      m << c, -s, s, c;
      return embed(num_qubits, {gate.target}, {m});
    }
    case Kind::X:
      m << 0, 1, 1, 0;
      return embed(num_qubits, {gate.target}, {m});
    case Kind::H: {
      const double r = 1.0 / std::sqrt(2.0);
      m << r, r, r, -r;
      return embed(num_qubits, {gate.target}, {m});
    }
    case Kind::Cz: {
      Eigen::Matrix2cd p0 = Eigen::Matrix2cd::Zero(), p1 = Eigen::Matrix2cd::Zero(), z;
      p0(0, 0) = 1;
      p1(1, 1) = 1;
      z << 1, 0, 0, -1;
      return embed(num_qubits, {gate.control}, {p0}) +
             embed(num_qubits, {gate.control, gate.target}, {p1, z});
    }
  }
  return MatrixXcd::Identity(1 << num_qubits, 1 << num_qubits);
}

inline VectorXcd run_circuit_dense(const std::vector<dualpqc::qsim::GateOp>& gates,
                                   int num_qubits, std::uint64_t initial_index = 0) {
  VectorXcd state = VectorXcd::Zero(Eigen::Index{1} << num_qubits);
  state[static_cast<Eigen::Index>(initial_index)] = 1.0;
  for (const auto& gate : gates) {
    state = dense_gate_matrix(gate, num_qubits) * state;
  }
  return state;
}

// Brute-force marginal: for every reduced outcome, enumerate all assignments
// of the discarded qubits and sum the squared amplitudes.
inline std::vector<double> marginal_brute_force(const VectorXcd& amplitudes,
                                                int num_qubits,
                                                const std::vector<int>& kept) {
  std::vector<int> discarded;
  for (int q = 0; q < num_qubits; ++q) {
    bool is_kept = false;
    for (int kq : kept) is_kept |= (kq == q);
    if (!is_kept) discarded.push_back(q);
  }
  std::vector<double> out(std::size_t{1} << kept.size(), 0.0);
  for (std::size_t b = 0; b < out.size(); ++b) {
    for (std::size_t rest = 0; rest < (std::size_t{1} << discarded.size()); ++rest) {
      std::size_t full = 0;
      for (std::size_t i = 0; i < kept.size(); ++i) {
        full |= ((b >> i) & 1u) << kept[i];
      }
      for (std::size_t i = 0; i < discarded.size(); ++i) {
        full |= ((rest >> i) & 1u) << discarded[i];
      }
      out[b] += std::norm(amplitudes[static_cast<Eigen::Index>(full)]);
    }
  }
  return out;
}

inline std::vector<dualpqc::qsim::GateOp> random_circuit(dualpqc::Rng& rng,
                                                         int num_qubits,
                                                         int num_gates) {
  using dualpqc::qsim::GateOp;
  std::vector<GateOp> gates;
  for (int g = 0; g < num_gates; ++g) {
    const int kind = static_cast<int>(rng.below(num_qubits >= 2 ? 4 : 3));
    const int target = static_cast<int>(rng.below(num_qubits));
    switch (kind) {
      case 0:
        gates.push_back(GateOp::ry(rng.uniform(-6.4, 6.4), target));
        break;
      case 1:
        gates.push_back(GateOp::x(target));
        break;
      case 2:
        gates.push_back(GateOp::h(target));
        break;
      default: {
        int control = static_cast<int>(rng.below(num_qubits - 1));
        if (control >= target) ++control;
        gates.push_back(GateOp::cz(control, target));
        break;
      }
    }
  }
  return gates;
}

// Central finite difference of a scalar function of a parameter vector.
inline std::vector<double> finite_difference(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x, double h) {
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = x[i];
    x[i] = orig + h;
    const double plus = f(x);
    x[i] = orig - h;
    const double minus = f(x);
    x[i] = orig;
    grad[i] = (plus - minus) / (2.0 * h);
  }
  return grad;
}

}  // namespace oracle
