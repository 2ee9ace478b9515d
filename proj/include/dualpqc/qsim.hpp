#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace dualpqc::qsim {

using cplx = std::complex<double>;

/// Dense statevector over num_qubits qubits.
///
/// Bit-order convention, used everywhere in this project: qubit q is the
/// q-th least significant bit of the basis index. Basis index
/// b = sum_q bit_q << q, so |b=5> on 3 qubits means qubit0=1, qubit1=0,
/// qubit2=1. Tensor-product notation |a>|b> with |a> on higher qubits maps
/// to index (a << nb) | b.
struct Statevector {
  int num_qubits = 0;
  std::vector<cplx> amplitudes;

  std::size_t dim() const { return amplitudes.size(); }
};

/// Gate set needed by the RY/CZ ansatz plus basis-state and superposition
/// preparation. RY convention (global-phase-free, real):
///   RY(t) = [[cos(t/2), -sin(t/2)], [sin(t/2), cos(t/2)]]
struct GateOp {
  enum class Kind { Ry, Cz, X, H };

  Kind kind = Kind::X;
  int target = 0;
  int control = -1;   // CZ only
  double angle = 0.0; // RY only

  static GateOp ry(double angle, int target) { return {Kind::Ry, target, -1, angle}; }
  static GateOp cz(int control, int target) { return {Kind::Cz, target, control, 0.0}; }
  static GateOp x(int target) { return {Kind::X, target, -1, 0.0}; }
  static GateOp h(int target) { return {Kind::H, target, -1, 0.0}; }
};

/// |index> on num_qubits qubits. index < 2^num_qubits.
Statevector basis_state(int num_qubits, std::uint64_t index);

/// Applies the gate in place. The state is exclusively owned by the caller.
void apply_gate_inplace(Statevector& state, const GateOp& gate);

/// Value-semantics variant: returns the evolved state.
Statevector apply_gate(Statevector state, const GateOp& gate);

/// |amplitude|^2 per basis index.
std::vector<double> probabilities(const Statevector& state);

/// Distribution over the kept qubits, summing out all others. Bit b of the
/// reduced outcome index corresponds to kept_qubits[b]; entries of
/// kept_qubits must be distinct and valid. Keeping every qubit in order
/// reproduces probabilities().
std::vector<double> marginal_probabilities(const Statevector& state,
                                           std::span<const int> kept_qubits);

/// Multinomial sampling of the marginal distribution; deterministic for a
/// fixed seed. shots >= 1. Outcomes with zero count are omitted.
std::map<std::uint64_t, std::uint64_t> sample_counts(const Statevector& state,
                                                     std::span<const int> kept_qubits,
                                                     std::uint64_t shots,
                                                     std::uint64_t rng_seed);

}  // namespace dualpqc::qsim
