#pragma once

#include <span>
#include <vector>

#include "dualpqc/qsim.hpp"

namespace dualpqc::ansatz {

/// Layered variational form: an initial RY rotation on every qubit, then
/// `depth` blocks of [nearest-neighbor CZ ladder (0-1, 1-2, ...), RY layer].
/// No entanglement after the last rotation layer and no circular closure.
struct AnsatzSpec {
  int num_qubits = 1;
  int depth = 0;  // number of CZ+RY blocks after the initialization layer
};

/// One angle per qubit per rotation layer: num_qubits * (depth + 1).
std::size_t param_count(const AnsatzSpec& spec);

/// Parameter layout: params[layer * num_qubits + qubit], layer 0 being the
/// initialization layer. Gradient indices depend on this layout.
std::vector<qsim::GateOp> build_circuit(const AnsatzSpec& spec,
                                        std::span<const double> params);

/// Applies the built circuit to the input state.
qsim::Statevector run_ansatz(const AnsatzSpec& spec, std::span<const double> params,
                             qsim::Statevector input);

}  // namespace dualpqc::ansatz
