#include "dualpqc/ansatz.hpp"

#include <string>

#include "dualpqc/errors.hpp"

namespace dualpqc::ansatz {

namespace {

void check_spec(const AnsatzSpec& spec) {
  if (spec.num_qubits < 1) {
    throw ValidationError("ansatz: num_qubits must be >= 1, got " +
                          std::to_string(spec.num_qubits));
  }
  if (spec.depth < 0) {
    throw ValidationError("ansatz: depth must be >= 0, got " +
                          std::to_string(spec.depth));
  }
}

}  // namespace

std::size_t param_count(const AnsatzSpec& spec) {
  check_spec(spec);
  return static_cast<std::size_t>(spec.num_qubits) *
         static_cast<std::size_t>(spec.depth + 1);
}

std::vector<qsim::GateOp> build_circuit(const AnsatzSpec& spec,
                                        std::span<const double> params) {
  const std::size_t expected = param_count(spec);
  if (params.size() != expected) {
    throw ValidationError("ansatz: expected " + std::to_string(expected) +
                          " parameters, got " + std::to_string(params.size()));
  }
  const int n = spec.num_qubits;
  std::vector<qsim::GateOp> gates;
  gates.reserve(expected + static_cast<std::size_t>(spec.depth) * (n - 1));

  for (int q = 0; q < n; ++q) gates.push_back(qsim::GateOp::ry(params[q], q));
  for (int layer = 1; layer <= spec.depth; ++layer) {
    for (int q = 0; q + 1 < n; ++q) gates.push_back(qsim::GateOp::cz(q, q + 1));
    for (int q = 0; q < n; ++q) {
      gates.push_back(qsim::GateOp::ry(params[static_cast<std::size_t>(layer) * n + q], q));
    }
  }
  return gates;
}

qsim::Statevector run_ansatz(const AnsatzSpec& spec, std::span<const double> params,
                             qsim::Statevector input) {
  if (input.num_qubits != spec.num_qubits) {
    throw ValidationError("run_ansatz: input has " + std::to_string(input.num_qubits) +
                          " qubits, spec expects " + std::to_string(spec.num_qubits));
  }
  for (const auto& gate : build_circuit(spec, params)) {
    qsim::apply_gate_inplace(input, gate);
  }
  return input;
}

}  // namespace dualpqc::ansatz
