#include "dualpqc/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "dualpqc/errors.hpp"
#include "dualpqc/rng.hpp"

namespace dualpqc::qsim {

namespace {

void check_qubit(const Statevector& state, int q, const char* what) {
  if (q < 0 || q >= state.num_qubits) {
    throw ValidationError(std::string(what) + " qubit index " + std::to_string(q) +
                          " out of range for " + std::to_string(state.num_qubits) +
                          " qubits");
  }
}

// Applies a real 2x2 matrix [[a,b],[c,d]] to the target qubit.
void apply_2x2(Statevector& state, int target, double a, double b, double c, double d) {
  const std::size_t mask = std::size_t{1} << target;
  const std::size_t n = state.dim();
  auto& amp = state.amplitudes;
  for (std::size_t i = 0; i < n; ++i) {
    if ((i & mask) == 0) {
      const cplx lo = amp[i];
      const cplx hi = amp[i | mask];
      amp[i] = a * lo + b * hi;
      amp[i | mask] = c * lo + d * hi;
    }
  }
}

}  // namespace

Statevector basis_state(int num_qubits, std::uint64_t index) {
  if (num_qubits < 1) {
    throw ValidationError("basis_state: num_qubits must be >= 1, got " +
                          std::to_string(num_qubits));
  }
  const std::uint64_t dim = std::uint64_t{1} << num_qubits;
  if (index >= dim) {
    throw ValidationError("basis_state: index " + std::to_string(index) +
                          " out of range for " + std::to_string(num_qubits) + " qubits");
  }
  Statevector state;
  state.num_qubits = num_qubits;
  state.amplitudes.assign(dim, cplx{0.0, 0.0});
  state.amplitudes[index] = cplx{1.0, 0.0};
  return state;
}

void apply_gate_inplace(Statevector& state, const GateOp& gate) {
  switch (gate.kind) {
    case GateOp::Kind::Ry: {
      check_qubit(state, gate.target, "RY");
      const double c = std::cos(gate.angle / 2.0);
      const double s = std::sin(gate.angle / 2.0);
      apply_2x2(state, gate.target, c, -s, s, c);
      break;
    }
    case GateOp::Kind::X:
      check_qubit(state, gate.target, "X");
      apply_2x2(state, gate.target, 0.0, 1.0, 1.0, 0.0);
      break;
    case GateOp::Kind::H: {
      check_qubit(state, gate.target, "H");
      const double r = 1.0 / std::sqrt(2.0);
      apply_2x2(state, gate.target, r, r, r, -r);
      break;
    }
    case GateOp::Kind::Cz: {
      check_qubit(state, gate.control, "CZ control");
      check_qubit(state, gate.target, "CZ target");
      if (gate.control == gate.target) {
        throw ValidationError("CZ: control equals target (" +
                              std::to_string(gate.target) + ")");
      }
      const std::size_t both =
          (std::size_t{1} << gate.control) | (std::size_t{1} << gate.target);
      for (std::size_t i = 0; i < state.dim(); ++i) {
        if ((i & both) == both) state.amplitudes[i] = -state.amplitudes[i];
      }
      break;
    }
  }
}

Statevector apply_gate(Statevector state, const GateOp& gate) {
  apply_gate_inplace(state, gate);
  return state;
}

std::vector<double> probabilities(const Statevector& state) {
  std::vector<double> p(state.dim());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(state.amplitudes[i]);
  return p;
}

std::vector<double> marginal_probabilities(const Statevector& state,
                                           std::span<const int> kept_qubits) {
  std::uint64_t seen = 0;
  for (int q : kept_qubits) {
    if (q < 0 || q >= state.num_qubits) {
      throw ValidationError("marginal_probabilities: qubit index " + std::to_string(q) +
                            " out of range");
    }
    if (seen & (std::uint64_t{1} << q)) {
      throw ValidationError("marginal_probabilities: duplicate qubit index " +
                            std::to_string(q));
    }
    seen |= std::uint64_t{1} << q;
  }
  std::vector<double> out(std::size_t{1} << kept_qubits.size(), 0.0);
  for (std::size_t i = 0; i < state.dim(); ++i) {
    std::size_t reduced = 0;
    for (std::size_t b = 0; b < kept_qubits.size(); ++b) {
      reduced |= ((i >> kept_qubits[b]) & 1u) << b;
    }
    out[reduced] += std::norm(state.amplitudes[i]);
  }
  return out;
}

std::map<std::uint64_t, std::uint64_t> sample_counts(const Statevector& state,
                                                     std::span<const int> kept_qubits,
                                                     std::uint64_t shots,
                                                     std::uint64_t rng_seed) {
  if (shots == 0) throw ValidationError("sample_counts: shots must be >= 1");
  const std::vector<double> marginal = marginal_probabilities(state, kept_qubits);

  std::vector<double> cdf(marginal.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < marginal.size(); ++i) {
    acc += marginal[i];
    cdf[i] = acc;
  }
  cdf.back() = 1.0;

  Rng rng(rng_seed);
  std::map<std::uint64_t, std::uint64_t> counts;
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform();
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u,
                                     [](double edge, double v) { return edge <= v; });
    counts[static_cast<std::uint64_t>(it - cdf.begin())]++;
  }
  return counts;
}

}  // namespace dualpqc::qsim
