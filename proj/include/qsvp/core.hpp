// Copyright 2026 The qsvp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "qsvp/errors.hpp"

namespace qsvp {

/// Default cap on the qubit count of a fully materialized state.
inline constexpr int kMaxQubits = 30;

/// Tolerance for unitarity and normalization validation.
inline constexpr double kValidationTol = 1e-10;

/// Tolerance for checks on exactly constructed values.
inline constexpr double kExactTol = 1e-12;

template <typename Scalar> using Amplitude = std::complex<Scalar>;

template <typename Scalar>
using AmplitudeVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

/// Single-qubit unitary [[q11, q12], [q21, q22]].
template <typename Scalar>
using Gate2x2 = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

/// One qubit's (alpha, beta) pair.
template <typename Scalar>
using QubitState = Eigen::Matrix<std::complex<Scalar>, 2, 1>;

using Index = std::uint64_t;

[[nodiscard]] constexpr Index pow2(int e) noexcept { return Index{1} << e; }

[[nodiscard]] constexpr bool bit_set(Index value, int bit) noexcept {
    return ((value >> bit) & Index{1}) != 0;
}

/**
 * Full n-qubit state: 2^n complex amplitudes.
 *
 * Qubit i is index bit i (weight 2^i), so the amplitude of |q_{n-1}...q_1 q_0>
 * sits at index sum(q_i 2^i). The constructor checks length and finiteness;
 * unit norm is a property of states produced by unitary evolution and is
 * checked with is_normalized().
 */
template <typename Scalar = double> class StateVector {
  public:
    using AmplitudeT = std::complex<Scalar>;
    using VectorT = AmplitudeVector<Scalar>;

    StateVector(int qubits, VectorT amps) : qubits_(qubits), amps_(std::move(amps)) {
        if (qubits < 1 || qubits > 62) {
            throw CapacityError("qubit count out of range");
        }
        if (static_cast<Index>(amps_.size()) != pow2(qubits)) {
            throw ValidationError("state vector length must be 2^n");
        }
        if (!amps_.allFinite()) {
            throw ValidationError("state vector contains non-finite amplitudes");
        }
    }

    [[nodiscard]] int qubits() const noexcept { return qubits_; }
    [[nodiscard]] Index size() const noexcept { return static_cast<Index>(amps_.size()); }

    [[nodiscard]] const VectorT &amps() const noexcept { return amps_; }
    [[nodiscard]] VectorT &amps() noexcept { return amps_; }

    [[nodiscard]] AmplitudeT operator[](Index i) const { return amps_(static_cast<Eigen::Index>(i)); }
    [[nodiscard]] AmplitudeT &operator[](Index i) { return amps_(static_cast<Eigen::Index>(i)); }

    [[nodiscard]] std::span<AmplitudeT> span() noexcept { return {amps_.data(), size()}; }
    [[nodiscard]] std::span<const AmplitudeT> span() const noexcept { return {amps_.data(), size()}; }

    friend bool operator==(const StateVector &a, const StateVector &b) {
        return a.qubits_ == b.qubits_ && a.amps_ == b.amps_;
    }

  private:
    int qubits_;
    VectorT amps_;
};

enum class GateKind { single, controlled };

/// A gate application: a 2x2 unitary on `target`, optionally conditioned on
/// `control` being 1.
template <typename Scalar = double> struct GateOp {
    GateKind kind = GateKind::single;
    Gate2x2<Scalar> gate = Gate2x2<Scalar>::Identity();
    int target = 0;
    std::optional<int> control;

    [[nodiscard]] static GateOp single(const Gate2x2<Scalar> &g, int target) {
        return GateOp{GateKind::single, g, target, std::nullopt};
    }

    [[nodiscard]] static GateOp controlled(const Gate2x2<Scalar> &g, int control, int target) {
        if (control == target) {
            throw ValidationError("control and target must differ");
        }
        return GateOp{GateKind::controlled, g, target, control};
    }

    friend bool operator==(const GateOp &a, const GateOp &b) {
        return a.kind == b.kind && a.gate == b.gate && a.target == b.target &&
               a.control == b.control;
    }
};

/// Ordered gate sequence over a fixed qubit count.
template <typename Scalar = double> class Circuit {
  public:
    explicit Circuit(int qubits) : qubits_(qubits) {
        if (qubits < 1) {
            throw CapacityError("circuit needs at least one qubit");
        }
    }

    void add(const GateOp<Scalar> &op) {
        auto in_range = [this](int q) { return q >= 0 && q < qubits_; };
        if (!in_range(op.target)) {
            throw RangeError("target qubit " + std::to_string(op.target) + " out of range");
        }
        if ((op.kind == GateKind::controlled) != op.control.has_value()) {
            throw ValidationError("control present iff gate is controlled");
        }
        if (op.control) {
            if (!in_range(*op.control)) {
                throw RangeError("control qubit " + std::to_string(*op.control) + " out of range");
            }
            if (*op.control == op.target) {
                throw ValidationError("control and target must differ");
            }
        }
        ops_.push_back(op);
    }

    [[nodiscard]] int qubits() const noexcept { return qubits_; }
    [[nodiscard]] const std::vector<GateOp<Scalar>> &ops() const noexcept { return ops_; }
    [[nodiscard]] std::size_t size() const noexcept { return ops_.size(); }
    [[nodiscard]] bool empty() const noexcept { return ops_.empty(); }

    friend bool operator==(const Circuit &a, const Circuit &b) {
        return a.qubits_ == b.qubits_ && a.ops_ == b.ops_;
    }

  private:
    int qubits_;
    std::vector<GateOp<Scalar>> ops_;
};

/// |0...0> on n qubits.
template <typename Scalar = double>
[[nodiscard]] StateVector<Scalar> make_state(int n, int max_qubits = kMaxQubits) {
    if (n < 1 || n > max_qubits) {
        throw CapacityError("qubit count " + std::to_string(n) + " outside [1, " +
                            std::to_string(max_qubits) + "]");
    }
    AmplitudeVector<Scalar> amps = AmplitudeVector<Scalar>::Zero(static_cast<Eigen::Index>(pow2(n)));
    amps(0) = Scalar(1);
    return StateVector<Scalar>(n, std::move(amps));
}

enum class StandardGate { I, X, Y, Z, H };

[[nodiscard]] inline StandardGate parse_standard_gate(std::string_view name) {
    if (name == "I" || name == "i") return StandardGate::I;
    if (name == "X" || name == "x") return StandardGate::X;
    if (name == "Y" || name == "y") return StandardGate::Y;
    if (name == "Z" || name == "z") return StandardGate::Z;
    if (name == "H" || name == "h") return StandardGate::H;
    throw ParseError("unknown gate '" + std::string(name) + "'");
}

template <typename Scalar = double>
[[nodiscard]] Gate2x2<Scalar> standard_gate(StandardGate which) {
    using C = std::complex<Scalar>;
    Gate2x2<Scalar> g;
    switch (which) {
    case StandardGate::I:
        g << C(1), C(0), C(0), C(1);
        break;
    case StandardGate::X:
        g << C(0), C(1), C(1), C(0);
        break;
    case StandardGate::Y:
        g << C(0), C(0, -1), C(0, 1), C(0);
        break;
    case StandardGate::Z:
        g << C(1), C(0), C(0), C(-1);
        break;
    case StandardGate::H: {
        const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
        g << C(s), C(s), C(s), C(-s);
        break;
    }
    }
    return g;
}

template <typename Scalar = double>
[[nodiscard]] Gate2x2<Scalar> standard_gate(std::string_view name) {
    return standard_gate<Scalar>(parse_standard_gate(name));
}

/// True iff max |(g^H g - I)_{rc}| <= tol.
template <typename Derived>
[[nodiscard]] bool is_unitary(const Eigen::MatrixBase<Derived> &g, double tol) {
    using Matrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const Matrix product = g.adjoint() * g;
    const Matrix deviation = product - Matrix::Identity(g.rows(), g.cols());
    return static_cast<double>(deviation.cwiseAbs().maxCoeff()) <= tol;
}

/// Squared 2-norm, sum |a_j|^2.
template <typename Derived>
[[nodiscard]] auto norm2(const Eigen::MatrixBase<Derived> &v) {
    return v.squaredNorm();
}

template <typename Scalar>
[[nodiscard]] Scalar norm2(const StateVector<Scalar> &s) {
    return norm2(s.amps());
}

template <typename Scalar>
[[nodiscard]] bool is_normalized(const StateVector<Scalar> &s, double tol = kValidationTol) {
    return std::abs(static_cast<double>(norm2(s)) - 1.0) <= tol;
}

/// Product state of independent qubits; qubits[i] is qubit i, which lands on
/// index bit 2^i, so the Kronecker chain runs from the last qubit to the first.
template <typename Scalar = double>
[[nodiscard]] StateVector<Scalar> tensor_states(std::span<const QubitState<Scalar>> qubits,
                                                int max_qubits = kMaxQubits) {
    const int n = static_cast<int>(qubits.size());
    if (n < 1 || n > max_qubits) {
        throw CapacityError("qubit count out of range");
    }
    for (int i = 0; i < n; ++i) {
        if (std::abs(static_cast<double>(qubits[i].squaredNorm()) - 1.0) > kValidationTol) {
            throw ValidationError("qubit " + std::to_string(i) + " is not normalized");
        }
    }
    AmplitudeVector<Scalar> acc = qubits[n - 1];
    for (int i = n - 2; i >= 0; --i) {
        AmplitudeVector<Scalar> next = Eigen::kroneckerProduct(acc, qubits[i]).eval();
        acc = std::move(next);
    }
    return StateVector<Scalar>(n, std::move(acc));
}

template <typename Scalar = double>
[[nodiscard]] StateVector<Scalar> tensor_states(const std::vector<QubitState<Scalar>> &qubits,
                                                int max_qubits = kMaxQubits) {
    return tensor_states<Scalar>(std::span<const QubitState<Scalar>>(qubits), max_qubits);
}

/// Largest |a_j - b_j| over all amplitudes.
template <typename Scalar>
[[nodiscard]] double max_deviation(const StateVector<Scalar> &a, const StateVector<Scalar> &b) {
    if (a.size() != b.size()) {
        throw ValidationError("state sizes differ");
    }
    return static_cast<double>((a.amps() - b.amps()).cwiseAbs().maxCoeff());
}

} // namespace qsvp
