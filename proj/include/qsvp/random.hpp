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

#include <random>

#include <Eigen/QR>

#include "qsvp/core.hpp"

namespace qsvp {

/// Haar-distributed 2x2 unitary (QR of a complex Gaussian matrix with the
/// phases of R's diagonal folded back into Q).
template <typename Scalar = double, typename Rng>
[[nodiscard]] Gate2x2<Scalar> random_unitary(Rng &rng) {
    std::normal_distribution<Scalar> normal(0, 1);
    Gate2x2<Scalar> z;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            z(r, c) = {normal(rng), normal(rng)};
        }
    }
    Eigen::HouseholderQR<Gate2x2<Scalar>> qr(z);
    Gate2x2<Scalar> q = qr.householderQ();
    const Gate2x2<Scalar> r = qr.matrixQR().template triangularView<Eigen::Upper>();
    for (int c = 0; c < 2; ++c) {
        const Scalar mag = std::abs(r(c, c));
        if (mag > Scalar(0)) {
            q.col(c) *= r(c, c) / mag;
        }
    }
    return q;
}

/// Random unit vector of 2^n amplitudes.
template <typename Scalar = double, typename Rng>
[[nodiscard]] StateVector<Scalar> random_state(int n, Rng &rng) {
    std::normal_distribution<Scalar> normal(0, 1);
    AmplitudeVector<Scalar> v(static_cast<Eigen::Index>(pow2(n)));
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        v(j) = {normal(rng), normal(rng)};
    }
    v /= v.norm();
    return StateVector<Scalar>(n, std::move(v));
}

/// `count` gates on n qubits; each is controlled with probability
/// `controlled_fraction` (when n >= 2) and otherwise a single-qubit gate.
/// Gate matrices are random unitaries mixed with standard gates.
template <typename Scalar = double, typename Rng>
[[nodiscard]] Circuit<Scalar> random_circuit(int n, std::size_t count, Rng &rng, double controlled_fraction = 0.35) {
    Circuit<Scalar> circuit(n);
    std::uniform_int_distribution<int> qubit(0, n - 1);
    std::uniform_int_distribution<int> pick(0, 7);
    std::bernoulli_distribution controlled(n >= 2 ? controlled_fraction : 0.0);
    constexpr StandardGate named[] = {StandardGate::I, StandardGate::X, StandardGate::Y, StandardGate::Z,
                                      StandardGate::H};
    for (std::size_t g = 0; g < count; ++g) {
        const int which = pick(rng);
        const Gate2x2<Scalar> gate = which >= 5 ? random_unitary<Scalar>(rng) : standard_gate<Scalar>(named[which]);
        const int target = qubit(rng);
        if (controlled(rng)) {
            int control = qubit(rng);
            while (control == target) {
                control = qubit(rng);
            }
            circuit.add(GateOp<Scalar>::controlled(gate, control, target));
        } else {
            circuit.add(GateOp<Scalar>::single(gate, target));
        }
    }
    return circuit;
}

} // namespace qsvp
