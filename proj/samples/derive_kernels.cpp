// Copyright 2026 The edgeforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Prints the derivative kernels implied by the built-in weight schemes and
// checks them against the registry.
//
//   derive_kernels [max_radius]   (inverse-distance scheme, default 3)

#include <cstdlib>
#include <iomanip>
#include <iostream>

#include "edgeforge/kernels.hpp"

namespace ef = edgeforge;

namespace {

void print(const ef::Coefficients& m) {
    for (int r = 0; r < m.height(); ++r) {
        for (int c = 0; c < m.width(); ++c) std::cout << std::setw(6) << m(r, c);
        std::cout << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    const int max_radius = argc > 1 ? std::atoi(argv[1]) : 3;
    for (int l = 1; l <= max_radius; ++l) {
        try {
            const auto w = ef::build_weights_inverse_distance(l);
            const auto gx = ef::derive_kernel(w, ef::Axis::x);
            std::cout << "inverse-distance weights, radius " << l << ":\n";
            print(w.weights());
            std::cout << "Gx:\n";
            print(gx.coefficients());
            if (l <= 2) {
                const bool same = ef::registry_get("proposed_a", 2 * l + 1).x == gx;
                std::cout << "registry proposed_a " << 2 * l + 1 << "x" << 2 * l + 1 << ": "
                          << (same ? "match" : "mismatch") << "\n";
            }
            std::cout << "\n";
        } catch (const ef::Error& e) {
            std::cerr << "radius " << l << ": " << e.what() << "\n";
            return 1;
        }
    }
    return 0;
}
