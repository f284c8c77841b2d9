#pragma once

#include "qst/io.hpp"

namespace qst {

// Runs the invariant suite on one representation: unitarity, self-adjointness,
// dual-route traces, reality, gauge invariance, module round trip and, where
// they apply, the insertion route and the lattice closed forms.
json verify_representation(const Representation& rep, std::uint64_t seed, int max_k = 4);

} // namespace qst
