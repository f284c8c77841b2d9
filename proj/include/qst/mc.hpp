#pragma once

#include "qst/dirac.hpp"

namespace qst {

struct McConfig {
    std::size_t samples = 1000;
    std::uint64_t seed = 0;
    ActionPolynomial f;
    int threads = 1;
    // Restrict to one network; otherwise every network for (Q, N) is used.
    std::optional<BratteliNetwork> network;
    NetworkOptions network_options;
    // Wilson loops: weight samples by exp(-Tr f(D/scale)) instead of pure Haar.
    bool weighted = false;
};

struct McSummary {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples_used = 0;
    std::vector<McSummary> per_network;
    std::vector<BratteliNetwork> networks;
    std::string note;
};

// Running mean and second central moment; merged pairwise in a fixed order.
struct Welford {
    std::size_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;
    void add(double x);
    void merge(const Welford& o);
    double variance() const;
    double std_error() const;
};

inline constexpr std::size_t kChunkSize = 256;

// Z = sum over networks of the Haar mean of exp(-Tr f(D/scale)).
McEstimate estimate_partition(const Quiver& q, int N, const McConfig& cfg);
// Mean of Re W(loop) with loop a path of augment(q).
McEstimate wilson_expectation(const Quiver& q, int N, const Path& loop, const McConfig& cfg);

} // namespace qst
