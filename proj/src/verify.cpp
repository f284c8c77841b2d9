#include "qst/verify.hpp"

#include <cmath>

namespace qst {

namespace {

struct Suite {
    json checks = json::array();
    bool ok = true;

    void add(const std::string& name, double value, double tol) {
        bool pass = std::isfinite(value) && value <= tol;
        ok = ok && pass;
        checks.push_back({{"name", name}, {"value", value}, {"tol", tol}, {"pass", pass}});
    }
};

double rel(double x, double y) { return std::abs(x - y) / (1.0 + std::abs(y)); }

} // namespace

json verify_representation(const Representation& rep, std::uint64_t seed, int max_k) {
    Suite s;
    const Quiver& q = rep.quiver;
    double unit = 0.0;
    for (const auto& L : rep.L) unit = std::max(unit, unitarity_residual(L));
    s.add("unitarity", unit, 1e-10);

    auto D = dirac(rep);
    s.add("self_adjoint", hermiticity_residual(D.D), 1e-10);

    for (int k = 0; k <= max_k; ++k) {
        double dense = trace_power_matrix(D, k);
        cd paths = trace_power_paths_complex(rep, k);
        s.add("dual_route_k" + std::to_string(k), rel(paths.real(), dense), 1e-8);
        s.add("reality_k" + std::to_string(k), std::abs(paths.imag()) / (1.0 + std::abs(dense)), 1e-10);
        if (q.decorated()) s.add("insertion_k" + std::to_string(k), rel(trace_power_insertion(rep, k), dense), 1e-8);
        if (q.lattice() && !q.augmented() && q.lattice()->d >= 2 && q.lattice()->m >= 5)
            s.add("closed_form_k" + std::to_string(k), rel(lattice_trace_closed_form(rep, k).total, dense), 1e-8);
    }

    GaugeElement g = random_gauge(rep.network, seed);
    Representation rg = gauge_transform(rep, g);
    ActionPolynomial f{{0.3, -0.2, 0.5, 0.1, -0.05, 0.02, 0.01}, 2.0};
    s.add("gauge_action", rel(spectral_action(rg, f), spectral_action(rep, f)), 1e-9);
    if (q.lattice() && q.lattice()->d >= 2 && q.lattice()->m >= 3) {
        PathWeights a = path_weights(rep), b = path_weights(rg);
        double worst = 0.0;
        for (VertexId v = 0; v < q.vertex_count(); ++v)
            for (const auto& P : plaquettes(a.qstar, v))
                worst = std::max(worst, std::abs(wilson_loop(a, P) - wilson_loop(b, P)) / (1.0 + std::abs(wilson_loop(a, P))));
        s.add("gauge_plaquettes", worst, 1e-9);
    }

    Representation back = to_representation(to_module(rep), q);
    double rt = 0.0;
    for (EdgeId e = 0; e < q.edge_count(); ++e) rt = std::max(rt, (back.L[e] - rep.L[e]).norm());
    s.add("module_roundtrip", rt, 1e-10);

    return {{"pass", s.ok}, {"checks", s.checks}};
}

} // namespace qst
