#include "qst/mc.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace qst {

void Welford::add(double x) {
    ++n;
    double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
}

void Welford::merge(const Welford& o) {
    if (o.n == 0) return;
    if (n == 0) {
        *this = o;
        return;
    }
    const double na = static_cast<double>(n), nb = static_cast<double>(o.n), nt = na + nb;
    const double delta = o.mean - mean;
    mean += delta * nb / nt;
    m2 += o.m2 + delta * delta * na * nb / nt;
    n += o.n;
}

double Welford::variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }

double Welford::std_error() const { return n > 0 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0; }

namespace {

// Moments of (x, y) pairs, with the co-moment needed for ratio estimates.
struct Pair {
    Welford x, y;
    double cxy = 0.0;

    void add(double a, double b) {
        const double dx = a - x.mean;
        x.add(a);
        y.add(b);
        cxy += dx * (b - y.mean);
    }
    void merge(const Pair& o) {
        if (o.x.n == 0) return;
        if (x.n == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(x.n), nb = static_cast<double>(o.x.n), nt = na + nb;
        cxy += o.cxy + (o.x.mean - x.mean) * (o.y.mean - y.mean) * na * nb / nt;
        x.merge(o.x);
        y.merge(o.y);
    }
    double covariance() const { return x.n > 1 ? cxy / static_cast<double>(x.n - 1) : 0.0; }
};

using Observable = std::function<std::pair<double, double>(const Representation&)>;

std::vector<Pair> run_networks(const Quiver& q, const std::vector<BratteliNetwork>& nets, const McConfig& cfg,
                               const Observable& obs) {
    if (cfg.samples < 1) throw ValidationError("at least one sample is required");
    const std::size_t chunks = (cfg.samples + kChunkSize - 1) / kChunkSize;
    const std::size_t tasks = chunks * nets.size();
    std::vector<Pair> partial(tasks);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < tasks; t = next++) {
            const std::size_t net = t / chunks, chunk = t % chunks;
            Rng rng = keyed_stream(cfg.seed, {0x6d63ull, net, chunk});
            const std::size_t begin = chunk * kChunkSize;
            const std::size_t end = std::min(cfg.samples, begin + kChunkSize);
            Pair acc;
            for (std::size_t s = begin; s < end; ++s) {
                auto rep = random_representation(q, nets[net], rng());
                auto [a, b] = obs(rep);
                acc.add(a, b);
            }
            partial[t] = acc;
        }
    };
    const int threads = std::max(1, std::min<int>(cfg.threads, static_cast<int>(tasks)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    std::vector<Pair> per(nets.size());
    for (std::size_t t = 0; t < tasks; ++t) per[t / chunks].merge(partial[t]);
    return per;
}

std::vector<BratteliNetwork> networks_for(const Quiver& q, int N, const McConfig& cfg) {
    if (cfg.network) {
        validate_network(q, *cfg.network);
        return {*cfg.network};
    }
    return enumerate_networks(q, N, cfg.network_options);
}

double action_weight(const Representation& rep, const ActionPolynomial& f) {
    if (f.f.empty()) return 1.0;
    return std::exp(-spectral_action(rep, f));
}

} // namespace

McEstimate estimate_partition(const Quiver& q, int N, const McConfig& cfg) {
    McEstimate est;
    est.networks = networks_for(q, N, cfg);
    if (est.networks.empty()) {
        est.note = "no Bratteli network of dimension " + std::to_string(N) + "; Z = 0";
        return est;
    }
    auto per = run_networks(q, est.networks, cfg, [&](const Representation& rep) {
        return std::pair{action_weight(rep, cfg.f), 0.0};
    });
    double var = 0.0;
    for (const auto& p : per) {
        est.per_network.push_back({p.x.mean, p.x.std_error(), p.x.n});
        est.mean += p.x.mean;
        var += p.x.std_error() * p.x.std_error();
        est.samples_used += p.x.n;
    }
    est.std_error = std::sqrt(var);
    est.note = "Haar measure normalized to mass 1 per network";
    return est;
}

McEstimate wilson_expectation(const Quiver& q, int N, const Path& loop, const McConfig& cfg) {
    Quiver qs = augment(q);
    if (!is_loop(qs, loop)) throw ValidationError("Wilson observable needs a loop of the augmented quiver");
    McEstimate est;
    est.networks = networks_for(q, N, cfg);
    if (est.networks.empty()) {
        est.note = "no Bratteli network of dimension " + std::to_string(N);
        return est;
    }
    auto per = run_networks(q, est.networks, cfg, [&](const Representation& rep) {
        const double W = wilson_loop(path_weights(rep), loop).real();
        const double w = cfg.weighted ? action_weight(rep, cfg.f) : 1.0;
        return std::pair{w * W, w};
    });
    double X = 0, Y = 0, vx = 0, vy = 0, cxy = 0;
    for (const auto& p : per) {
        const double n = static_cast<double>(p.x.n);
        McSummary s;
        s.samples = p.x.n;
        if (cfg.weighted) {
            const double R = p.y.mean != 0.0 ? p.x.mean / p.y.mean : 0.0;
            const double v = (p.x.variance() - 2 * R * p.covariance() + R * R * p.y.variance()) / n;
            s.mean = R;
            s.std_error = p.y.mean != 0.0 ? std::sqrt(std::max(0.0, v)) / std::abs(p.y.mean) : 0.0;
        } else {
            s.mean = p.x.mean;
            s.std_error = p.x.std_error();
        }
        est.per_network.push_back(s);
        X += p.x.mean;
        Y += p.y.mean;
        vx += p.x.variance() / n;
        vy += p.y.variance() / n;
        cxy += p.covariance() / n;
        est.samples_used += p.x.n;
    }
    if (cfg.weighted) {
        const double R = Y != 0.0 ? X / Y : 0.0;
        est.mean = R;
        est.std_error = Y != 0.0 ? std::sqrt(std::max(0.0, vx - 2 * R * cxy + R * R * vy)) / std::abs(Y) : 0.0;
        est.note = "action-weighted ratio estimate";
    } else {
        const double k = static_cast<double>(per.size());
        est.mean = X / k;
        est.std_error = std::sqrt(vx) / k;
        est.note = "pure Haar average over networks";
    }
    return est;
}

} // namespace qst
