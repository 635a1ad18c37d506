#include "prada/prediction.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "prada/errors.hpp"
#include "prada/manifest.hpp"

namespace prada {

ErrorCountPolynomial ErrorCountSlice::polynomial(int i, int k) const {
    ErrorCountPolynomial p(horizon_ + 1);
    for (int l = 0; l <= horizon_; ++l) p[l] = at(i, k, l);
    return p;
}

std::vector<std::array<double, 2>> psi_matrix(int setting, const FerTable& fer) {
    if (setting < 0 || setting >= fer.num_settings) throw ValidationError("setting out of range");
    std::vector<std::array<double, 2>> psi(fer.num_states);
    for (int i = 0; i < fer.num_states; ++i) {
        const double e = fer.at(setting, i);
        psi[i] = {1.0 - e, e};
    }
    return psi;
}

ErrorCountSlice error_count_distribution(const FsmcChannel& channel, const FerTable& fer,
                                         int setting, int horizon) {
    const int n = channel.num_states();
    if (fer.num_states != n) throw ValidationError("FER table does not match the channel");
    if (horizon < 1) throw ValidationError("horizon must be at least 1");
    const auto psi = psi_matrix(setting, fer);
    const Matrix& p = channel.transition;

    // Entries of G = P * psi are degree-1 polynomials. H starts at psi and
    // is right-multiplied by G a frame at a time; degrees above M carry no
    // usable information and are truncated.
    ErrorCountSlice h(n, horizon);
    for (int i = 0; i < n; ++i) {
        h.at(i, i, 0) = psi[i][0];
        h.at(i, i, 1) = psi[i][1];
    }

    ErrorCountSlice next(n, horizon);
    for (int step = 1; step < horizon; ++step) {
        const int deg = std::min(step, horizon);  // max degree present in h
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < n; ++k) {
                for (int l = 0; l <= std::min(deg + 1, horizon); ++l) next.at(i, k, l) = 0.0;
            }
        }
        for (int i = 0; i < n; ++i) {
            // (H G)(i, k) = sum_j H(i, j) * P(j, k) * psi_k(s); the chain is
            // tridiagonal so only |j - k| <= 1 contributes.
            for (int k = 0; k < n; ++k) {
                for (int j = std::max(0, k - 1); j <= std::min(n - 1, k + 1); ++j) {
                    const double pjk = p(j, k);
                    if (pjk == 0.0) continue;
                    for (int l = 0; l <= deg; ++l) {
                        const double v = h.at(i, j, l) * pjk;
                        if (v == 0.0) continue;
                        next.at(i, k, l) += v * psi[k][0];
                        if (l + 1 <= horizon) next.at(i, k, l + 1) += v * psi[k][1];
                    }
                }
            }
        }
        std::swap(h, next);
    }
    return h;
}

ErrorCountDistribution error_count_distribution_all(const FsmcChannel& channel, const FerTable& fer,
                                                    int horizon) {
    ErrorCountDistribution out;
    out.horizon = horizon;
    out.per_setting.reserve(fer.num_settings);
    for (int r = 0; r < fer.num_settings; ++r) {
        out.per_setting.push_back(error_count_distribution(channel, fer, r, horizon));
    }
    return out;
}

namespace {

uint64_t content_key(const FsmcChannel& channel, const FerTable& fer, int horizon) {
    uint64_t h = 0xcbf29ce484222325ull;
    const auto mix = [&h](const void* p, size_t n) { h = fnv1a(p, n, h); };
    const int n = channel.num_states();
    mix(&n, sizeof(n));
    mix(&horizon, sizeof(horizon));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double v = channel.transition(i, j);
            mix(&v, sizeof(v));
        }
    }
    mix(&fer.num_settings, sizeof(fer.num_settings));
    mix(fer.values.data(), fer.values.size() * sizeof(double));
    return h;
}

std::mutex g_cache_mutex;
std::map<uint64_t, std::shared_ptr<const ErrorCountDistribution>> g_cache;

}  // namespace

std::shared_ptr<const ErrorCountDistribution> cached_error_count_distribution(
    const FsmcChannel& channel, const FerTable& fer, int horizon) {
    const uint64_t key = content_key(channel, fer, horizon);
    {
        std::lock_guard<std::mutex> lock(g_cache_mutex);
        if (auto it = g_cache.find(key); it != g_cache.end()) return it->second;
    }
    auto value = std::make_shared<const ErrorCountDistribution>(
        error_count_distribution_all(channel, fer, horizon));
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    return g_cache.emplace(key, std::move(value)).first->second;
}

ThroughputVector expected_period_throughput(const ErrorCountDistribution& f,
                                            const SettingTable& settings) {
    if (f.num_settings() != settings.count()) {
        throw ValidationError("setting table does not match the distribution");
    }
    const int n = f.num_states();
    const int m = f.horizon;
    ThroughputVector xi;
    xi.num_settings = f.num_settings();
    xi.num_states = n;
    xi.xi.assign(static_cast<size_t>(xi.num_settings) * n, 0.0);
    for (int r = 0; r < xi.num_settings; ++r) {
        const ErrorCountSlice& slice = f.per_setting[r];
        for (int i = 0; i < n; ++i) {
            double total = 0.0;
            for (int k = 0; k < n; ++k) {
                for (int l = 0; l <= m; ++l) {
                    total += (static_cast<double>(m - l) / m) * slice.at(i, k, l);
                }
            }
            xi.at(r, i) = settings.bits(r) * total;
        }
    }
    return xi;
}

}  // namespace prada
