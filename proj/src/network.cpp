#include "wc4dvar/network.hpp"

#include <algorithm>

namespace wc4dvar {

ObservationNetwork::ObservationNetwork(int state_dim, std::vector<std::vector<int>> observed)
    : n_(state_dim), observed_(std::move(observed)) {
    require(n_ >= 1, "ObservationNetwork: state_dim must be positive");
    require(!observed_.empty(), "ObservationNetwork: needs at least one time step");
    p_ = 0;
    for (int t = 0; t < num_times(); ++t) {
        auto& comps = observed_[t];
        std::sort(comps.begin(), comps.end());
        require(std::adjacent_find(comps.begin(), comps.end()) == comps.end(),
                "ObservationNetwork: duplicate component index");
        for (int c : comps) {
            require(c >= 0 && c < n_, "ObservationNetwork: component index out of range");
            rows_.emplace_back(t, c);
        }
        p_ += static_cast<int>(comps.size());
    }
}

ObservationNetwork ObservationNetwork::with_observation(int t, int component) const {
    require(t >= 0 && t < num_times(), "with_observation: time index out of range");
    auto observed = observed_;
    observed[t].push_back(component);
    return ObservationNetwork(n_, std::move(observed));
}

bool ObservationNetwork::contains(const ObservationNetwork& inner) const {
    if (inner.num_times() != num_times() || inner.n_ != n_) return false;
    for (int t = 0; t < num_times(); ++t) {
        const auto& outer = observed_[t];
        for (int c : inner.observed_[t])
            if (!std::binary_search(outer.begin(), outer.end(), c)) return false;
    }
    return true;
}

ObservationNetwork named_network(char id, int n, int N) {
    std::vector<std::vector<int>> observed(N + 1);
    auto every = [n](int stride) {
        std::vector<int> comps;
        for (int c = 0; c < n; c += stride) comps.push_back(c);
        return comps;
    };
    switch (id) {
        case 'a':
            observed[N] = {0};
            break;
        case 'b':
            for (int t = 3; t <= N; t += 4) observed[t] = every(8);
            break;
        case 'c':
            for (int t = 1; t <= N; t += 2) observed[t] = every(4);
            break;
        case 'd':
            for (int t = 1; t <= N; t += 2) observed[t] = every(2);
            break;
        case 'e':
            for (int t = 0; t <= N; ++t) observed[t] = every(2);
            break;
        case 'f':
            for (int t = 0; t <= N; ++t) observed[t] = every(1);
            break;
        default:
            throw ConfigError(std::string("named_network: unknown network id '") + id + "'");
    }
    return ObservationNetwork(n, std::move(observed));
}

}  // namespace wc4dvar
