#pragma once

#include <utility>
#include <vector>

#include "wc4dvar/types.hpp"

namespace wc4dvar {

/// Which state components are observed at which time steps. Component
/// indices are 0-based and sorted; time steps run 0..N.
class ObservationNetwork {
public:
    ObservationNetwork(int state_dim, std::vector<std::vector<int>> observed);

    int state_dim() const { return n_; }
    int num_times() const { return static_cast<int>(observed_.size()); }  // N+1
    const std::vector<int>& components(int t) const { return observed_.at(t); }
    int obs_at(int t) const { return static_cast<int>(observed_.at(t).size()); }
    int total_obs() const { return p_; }
    bool fully_observed() const { return p_ == n_ * num_times(); }

    /// Global observation rows in (time, component) order.
    const std::vector<std::pair<int, int>>& rows() const { return rows_; }

    /// Network with the rows of `this` plus the given extra row, keeping
    /// per-time component lists sorted. Used to build nested chains.
    ObservationNetwork with_observation(int t, int component) const;

    /// True if every row of `inner` is also a row of `this`.
    bool contains(const ObservationNetwork& inner) const;

private:
    int n_;
    int p_;
    std::vector<std::vector<int>> observed_;
    std::vector<std::pair<int, int>> rows_;
};

/// The six observation networks of the reference experiment (n=40, N=15):
///   a: 1 observation, component 0 at t15
///   b: every 8th component at t3,t7,t11,t15              (p=20)
///   c: every 4th component at t1,t3,...,t15              (p=80)
///   d: every 2nd component at the same times as c        (p=160)
///   e: every 2nd component at every time t0..t15         (p=320)
///   f: all components at all times                       (p=640)
ObservationNetwork named_network(char id, int n, int N);

}  // namespace wc4dvar
