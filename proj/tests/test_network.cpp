#include <doctest.h>

#include "wc4dvar/network.hpp"

using namespace wc4dvar;

TEST_CASE("named networks have the reference cardinalities") {
    const int n = 40, N = 15;
    const int expected[6] = {1, 20, 80, 160, 320, 640};
    for (int k = 0; k < 6; ++k) {
        const ObservationNetwork net = named_network(static_cast<char>('a' + k), n, N);
        CHECK(net.total_obs() == expected[k]);
    }
    CHECK(named_network('f', n, N).fully_observed());
    CHECK_FALSE(named_network('e', n, N).fully_observed());
}

TEST_CASE("network a is one observation at the final time") {
    const ObservationNetwork net = named_network('a', 40, 15);
    REQUIRE(net.rows().size() == 1);
    CHECK(net.rows()[0].first == 15);
}

TEST_CASE("network c observes every 4th variable at odd times") {
    const ObservationNetwork net = named_network('c', 40, 15);
    for (int t = 0; t <= 15; ++t) {
        if (t % 2 == 1) {
            REQUIRE(net.obs_at(t) == 10);
            for (std::size_t i = 0; i + 1 < net.components(t).size(); ++i)
                CHECK(net.components(t)[i + 1] - net.components(t)[i] == 4);
        } else {
            CHECK(net.obs_at(t) == 0);
        }
    }
}

TEST_CASE("networks nest a through f") {
    const int n = 40, N = 15;
    for (char id = 'a'; id < 'f'; ++id) {
        const ObservationNetwork inner = named_network(id, n, N);
        const ObservationNetwork outer = named_network(static_cast<char>(id + 1), n, N);
        CHECK(outer.contains(inner));
        CHECK_FALSE(inner.contains(outer));
    }
}

TEST_CASE("with_observation adds exactly one row and keeps ordering") {
    const ObservationNetwork base = named_network('b', 40, 15);
    const ObservationNetwork grown = base.with_observation(5, 17);
    CHECK(grown.total_obs() == base.total_obs() + 1);
    CHECK(grown.contains(base));
    CHECK(grown.obs_at(5) == 1);
    // Components stay sorted after insertion in an occupied time slot.
    const ObservationNetwork grown2 = grown.with_observation(5, 3);
    CHECK(grown2.components(5)[0] == 3);
    CHECK(grown2.components(5)[1] == 17);
}

TEST_CASE("invalid networks are rejected") {
    CHECK_THROWS_AS(named_network('z', 40, 15), ConfigError);
    // Out-of-range component index.
    std::vector<std::vector<int>> bad(2);
    bad[1] = {40};
    CHECK_THROWS_AS(ObservationNetwork(40, bad), ConfigError);
    // Duplicate observation of the same component and time.
    std::vector<std::vector<int>> dup(2);
    dup[0] = {3, 3};
    CHECK_THROWS_AS(ObservationNetwork(40, dup), ConfigError);
}
