#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace dbd::oracle {

// A property draws its own random instance from the generator and returns a
// description of the counterexample, or nullopt when the property holds.
using PropertyFn = std::function<std::optional<std::string>(std::mt19937_64&)>;

struct Property {
    std::string module;
    std::string name;
    PropertyFn check;
};

struct PropertyOutcome {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::size_t first_failing_case = 0;
    std::string first_failure;

    bool passed() const { return failures == 0; }
};

inline constexpr std::size_t kPropertyCases = 200;

// Case c runs with a generator seeded from (seed, c), so any failure replays
// in isolation.
PropertyOutcome run_property(const Property& property, std::size_t cases = kPropertyCases, std::uint64_t seed = 1);

const std::vector<Property>& all_properties();

// Randomized interleaving of removals and queries against a masked linear
// scan. Returns the first mismatch. `ops_run` receives the operation count.
std::optional<std::string> nn_operation_stream(std::mt19937_64& rng, std::size_t ops, std::size_t* ops_run = nullptr);

}  // namespace dbd::oracle
