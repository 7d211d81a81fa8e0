#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace alie {

/// An ordered real-valued sample, optionally tagged with the seed it was drawn from.
struct TimeSeries {
    std::vector<double> values;
    std::optional<std::uint64_t> seed;

    int size() const { return static_cast<int>(values.size()); }
};

}  // namespace alie
