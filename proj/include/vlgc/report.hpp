#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "vlgc/bench.hpp"
#include "vlgc/inference.hpp"

namespace vlgc {

using Json = nlohmann::ordered_json;

/// Finite values as numbers; infinities and NaN as the strings "inf", "-inf", "nan".
[[nodiscard]] Json number(double v);

[[nodiscard]] Json to_json(const InferenceConfig& cfg, std::size_t length);
[[nodiscard]] Json to_json(const CausalVerdict& verdict);
[[nodiscard]] Json to_json(const CausalGraph& graph);
[[nodiscard]] Json to_json(const std::vector<InitiatorScore>& scores);
[[nodiscard]] Json to_json(const BenchConfig& cfg);
[[nodiscard]] Json to_json(const BenchResult& result, BenchSuite suite);

/// Stable text form: two-space indentation and a trailing newline.
[[nodiscard]] std::string render(const Json& report);

}  // namespace vlgc
