#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ernn/gadgets.hpp"
#include "ernn/layout.hpp"
#include "ernn/network.hpp"

// JSON files with rationals written as "p/q" strings. Writers are
// byte-deterministic; readers throw FormatError.
namespace ernn::io {

[[nodiscard]] std::string network_to_json(const Network& net);
[[nodiscard]] Network network_from_json(std::string_view text);

[[nodiscard]] std::string instance_to_json(const TrainInstance& inst);
[[nodiscard]] TrainInstance instance_from_json(std::string_view text);

[[nodiscard]] std::string layout_to_json(const Layout& layout);
[[nodiscard]] Layout layout_from_json(std::string_view text);

[[nodiscard]] std::string profiles_to_json(const std::vector<FittingProfile>& profiles);

// Whole-file helpers; throw FormatError on I/O failure.
[[nodiscard]] std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace ernn::io
