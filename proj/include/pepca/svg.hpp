#pragma once

#include <filesystem>
#include <string>

#include "pepca/io.hpp"
#include "pepca/metrics.hpp"

namespace pepca {

// 800x600 scatter of the first two embedding columns, colored by label with
// a fixed palette cycled in sorted-label order, with padded axes, numeric
// ticks, and a legend. Output depends only on the inputs, byte for byte.
// manifest_json, when non-empty, is embedded in a <desc> element.
std::string render_scatter_svg(const Embedding& e, const LabelTable& labels,
                               const std::string& manifest_json = "");

void plot_svg(const Embedding& e, const LabelTable& labels, const std::filesystem::path& path,
              const std::string& manifest_json = "");

}  // namespace pepca
