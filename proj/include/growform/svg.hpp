#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "growform/form_history.hpp"

namespace growform {

struct SvgOptions {
  double env_size = 600.0;  ///< drawing extent in environment units
  double stroke_width = 1.0;
  std::string stroke = "#1f2933";
};

/// One SVG document per layer in [first, last], each polyline a closed path.
/// Throws std::out_of_range for indices outside the history.
std::vector<std::string> emit_layer_svg(const FormHistory &history, std::size_t first, std::size_t last,
                                        const SvgOptions &options = {});

/// Single top-down document drawing every `every`-th layer of [first, last],
/// opacity rising from 0.15 at the first drawn layer to 1 at the last.
std::string emit_overlay_svg(const FormHistory &history, std::size_t first, std::size_t last, std::size_t every,
                             const SvgOptions &options = {});

}  // namespace growform
