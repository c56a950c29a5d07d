#pragma once

#include <optional>
#include <string>

#include "ernn/gadgets.hpp"
#include "ernn/layout.hpp"

namespace ernn {

struct RenderOptions {
  // Pixels per unit; 0 picks a scale that makes the figure 1600 px wide.
  double scale = 0;
  bool show_lines = true;
};

// Top-down view of the constraint region: stripes, measuring lines,
// constraint points and probes. The vertical lines lie far to the right and
// are listed in the caption instead of drawn.
[[nodiscard]] std::string render_layout_svg(const Layout& layout, const RenderOptions& opts = {});

// Labels of a gadget's cross-section per dimension, with the witness profile
// overlaid when a state is given.
[[nodiscard]] std::string render_cross_section_svg(const GadgetTemplate& tmpl,
                                                   const std::optional<GadgetState>& state = std::nullopt);

}  // namespace ernn
