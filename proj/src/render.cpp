#include "ernn/render.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>
#include <vector>

namespace ernn {

namespace {

struct P {
  double x, y;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// Keeps the part of a convex polygon with n . p >= c.
std::vector<P> clip(const std::vector<P>& poly, double n1, double n2, double c) {
  std::vector<P> out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const P& a = poly[i];
    const P& b = poly[(i + 1) % poly.size()];
    const double fa = n1 * a.x + n2 * a.y - c;
    const double fb = n1 * b.x + n2 * b.y - c;
    if (fa >= 0) out.push_back(a);
    if ((fa >= 0) != (fb >= 0)) {
      const double t = fa / (fa - fb);
      out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
  }
  return out;
}

// Segment of the line n . p = c inside the box, if any.
std::optional<std::array<P, 2>> clip_line(double n1, double n2, double c, const std::array<double, 4>& box) {
  const P p0{n1 * c, n2 * c};
  const P d{-n2, n1};
  double lo = -1e300, hi = 1e300;
  auto bound = [&](double p, double dp, double min, double max) {
    if (dp == 0) return p >= min && p <= max;
    double t0 = (min - p) / dp, t1 = (max - p) / dp;
    if (t0 > t1) std::swap(t0, t1);
    lo = std::max(lo, t0);
    hi = std::min(hi, t1);
    return lo <= hi;
  };
  if (!bound(p0.x, d.x, box[0], box[1]) || !bound(p0.y, d.y, box[2], box[3])) return std::nullopt;
  return std::array<P, 2>{P{p0.x + lo * d.x, p0.y + lo * d.y}, P{p0.x + hi * d.x, p0.y + hi * d.y}};
}

const char* fill_for(GadgetKind kind) {
  switch (kind) {
    case GadgetKind::Variable: return "#4c78a8";
    case GadgetKind::Inversion: return "#e45756";
    case GadgetKind::LowerBound: return "#54a24b";
  }
  return "#999999";
}

const char* fill_for(PointPurpose purpose) {
  switch (purpose) {
    case PointPurpose::Copy: return "#1f1f1f";
    case PointPurpose::Addition: return "#b279a2";
    case PointPurpose::InversionCopy: return "#f58518";
    case PointPurpose::WeakQ: return "#72b7b2";
  }
  return "#000000";
}

}  // namespace

std::string render_layout_svg(const Layout& layout, const RenderOptions& opts) {
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  bool first = true;
  auto include = [&](const Point2& p) {
    const double x = p.x1.to_double(), y = p.x2.to_double();
    if (first) {
      x0 = x1 = x;
      y0 = y1 = y;
      first = false;
    }
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  };
  for (const auto& p : layout.points) include(p.x);
  for (const auto& p : layout.probes) include(p.x);
  const double pad = layout.config.spacing.to_double() / 2;
  x0 -= pad;
  x1 += pad;
  y0 -= pad;
  y1 += pad;
  const double scale = opts.scale > 0 ? opts.scale : 1600.0 / (x1 - x0);
  const double width = (x1 - x0) * scale;
  const double height = (y1 - y0) * scale;
  const double caption = 48;
  auto sx = [&](double x) { return num((x - x0) * scale); };
  auto sy = [&](double y) { return num((y1 - y) * scale); };
  const std::array<double, 4> box{x0, x1, y0, y1};

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(width) << "\" height=\""
     << num(height + caption) << "\" viewBox=\"0 0 " << num(width) << " " << num(height + caption) << "\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << num(width) << "\" height=\"" << num(height)
     << "\" fill=\"#ffffff\" stroke=\"#cccccc\"/>\n";

  const std::vector<P> rect{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  for (std::size_t g = 0; g < layout.gadgets.size(); ++g) {
    const auto& pl = layout.gadgets[g].placement;
    const double n1 = pl.normal.n1().to_double(), n2 = pl.normal.n2().to_double();
    const double lo = pl.base_offset.to_double(), hi = (pl.base_offset + pl.tmpl.width).to_double();
    auto poly = clip(clip(rect, n1, n2, lo), -n1, -n2, -hi);
    if (poly.empty()) continue;
    os << "<g class=\"gadget\" data-index=\"" << g << "\" data-kind=\"" << to_string(pl.tmpl.kind) << "\">\n";
    os << "<polygon fill=\"" << fill_for(pl.tmpl.kind) << "\" fill-opacity=\"0.25\" stroke=\"none\" points=\"";
    for (std::size_t i = 0; i < poly.size(); ++i) os << (i ? " " : "") << sx(poly[i].x) << "," << sy(poly[i].y);
    os << "\"/>\n";
    if (opts.show_lines) {
      for (const auto& line : pl.data_lines()) {
        if (auto seg = clip_line(n1, n2, line.offset.to_double(), box)) {
          os << "<line x1=\"" << sx((*seg)[0].x) << "\" y1=\"" << sy((*seg)[0].y) << "\" x2=\"" << sx((*seg)[1].x)
             << "\" y2=\"" << sy((*seg)[1].y) << "\" stroke=\"" << fill_for(pl.tmpl.kind)
             << "\" stroke-width=\"0.5\"/>\n";
        }
      }
      if (pl.tmpl.kind != GadgetKind::LowerBound) {
        for (std::size_t dim = 0; dim < 2; ++dim) {
          for (auto side : {MeasuringSide::Lower, MeasuringSide::Upper}) {
            const double off = (pl.base_offset + measuring_offset(pl.tmpl.kind, side, dim)).to_double();
            if (auto seg = clip_line(n1, n2, off, box)) {
              os << "<line x1=\"" << sx((*seg)[0].x) << "\" y1=\"" << sy((*seg)[0].y) << "\" x2=\""
                 << sx((*seg)[1].x) << "\" y2=\"" << sy((*seg)[1].y)
                 << "\" stroke=\"#333333\" stroke-width=\"0.8\" stroke-dasharray=\"4 3\"/>\n";
            }
          }
          if (pl.tmpl.kind == GadgetKind::Variable) break;
        }
      }
    }
    os << "</g>\n";
  }

  for (const auto& p : layout.points) {
    os << "<circle class=\"point\" data-purpose=\"" << to_string(p.purpose) << "\" cx=\"" << sx(p.x.x1.to_double())
       << "\" cy=\"" << sy(p.x.x2.to_double()) << "\" r=\"3\" fill=\"" << fill_for(p.purpose) << "\"/>\n";
  }
  for (const auto& p : layout.probes) {
    os << "<rect class=\"probe\" x=\"" << num((p.x.x1.to_double() - x0) * scale - 3) << "\" y=\""
       << num((y1 - p.x.x2.to_double()) * scale - 3) << "\" width=\"6\" height=\"6\" fill=\"none\" stroke=\"#000000\"/>\n"
       << "<text x=\"" << num((p.x.x1.to_double() - x0) * scale + 5) << "\" y=\""
       << num((y1 - p.x.x2.to_double()) * scale - 5) << "\" font-family=\"monospace\" font-size=\"11\">"
       << p.variable << "</text>\n";
  }
  os << "<text x=\"6\" y=\"" << num(height + 18) << "\" font-family=\"monospace\" font-size=\"12\">" << layout.gadgets.size()
     << " gadgets, " << layout.points.size() << " constraint points; vertical lines at x = "
     << layout.verticals[0].to_string() << ", " << layout.verticals[1].to_string() << ", "
     << layout.verticals[2].to_string() << "</text>\n"
     << "<text x=\"6\" y=\"" << num(height + 36) << "\" font-family=\"monospace\" font-size=\"12\">"
     << "blue variable, red inversion, green lower bound; dashed measuring lines</text>\n"
     << "</svg>\n";
  return os.str();
}

std::string render_cross_section_svg(const GadgetTemplate& tmpl, const std::optional<GadgetState>& state) {
  const double ux = 40, uy = 28, panel_gap = 30, margin = 36;
  const auto pts = cross_section(tmpl);
  std::vector<Rational> xs{Rational(-1), tmpl.width + 1};
  for (const auto& p : pts) xs.push_back(p.x);
  if (state) {
    for (const auto& r : witness_ridges(tmpl, *state)) xs.push_back(r.at);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  double lo = 0, hi = 0;
  for (const auto& p : pts) {
    for (std::size_t d = 0; d < 2; ++d) {
      lo = std::min(lo, p.label[d].value.to_double());
      hi = std::max(hi, p.label[d].value.to_double());
    }
  }
  if (state) {
    for (const auto& x : xs) {
      const Value2 v = profile(tmpl, *state, x);
      lo = std::min({lo, v.y1.to_double(), v.y2.to_double()});
      hi = std::max({hi, v.y1.to_double(), v.y2.to_double()});
    }
  }
  lo -= 1;
  hi += 1;
  const double panel_h = (hi - lo) * uy;
  const double width = (tmpl.width.to_double() + 2) * ux + 2 * margin;
  const double height = 2 * panel_h + panel_gap + 2 * margin;
  auto px = [&](double x) { return num(margin + (x + 1) * ux); };
  auto py = [&](std::size_t dim, double y) {
    return num(margin + dim * (panel_h + panel_gap) + (hi - y) * uy);
  };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(width) << "\" height=\""
     << num(height) << "\" viewBox=\"0 0 " << num(width) << " " << num(height) << "\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << num(width) << "\" height=\"" << num(height) << "\" fill=\"#ffffff\"/>\n"
     << "<text x=\"" << num(margin) << "\" y=\"20\" font-family=\"monospace\" font-size=\"13\">" << to_string(tmpl.kind)
     << " gadget cross-section</text>\n";
  for (std::size_t dim = 0; dim < 2; ++dim) {
    os << "<line x1=\"" << px(-1) << "\" y1=\"" << py(dim, 0) << "\" x2=\"" << px(tmpl.width.to_double() + 1)
       << "\" y2=\"" << py(dim, 0) << "\" stroke=\"#bbbbbb\"/>\n"
       << "<text x=\"4\" y=\"" << py(dim, 0) << "\" font-family=\"monospace\" font-size=\"11\">f" << dim + 1
       << "</text>\n";
    if (state) {
      os << "<polyline fill=\"none\" stroke=\"#4c78a8\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < xs.size(); ++i) {
        os << (i ? " " : "") << px(xs[i].to_double()) << "," << py(dim, profile(tmpl, *state, xs[i])[dim].to_double());
      }
      os << "\"/>\n";
    }
    for (const auto& p : pts) {
      const Label& l = p.label[dim];
      const std::string cx = px(p.x.to_double()), cy = py(dim, l.value.to_double());
      if (l.is_exact()) {
        os << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"3.5\" fill=\"#1f1f1f\"/>\n";
      } else {
        const double x = margin + (p.x.to_double() + 1) * ux;
        const double y = margin + dim * (panel_h + panel_gap) + (hi - l.value.to_double()) * uy;
        os << "<polygon fill=\"#f58518\" points=\"" << num(x) << "," << num(y - 6) << " " << num(x - 5) << ","
           << num(y + 3) << " " << num(x + 5) << "," << num(y + 3) << "\"/>\n";
      }
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace ernn
