#include "foldcycle_app/portrait.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "foldcycle_app/report.hpp"

namespace foldcycle::app {

namespace {

std::vector<PlaneState> arc(const PiecewiseField& z, Side side, double x, const IntegratorConfig& cfg,
                            const Window& window) {
  const SmoothField& f = z.side(side);
  const double y0 = f.Y.eval(x, 0.0);
  if (y0 == 0.0) return {};
  const bool points_in = side == Side::Upper ? y0 > 0.0 : y0 < 0.0;
  return integrate_to_sigma(f, {x, 0.0}, points_in ? Direction::Forward : Direction::Backward, cfg, window)
      .trajectory;
}

constexpr double kWidth = 800.0;
constexpr double kHeight = 400.0;
constexpr double kMargin = 20.0;

}  // namespace

Portrait build_portrait(const PiecewiseField& z, const Window& window, const std::vector<LimitCycle>& cycles,
                        const IntegratorConfig& cfg) {
  Portrait p;
  IntegratorConfig draw = cfg;
  draw.max_step = std::min(cfg.max_step, window.radius / 25.0);
  const double lo = window.center - 2.0 * window.radius;
  const double hi = window.center + 2.0 * window.radius;

  try {
    for (const auto& seg : sigma_regions(z, lo, hi)) {
      p.lines.push_back({is_sliding(seg.kind) ? "sigma-sliding" : "sigma-crossing", {{seg.x_lo, 0.0}, {seg.x_hi, 0.0}}});
    }
  } catch (const Error& e) {
    p.diagnostics.push_back(std::string("switching line: ") + e.what());
  }

  for (const SmoothField* f : {&z.upper, &z.lower}) {
    const Poly1 r = f->Y.restrict_sigma();
    if (r.is_zero()) continue;
    for (double x : real_roots(r, lo, hi)) p.lines.push_back({"fold", {{x, 0.0}}});
  }

  const Window box{window.center, window.radius};
  for (int i = 1; i <= 5; ++i) {
    for (double sgn : {1.0, -1.0}) {
      const double x = window.center + sgn * 0.2 * i * window.radius;
      for (Side side : {Side::Upper, Side::Lower}) {
        try {
          auto pts = arc(z, side, x, draw, box);
          if (!pts.empty()) p.lines.push_back({side == Side::Upper ? "arc-upper" : "arc-lower", std::move(pts)});
        } catch (const Error&) {
          // arcs leaving the drawing box are simply omitted
        }
      }
    }
  }

  for (const auto& c : cycles) {
    const Window wide{c.window_center, 2.0 * std::max(c.amplitude, window.radius)};
    try {
      p.lines.push_back({"cycle-upper", arc(z, Side::Upper, c.x_star, draw, wide)});
      p.lines.push_back({"cycle-lower", arc(z, Side::Lower, c.x_star, draw, wide)});
    } catch (const Error& e) {
      p.diagnostics.push_back(std::string("cycle arc: ") + e.what());
    }
  }
  return p;
}

namespace {

std::string pixel(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string portrait_svg(const Portrait& p, const std::string& title) {
  double xmin = 0.0, xmax = 0.0, ymax = 0.0;
  bool first = true;
  for (const auto& l : p.lines) {
    for (const auto& pt : l.points) {
      if (first) {
        xmin = xmax = pt[0];
        first = false;
      }
      xmin = std::min(xmin, pt[0]);
      xmax = std::max(xmax, pt[0]);
      ymax = std::max(ymax, std::abs(pt[1]));
    }
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= 0.0) ymax = 1.0;
  const auto sx = [&](double x) { return kMargin + (x - xmin) / (xmax - xmin) * (kWidth - 2 * kMargin); };
  const auto sy = [&](double y) { return kHeight / 2.0 - y / (1.1 * ymax) * (kHeight / 2.0 - kMargin); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  out << "<title>" << title << "</title>\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& l : p.lines) {
    if (l.kind == "fold") {
      out << "<circle cx=\"" << pixel(sx(l.points[0][0])) << "\" cy=\"" << pixel(sy(0.0))
          << "\" r=\"4\" fill=\"black\"/>\n";
      continue;
    }
    std::string style;
    if (l.kind == "sigma-sliding") style = "stroke=\"black\" stroke-width=\"3\"";
    else if (l.kind == "sigma-crossing") style = "stroke=\"black\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"";
    else if (l.kind.rfind("cycle", 0) == 0) style = "stroke=\"crimson\" stroke-width=\"2\"";
    else style = "stroke=\"steelblue\" stroke-width=\"1\"";
    out << "<polyline fill=\"none\" " << style << " points=\"";
    for (std::size_t i = 0; i < l.points.size(); ++i) {
      if (i) out << ' ';
      out << pixel(sx(l.points[i][0])) << ',' << pixel(sy(l.points[i][1]));
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string portrait_csv(const Portrait& p) {
  std::ostringstream out;
  out << "polyline,kind,x,y\n";
  for (std::size_t i = 0; i < p.lines.size(); ++i) {
    for (const auto& pt : p.lines[i].points) {
      out << i << ',' << p.lines[i].kind << ',' << format_number(pt[0]) << ',' << format_number(pt[1]) << '\n';
    }
  }
  return out.str();
}

}  // namespace foldcycle::app
