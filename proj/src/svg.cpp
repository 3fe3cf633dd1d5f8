#include "growform/svg.hpp"

#include <cstdio>
#include <stdexcept>

namespace growform {

namespace {

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

void check_range(const FormHistory &h, std::size_t first, std::size_t last) {
  if (first > last || last >= h.layers.size())
    throw std::out_of_range("layer range [" + std::to_string(first) + ", " + std::to_string(last) +
                            "] is outside the history's " + std::to_string(h.layers.size()) + " layers");
}

std::string header(const SvgOptions &o) {
  const std::string s = num(o.env_size);
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + s + "\" height=\"" + s +
         "\" viewBox=\"0 0 " + s + " " + s + "\">\n";
}

std::string path_data(const Polyline &poly) {
  std::string d;
  for (std::size_t i = 0; i < poly.size(); ++i) d += (i == 0 ? "M" : " L") + num(poly[i].x) + " " + num(poly[i].y);
  return d + " Z";
}

void append_layer(std::string &out, const Layer &layer, const SvgOptions &o, double opacity) {
  for (const auto &poly : layer) {
    if (poly.empty()) continue;
    out += "  <path d=\"" + path_data(poly) + "\" fill=\"none\" stroke=\"" + o.stroke + "\" stroke-width=\"" +
           num(o.stroke_width) + "\"";
    if (opacity < 1.0) out += " stroke-opacity=\"" + num(opacity) + "\"";
    out += "/>\n";
  }
}

}  // namespace

std::vector<std::string> emit_layer_svg(const FormHistory &history, std::size_t first, std::size_t last,
                                        const SvgOptions &options) {
  check_range(history, first, last);
  std::vector<std::string> docs;
  for (std::size_t i = first; i <= last; ++i) {
    std::string doc = header(options);
    doc += "  <title>layer " + std::to_string(i) + "</title>\n";
    append_layer(doc, history.layers[i], options, 1.0);
    doc += "</svg>\n";
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::string emit_overlay_svg(const FormHistory &history, std::size_t first, std::size_t last, std::size_t every,
                             const SvgOptions &options) {
  check_range(history, first, last);
  if (every == 0) throw std::invalid_argument("overlay stride must be >= 1");
  std::vector<std::size_t> drawn;
  for (std::size_t i = first; i <= last; i += every) drawn.push_back(i);
  std::string doc = header(options);
  doc += "  <title>layers " + std::to_string(first) + "-" + std::to_string(last) + " every " + std::to_string(every) +
         "</title>\n";
  for (std::size_t k = 0; k < drawn.size(); ++k) {
    const double t = drawn.size() > 1 ? static_cast<double>(k) / static_cast<double>(drawn.size() - 1) : 1.0;
    append_layer(doc, history.layers[drawn[k]], options, 0.15 + 0.85 * t);
  }
  doc += "</svg>\n";
  return doc;
}

}  // namespace growform
