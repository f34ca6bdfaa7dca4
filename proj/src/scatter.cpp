#include "dlcda/scatter.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <string>

namespace dlcda {

namespace {

const char* const kPalette[8] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                 "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

const char* class_color(int label) {
  return kPalette[(label - 1) % 8];
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

void emit_scatter(const Matrix& embedded, const std::vector<int>& source_labels,
                  const std::vector<int>& target_labels,
                  const std::string& path) {
  if (embedded.rows() < 2) {
    throw DimensionMismatch("emit_scatter: embedding needs >= 2 dimensions");
  }
  const Index n_s = static_cast<Index>(source_labels.size());
  const Index n_t = static_cast<Index>(target_labels.size());
  if (n_s + n_t != embedded.cols() || embedded.cols() < 1) {
    throw LengthMismatch("emit_scatter: labels do not match the embedding");
  }
  for (int v : source_labels) {
    if (v < 1) throw LabelOutOfRange("emit_scatter: labels start at 1");
  }
  for (int v : target_labels) {
    if (v < 1) throw LabelOutOfRange("emit_scatter: labels start at 1");
  }

  const double width = 640.0, height = 480.0, margin = 40.0;
  double xmin = embedded.row(0).minCoeff(), xmax = embedded.row(0).maxCoeff();
  double ymin = embedded.row(1).minCoeff(), ymax = embedded.row(1).maxCoeff();
  const double xpad = std::max(1e-9, 0.05 * (xmax - xmin));
  const double ypad = std::max(1e-9, 0.05 * (ymax - ymin));
  xmin -= xpad;
  xmax += xpad;
  ymin -= ypad;
  ymax += ypad;
  const auto sx = [&](double x) {
    return margin + (x - xmin) / (xmax - xmin) * (width - 2 * margin);
  };
  const auto sy = [&](double y) {
    // SVG y grows downward; flip so larger values plot higher.
    return height - margin - (y - ymin) / (ymax - ymin) * (height - 2 * margin);
  };

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open " + path + " for writing");
  }
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\""
      << width - 2 * margin << "\" height=\"" << height - 2 * margin
      << "\" fill=\"none\" stroke=\"#cccccc\"/>\n";

  for (Index i = 0; i < n_s; ++i) {
    const int c = source_labels[static_cast<std::size_t>(i)];
    out << "<circle cx=\"" << fmt(sx(embedded(0, i))) << "\" cy=\""
        << fmt(sy(embedded(1, i))) << "\" r=\"3\" fill=\"" << class_color(c)
        << "\" fill-opacity=\"0.75\"/>\n";
  }
  for (Index i = 0; i < n_t; ++i) {
    const int c = target_labels[static_cast<std::size_t>(i)];
    const double x = sx(embedded(0, n_s + i));
    const double y = sy(embedded(1, n_s + i));
    out << "<rect x=\"" << fmt(x - 2.6) << "\" y=\"" << fmt(y - 2.6)
        << "\" width=\"5.2\" height=\"5.2\" fill=\"" << class_color(c)
        << "\" fill-opacity=\"0.75\"/>\n";
  }

  // Legend: every class present, source entries first.
  std::set<int> src_classes(source_labels.begin(), source_labels.end());
  std::set<int> tgt_classes(target_labels.begin(), target_labels.end());
  double ly = margin + 14.0;
  const double lx = width - margin - 140.0;
  for (int c : src_classes) {
    out << "<circle cx=\"" << fmt(lx) << "\" cy=\"" << fmt(ly - 4.0)
        << "\" r=\"3\" fill=\"" << class_color(c) << "\"/>\n";
    out << "<text x=\"" << fmt(lx + 8.0) << "\" y=\"" << fmt(ly)
        << "\" font-size=\"11\" font-family=\"sans-serif\">class " << c
        << " (source)</text>\n";
    ly += 14.0;
  }
  for (int c : tgt_classes) {
    out << "<rect x=\"" << fmt(lx - 2.6) << "\" y=\"" << fmt(ly - 4.0 - 2.6)
        << "\" width=\"5.2\" height=\"5.2\" fill=\"" << class_color(c)
        << "\"/>\n";
    out << "<text x=\"" << fmt(lx + 8.0) << "\" y=\"" << fmt(ly)
        << "\" font-size=\"11\" font-family=\"sans-serif\">class " << c
        << " (target)</text>\n";
    ly += 14.0;
  }
  out << "</svg>\n";
  if (!out) {
    throw IoError("write failure on " + path);
  }
}

}  // namespace dlcda
