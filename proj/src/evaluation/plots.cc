// src/evaluation/plots.cc

// Copyright 2026  sigvc authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.


#include "sigvc/evaluation/plots.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "sigvc/util/error.h"

namespace sigvc {

namespace fs = std::filesystem;

std::vector<PlotGroup> SystemComparisonGroups(
    const std::map<std::string, DistributionSummary> &systems) {
  std::vector<PlotGroup> groups;
  for (auto a = systems.begin(); a != systems.end(); ++a) {
    for (auto b = std::next(a); b != systems.end(); ++b) {
      PlotGroup g;
      g.name = a->first + "_vs_" + b->first;
      g.title = a->first + " vs " + b->first;
      DistributionSummary sa = a->second, sb = b->second;
      sa.label = a->first + ":" + sa.label;
      sb.label = b->first + ":" + sb.label;
      g.summaries = {sa, sb};
      groups.push_back(std::move(g));
    }
  }
  return groups;
}

namespace {

const char *kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string Escape(const std::string &s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string RenderHistogramSvg(const PlotGroup &group) {
  const double width = 640, height = 400, left = 50, right = 20, top = 40, bottom = 50;
  const double pw = width - left - right, ph = height - top - bottom;
  double lo = 0, hi = 1, peak = 0;
  bool first = true;
  for (const auto &s : group.summaries) {
    const auto &e = s.histogram.edges;
    if (e.empty()) continue;
    lo = first ? e.front() : std::min(lo, e.front());
    hi = first ? e.back() : std::max(hi, e.back());
    first = false;
    // Density, so groups of different sizes overlay on one scale.
    for (size_t i = 0; i < s.histogram.counts.size() && s.count > 0; ++i)
      peak = std::max(peak, s.histogram.counts[i] / (s.count * (e[i + 1] - e[i])));
  }
  if (peak <= 0) peak = 1;
  auto X = [&](double v) { return left + (v - lo) / (hi - lo) * pw; };
  auto Y = [&](double d) { return top + ph - d / peak * ph; };

  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
     << Escape(group.title) << "</text>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\""
     << top + ph << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
     << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 6; ++i) {
    double v = lo + (hi - lo) * i / 6;
    os << "<text x=\"" << X(v) << "\" y=\"" << top + ph + 18
       << "\" text-anchor=\"middle\" font-size=\"11\">" << v << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 10
     << "\" text-anchor=\"middle\" font-size=\"12\">cosine similarity</text>\n";
  for (size_t g = 0; g < group.summaries.size(); ++g) {
    const auto &s = group.summaries[g];
    const char *color = kColors[g % (sizeof(kColors) / sizeof(kColors[0]))];
    const auto &e = s.histogram.edges;
    for (size_t i = 0; i < s.histogram.counts.size() && s.count > 0; ++i) {
      double d = s.histogram.counts[i] / (s.count * (e[i + 1] - e[i]));
      if (d <= 0) continue;
      os << "<rect x=\"" << X(e[i]) << "\" y=\"" << Y(d) << "\" width=\"" << X(e[i + 1]) - X(e[i])
         << "\" height=\"" << top + ph - Y(d) << "\" fill=\"" << color
         << "\" fill-opacity=\"0.4\" stroke=\"" << color << "\"/>\n";
    }
    os << "<text x=\"" << left + pw - 5 << "\" y=\"" << top + 15 + 15 * g
       << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << color << "\">"
       << Escape(s.label) << " (n=" << s.count << ")</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<fs::path> EmitPlots(const std::vector<PlotGroup> &groups, const fs::path &out_dir) {
  if (groups.empty()) Fail(ErrorKind::kEmptyInput, "no distributions to plot");
  for (const auto &g : groups)
    if (g.summaries.empty()) Fail(ErrorKind::kEmptyInput, "plot group " + g.name + " is empty");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) Fail(ErrorKind::kIo, "cannot create " + out_dir.string());
  std::vector<fs::path> written;
  for (const auto &g : groups) {
    fs::path svg = out_dir / (g.name + ".svg");
    fs::path json = out_dir / (g.name + ".json");
    std::ofstream os(svg);
    os << RenderHistogramSvg(g);
    if (!os) Fail(ErrorKind::kIo, "cannot write " + svg.string());
    nlohmann::json twin = {{"name", g.name}, {"title", g.title}};
    twin["summaries"] = nlohmann::json::array();
    for (const auto &s : g.summaries) twin["summaries"].push_back(s.ToJson());
    std::ofstream js(json);
    js << twin.dump(2) << "\n";
    if (!js) Fail(ErrorKind::kIo, "cannot write " + json.string());
    written.push_back(svg);
    written.push_back(json);
  }
  return written;
}

}  // namespace sigvc
