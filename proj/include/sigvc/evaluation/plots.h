// include/sigvc/evaluation/plots.h

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


#ifndef SIGVC_EVALUATION_PLOTS_H_
#define SIGVC_EVALUATION_PLOTS_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sigvc/evaluation/similarity.h"

namespace sigvc {

/// Distributions drawn as overlaid histograms in one figure.
struct PlotGroup {
  std::string name;  // file stem
  std::string title;
  std::vector<DistributionSummary> summaries;
};

/// One group per unordered pair of systems, each overlaying the two
/// systems' distributions.  Group names are "<a>_vs_<b>".
std::vector<PlotGroup> SystemComparisonGroups(
    const std::map<std::string, DistributionSummary> &systems);

/// Renders the histograms (bin edges and counts only) as SVG.
std::string RenderHistogramSvg(const PlotGroup &group);

/// Writes <name>.svg and its <name>.json twin for every group.  An empty
/// group list, or a group without summaries, raises kEmptyInput before any
/// file is written.
std::vector<std::filesystem::path> EmitPlots(const std::vector<PlotGroup> &groups,
                                             const std::filesystem::path &out_dir);

}  // namespace sigvc

#endif  // SIGVC_EVALUATION_PLOTS_H_
