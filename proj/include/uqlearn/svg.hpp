#pragma once

#include <string>
#include <vector>

#include "uqlearn/eval.hpp"
#include "uqlearn/tensor.hpp"
#include "uqlearn/uq.hpp"

namespace uqlearn {

// Standalone SVG renderers, 800x600 canvas, byte-deterministic for fixed
// input. Elements carry class attributes (box, marker, cell, roc) so
// structural assertions stay cheap.

// One box-and-whisker group per label.
std::string boxplot_svg(const std::vector<std::string>& labels,
                        const std::vector<BoxplotStats>& stats, const std::string& title);

// One curve per entry plus a dashed diagonal reference path.
std::string roc_svg(const std::vector<std::string>& names, const std::vector<RocCurve>& curves,
                    const std::vector<double>& aucs, const std::string& title);

// Gray cells, darker = higher value (values mapped against ln 2). Optional
// 2D sample overlay colored by class.
std::string heatmap_svg(const EntropyField& field, const Matrix* points2d,
                        const std::vector<int>* labels, const std::string& title);

// Class-colored 2D scatter.
std::string scatter_svg(const Matrix& points2d, const std::vector<int>& labels,
                        const std::string& title);

void write_svg(const std::string& svg, const std::string& path);

} // namespace uqlearn
