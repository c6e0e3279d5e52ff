#pragma once

#include <string>
#include <vector>

namespace nlslab::cli {

struct Series {
  std::string name;
  std::vector<double> x, y;
};

// Stacked panels, one per series, sharing the x axis.
std::string svg_stacked_lines(const std::string& title, const std::string& xlabel, const std::vector<Series>& series,
                              const std::string& stamp);

// Log-log scatter; each series gets its fitted slope in the legend.
std::string svg_loglog(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                       const std::vector<Series>& series, const std::vector<double>& slopes, const std::string& stamp);

// Heat map of values[i][j] over row labels (k1) and column labels (k2);
// NaN cells are hatched grey.
std::string svg_heatmap(const std::string& title, const std::vector<int>& rows, const std::vector<int>& cols,
                        const std::vector<std::vector<double>>& values, const std::string& stamp);

}  // namespace nlslab::cli
