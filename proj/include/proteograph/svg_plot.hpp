#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace proteograph::svg {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool dashed = false;
    double width = 1.5;
    bool in_legend = true;
};

struct Panel {
    std::string title;
    std::string x_label = "t";
    std::string y_label;
    bool log_y = false;
    std::vector<Series> series;
};

struct Figure {
    std::string title;
    std::size_t columns = 1;
    double panel_width = 420.0;
    double panel_height = 300.0;
    std::vector<Panel> panels;
};

// Standalone SVG document (no external references).
std::string render(const Figure& figure);
void write(const Figure& figure, const std::filesystem::path& path);

// Colour i of a fixed categorical palette.
const char* palette(std::size_t i);

}  // namespace proteograph::svg
