#pragma once

#include <string>

#include "dca/lattice.hpp"
#include "dca/operators.hpp"

namespace dca {

struct SvgOptions {
    double width = 640.0;        // drawing width in px; height follows the bbox
    bool label_vertices = false; // draw the vertex value next to each vertex
    int label_precision = 3;     // significant digits of the labels
};

// Heatmap of a vertex function: every face is filled from a 256-step color
// map over [min u, max u] (the face color is the mean of its four vertex
// values; the map interpolates dark violet -> teal -> yellow in even RGB
// steps). Output is deterministic byte-for-byte for fixed inputs.
std::string render_svg(const QuadLattice& L, const VertexFunction& u, const SvgOptions& opt = {});

// render_svg written to a file; throws IoError when the file cannot be
// created or written.
void emit_svg(const QuadLattice& L, const VertexFunction& u, const std::string& path,
              const SvgOptions& opt = {});

} // namespace dca
