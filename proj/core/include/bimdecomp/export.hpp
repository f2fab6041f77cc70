#pragma once

#include <array>
#include <string>

#include "bimdecomp/pipeline.hpp"

namespace bimdecomp {

// Human-readable table of the main variables at one interior grid point
// (indices are 0-based interior indices).  `sectors` selects which of
// g, f, h to print; the frame block is always included.  Throws
// PointOffGrid for indices outside the interior.
std::string summarize(const DecompositionResult& r, const std::array<bool, 3>& sectors,
                      const std::array<int, 3>& point);

// Engine-independent dump: one CSV per field (interior points, 17
// significant digits, header line with shape and index flags) plus a
// manifest listing fields, options, tolerances and the validation
// report.  Byte-identical for identical configs.  Returns the manifest
// path.  Throws IoError.
std::string export_plain(const DecompositionResult& r, const std::string& out_dir,
                         const std::string& name_prefix);

// Engine-native snapshot: one self-describing versioned file that
// round-trips to an equal DecompositionResult.
void export_engine(const DecompositionResult& r, const std::string& path);
DecompositionResult import_engine(const std::string& path);

// Field-by-field equality (exact double compare), used by round-trip checks.
bool results_equal(const DecompositionResult& a, const DecompositionResult& b);

} // namespace bimdecomp
