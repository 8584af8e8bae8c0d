#pragma once

// OFF read/write and read-only OBJ import.

#include <iosfwd>
#include <string>

#include "dw/mesh.hpp"

namespace dw::io {

/// OFF: header "OFF", counts "V F E", V coordinate lines, F lines "3 i j k".
/// Comments after '#' are ignored. Throws ParseError (with line number),
/// NonTriangleFace.
IndexedMesh read_off(std::istream& in);
/// Coordinates with 17 significant digits, so a round trip is exact.
void write_off(std::ostream& out, const IndexedMesh& mesh);

/// OBJ "v" and "f" records; face entries may carry /vt/vn suffixes and
/// negative indices. Throws ParseError, NonTriangleFace.
IndexedMesh read_obj(std::istream& in);

/// Format from the extension (.off, .obj). With `repair_orientation` the
/// loaded mesh is passed through orient_consistently. Throws ParseError for
/// unreadable files or unknown extensions.
IndexedMesh load_mesh(const std::string& path, bool repair_orientation = false);
void save_mesh(const std::string& path, const IndexedMesh& mesh);

}  // namespace dw::io
