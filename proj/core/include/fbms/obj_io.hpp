#pragma once

#include <filesystem>
#include <iosfwd>

#include "fbms/mesh.hpp"

namespace fbms {

/// Reads "v x y z" and "f i j k" records (1-based, negative indices relative
/// to the end, "i/t/n" forms accepted); every other record is skipped.
/// Throws ParseError with the offending line number, NonTriangularFace for
/// faces with more than three corners, Io if the file cannot be opened.
TriMesh read_obj(std::istream& in);
TriMesh load_obj(const std::filesystem::path& path);

/// Vertices are printed with 17 significant digits so a reload reproduces
/// them bit for bit.
void write_obj(const TriMesh& mesh, std::ostream& out);
void save_obj(const TriMesh& mesh, const std::filesystem::path& path);

}  // namespace fbms
