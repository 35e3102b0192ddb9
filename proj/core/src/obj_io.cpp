#include "fbms/obj_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "fbms/error.hpp"

namespace fbms {

namespace {

[[noreturn]] void parse_error(int line, const std::string& what) {
  fail(ErrorKind::ParseError, "OBJ line " + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& token, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) parse_error(line, "bad number \"" + token + "\"");
    return v;
  } catch (const std::logic_error&) {
    parse_error(line, "bad number \"" + token + "\"");
  }
}

int parse_index(const std::string& token, int vertex_count, int line) {
  const std::string head = token.substr(0, token.find('/'));
  int idx = 0;
  const auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), idx);
  if (ec != std::errc() || ptr != head.data() + head.size() || idx == 0) {
    parse_error(line, "bad face index \"" + token + "\"");
  }
  const int zero_based = idx > 0 ? idx - 1 : vertex_count + idx;
  if (zero_based < 0 || zero_based >= vertex_count) {
    parse_error(line, "face index " + head + " out of range");
  }
  return zero_based;
}

}  // namespace

TriMesh read_obj(std::istream& in) {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
  std::string text;
  int line = 0;
  while (std::getline(in, text)) {
    ++line;
    std::istringstream fields(text);
    std::string tag;
    if (!(fields >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      Vec3 p;
      for (int k = 0; k < 3; ++k) {
        std::string token;
        if (!(fields >> token)) parse_error(line, "vertex needs three coordinates");
        p[k] = parse_double(token, line);
      }
      vertices.push_back(p);
    } else if (tag == "f") {
      std::vector<int> corners;
      std::string token;
      while (fields >> token) corners.push_back(parse_index(token, static_cast<int>(vertices.size()), line));
      if (corners.size() > 3) {
        fail(ErrorKind::NonTriangularFace,
             "OBJ line " + std::to_string(line) + ": face with " + std::to_string(corners.size()) + " corners");
      }
      if (corners.size() < 3) parse_error(line, "face needs three corners");
      triangles.push_back({corners[0], corners[1], corners[2]});
    }
  }
  return TriMesh(std::move(vertices), std::move(triangles));
}

TriMesh load_obj(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  return read_obj(in);
}

void write_obj(const TriMesh& mesh, std::ostream& out) {
  char buf[128];
  for (const Vec3& p : mesh.positions()) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", p.x(), p.y(), p.z());
    out << buf;
  }
  for (const Triangle& t : mesh.triangles()) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

void save_obj(const TriMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  write_obj(mesh, out);
  if (!out) fail(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace fbms
