#include "dw/mesh_io.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace dw::io {
namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  std::ostringstream s;
  s << "line " << line << ": " << what;
  throw Error(ErrorKind::ParseError, s.str());
}

// Next non-empty line with comments stripped; false at end of input.
bool next_line(std::istream& in, std::string& out, std::size_t& line_no) {
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    if (raw.find_first_not_of(" \t\r") != std::string::npos) {
      out = raw;
      return true;
    }
  }
  return false;
}

double parse_double(const std::string& token, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0') fail(line, "expected a number, got '" + token + "'");
  return v;
}

long parse_long(const std::string& token, std::size_t line) {
  char* end = nullptr;
  const long v = std::strtol(token.c_str(), &end, 10);
  if (end == token.c_str() || *end != '\0') fail(line, "expected an integer, got '" + token + "'");
  return v;
}

std::vector<std::string> tokens(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

}  // namespace

IndexedMesh read_off(std::istream& in) {
  std::size_t line = 0;
  std::string text;
  if (!next_line(in, text, line)) fail(line, "empty input");
  auto tok = tokens(text);
  if (tok.empty() || tok[0] != "OFF") fail(line, "missing OFF header");
  // Counts may share the header line.
  tok.erase(tok.begin());
  if (tok.empty()) {
    if (!next_line(in, text, line)) fail(line, "missing counts line");
    tok = tokens(text);
  }
  if (tok.size() < 2) fail(line, "counts line needs V and F");
  const long nv = parse_long(tok[0], line), nf = parse_long(tok[1], line);
  if (nv < 0 || nf < 0) fail(line, "negative counts");

  IndexedMesh mesh;
  mesh.vertices.reserve(nv);
  for (long i = 0; i < nv; ++i) {
    if (!next_line(in, text, line)) fail(line, "unexpected end of input in vertex list");
    tok = tokens(text);
    if (tok.size() < 3) fail(line, "vertex needs three coordinates");
    mesh.vertices.emplace_back(parse_double(tok[0], line), parse_double(tok[1], line), parse_double(tok[2], line));
  }
  mesh.triangles.reserve(nf);
  for (long f = 0; f < nf; ++f) {
    if (!next_line(in, text, line)) fail(line, "unexpected end of input in face list");
    tok = tokens(text);
    const long n = parse_long(tok[0], line);
    if (n != 3) {
      std::ostringstream s;
      s << "line " << line << ": face with " << n << " vertices";
      throw Error(ErrorKind::NonTriangleFace, s.str());
    }
    if (tok.size() < 4) fail(line, "face needs three indices");
    TriangleIndices t{};
    for (int k = 0; k < 3; ++k) {
      const long idx = parse_long(tok[1 + k], line);
      if (idx < 0 || idx >= nv) fail(line, "vertex index out of range");
      t[k] = static_cast<int>(idx);
    }
    mesh.triangles.push_back(t);
  }
  return mesh;
}

void write_off(std::ostream& out, const IndexedMesh& mesh) {
  out << "OFF\n" << mesh.vertices.size() << ' ' << mesh.triangles.size() << " 0\n";
  out << std::setprecision(17);
  for (const auto& p : mesh.vertices) out << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

IndexedMesh read_obj(std::istream& in) {
  IndexedMesh mesh;
  std::size_t line = 0;
  std::string text;
  while (next_line(in, text, line)) {
    const auto tok = tokens(text);
    if (tok[0] == "v") {
      if (tok.size() < 4) fail(line, "vertex needs three coordinates");
      mesh.vertices.emplace_back(parse_double(tok[1], line), parse_double(tok[2], line), parse_double(tok[3], line));
    } else if (tok[0] == "f") {
      if (tok.size() != 4) {
        std::ostringstream s;
        s << "line " << line << ": face with " << tok.size() - 1 << " vertices";
        throw Error(ErrorKind::NonTriangleFace, s.str());
      }
      TriangleIndices t{};
      for (int k = 0; k < 3; ++k) {
        const std::string head = tok[1 + k].substr(0, tok[1 + k].find('/'));
        long idx = parse_long(head, line);
        const long n = static_cast<long>(mesh.vertices.size());
        idx = idx < 0 ? n + idx : idx - 1;
        if (idx < 0 || idx >= n) fail(line, "vertex index out of range");
        t[k] = static_cast<int>(idx);
      }
      mesh.triangles.push_back(t);
    }
  }
  return mesh;
}

IndexedMesh load_mesh(const std::string& path, bool repair_orientation) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  const auto dot = path.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  IndexedMesh mesh;
  if (ext == ".off" || ext == ".OFF") {
    mesh = read_off(in);
  } else if (ext == ".obj" || ext == ".OBJ") {
    mesh = read_obj(in);
  } else {
    throw Error(ErrorKind::ParseError, "unknown mesh extension '" + ext + "'");
  }
  return repair_orientation ? mesh::orient_consistently(mesh) : mesh;
}

void save_mesh(const std::string& path, const IndexedMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path);
  write_off(out, mesh);
  if (!out) throw Error(ErrorKind::ParseError, "write failed for " + path);
}

}  // namespace dw::io
