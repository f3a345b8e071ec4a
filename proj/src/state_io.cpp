#include "qcorr/state_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qcorr {

namespace {

using nlohmann::json;

double number(const json& j, const char* what) {
  if (!j.is_number()) throw MalformedStateFileError(std::string("expected a number for ") + what);
  return j.get<double>();
}

Vec3 vec3(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) throw MalformedStateFileError(std::string(what) + " must be a 3-array");
  return {number(j[0], what), number(j[1], what), number(j[2], what)};
}

}  // namespace

TwoQubitState parse_state_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw MalformedStateFileError(std::string("state file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw MalformedStateFileError("state file must hold a JSON object");
  const bool has_matrix = doc.contains("matrix");
  const bool has_bloch = doc.contains("bloch");
  if (has_matrix == has_bloch) throw MalformedStateFileError("state file needs exactly one of 'matrix' or 'bloch'");

  if (has_matrix) {
    const json& rows = doc["matrix"];
    if (!rows.is_array() || rows.size() != 4) throw MalformedStateFileError("'matrix' must have 4 rows");
    Mat4c m;
    for (std::size_t i = 0; i < 4; ++i) {
      if (!rows[i].is_array() || rows[i].size() != 4) throw MalformedStateFileError("'matrix' rows need 4 entries");
      for (std::size_t j = 0; j < 4; ++j) {
        const json& z = rows[i][j];
        if (!z.is_array() || z.size() != 2) throw MalformedStateFileError("matrix entries must be [re, im] pairs");
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = Complex{number(z[0], "re"), number(z[1], "im")};
      }
    }
    return TwoQubitState(m);
  }

  const json& b = doc["bloch"];
  if (!b.is_object() || !b.contains("a") || !b.contains("b") || !b.contains("E"))
    throw MalformedStateFileError("'bloch' needs fields a, b and E");
  BlochRep rep;
  rep.a = vec3(b["a"], "a");
  rep.b = vec3(b["b"], "b");
  const json& e = b["E"];
  if (!e.is_array() || e.size() != 3) throw MalformedStateFileError("E must be a 3x3 array");
  for (std::size_t i = 0; i < 3; ++i) rep.E.row(static_cast<Eigen::Index>(i)) = vec3(e[i], "E row").transpose();
  return from_bloch(rep);
}

std::string state_to_json(const TwoQubitState& rho, StateEncoding encoding) {
  json doc;
  if (encoding == StateEncoding::matrix) {
    json rows = json::array();
    for (int i = 0; i < 4; ++i) {
      json row = json::array();
      for (int j = 0; j < 4; ++j) row.push_back({rho.matrix()(i, j).real(), rho.matrix()(i, j).imag()});
      rows.push_back(row);
    }
    doc["matrix"] = rows;
  } else {
    const BlochRep rep = to_bloch(rho);
    json e = json::array();
    for (int i = 0; i < 3; ++i) e.push_back({rep.E(i, 0), rep.E(i, 1), rep.E(i, 2)});
    doc["bloch"] = {{"a", {rep.a(0), rep.a(1), rep.a(2)}}, {"b", {rep.b(0), rep.b(1), rep.b(2)}}, {"E", e}};
  }
  return doc.dump(2) + "\n";
}

TwoQubitState load_state_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MalformedStateFileError("cannot open state file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_state_json(ss.str());
}

void save_state_file(const std::filesystem::path& path, const TwoQubitState& rho, StateEncoding encoding) {
  write_file_atomically(path, state_to_json(rho, encoding));
}

void write_file_atomically(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace qcorr
