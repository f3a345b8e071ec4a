#pragma once

// JSON state files. A document holds exactly one of
//   "matrix": 4x4 array of [re, im] pairs, row-major, basis |00>,|01>,|10>,|11>
//   "bloch":  {"a": [3], "b": [3], "E": [[3],[3],[3]]}

#include <filesystem>
#include <stdexcept>
#include <string>

#include "qcorr/qstate.hpp"

namespace qcorr {

class MalformedStateFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class StateEncoding { matrix, bloch };

TwoQubitState parse_state_json(const std::string& text);
std::string state_to_json(const TwoQubitState& rho, StateEncoding encoding = StateEncoding::matrix);

TwoQubitState load_state_file(const std::filesystem::path& path);
void save_state_file(const std::filesystem::path& path, const TwoQubitState& rho,
                     StateEncoding encoding = StateEncoding::matrix);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomically(const std::filesystem::path& path, const std::string& contents);

}  // namespace qcorr
