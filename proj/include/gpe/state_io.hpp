#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "gpe/mesh.hpp"
#include "gpe/sparse.hpp"

namespace gpe {

class StateFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// CSV state file: "# key=value" header lines (mesh fingerprint and node
/// count always present), then one "re,im" row per node. Values are written
/// with 17 significant digits so a reload is bit-identical.
void write_state(const std::string& path, const Mesh& mesh, const ComplexVector& u,
                 const std::map<std::string, std::string>& meta = {});

/// Reads a state file and checks it against the mesh fingerprint.
ComplexVector read_state(const std::string& path, const Mesh& mesh, std::map<std::string, std::string>* meta = nullptr);

}  // namespace gpe
