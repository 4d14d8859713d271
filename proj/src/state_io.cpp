#include "gpe/state_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace gpe {

namespace {
std::string hex(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}
}  // namespace

void write_state(const std::string& path, const Mesh& mesh, const ComplexVector& u,
                 const std::map<std::string, std::string>& meta) {
  if (u.size() != mesh.num_nodes()) throw StateFileError("write_state: vector does not match the mesh");
  std::ofstream out(path);
  if (!out) throw StateFileError("cannot open '" + path + "' for writing");
  out << "# fingerprint=" << hex(mesh.fingerprint()) << '\n';
  out << "# nodes=" << mesh.num_nodes() << '\n';
  for (const auto& [k, v] : meta) out << "# " << k << '=' << v << '\n';
  char line[96];
  for (Index i = 0; i < u.size(); ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g\n", u(i).real(), u(i).imag());
    out << line;
  }
  if (!out) throw StateFileError("write to '" + path + "' failed");
}

ComplexVector read_state(const std::string& path, const Mesh& mesh, std::map<std::string, std::string>* meta) {
  std::ifstream in(path);
  if (!in) throw StateFileError("cannot open '" + path + "'");
  std::map<std::string, std::string> header;
  std::vector<Complex> values;
  std::string line;
  Index lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      header[key] = line.substr(eq + 1);
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw StateFileError(path + ":" + std::to_string(lineno) + ": expected 're,im'");
    try {
      values.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw StateFileError(path + ":" + std::to_string(lineno) + ": malformed number");
    }
  }
  auto fp = header.find("fingerprint");
  if (fp == header.end()) throw StateFileError(path + ": missing mesh fingerprint");
  if (fp->second != hex(mesh.fingerprint()))
    throw StateFileError(path + ": mesh fingerprint " + fp->second + " does not match " + hex(mesh.fingerprint()));
  if (static_cast<Index>(values.size()) != mesh.num_nodes())
    throw StateFileError(path + ": expected " + std::to_string(mesh.num_nodes()) + " rows, found " +
                         std::to_string(values.size()));
  ComplexVector u(mesh.num_nodes());
  for (Index i = 0; i < u.size(); ++i) u(i) = values[static_cast<std::size_t>(i)];
  if (meta) *meta = std::move(header);
  return u;
}

}  // namespace gpe
