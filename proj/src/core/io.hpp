#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "core/tensor.hpp"

namespace tnet {

// Binary tensor dump. Layout: magic "TNET1" (5 bytes), rank as 64-bit
// little-endian, each dim as 64-bit little-endian, then one (re, im) pair of
// little-endian 64-bit floats per entry in linearization order (last index
// fastest).
void save_tensor(const Tensor& t, const std::string& path);
Tensor load_tensor(const std::string& path);

// Complex scalars in text files use the "re+imj" form, e.g. "0.5-0.25j".
std::string format_complex(cplx v);
cplx parse_complex(const std::string& s);

// Orbital CSV: one row per orbital, L comma-separated complex entries.
std::vector<std::vector<cplx>> load_orbitals_csv(const std::string& path);
void save_orbitals_csv(const std::vector<std::vector<cplx>>& rows, const std::string& path);

// Generic CSV writer: header row then numeric rows.
void save_csv(const std::string& path, const std::vector<std::string>& header,
              const std::vector<std::vector<double>>& rows);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// JSON manifests and configs are fail-closed: a file must be an object,
// carry every required key, and carry nothing outside required + optional.
nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);
void require_keys(const nlohmann::json& j, const std::vector<std::string>& required,
                  const std::vector<std::string>& optional, const std::string& what);

}  // namespace tnet
