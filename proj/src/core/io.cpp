#include "core/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "core/error.hpp"

namespace tnet {

namespace {

constexpr char kMagic[5] = {'T', 'N', 'E', 'T', '1'};

static_assert(std::endian::native == std::endian::little,
              "dump writer assumes a little-endian host");

void put_u64(std::ostream& os, uint64_t v) { os.write(reinterpret_cast<const char*>(&v), 8); }

uint64_t get_u64(std::istream& is) {
  uint64_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 8);
  return v;
}

}  // namespace

void save_tensor(const Tensor& t, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail_io("cannot write " + path);
  os.write(kMagic, 5);
  put_u64(os, static_cast<uint64_t>(t.rank()));
  for (int64_t d : t.dims()) put_u64(os, static_cast<uint64_t>(d));
  for (int64_t i = 0; i < t.size(); ++i) {
    double re = t[i].real(), im = t[i].imag();
    os.write(reinterpret_cast<const char*>(&re), 8);
    os.write(reinterpret_cast<const char*>(&im), 8);
  }
  if (!os) fail_io("short write on " + path);
}

Tensor load_tensor(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail_io("cannot read " + path);
  char magic[5];
  is.read(magic, 5);
  if (!is || std::memcmp(magic, kMagic, 5) != 0) fail_io("bad tensor dump magic in " + path);
  uint64_t rank = get_u64(is);
  if (rank == 0 || rank > 64) fail_io("implausible rank in " + path);
  std::vector<int64_t> dims(rank);
  int64_t n = 1;
  for (uint64_t k = 0; k < rank; ++k) {
    dims[k] = static_cast<int64_t>(get_u64(is));
    if (dims[k] < 1 || dims[k] > (1 << 24)) fail_io("implausible dim in " + path);
    n *= dims[k];
  }
  std::vector<cplx> entries(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) {
    double re, im;
    is.read(reinterpret_cast<char*>(&re), 8);
    is.read(reinterpret_cast<char*>(&im), 8);
    entries[static_cast<size_t>(i)] = cplx(re, im);
  }
  if (!is) fail_io("truncated tensor dump " + path);
  return Tensor(std::move(dims), std::move(entries));
}

std::string format_complex(cplx v) {
  std::ostringstream os;
  os.precision(17);
  os << v.real();
  if (v.imag() >= 0 || std::isnan(v.imag())) os << "+";
  os << v.imag() << "j";
  return os.str();
}

cplx parse_complex(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) fail_io("empty complex literal");
  if (s.back() != 'j' && s.back() != 'J') {
    // purely real
    try {
      return cplx(std::stod(s), 0.0);
    } catch (...) {
      fail_io("bad complex literal: " + raw);
    }
  }
  s.pop_back();  // drop j
  // Split at the last +/- that is not a leading sign and not part of an exponent.
  size_t split = std::string::npos;
  for (size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  try {
    if (split == std::string::npos) return cplx(0.0, std::stod(s));  // pure imaginary
    double re = std::stod(s.substr(0, split));
    double im = std::stod(s.substr(split));
    return cplx(re, im);
  } catch (...) {
    fail_io("bad complex literal: " + raw);
  }
}

std::vector<std::vector<cplx>> load_orbitals_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail_io("cannot read " + path);
  std::vector<std::vector<cplx>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<cplx> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(parse_complex(cell));
    if (!row.empty()) rows.push_back(std::move(row));
  }
  for (const auto& r : rows)
    if (r.size() != rows.front().size()) fail_io("ragged orbital CSV " + path);
  return rows;
}

void save_orbitals_csv(const std::vector<std::vector<cplx>>& rows, const std::string& path) {
  std::ofstream os(path);
  if (!os) fail_io("cannot write " + path);
  for (const auto& r : rows) {
    for (size_t i = 0; i < r.size(); ++i) {
      if (i) os << ",";
      os << format_complex(r[i]);
    }
    os << "\n";
  }
}

void save_csv(const std::string& path, const std::vector<std::string>& header,
              const std::vector<std::vector<double>>& rows) {
  std::ofstream os(path);
  if (!os) fail_io("cannot write " + path);
  os.precision(17);
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) os << ",";
    os << header[i];
  }
  os << "\n";
  for (const auto& r : rows) {
    for (size_t i = 0; i < r.size(); ++i) {
      if (i) os << ",";
      os << r[i];
    }
    os << "\n";
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail_io("cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path);
  if (!os) fail_io("cannot write " + path);
  os << content;
}


nlohmann::json read_json_file(const std::string& path) {
  nlohmann::json j = nlohmann::json::parse(read_text_file(path), nullptr, false);
  if (j.is_discarded()) fail_io("malformed JSON in " + path);
  return j;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

void require_keys(const nlohmann::json& j, const std::vector<std::string>& required,
                  const std::vector<std::string>& optional, const std::string& what) {
  if (!j.is_object()) fail_invalid(what + ": expected a JSON object");
  for (const auto& k : required) {
    if (!j.contains(k)) fail_invalid(what + ": missing key \"" + k + "\"");
  }
  for (const auto& item : j.items()) {
    const std::string& k = item.key();
    bool known = false;
    for (const auto& r : required) known = known || r == k;
    for (const auto& o : optional) known = known || o == k;
    if (!known) fail_invalid(what + ": unknown key \"" + k + "\"");
  }
}

}  // namespace tnet

