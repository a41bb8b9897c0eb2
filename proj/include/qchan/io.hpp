// This file is part of qchan, a toolkit for distances and fidelities of
// finite-dimensional quantum channels.
//
// Distributed under the Apache License, Version 2.0; see the LICENSE file
// or http://www.apache.org/licenses/LICENSE-2.0 for details.

#ifndef QCHAN_IO_HPP
#define QCHAN_IO_HPP

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qchan/channels.hpp"
#include "qchan/matrix.hpp"

namespace qchan {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Canonical number formatting: 17 significant digits, plain decimal
// notation for |x| in [1e-4, 1e6), scientific otherwise. Reports written
// with this rule round-trip byte-identically through parse and re-emission.

inline std::string format_float(double x) {
  if (!std::isfinite(x))
    throw std::invalid_argument("format_float: non-finite value");
  if (x == 0.0) return std::signbit(x) ? "-0.0" : "0.0";
  char buf[64];
  const double ax = std::abs(x);
  if (ax >= 1e-4 && ax < 1e6) {
    int decimals = 16 - static_cast<int>(std::floor(std::log10(ax)));
    if (decimals < 0) decimals = 0;
    std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  } else {
    std::snprintf(buf, sizeof buf, "%.16e", x);
  }
  return buf;
}

namespace detail {

inline void canonical_dump_rec(const Json& j, std::string& out, int depth) {
  const std::string pad(2 * static_cast<std::size_t>(depth), ' ');
  const std::string pad_in(2 * static_cast<std::size_t>(depth + 1), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        out += Json(it.key()).dump();
        out += ": ";
        canonical_dump_rec(it.value(), out, depth + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& item : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        canonical_dump_rec(item, out, depth + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_float(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace detail

// Sorted keys (nlohmann objects iterate in key order), two-space indent,
// canonical floats. Ends with a newline.
inline std::string canonical_dump(const Json& j) {
  std::string out;
  detail::canonical_dump_rec(j, out, 0);
  out += "\n";
  return out;
}

// ---------------------------------------------------------------------------
// SHA-256 for input provenance in reports.

namespace detail {

class Sha256 {
 public:
  Sha256() = default;

  void update(const unsigned char* data, std::size_t len) {
    total_ += len;
    while (len > 0) {
      const std::size_t take = std::min<std::size_t>(64 - fill_, len);
      std::memcpy(block_ + fill_, data, take);
      fill_ += take;
      data += take;
      len -= take;
      if (fill_ == 64) {
        process();
        fill_ = 0;
      }
    }
  }

  std::string hex_digest() {
    const std::uint64_t bits = total_ * 8;
    unsigned char pad = 0x80;
    update(&pad, 1);
    const unsigned char zero = 0;
    while (fill_ != 56) update(&zero, 1);
    unsigned char len_be[8];
    for (int i = 0; i < 8; ++i)
      len_be[i] = static_cast<unsigned char>(bits >> (56 - 8 * i));
    update(len_be, 8);
    char out[65];
    for (int i = 0; i < 8; ++i)
      std::snprintf(out + 8 * i, 9, "%08x", h_[i]);
    return std::string(out, 64);
  }

 private:
  static std::uint32_t rotr(std::uint32_t x, int n) {
    return (x >> n) | (x << (32 - n));
  }

  void process() {
    static const std::uint32_t k[64] = {
        0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b,
        0x59f111f1, 0x923f82a4, 0xab1c5ed5, 0xd807aa98, 0x12835b01,
        0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe, 0x9bdc06a7,
        0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc,
        0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152,
        0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147,
        0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
        0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85,
        0xa2bfe8a1, 0xa81a664b, 0xc24b8b70, 0xc76c51a3, 0xd192e819,
        0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116, 0x1e376c08,
        0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f,
        0x682e6ff3, 0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208,
        0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};
    std::uint32_t w[64];
    for (int i = 0; i < 16; ++i)
      w[i] = (std::uint32_t(block_[4 * i]) << 24) |
             (std::uint32_t(block_[4 * i + 1]) << 16) |
             (std::uint32_t(block_[4 * i + 2]) << 8) |
             std::uint32_t(block_[4 * i + 3]);
    for (int i = 16; i < 64; ++i) {
      const std::uint32_t s0 =
          rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
      const std::uint32_t s1 =
          rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
      w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }
    std::uint32_t a = h_[0], b = h_[1], c = h_[2], d = h_[3];
    std::uint32_t e = h_[4], f = h_[5], g = h_[6], h = h_[7];
    for (int i = 0; i < 64; ++i) {
      const std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
      const std::uint32_t ch = (e & f) ^ (~e & g);
      const std::uint32_t t1 = h + s1 + ch + k[i] + w[i];
      const std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
      const std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
      const std::uint32_t t2 = s0 + maj;
      h = g;
      g = f;
      f = e;
      e = d + t1;
      d = c;
      c = b;
      b = a;
      a = t1 + t2;
    }
    h_[0] += a;
    h_[1] += b;
    h_[2] += c;
    h_[3] += d;
    h_[4] += e;
    h_[5] += f;
    h_[6] += g;
    h_[7] += h;
  }

  std::uint32_t h_[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                         0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
  unsigned char block_[64] = {};
  std::size_t fill_ = 0;
  std::uint64_t total_ = 0;
};

}  // namespace detail

inline std::string sha256_hex(std::string_view data) {
  detail::Sha256 h;
  h.update(reinterpret_cast<const unsigned char*>(data.data()), data.size());
  return h.hex_digest();
}

// ---------------------------------------------------------------------------
// Plain file helpers.

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file_atomic(const std::string& path,
                              const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open file for writing: " + tmp);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("rename failed: " + path);
}

// ---------------------------------------------------------------------------
// Matrix <-> JSON: nested arrays of [re, im] entry pairs.

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j)
      row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument(what + ": expected a non-empty array of rows");
  const Index rows = static_cast<Index>(j.size());
  if (!j[0].is_array() || j[0].empty())
    throw std::invalid_argument(what + ": rows must be non-empty arrays");
  const Index cols = static_cast<Index>(j[0].size());
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      throw std::invalid_argument(what + ": ragged matrix rows");
    for (Index c = 0; c < cols; ++c) {
      const Json& entry = row[static_cast<std::size_t>(c)];
      if (!entry.is_array() || entry.size() != 2 ||
          !entry[0].is_number() || !entry[1].is_number())
        throw std::invalid_argument(what +
                                    ": entries must be [re, im] number pairs");
      m(i, c) = Complex(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  if (!all_finite(m))
    throw std::invalid_argument(what + ": non-finite matrix entries");
  return m;
}

// ---------------------------------------------------------------------------
// File schemas.

struct ChannelFile {
  std::string name;
  KrausChannel channel;
};

// Kraus matrices are Schrodinger-picture operators (dim_out x dim_in). With
// heisenberg = true the file is read as Heisenberg operators F and the
// Schrodinger Kraus are their entrywise conjugates.
inline ChannelFile parse_channel_file(const Json& j, bool validate = true,
                                      bool heisenberg = false) {
  if (!j.is_object()) throw std::invalid_argument("channel file: not a JSON object");
  ChannelFile out;
  out.name = j.value("name", std::string{});
  if (!j.contains("dim_in") || !j.contains("dim_out") || !j.contains("kraus"))
    throw std::invalid_argument(
        "channel file: required fields are dim_in, dim_out, kraus");
  if (!j["dim_in"].is_number_integer() || !j["dim_out"].is_number_integer())
    throw std::invalid_argument("channel file: dims must be integers");
  const Index m = j["dim_in"].get<Index>();
  const Index n = j["dim_out"].get<Index>();
  if (m < 1 || n < 1)
    throw std::invalid_argument("channel file: dims must be >= 1");
  if (!j["kraus"].is_array() || j["kraus"].empty())
    throw std::invalid_argument("channel file: kraus must be a non-empty array");
  std::vector<Matrix> kraus;
  for (const Json& kj : j["kraus"]) {
    Matrix k = matrix_from_json(kj, "channel file kraus operator");
    if (k.rows() != n || k.cols() != m)
      throw std::invalid_argument(
          "channel file: kraus operator shape must be dim_out x dim_in");
    kraus.push_back(heisenberg ? k.conjugate() : k);
  }
  out.channel = make_channel(std::move(kraus));
  if (validate) {
    const ChannelValidation v = validate_channel(out.channel);
    if (!v.pass)
      throw std::invalid_argument(
          "channel file: trace preservation defect " +
          format_float(v.tp_defect) + " exceeds 1e-9 (use --no-validate to force)");
  }
  return out;
}

inline Json channel_to_json(const std::string& name, const KrausChannel& ch) {
  Json j;
  j["name"] = name;
  j["dim_in"] = ch.dim_in;
  j["dim_out"] = ch.dim_out;
  Json kraus = Json::array();
  for (const Matrix& k : ch.kraus) kraus.push_back(matrix_to_json(k));
  j["kraus"] = std::move(kraus);
  return j;
}

inline DensityOperator parse_state_file(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("state file: not a JSON object");
  if (!j.contains("dim") || !j.contains("matrix"))
    throw std::invalid_argument("state file: required fields are dim, matrix");
  const Index d = j["dim"].get<Index>();
  Matrix m = matrix_from_json(j["matrix"], "state file matrix");
  if (m.rows() != d || m.cols() != d)
    throw std::invalid_argument("state file: matrix shape disagrees with dim");
  return make_density(m);  // Hermitian / PSD / unit-trace gates
}

inline Json state_to_json(const DensityOperator& rho) {
  Json j;
  j["dim"] = rho.dim();
  j["matrix"] = matrix_to_json(rho.mat);
  return j;
}

inline ChannelDensity parse_choi_file(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("choi file: not a JSON object");
  if (!j.contains("dim_in") || !j.contains("dim_out") || !j.contains("kernel"))
    throw std::invalid_argument(
        "choi file: required fields are dim_in, dim_out, kernel");
  const Index m = j["dim_in"].get<Index>();
  const Index n = j["dim_out"].get<Index>();
  Matrix kernel = matrix_from_json(j["kernel"], "choi file kernel");
  if (kernel.rows() != m * n || kernel.cols() != m * n)
    throw std::invalid_argument("choi file: kernel size disagrees with dims");
  return ChannelDensity{m, n, std::move(kernel)};
}

}  // namespace qchan

#endif  // QCHAN_IO_HPP
