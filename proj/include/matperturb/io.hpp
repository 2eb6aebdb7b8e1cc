#pragma once

// Matrix files and JSON reports.
//
// A matrix file is a JSON object
//
//   {"rows": 2, "cols": 2, "kind": "hermitian", "data": [[re, im], ...]}
//
// with data in row-major order. Floating-point numbers are always written
// with 17 significant digits so that every double reads back bit for bit.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "matperturb/matrix_core.hpp"

namespace matperturb::io {

using json = nlohmann::ordered_json;

enum class MatrixKind { general, hermitian, psd };

inline std::string_view to_string(MatrixKind k) {
  switch (k) {
    case MatrixKind::general: return "general";
    case MatrixKind::hermitian: return "hermitian";
    case MatrixKind::psd: return "psd";
  }
  return "general";
}

inline MatrixKind parse_kind(const std::string& s) {
  if (s == "general") return MatrixKind::general;
  if (s == "hermitian") return MatrixKind::hermitian;
  if (s == "psd") return MatrixKind::psd;
  throw PreconditionError("invalid_matrix_file", "unknown matrix kind '" + s + "'");
}

struct MatrixFile {
  Matrix data;
  std::optional<MatrixKind> kind;
};

inline json matrix_to_json(const Matrix& m, std::optional<MatrixKind> kind = std::nullopt) {
  json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  if (kind) j["kind"] = std::string(to_string(*kind));
  json data = json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index k = 0; k < m.cols(); ++k) data.push_back(json::array({m(i, k).real(), m(i, k).imag()}));
  j["data"] = std::move(data);
  return j;
}

inline MatrixFile matrix_from_json(const json& j, const Tolerances& tol = {}) {
  const auto fail = [](const std::string& msg) { throw PreconditionError("invalid_matrix_file", msg); };
  if (!j.is_object()) fail("matrix file must be a JSON object");
  for (const char* key : {"rows", "cols", "data"})
    if (!j.contains(key)) fail(std::string("missing field '") + key + "'");
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer()) fail("rows and cols must be integers");
  const auto rows = j["rows"].get<long long>();
  const auto cols = j["cols"].get<long long>();
  if (rows < 1 || cols < 1) fail("rows and cols must be positive");
  const json& data = j["data"];
  if (!data.is_array() || static_cast<long long>(data.size()) != rows * cols) {
    std::ostringstream os;
    os << "data must hold rows*cols = " << rows * cols << " [re, im] pairs";
    fail(os.str());
  }
  MatrixFile out;
  out.data.resize(rows, cols);
  for (long long idx = 0; idx < rows * cols; ++idx) {
    const json& pair = data[static_cast<std::size_t>(idx)];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      fail("data entry " + std::to_string(idx) + " is not a [re, im] number pair");
    }
    const double re = pair[0].get<double>();
    const double im = pair[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im)) fail("data entry " + std::to_string(idx) + " is not finite");
    out.data(idx / cols, idx % cols) = cplx(re, im);
  }
  if (j.contains("kind")) {
    if (!j["kind"].is_string()) fail("kind must be a string");
    out.kind = parse_kind(j["kind"].get<std::string>());
    if (*out.kind != MatrixKind::general) {
      const Hermitian h = Hermitian::checked(out.data, tol.hermitian);
      if (*out.kind == MatrixKind::psd) clipped_psd_spectrum(eigh(h).alpha, tol.psd);
    }
  }
  return out;
}

/// Number with 17 significant digits; non-finite values become the strings
/// "inf", "-inf" and "nan".
inline std::string format_double(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline bool is_flat_array(const json& j) {
  if (!j.is_array()) return false;
  for (const auto& e : j)
    if (e.is_structured()) return false;
  return true;
}

inline void dump(const json& j, std::ostream& os, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) os << ",\n";
        first = false;
        os << pad << json(key).dump() << ": ";
        dump(value, os, indent + 2);
      }
      os << "\n" << close << "}";
      return;
    }
    case json::value_t::array: {
      if (is_flat_array(j)) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          dump(j[i], os, indent);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        dump(j[i], os, indent + 2);
      }
      os << "\n" << close << "]";
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace detail

/// Pretty-printed JSON text with 17-significant-digit floats.
inline std::string to_text(const json& j) {
  std::ostringstream os;
  detail::dump(j, os, 0);
  os << "\n";
  return os.str();
}

inline json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("io_error", "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw PreconditionError("invalid_matrix_file", "'" + path + "': " + e.what());
  }
}

inline MatrixFile read_matrix_file(const std::string& path, const Tolerances& tol = {}) {
  return matrix_from_json(parse_file(path), tol);
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PreconditionError("io_error", "cannot write '" + path + "'");
  out << text;
}

inline void write_matrix_file(const std::string& path, const Matrix& m, std::optional<MatrixKind> kind = std::nullopt) {
  write_text(path, to_text(matrix_to_json(m, kind)));
}

}  // namespace matperturb::io
