#include "normeq/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace normeq {

namespace {

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::parse_error, e.what());
  }
}

double number_field(const Json& j, const char* context) {
  if (!j.is_number()) {
    fail(ErrorKind::parse_error, std::string(context) + " must be a number");
  }
  const double value = j.get<double>();
  if (!std::isfinite(value)) {
    fail(ErrorKind::non_finite, std::string(context) + " is not finite");
  }
  return value;
}

Eigen::Index positive_int_field(const Json& j, const char* name) {
  if (!j.contains(name)) {
    fail(ErrorKind::parse_error, std::string("missing field '") + name + "'");
  }
  const Json& field = j.at(name);
  if (!field.is_number_integer() || field.get<long long>() <= 0) {
    fail(ErrorKind::parse_error, std::string("field '") + name + "' must be a positive integer");
  }
  return static_cast<Eigen::Index>(field.get<long long>());
}

}  // namespace

Matrix parse_operator_json(const std::string& text) {
  const Json doc = parse_json(text);
  if (!doc.is_object()) fail(ErrorKind::parse_error, "operator file must be a JSON object");
  const Eigen::Index rows = positive_int_field(doc, "rows");
  const Eigen::Index cols = positive_int_field(doc, "cols");
  if (!doc.contains("data") || !doc.at("data").is_array()) {
    fail(ErrorKind::parse_error, "missing or malformed 'data' array");
  }
  const Json& data = doc.at("data");
  if (static_cast<Eigen::Index>(data.size()) != rows * cols) {
    std::ostringstream msg;
    msg << "'data' holds " << data.size() << " entries, expected " << rows * cols
        << " for a " << rows << "x" << cols << " matrix";
    fail(ErrorKind::shape_error, msg.str());
  }

  Matrix m(rows, cols);
  Eigen::Index k = 0;
  for (const Json& pair : data) {
    if (!pair.is_array() || pair.size() != 2) {
      fail(ErrorKind::parse_error, "each 'data' entry must be a [re, im] pair");
    }
    const double re = number_field(pair.at(0), "entry real part");
    const double im = number_field(pair.at(1), "entry imaginary part");
    m(k / cols, k % cols) = Complex(re, im);
    ++k;
  }
  return m;
}

std::string format_double(double value) {
  char buf[64];
  const auto result =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, result.ptr);
}

std::string render_operator_json(const Matrix& m) {
  std::string out = "{\"cols\":" + std::to_string(m.cols()) + ",\"data\":[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i != 0 || j != 0) out += ',';
      out += '[';
      out += format_double(m(i, j).real());
      out += ',';
      out += format_double(m(i, j).imag());
      out += ']';
    }
  }
  out += "],\"rows\":" + std::to_string(m.rows()) + "}\n";
  return out;
}

AtomicSpectralType parse_invariant_json(const std::string& text) {
  const Json doc = parse_json(text);
  if (!doc.is_object() || !doc.contains("atoms") || !doc.at("atoms").is_array()) {
    fail(ErrorKind::parse_error, "invariant file must be an object with an 'atoms' array");
  }
  AtomicSpectralType invariant;
  for (const Json& entry : doc.at("atoms")) {
    if (!entry.is_object() || !entry.contains("re") || !entry.contains("im") ||
        !entry.contains("mult")) {
      fail(ErrorKind::parse_error, "each atom needs 're', 'im' and 'mult' fields");
    }
    const auto string_field = [&](const char* name) {
      const Json& f = entry.at(name);
      if (!f.is_string()) {
        fail(ErrorKind::parse_error, std::string("atom field '") + name + "' must be a string");
      }
      return f.get<std::string>();
    };
    const AtomLabel label(string_field("re"), string_field("im"));
    const ExtMult mult = ExtMult::parse(string_field("mult"));
    if (mult.is_zero()) {
      fail(ErrorKind::parse_error, "atom " + label.to_string() + " has zero multiplicity");
    }
    if (invariant.multiplicity(label)) {
      fail(ErrorKind::parse_error, "atom " + label.to_string() + " appears twice");
    }
    invariant.set(label, mult);
  }
  return invariant;
}

std::string render_invariant_json(const AtomicSpectralType& invariant) {
  std::string out = "{\"atoms\":[";
  bool first = true;
  for (const auto& [atom, mult] : invariant.atoms()) {
    if (!first) out += ',';
    first = false;
    out += "{\"im\":\"" + atom.im() + "\",\"mult\":\"" + mult.to_string() +
           "\",\"re\":\"" + atom.re() + "\"}";
  }
  out += "]}\n";
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(ErrorKind::parse_error, "cannot open file: " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

StructureBundle load_structure_bundle(const std::filesystem::path& manifest_path) {
  const Json doc = parse_json(read_file(manifest_path));
  if (!doc.is_object()) fail(ErrorKind::parse_error, "bundle manifest must be a JSON object");
  const Eigen::Index dim = positive_int_field(doc, "dim");
  const auto base = manifest_path.parent_path();

  std::string digest_input;
  const auto load_member = [&](const char* name) {
    if (!doc.contains(name) || !doc.at(name).is_string()) {
      fail(ErrorKind::parse_error,
           std::string("bundle manifest needs a '") + name + "' path");
    }
    const Matrix m =
        parse_operator_json(read_file(base / doc.at(name).get<std::string>()));
    digest_input += render_operator_json(m);
    return m;
  };

  const Matrix t = load_member("T");
  const Matrix p = load_member("P");
  const Matrix q = load_member("Q");
  const Matrix u = load_member("U");
  if (t.rows() != dim) {
    std::ostringstream msg;
    msg << "manifest declares dim " << dim << " but T is " << t.rows() << "x" << t.cols();
    fail(ErrorKind::shape_error, msg.str());
  }

  StructureBundle bundle{LStructure::make(t, p, q, u), std::nullopt, ""};
  if (doc.contains("embedding")) {
    bundle.embedding = load_member("embedding");
  }
  bundle.digest = digest_hex(digest_input);
  return bundle;
}

std::string digest_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf, 16);
}

namespace {

void append_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void emit_value(std::string& out, const Json& value) {
  switch (value.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      // nlohmann objects iterate in sorted key order already.
      for (const auto& [key, member] : value.items()) {
        if (!first) out += ',';
        first = false;
        append_escaped(out, key);
        out += ':';
        emit_value(out, member);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      bool first = true;
      for (const Json& member : value) {
        if (!first) out += ',';
        first = false;
        emit_value(out, member);
      }
      out += ']';
      break;
    }
    case Json::value_t::string:
      append_escaped(out, value.get<std::string>());
      break;
    case Json::value_t::boolean:
      out += value.get<bool>() ? "true" : "false";
      break;
    case Json::value_t::number_integer:
      out += std::to_string(value.get<long long>());
      break;
    case Json::value_t::number_unsigned:
      out += std::to_string(value.get<unsigned long long>());
      break;
    case Json::value_t::number_float:
      out += format_double(value.get<double>());
      break;
    default:
      out += "null";
  }
}

void emit_text_value(std::ostream& out, const Json& value, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  if (value.is_object()) {
    for (const auto& [key, member] : value.items()) {
      if (member.is_object() || member.is_array()) {
        out << pad << key << ":\n";
        emit_text_value(out, member, indent + 1);
      } else {
        out << pad << key << ": ";
        emit_text_value(out, member, 0);
      }
    }
  } else if (value.is_array()) {
    int index = 0;
    for (const Json& member : value) {
      if (member.is_object() || member.is_array()) {
        out << pad << "- [" << index << "]\n";
        emit_text_value(out, member, indent + 1);
      } else {
        out << pad << "- ";
        emit_text_value(out, member, 0);
      }
      ++index;
    }
  } else if (value.is_string()) {
    out << value.get<std::string>() << "\n";
  } else if (value.is_boolean()) {
    out << (value.get<bool>() ? "true" : "false") << "\n";
  } else if (value.is_number_float()) {
    out << format_double(value.get<double>()) << "\n";
  } else {
    out << value.dump() << "\n";
  }
}

}  // namespace

std::string emit_json(const Json& doc) {
  std::string out;
  emit_value(out, doc);
  out += '\n';
  return out;
}

std::string emit_text(const Json& doc) {
  std::ostringstream out;
  emit_text_value(out, doc, 0);
  return out.str();
}

}  // namespace normeq
