#include "ampec/instance_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ampec {

using nlohmann::json;

namespace {

json flat(const Mat& M) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) arr.push_back(M(i, j));
  }
  return arr;
}

json flat(const Vec& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

const json& field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field '" + key + "'");
  return *it;
}

std::vector<double> numbers(const json& node, const std::string& name, std::size_t expected) {
  if (!node.is_array()) throw ParseError("field '" + name + "': expected an array of numbers");
  if (node.size() != expected) {
    std::ostringstream os;
    os << "field '" << name << "': expected " << expected << " numbers, got " << node.size();
    throw ParseError(os.str());
  }
  std::vector<double> out;
  out.reserve(expected);
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_number()) {
      std::ostringstream os;
      os << "field '" << name << "': element " << i << " is not a number";
      throw ParseError(os.str());
    }
    out.push_back(node[i].get<double>());
  }
  return out;
}

Mat read_matrix(const json& obj, const char* key, std::size_t rows, std::size_t cols,
                const std::string& where) {
  const auto vals = numbers(field(obj, key, where), key, rows * cols);
  Mat M(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = vals[i * cols + j];
    }
  }
  return M;
}

Vec read_vector(const json& obj, const char* key, std::size_t len, const std::string& where) {
  const auto vals = numbers(field(obj, key, where), key, len);
  Vec v(static_cast<Eigen::Index>(len));
  for (std::size_t i = 0; i < len; ++i) v[static_cast<Eigen::Index>(i)] = vals[i];
  return v;
}

std::size_t read_dim(const json& obj, const char* key) {
  const json& node = field(obj, key, "instance");
  if (!node.is_number_integer() || node.get<long long>() <= 0) {
    throw ParseError(std::string("field '") + key + "': expected a positive integer");
  }
  return node.get<std::size_t>();
}

double read_scalar(const json& obj, const char* key, const std::string& where) {
  const json& node = field(obj, key, where);
  if (!node.is_number()) throw ParseError(where + ": field '" + key + "' is not a number");
  return node.get<double>();
}

}  // namespace

std::string serialize_instance(const Instance& inst) {
  json doc;
  doc["format"] = "ampec-instance";
  doc["version"] = 1;
  doc["n"] = inst.n;
  doc["m"] = inst.m;
  doc["A"] = flat(inst.A);
  doc["B"] = flat(inst.B);
  doc["a"] = flat(inst.a);
  doc["x_lo"] = flat(inst.X.lo);
  doc["x_hi"] = flat(inst.X.hi);
  doc["y_lo"] = flat(inst.Y.lo);
  doc["y_hi"] = flat(inst.Y.hi);
  doc["Q1"] = flat(inst.objective.Q1);
  doc["Q2"] = flat(inst.objective.Q2);
  doc["q1"] = flat(inst.objective.q1);
  doc["q2"] = flat(inst.objective.q2);
  if (inst.nash_cournot) {
    const NashCournotParams& p = *inst.nash_cournot;
    json nc;
    nc["alpha"] = p.alpha;
    nc["beta"] = p.beta;
    nc["c"] = flat(p.c);
    nc["eta"] = flat(p.eta);
    nc["xi"] = flat(p.xi);
    doc["nash_cournot"] = nc;
  }
  return doc.dump();
}

Instance parse_instance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line number for the diagnostic.
    std::size_t line = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (text[i] == '\n') ++line;
    }
    std::ostringstream os;
    os << "line " << line << ": " << e.what();
    throw ParseError(os.str());
  }
  if (!doc.is_object()) throw ParseError("instance: top-level value must be an object");
  if (auto it = doc.find("format"); it != doc.end() && *it != "ampec-instance") {
    throw ParseError("field 'format': expected \"ampec-instance\"");
  }
  if (auto it = doc.find("version"); it != doc.end() && *it != 1) {
    throw ParseError("field 'version': unsupported version");
  }

  Instance inst;
  inst.n = read_dim(doc, "n");
  inst.m = read_dim(doc, "m");
  const std::size_t n = inst.n;
  const std::size_t m = inst.m;
  const std::string where = "instance";
  inst.A = read_matrix(doc, "A", n, n, where);
  inst.B = read_matrix(doc, "B", n, m, where);
  inst.a = read_vector(doc, "a", n, where);
  inst.X = BoxRegion(read_vector(doc, "x_lo", n, where), read_vector(doc, "x_hi", n, where));
  inst.Y = BoxRegion(read_vector(doc, "y_lo", m, where), read_vector(doc, "y_hi", m, where));
  inst.objective.Q1 = read_matrix(doc, "Q1", n, n, where);
  inst.objective.Q2 = read_matrix(doc, "Q2", m, m, where);
  inst.objective.q1 = read_vector(doc, "q1", n, where);
  inst.objective.q2 = read_vector(doc, "q2", m, where);

  if (auto it = doc.find("nash_cournot"); it != doc.end() && !it->is_null()) {
    const json& nc = *it;
    if (!nc.is_object()) throw ParseError("field 'nash_cournot': expected an object");
    const std::string ncw = "nash_cournot";
    NashCournotParams p;
    p.n = n;
    p.m = m;
    p.alpha = read_scalar(nc, "alpha", ncw);
    p.beta = read_scalar(nc, "beta", ncw);
    p.c = read_matrix(nc, "c", n, m, ncw);
    p.eta = read_vector(nc, "eta", n, ncw);
    p.xi = read_vector(nc, "xi", m, ncw);
    p.objective = inst.objective;
    inst.nash_cournot = std::move(p);
  }
  validate_instance(inst);
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open instance file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_instance(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write instance file '" + path + "'");
  out << serialize_instance(inst) << '\n';
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string instance_digest(const Instance& inst) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(serialize_instance(inst))));
  return buf;
}

}  // namespace ampec
