#include "pwave/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pwave/error.hpp"

namespace pwave {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void write_value(std::ostream& os, const nlohmann::json& j, int indent, int depth) {
  const std::string pad(std::size_t(indent * (depth + 1)), ' ');
  const std::string close(std::size_t(indent * depth), ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << nlohmann::json(it.key()).dump() << ": ";
        write_value(os, it.value(), indent, depth + 1);
      }
      os << "\n" << close << "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      bool scalar = true;
      for (const auto& e : j) scalar = scalar && !e.is_structured();
      if (scalar) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          write_value(os, j[i], indent, depth + 1);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        write_value(os, j[i], indent, depth + 1);
      }
      os << "\n" << close << "]";
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v))
        os << format_double(v);
      else
        os << "null";
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace

void write_json(std::ostream& os, const nlohmann::json& j, int indent) {
  write_value(os, j, indent, 0);
  os << "\n";
}

std::string dump_json(const nlohmann::json& j, int indent) {
  std::ostringstream os;
  write_json(os, j, indent);
  return os.str();
}

nlohmann::json to_json(const SpectrumPair& S) {
  nlohmann::json modes = nlohmann::json::array();
  const auto& idx = S.modes()->indices();
  for (std::size_t i = 0; i < idx.size(); ++i) {
    modes.push_back({{"n", {idx[i].x, idx[i].y, idx[i].z}},
                     {"b0", S.u0.b[i]},
                     {"c0", S.u0.c[i]},
                     {"b1", S.u1.b[i]},
                     {"c1", S.u1.c[i]}});
  }
  nlohmann::json j;
  j["s"] = S.s;
  j["n_max"] = S.n_max();
  j["a0"] = S.u0.a;
  j["a1"] = S.u1.a;
  j["modes"] = std::move(modes);
  return j;
}

SpectrumPair spectrum_from_json(const nlohmann::json& j) {
  try {
    const int n_max = j.at("n_max").get<int>();
    SpectrumPair S = SpectrumPair::zeros(n_max, j.at("s").get<double>());
    S.u0.a = j.value("a0", 0.0);
    S.u1.a = j.value("a1", 0.0);
    for (const auto& m : j.at("modes")) {
      const auto& n = m.at("n");
      LatticeIndex li{n.at(0).get<int>(), n.at(1).get<int>(), n.at(2).get<int>()};
      if (!li.canonical()) throw InvalidInput("mode is not in canonical half-lattice form");
      auto pos = S.modes()->find(li);
      if (!pos) throw InvalidInput("mode outside the n_max ball");
      S.u0.b[*pos] = m.value("b0", 0.0);
      S.u0.c[*pos] = m.value("c0", 0.0);
      S.u1.b[*pos] = m.value("b1", 0.0);
      S.u1.c[*pos] = m.value("c1", 0.0);
    }
    validate(S);
    return S;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed spectrum JSON: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SpectrumPair load_spectrum(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError("cannot parse " + path.string() + ": " + e.what());
  }
  return spectrum_from_json(j);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

void save_spectrum(const SpectrumPair& S, const std::filesystem::path& path) {
  write_file_atomic(path, dump_json(to_json(S)));
}

}  // namespace pwave
