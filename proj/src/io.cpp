#include "pel/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "pel/common.hpp"

namespace pel {

namespace {

using nlohmann::json;

void ensure_parent_dir(const std::string& path) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
}

std::ofstream open_out(const std::string& path, bool binary) {
  ensure_parent_dir(path);
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw ConfigError("cannot open for reading: " + path);
  return in;
}

void write_payload(std::ofstream& out, const std::vector<cplx>& values,
                   const std::string& path) {
  static_assert(sizeof(cplx) == 2 * sizeof(double));
  out.write(reinterpret_cast<const char*>(values.data()),
            std::streamsize(values.size() * sizeof(cplx)));
  if (!out) throw ConfigError("short write: " + path);
}

std::vector<cplx> read_payload(std::ifstream& in, std::size_t count,
                               const std::string& path) {
  std::vector<cplx> values(count);
  in.read(reinterpret_cast<char*>(values.data()),
          std::streamsize(count * sizeof(cplx)));
  if (std::size_t(in.gcount()) != count * sizeof(cplx)) {
    throw ConfigError("truncated field payload: " + path);
  }
  return values;
}

json parse_header(std::ifstream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError("missing field header: " + path);
  }
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded()) {
    throw ConfigError("malformed field header: " + path);
  }
  return j;
}

}  // namespace

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json symbol_to_json(const DifferentialSymbol& s) {
  json terms = json::array();
  for (const auto& [alpha, coeff] : s.terms()) {
    terms.push_back(json{{"alpha", alpha.entries},
                         {"re", coeff.real()},
                         {"im", coeff.imag()}});
  }
  return json{{"n", s.dim()}, {"order", s.order()}, {"terms", terms}};
}

DifferentialSymbol symbol_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("order")) {
    throw ConfigError("operator JSON needs {n, order, terms}");
  }
  DifferentialSymbol s(j.at("n").get<int>(), j.at("order").get<int>());
  for (const auto& term : j.value("terms", json::array())) {
    MultiIndex alpha{term.at("alpha").get<std::vector<int>>()};
    s.add_term(std::move(alpha),
               cplx(term.value("re", 0.0), term.value("im", 0.0)));
  }
  return s;
}

void write_grid_field(const std::string& path, const GridField& u) {
  std::ofstream out = open_out(path, true);
  json header{{"n", u.grid.n}, {"N", u.grid.N}, {"L", u.grid.L}};
  out << header.dump() << '\n';
  write_payload(out, u.values, path);
}

GridField read_grid_field(const std::string& path) {
  std::ifstream in = open_in(path, true);
  json h = parse_header(in, path);
  GridField u = GridField::zero(TorusGrid(h.at("n").get<int>(),
                                          h.at("N").get<int>(),
                                          h.at("L").get<double>()));
  u.values = read_payload(in, u.grid.size(), path);
  return u;
}

void write_halfspace_field(const std::string& path, const HalfSpaceField& u) {
  u.validate();
  std::ofstream out = open_out(path, true);
  json header{{"n", u.boundary_grid.n},
              {"N", u.boundary_grid.N},
              {"L", u.boundary_grid.L},
              {"xn", u.xn_samples},
              {"spectral", u.spectral}};
  out << header.dump() << '\n';
  write_payload(out, u.values, path);
}

HalfSpaceField read_halfspace_field(const std::string& path) {
  std::ifstream in = open_in(path, true);
  json h = parse_header(in, path);
  TorusGrid grid(h.at("n").get<int>(), h.at("N").get<int>(),
                 h.at("L").get<double>());
  HalfSpaceField u = HalfSpaceField::zero(
      grid, h.at("xn").get<std::vector<double>>(),
      h.value("spectral", false));
  u.values = read_payload(in, u.values.size(), path);
  return u;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out = open_out(path, false);
  out << header << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_g17(row[i]);
    }
    out << '\n';
  }
  if (!out) throw ConfigError("short write: " + path);
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out = open_out(path, false);
  out << j.dump(2) << '\n';
  if (!out) throw ConfigError("short write: " + path);
}

json read_json_file(const std::string& path) {
  std::ifstream in = open_in(path, false);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError("malformed JSON: " + path);
  return j;
}

}  // namespace pel
