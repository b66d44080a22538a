#include <bit>
#include <fstream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "msparse/grid.hpp"

namespace msparse {

static_assert(std::endian::native == std::endian::little, "field files are written as f64le");

namespace {

std::string header_line(const Grid3& g, int ncomp) {
  nlohmann::ordered_json h;
  h["version"] = 1;
  h["n"] = g.n();
  h["box_len"] = g.box_len();
  h["ncomp"] = ncomp;
  h["dtype"] = "f64le";
  h["order"] = "zyx-c";
  return h.dump() + "\n";
}

void write_file(const std::string& path, const Grid3& g, int ncomp, const double* data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  const std::string header = header_line(g, ncomp);
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(reinterpret_cast<const char*>(data),
            static_cast<std::streamsize>(sizeof(double) * ncomp * g.size()));
  if (!out) throw IoError("write failed for " + path);
}

struct RawField {
  Grid3 grid;
  int ncomp;
  Eigen::ArrayXd values;
};

RawField read_file(const std::string& path) {
  using Kind = LoadError::Kind;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(Kind::Io, "cannot open " + path);

  std::string header;
  for (char c; in.get(c);) {
    if (c == '\n') break;
    header.push_back(c);
    if (header.size() > 4096) throw LoadError(Kind::MalformedHeader, "header line too long");
  }
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(header);
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(Kind::MalformedHeader, std::string("header is not JSON: ") + e.what());
  }
  int n = 0;
  int ncomp = 0;
  double box_len = 0.0;
  try {
    if (h.at("version").get<int>() != 1) throw LoadError(Kind::MalformedHeader, "unsupported version");
    if (h.at("dtype").get<std::string>() != "f64le") throw LoadError(Kind::MalformedHeader, "dtype must be f64le");
    if (h.at("order").get<std::string>() != "zyx-c") throw LoadError(Kind::MalformedHeader, "order must be zyx-c");
    n = h.at("n").get<int>();
    ncomp = h.at("ncomp").get<int>();
    box_len = h.at("box_len").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(Kind::MalformedHeader, std::string("bad header field: ") + e.what());
  }
  if (ncomp != 1 && ncomp != 3) throw LoadError(Kind::MalformedHeader, "ncomp must be 1 or 3");

  std::optional<Grid3> grid;
  try {
    grid.emplace(n, box_len);
  } catch (const RangeError& e) {
    throw LoadError(Kind::MalformedHeader, e.what());
  }

  const auto begin = in.tellg();
  in.seekg(0, std::ios::end);
  const auto payload = static_cast<std::int64_t>(in.tellg() - begin);
  const std::int64_t expected = static_cast<std::int64_t>(sizeof(double)) * ncomp * grid->size();
  if (payload != expected) {
    throw LoadError(Kind::SizeMismatch, "payload has " + std::to_string(payload) + " bytes, header implies " +
                                            std::to_string(expected));
  }
  in.seekg(begin);
  Eigen::ArrayXd values(ncomp * grid->size());
  in.read(reinterpret_cast<char*>(values.data()), expected);
  if (!in) throw LoadError(Kind::Io, "short read from " + path);
  if (!values.isFinite().all()) throw LoadError(Kind::NonFinite, "payload contains non-finite values");
  return {*grid, ncomp, std::move(values)};
}

}  // namespace

void save_field(const VectorField& f, const std::string& path) {
  write_file(path, f.grid(), 3, f.data().data());
}

void save_field(const ScalarField& f, const std::string& path) {
  write_file(path, f.grid(), 1, f.data().data());
}

VectorField load_field(const std::string& path) {
  RawField raw = read_file(path);
  if (raw.ncomp != 3) throw LoadError(LoadError::Kind::MalformedHeader, "expected a 3-component field");
  VectorField::Array data = Eigen::Map<VectorField::Array>(raw.values.data(), raw.grid.size(), 3);
  return VectorField(raw.grid, std::move(data));
}

ScalarField load_scalar_field(const std::string& path) {
  RawField raw = read_file(path);
  if (raw.ncomp != 1) throw LoadError(LoadError::Kind::MalformedHeader, "expected a 1-component field");
  return ScalarField(raw.grid, std::move(raw.values));
}

}  // namespace msparse
