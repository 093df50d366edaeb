#include "matrange/tuple_io.hpp"

#include <fstream>

#include "matrange/error.hpp"

namespace matrange {

using nlohmann::json;

json matrix_to_json(const CMat& M) {
  json flat = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) flat.push_back({M(i, j).real(), M(i, j).imag()});
  return flat;
}

CMat matrix_from_json(const json& j, Eigen::Index n) {
  require(j.is_array(), ErrorKind::io, "matrix must be a JSON array");
  // Accept the flat row-major list or a list of rows.
  json flat = json::array();
  if (!j.empty() && j[0].is_array() && !j[0].empty() && j[0][0].is_array()) {
    for (const auto& row : j)
      for (const auto& e : row) flat.push_back(e);
  } else {
    flat = j;
  }
  require(static_cast<Eigen::Index>(flat.size()) == n * n, ErrorKind::io,
          "matrix entry count does not match n*n");
  CMat M(n, n);
  for (Eigen::Index k = 0; k < n * n; ++k) {
    const auto& e = flat[static_cast<std::size_t>(k)];
    double re = 0.0, im = 0.0;
    if (e.is_number()) {
      re = e.get<double>();
    } else {
      require(e.is_array() && e.size() == 2, ErrorKind::io, "entry must be [re, im]");
      re = e[0].get<double>();
      im = e[1].get<double>();
    }
    M(k / n, k % n) = cplx(re, im);
  }
  return M;
}

json tuple_to_json(const MatrixTuple& X) {
  json j;
  j["d"] = X.d();
  j["n"] = X.n();
  j["selfadjoint"] = X.selfadjoint;
  json mats = json::array();
  for (const auto& M : X.mats) mats.push_back(matrix_to_json(M));
  j["matrices"] = std::move(mats);
  return j;
}

MatrixTuple tuple_from_json(const json& j) {
  try {
    const int d = j.at("d").get<int>();
    const int n = j.at("n").get<int>();
    require(d >= 1 && n >= 1, ErrorKind::io, "tuple JSON needs d >= 1 and n >= 1");
    const bool sa = j.value("selfadjoint", false);
    const auto& mats = j.at("matrices");
    require(mats.is_array() && static_cast<int>(mats.size()) == d, ErrorKind::io,
            "matrices list length must equal d");
    std::vector<CMat> out;
    for (const auto& m : mats) out.push_back(matrix_from_json(m, n));
    return make_tuple(std::move(out), sa);
  } catch (const json::exception& e) {
    fail(ErrorKind::io, std::string("malformed tuple JSON: ") + e.what());
  }
}

MatrixTuple read_tuple_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::io, ("cannot open " + path).c_str());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(ErrorKind::io, path + ": " + e.what());
  }
  return tuple_from_json(j);
}

void write_tuple_file(const std::string& path, const MatrixTuple& X) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::io, ("cannot write " + path).c_str());
  out << tuple_to_json(X).dump() << '\n';
}

}  // namespace matrange
