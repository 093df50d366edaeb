#pragma once

#include <string>

#include "json.hpp"
#include "matrange/linalg.hpp"

namespace matrange {

// {"d": int, "n": int, "selfadjoint": bool, "matrices": [[[re, im], ...row-major...], ...]}
nlohmann::json tuple_to_json(const MatrixTuple& X);
MatrixTuple tuple_from_json(const nlohmann::json& j);

nlohmann::json matrix_to_json(const CMat& M);  // flat row-major [[re, im], ...]
CMat matrix_from_json(const nlohmann::json& j, Eigen::Index n);

MatrixTuple read_tuple_file(const std::string& path);
void write_tuple_file(const std::string& path, const MatrixTuple& X);

}  // namespace matrange
