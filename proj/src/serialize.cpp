#include "relulab/serialize.hpp"

#include <fstream>
#include <stdexcept>

namespace relulab {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json params_to_json(const Params& params) {
  params.validate();
  const Architecture arch = params.architecture();
  ordered_json j;
  j["widths"] = arch.widths;
  ordered_json weights = ordered_json::array();
  for (const auto& W : params.weights) {
    ordered_json mat = ordered_json::array();
    for (std::size_t i = 0; i < W.rows; ++i) {
      ordered_json row = ordered_json::array();
      for (std::size_t k = 0; k < W.cols; ++k) row.push_back(W(i, k));
      mat.push_back(std::move(row));
    }
    weights.push_back(std::move(mat));
  }
  j["weights"] = std::move(weights);
  j["biases"] = params.biases;
  return j;
}

Params params_from_json(const json& j) {
  if (!j.contains("widths") || !j.contains("weights") || !j.contains("biases"))
    throw std::invalid_argument("params_from_json: missing widths/weights/biases");
  const Architecture arch(j.at("widths").get<std::vector<int>>());
  Params p;
  const auto& jw = j.at("weights");
  const auto& jb = j.at("biases");
  if (static_cast<int>(jw.size()) != arch.depth() ||
      static_cast<int>(jb.size()) != arch.depth())
    throw std::invalid_argument("params_from_json: layer count mismatch");
  for (int l = 1; l <= arch.depth(); ++l) {
    const auto& mat = jw.at(static_cast<std::size_t>(l - 1));
    Matrix W(static_cast<std::size_t>(arch.width(l)),
             static_cast<std::size_t>(arch.width(l - 1)));
    if (mat.size() != W.rows)
      throw std::invalid_argument("params_from_json: row count mismatch");
    for (std::size_t i = 0; i < W.rows; ++i) {
      const auto& row = mat.at(i);
      if (row.size() != W.cols)
        throw std::invalid_argument("params_from_json: col count mismatch");
      for (std::size_t k = 0; k < W.cols; ++k) W(i, k) = row.at(k).get<double>();
    }
    p.weights.push_back(std::move(W));
    p.biases.push_back(jb.at(static_cast<std::size_t>(l - 1)).get<std::vector<double>>());
  }
  p.validate();
  return p;
}

std::string params_to_json_string(const Params& params) {
  return params_to_json(params).dump(2);
}

Params params_from_json_string(const std::string& text) {
  return params_from_json(json::parse(text));
}

void save_params(const Params& params, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("save_params: cannot open " + path);
  f << params_to_json_string(params) << "\n";
}

Params load_params(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("load_params: cannot open " + path);
  json j;
  f >> j;
  return params_from_json(j);
}

}  // namespace relulab
