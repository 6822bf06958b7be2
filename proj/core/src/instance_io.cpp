#include "repopt/instance_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace repopt {

namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& A) {
  json out = json::array();
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j) out.push_back(A(i, j));
  return out;
}

Eigen::MatrixXd matrix_from_json(const json& arr, int m, int n) {
  if (static_cast<int>(arr.size()) != m * n)
    throw std::runtime_error("instance json: A has wrong length");
  Eigen::MatrixXd A(m, n);
  int idx = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = arr[idx++].get<double>();
  return A;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::VectorXd vector_from_json(const json& arr, int m) {
  if (static_cast<int>(arr.size()) != m)
    throw std::runtime_error("instance json: b has wrong length");
  Eigen::VectorXd v(m);
  for (int i = 0; i < m; ++i) v[i] = arr[i].get<double>();
  return v;
}

json common_fields(const std::string& type, int m, int n, std::uint64_t seed,
                   const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  json out;
  out["type"] = type;
  out["m"] = m;
  out["n"] = n;
  out["seed"] = seed;
  out["A"] = matrix_to_json(A);
  out["b"] = vector_to_json(b);
  return out;
}

}  // namespace

std::string instance_to_json(const TrimmedLassoInstance& inst) {
  json out = common_fields("trimmed_lasso", inst.m(), inst.n(), inst.seed, inst.A, inst.b);
  out["params"] = {{"lambda", inst.lambda},
                   {"k", inst.k},
                   {"noise_std", inst.noise_std},
                   {"planted_support", inst.planted_support}};
  return out.dump();
}

std::string instance_to_json(const LtsInstance& inst) {
  json out = common_fields("lts", inst.m(), inst.n(), inst.seed, inst.A, inst.b);
  out["params"] = {{"q", inst.q},
                   {"sigma_clean", inst.sigma_clean},
                   {"outlier_std", inst.outlier_std},
                   {"outlier_rows", inst.outlier_rows}};
  return out.dump();
}

std::string instance_to_json(const ReluInstance& inst) {
  json out = common_fields("relu", inst.m(), inst.n(), inst.seed, inst.A, inst.b);
  out["params"] = {{"q_param", inst.q_param},
                   {"rho_b", inst.rho_b},
                   {"flipped_rows", inst.flipped_rows}};
  return out.dump();
}

std::string instance_to_json(const AnyInstance& inst) {
  return std::visit([](const auto& i) { return instance_to_json(i); }, inst);
}

AnyInstance instance_from_json(const std::string& text) {
  json in;
  try {
    in = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("instance json: parse error: ") + e.what());
  }
  try {
    const std::string type = in.at("type").get<std::string>();
    const int m = in.at("m").get<int>();
    const int n = in.at("n").get<int>();
    const json& params = in.at("params");

    if (type == "trimmed_lasso") {
      TrimmedLassoInstance inst;
      inst.A = matrix_from_json(in.at("A"), m, n);
      inst.b = vector_from_json(in.at("b"), m);
      inst.seed = in.at("seed").get<std::uint64_t>();
      inst.lambda = params.at("lambda").get<double>();
      inst.k = params.at("k").get<int>();
      inst.noise_std = params.at("noise_std").get<double>();
      inst.planted_support = params.at("planted_support").get<std::vector<int>>();
      inst.validate();
      return inst;
    }
    if (type == "lts") {
      LtsInstance inst;
      inst.A = matrix_from_json(in.at("A"), m, n);
      inst.b = vector_from_json(in.at("b"), m);
      inst.seed = in.at("seed").get<std::uint64_t>();
      inst.q = params.at("q").get<int>();
      inst.sigma_clean = params.at("sigma_clean").get<double>();
      inst.outlier_std = params.at("outlier_std").get<double>();
      inst.outlier_rows = params.at("outlier_rows").get<std::vector<int>>();
      inst.validate();
      return inst;
    }
    if (type == "relu") {
      ReluInstance inst;
      inst.A = matrix_from_json(in.at("A"), m, n);
      inst.b = vector_from_json(in.at("b"), m);
      inst.seed = in.at("seed").get<std::uint64_t>();
      inst.q_param = params.at("q_param").get<double>();
      inst.rho_b = params.at("rho_b").get<double>();
      inst.flipped_rows = params.at("flipped_rows").get<std::vector<int>>();
      inst.validate();
      return inst;
    }
    throw std::runtime_error("instance json: unknown type \"" + type + "\"");
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("instance json: missing or bad field: ") + e.what());
  }
}

void write_instance_file(const std::string& path, const AnyInstance& inst) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << instance_to_json(inst) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

AnyInstance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return instance_from_json(buf.str());
}

int instance_dim(const AnyInstance& inst) {
  return std::visit([](const auto& i) { return i.dim(); }, inst);
}

double instance_value(const AnyInstance& inst, const Eigen::VectorXd& x) {
  return std::visit([&](const auto& i) { return i.value(x); }, inst);
}

const Objective& instance_objective(const AnyInstance& inst) {
  return std::visit([](const auto& i) -> const Objective& { return i; }, inst);
}

std::string instance_type_name(const AnyInstance& inst) {
  struct Namer {
    std::string operator()(const TrimmedLassoInstance&) const { return "trimmed_lasso"; }
    std::string operator()(const LtsInstance&) const { return "lts"; }
    std::string operator()(const ReluInstance&) const { return "relu"; }
  };
  return std::visit(Namer{}, inst);
}

}  // namespace repopt
