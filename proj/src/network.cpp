#include "trafficflow/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace trafficflow {

using nlohmann::json;

std::string_view to_string(EquationKind kind) {
  switch (kind) {
    case EquationKind::Jackson: return "jackson";
    case EquationKind::GoodmanMassey: return "gm";
    case EquationKind::Overflow: return "overflow";
  }
  return "overflow";
}

std::string ValidationResult::describe() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < issues.size(); ++k) {
    if (k) os << "; ";
    os << issues[k].field << "[" << issues[k].index << "]: " << issues[k].message;
  }
  return os.str();
}

namespace {

void check_matrix(const DenseMatrix& m, std::size_t n, const std::string& name,
                  std::vector<ValidationIssue>& issues) {
  if (m.rows() != n || m.cols() != n) {
    issues.push_back({name, 0, "expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix"});
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    bool entries_ok = true;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = m(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        issues.push_back({name, i, "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                       ") must be finite and nonnegative"});
        entries_ok = false;
      }
      sum += v;
    }
    if (entries_ok && sum > 1.0 + kRowSumTolerance) {
      std::ostringstream os;
      os.precision(17);
      os << "row sum " << sum << " exceeds 1";
      issues.push_back({name, i, os.str()});
    }
  }
}

}  // namespace

ValidationResult validate_network(const Network& net) {
  ValidationResult result;
  auto& issues = result.issues;
  if (net.n == 0) {
    issues.push_back({"n", 0, "network must have at least one node"});
    return result;
  }
  if (net.alpha.size() != net.n) {
    issues.push_back({"alpha", 0, "expected " + std::to_string(net.n) + " entries"});
  } else {
    for (std::size_t i = 0; i < net.n; ++i) {
      if (!std::isfinite(net.alpha[i]) || net.alpha[i] < 0.0)
        issues.push_back({"alpha", i, "must be finite and nonnegative"});
    }
  }
  if (net.mu.size() != net.n) {
    issues.push_back({"mu", 0, "expected " + std::to_string(net.n) + " entries"});
  } else {
    for (std::size_t i = 0; i < net.n; ++i) {
      if (!std::isfinite(net.mu[i]) || net.mu[i] <= 0.0)
        issues.push_back({"mu", i, "must be finite and strictly positive"});
    }
  }
  check_matrix(net.p, net.n, "p", issues);
  check_matrix(net.q, net.n, "q", issues);
  return result;
}

void require_valid(const Network& net) {
  const ValidationResult v = validate_network(net);
  if (!v.ok()) throw NetworkError("invalid network: " + v.describe());
}

double residual(const Network& net, std::span<const double> lambda, EquationKind kind) {
  if (lambda.size() != net.n) throw std::invalid_argument("residual: lambda has the wrong length");
  Vector rhs(net.alpha);
  for (std::size_t i = 0; i < net.n; ++i) {
    const double served = kind == EquationKind::Jackson ? lambda[i] : std::min(lambda[i], net.mu[i]);
    const double overflow =
        kind == EquationKind::Overflow ? std::max(lambda[i] - net.mu[i], 0.0) : 0.0;
    const auto p_row = net.p.row(i);
    const auto q_row = net.q.row(i);
    for (std::size_t j = 0; j < net.n; ++j) {
      rhs[j] += served * p_row[j];
      if (overflow != 0.0) rhs[j] += overflow * q_row[j];
    }
  }
  return max_abs_diff(lambda, rhs);
}

NodeSet stable_nodes(const Network& net, std::span<const double> lambda) {
  NodeSet out;
  for (std::size_t i = 0; i < net.n; ++i) {
    if (lambda[i] < net.mu[i] - kBoundaryTolerance) out.push_back(i);
  }
  return out;
}

NodeSet unstable_nodes(const Network& net, std::span<const double> lambda) {
  NodeSet out;
  for (std::size_t i = 0; i < net.n; ++i) {
    if (!(lambda[i] < net.mu[i] - kBoundaryTolerance)) out.push_back(i);
  }
  return out;
}

TrafficSolution make_solution(const Network& net, Vector lambda, EquationKind kind) {
  TrafficSolution s;
  s.stable_set = stable_nodes(net, lambda);
  s.unstable_set = unstable_nodes(net, lambda);
  s.residual = residual(net, lambda, kind);
  s.equation_kind = kind;
  s.lambda = std::move(lambda);
  return s;
}

namespace {

Vector read_vector(const json& doc, const char* key, std::size_t n) {
  if (!doc.contains(key)) throw NetworkError(std::string("missing key \"") + key + "\"");
  const json& arr = doc.at(key);
  if (!arr.is_array()) throw NetworkError(std::string("\"") + key + "\" must be an array");
  if (arr.size() != n) {
    throw NetworkError(std::string("\"") + key + "\" has " + std::to_string(arr.size()) +
                       " entries, expected " + std::to_string(n));
  }
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!arr[i].is_number()) {
      throw NetworkError(std::string(key) + "[" + std::to_string(i) + "] is not a number");
    }
    v[i] = arr[i].get<double>();
  }
  return v;
}

DenseMatrix read_matrix(const json& doc, const char* key, std::size_t n) {
  const json& arr = doc.at(key);
  if (!arr.is_array() || arr.size() != n) {
    throw NetworkError(std::string("\"") + key + "\" must be an array of " + std::to_string(n) + " rows");
  }
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const json& row = arr[i];
    if (!row.is_array() || row.size() != n) {
      throw NetworkError(std::string(key) + " row " + std::to_string(i) + " must have " +
                         std::to_string(n) + " entries");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!row[j].is_number()) {
        throw NetworkError(std::string(key) + "[" + std::to_string(i) + "][" + std::to_string(j) +
                           "] is not a number");
      }
      m(i, j) = row[j].get<double>();
    }
  }
  return m;
}

std::string vector_text(std::span<const double> v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += json(v[i]).dump();
  }
  return out + "]";
}

}  // namespace

Network parse_network(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw NetworkError(std::string("malformed network document: ") + e.what());
  }
  if (!doc.is_object()) throw NetworkError("network document must be a JSON object");
  if (!doc.contains("n") || !doc.at("n").is_number_integer() || doc.at("n").get<long long>() < 1) {
    throw NetworkError("\"n\" must be a positive integer");
  }

  Network net;
  net.n = doc.at("n").get<std::size_t>();
  net.alpha = read_vector(doc, "alpha", net.n);
  net.mu = read_vector(doc, "mu", net.n);
  if (!doc.contains("p")) throw NetworkError("missing key \"p\"");
  net.p = read_matrix(doc, "p", net.n);
  net.q = doc.contains("q") ? read_matrix(doc, "q", net.n) : DenseMatrix(net.n, net.n);
  require_valid(net);
  return net;
}

std::string serialize_network(const Network& net) {
  std::string out = "{\n  \"n\": " + std::to_string(net.n) + ",\n";
  out += "  \"alpha\": " + vector_text(net.alpha) + ",\n";
  out += "  \"mu\": " + vector_text(net.mu) + ",\n";
  for (const char* key : {"p", "q"}) {
    const DenseMatrix& m = key[0] == 'p' ? net.p : net.q;
    out += std::string("  \"") + key + "\": [\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
      out += "    " + vector_text(m.row(i)) + (i + 1 < m.rows() ? ",\n" : "\n");
    }
    out += key[0] == 'p' ? "  ],\n" : "  ]\n";
  }
  return out + "}\n";
}

Network load_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_network(buf.str());
}

void save_network(const Network& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << serialize_network(net);
  if (!out) throw std::runtime_error("write failed: " + path);
}

Network permute_network(const Network& net, std::span<const std::size_t> perm) {
  if (perm.size() != net.n) throw std::invalid_argument("permutation has the wrong length");
  Network out;
  out.n = net.n;
  out.alpha.assign(net.n, 0.0);
  out.mu.assign(net.n, 0.0);
  out.p = DenseMatrix(net.n, net.n);
  out.q = DenseMatrix(net.n, net.n);
  for (std::size_t i = 0; i < net.n; ++i) {
    out.alpha[perm[i]] = net.alpha[i];
    out.mu[perm[i]] = net.mu[i];
    for (std::size_t j = 0; j < net.n; ++j) {
      out.p(perm[i], perm[j]) = net.p(i, j);
      out.q(perm[i], perm[j]) = net.q(i, j);
    }
  }
  return out;
}

Network without_overflow(const Network& net) {
  Network out = net;
  out.q = DenseMatrix(net.n, net.n);
  return out;
}

}  // namespace trafficflow
