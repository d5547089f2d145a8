#include "petzlab/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "instance_gen.hpp"
#include "petzlab/version.hpp"

namespace petzlab {

namespace {

namespace fs = std::filesystem;

constexpr int kMaxDim = 64;

void ensure_parent(const fs::path& path) {
  if (!path.has_parent_path()) return;
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) {
    throw std::runtime_error("cannot create directory " + path.parent_path().string());
  }
}

[[noreturn]] void rethrow(const std::string& where, const std::exception& e) {
  throw std::runtime_error(where + ": " + e.what());
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  if (rows < 1 || cols < 1 || rows > kMaxDim || cols > kMaxDim) {
    throw std::runtime_error("matrix_to_json: dimensions out of range");
  }
  Json j;
  if (rows == cols) {
    j["dim"] = rows;
  } else {
    j["rows"] = rows;
    j["cols"] = cols;
  }
  Json re = Json::array();
  Json im = Json::array();
  for (int r = 0; r < rows; ++r) {
    Json re_row = Json::array();
    Json im_row = Json::array();
    for (int c = 0; c < cols; ++c) {
      re_row.push_back(m(r, c).real());
      im_row.push_back(m(r, c).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

Matrix matrix_from_json(const Json& j) {
  try {
    int rows, cols;
    if (j.contains("dim")) {
      rows = cols = j.at("dim").get<int>();
    } else {
      rows = j.at("rows").get<int>();
      cols = j.at("cols").get<int>();
    }
    if (rows < 1 || cols < 1 || rows > kMaxDim || cols > kMaxDim) {
      throw std::runtime_error("matrix dimensions out of range");
    }
    const Json& re = j.at("re");
    const Json& im = j.at("im");
    if (!re.is_array() || !im.is_array() ||
        static_cast<int>(re.size()) != rows || static_cast<int>(im.size()) != rows) {
      throw std::runtime_error("re/im row counts do not match the declared shape");
    }
    Matrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
      const Json& re_row = re.at(r);
      const Json& im_row = im.at(r);
      if (static_cast<int>(re_row.size()) != cols ||
          static_cast<int>(im_row.size()) != cols) {
        throw std::runtime_error("re/im column counts do not match the declared shape");
      }
      for (int c = 0; c < cols; ++c) {
        m(r, c) = Complex(re_row.at(c).get<double>(), im_row.at(c).get<double>());
      }
    }
    return m;
  } catch (const Json::exception& e) {
    rethrow("matrix_from_json", e);
  }
}

Json channel_to_json(const QuantumChannel& ch) {
  Json j;
  j["d_in"] = ch.d_in();
  j["d_out"] = ch.d_out();
  Json kraus = Json::array();
  for (const auto& k : ch.kraus()) kraus.push_back(matrix_to_json(k));
  j["kraus"] = std::move(kraus);
  return j;
}

QuantumChannel channel_from_json(const Json& j) {
  try {
    const int d_in = j.at("d_in").get<int>();
    const int d_out = j.at("d_out").get<int>();
    if (d_in < 1 || d_out < 1 || d_in > kMaxDim || d_out > kMaxDim) {
      throw std::runtime_error("channel dimensions out of range");
    }
    const Json& kraus = j.at("kraus");
    if (!kraus.is_array() || kraus.empty()) {
      throw std::runtime_error("channel needs a non-empty kraus array");
    }
    std::vector<Matrix> ops;
    ops.reserve(kraus.size());
    for (const auto& item : kraus) {
      Matrix k = matrix_from_json(item);
      if (k.rows() != d_out || k.cols() != d_in) {
        throw std::runtime_error("kraus block shape does not match d_out x d_in");
      }
      ops.push_back(std::move(k));
    }
    return QuantumChannel(std::move(ops));
  } catch (const Json::exception& e) {
    rethrow("channel_from_json", e);
  }
}

Json load_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  try {
    Json j;
    is >> j;
    return j;
  } catch (const Json::exception& e) {
    rethrow(path, e);
  }
}

void save_json(const std::string& path, const Json& j) {
  ensure_parent(path);
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << j.dump(2) << '\n';
  if (!os) throw std::runtime_error("write failed for " + path);
}

Matrix load_matrix(const std::string& path) {
  const Json j = load_json(path);
  try {
    return matrix_from_json(j);
  } catch (const std::exception& e) {
    rethrow(path, e);
  }
}

void save_matrix(const std::string& path, const Matrix& m) {
  save_json(path, matrix_to_json(m));
}

QuantumChannel load_channel(const std::string& path) {
  const Json j = load_json(path);
  try {
    return channel_from_json(j);
  } catch (const std::exception& e) {
    rethrow(path, e);
  }
}

void save_channel(const std::string& path, const QuantumChannel& ch) {
  save_json(path, channel_to_json(ch));
}

Json report_to_json(const SuiteConfig& config, const SuiteResult& result) {
  Json j;
  j["version"] = kVersion;
  Json cfg;
  Json names = Json::array();
  for (const auto& s : result.checks) names.push_back(s.check);
  cfg["checks"] = std::move(names);
  cfg["dims"] = config.dims;
  cfg["instances_per_dim"] = config.instances_per_dim;
  cfg["seed"] = config.seed;
  cfg["p_values"] = config.p_values;
  cfg["slack_coefficient"] = 1e-7;
  j["config"] = std::move(cfg);
  j["total_failures"] = result.total_failures;
  if (config.timings) j["runtime_ms"] = result.runtime_ms;

  Json checks = Json::array();
  for (const auto& s : result.checks) {
    Json c;
    c["check"] = s.check;
    c["params"] = Json::parse(s.params);
    c["instances"] = s.instances;
    c["min_margin"] = s.min_margin;
    c["mean_margin"] = s.mean_margin;
    c["failures"] = s.failures;
    if (config.timings) c["runtime_ms"] = s.runtime_ms;
    Json reports = Json::array();
    for (const auto& r : s.reports) {
      Json rep;
      rep["id"] = r.instance_id;
      rep["lhs"] = r.lhs;
      rep["rhs"] = r.rhs;
      rep["margin"] = r.margin;
      rep["slack"] = r.slack;
      rep["pass"] = r.pass;
      Json diag;
      for (const auto& [key, value] : r.diagnostics) diag[key] = value;
      rep["diagnostics"] = std::move(diag);
      reports.push_back(std::move(rep));
    }
    c["reports"] = std::move(reports);
    checks.push_back(std::move(c));
  }
  j["checks"] = std::move(checks);
  return j;
}

std::string report_to_csv(const SuiteConfig&, const SuiteResult& result) {
  std::string out = "check,instance_id,dim,lhs,rhs,margin,slack,pass\n";
  char buf[512];
  for (const auto& s : result.checks) {
    for (const auto& r : s.reports) {
      const auto it = r.diagnostics.find("dim");
      const int dim = it == r.diagnostics.end() ? 0 : static_cast<int>(it->second);
      std::snprintf(buf, sizeof buf, "%s,%s,%d,%.17g,%.17g,%.17g,%.17g,%d\n",
                    s.check.c_str(), r.instance_id.c_str(), dim, r.lhs, r.rhs, r.margin,
                    r.slack, r.pass ? 1 : 0);
      out += buf;
    }
  }
  return out;
}

void write_report(const SuiteConfig& config, const SuiteResult& result) {
  if (config.format == "json") {
    save_json(config.output_path, report_to_json(config, result));
    return;
  }
  ensure_parent(config.output_path);
  std::ofstream os(config.output_path);
  if (!os) throw std::runtime_error("cannot open " + config.output_path + " for writing");
  os << report_to_csv(config, result);
  if (!os) throw std::runtime_error("write failed for " + config.output_path);
}

EnsembleDescriptor descriptor_from_json(const Json& j) {
  EnsembleDescriptor d;
  try {
    if (j.contains("dim")) d.dim = j.at("dim").get<int>();
    if (j.contains("count")) d.count = j.at("count").get<int>();
    if (j.contains("seed")) d.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("state_kind")) d.state_kind = j.at("state_kind").get<std::string>();
    if (j.contains("channel_kind")) d.channel_kind = j.at("channel_kind").get<std::string>();
    if (j.contains("delta")) d.delta = j.at("delta").get<double>();
  } catch (const Json::exception& e) {
    rethrow("ensemble descriptor", e);
  }
  if (d.dim < 2 || d.dim > kMaxDim) {
    throw std::runtime_error("ensemble descriptor: dim must lie in [2, 64]");
  }
  if (d.count < 1) throw std::runtime_error("ensemble descriptor: count must be positive");
  if (!(d.delta > 0.0 && d.delta < 1.0)) {
    throw std::runtime_error("ensemble descriptor: delta must lie in (0, 1)");
  }
  const bool state_ok = d.state_kind == "mixed" || d.state_kind == "pure" ||
                        d.state_kind == "near_degenerate" || d.state_kind == "comparable";
  if (!state_ok) throw std::runtime_error("ensemble descriptor: unknown state_kind");
  const bool channel_ok = d.channel_kind == "cycle" || d.channel_kind == "depolarizing" ||
                          d.channel_kind == "unitary" || d.channel_kind == "pinching" ||
                          d.channel_kind == "conditional_expectation" ||
                          d.channel_kind == "isometry" || d.channel_kind == "identity";
  if (!channel_ok) throw std::runtime_error("ensemble descriptor: unknown channel_kind");
  return d;
}

void generate_ensemble(const EnsembleDescriptor& desc, const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create directory " + out_dir);
  for (int i = 0; i < desc.count; ++i) {
    SplitRng rng(desc.seed, gen::stream_key("ensemble", desc.dim, i));
    DensityMatrix eta = gen::faithful_state(desc.dim, rng);
    DensityMatrix rho = [&]() -> DensityMatrix {
      if (desc.state_kind == "pure") return random_pure_state(desc.dim, rng);
      if (desc.state_kind == "near_degenerate") {
        return random_near_degenerate_state(desc.dim, rng);
      }
      if (desc.state_kind == "comparable") {
        return random_comparable_state(eta, desc.delta, rng);
      }
      return random_mixed_state(desc.dim, rng);
    }();
    QuantumChannel ch = [&]() -> QuantumChannel {
      if (desc.channel_kind == "cycle") return gen::channel_variant(desc.dim, i, rng).ch;
      if (desc.channel_kind == "identity") return make_identity_channel(desc.dim);
      if (desc.channel_kind == "depolarizing") {
        return make_depolarizing_channel(desc.dim, 0.5);
      }
      if (desc.channel_kind == "unitary") {
        return make_unitary_channel(random_unitary(desc.dim, rng));
      }
      if (desc.channel_kind == "pinching") {
        Matrix u = random_unitary(desc.dim, rng);
        return make_block_pinching_channel(gen::pinch_blocks(desc.dim), &u);
      }
      if (desc.channel_kind == "conditional_expectation") {
        Matrix u = random_unitary(desc.dim, rng);
        return make_conditional_expectation_channel(gen::pinch_blocks(desc.dim), &u);
      }
      return make_random_isometry_channel(desc.dim, desc.dim, 2, rng);
    }();
    validate_channel(ch);
    const fs::path dir(out_dir);
    const std::string tag = std::to_string(i);
    save_matrix((dir / ("rho_" + tag + ".json")).string(), rho.matrix());
    save_matrix((dir / ("eta_" + tag + ".json")).string(), eta.matrix());
    save_channel((dir / ("channel_" + tag + ".json")).string(), ch);
  }
}

}  // namespace petzlab
