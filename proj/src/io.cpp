#include "sing/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sing/error.hpp"

namespace sing::io {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_cell(const std::string& raw, std::size_t row, std::size_t col) {
  const std::string cell = trim(raw);
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (cell.empty() || res.ec != std::errc() || res.ptr != last) {
    throw IoError("CSV parse error at row " + std::to_string(row) + ", column " + std::to_string(col) +
                  ": '" + cell + "' is not a number");
  }
  if (!std::isfinite(v)) {
    throw IoError("CSV parse error at row " + std::to_string(row) + ", column " + std::to_string(col) +
                  ": non-finite value rejected");
  }
  return v;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

Table parse_table(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Table t;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_line(line);
    if (!have_header) {
      for (auto& c : cells) t.header.push_back(trim(c));
      have_header = true;
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw IoError("CSV parse error at row " + std::to_string(line_no) + ": expected " +
                    std::to_string(t.header.size()) + " columns, found " + std::to_string(cells.size()));
    }
    std::vector<double> row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) row[c] = parse_cell(cells[c], line_no, c + 1);
    t.rows.push_back(std::move(row));
  }
  if (!have_header) throw IoError("CSV parse error: empty input");
  return t;
}

}  // namespace

std::string format_samples_csv(const SampleSet& samples) {
  std::string out;
  const auto& names = samples.names();
  for (std::size_t j = 0; j < names.size(); ++j) out += (j ? "," : "") + names[j];
  out += '\n';
  const auto& d = samples.data();
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
      if (j) out += ',';
      out += format_double(d(i, j));
    }
    out += '\n';
  }
  return out;
}

SampleSet parse_samples_csv(const std::string& text) {
  Table t = parse_table(text);
  if (t.rows.size() < 2) throw IoError("sample CSV needs at least two data rows");
  SampleMatrix data(t.rows.size(), t.header.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    for (std::size_t j = 0; j < t.header.size(); ++j) data(i, j) = t.rows[i][j];
  try {
    return SampleSet(std::move(data), t.header);
  } catch (const InvalidArgument& e) {
    throw IoError(std::string("invalid sample CSV: ") + e.what());
  }
}

void write_samples_csv(const std::filesystem::path& path, const SampleSet& samples) {
  write_file(path, format_samples_csv(samples));
}

SampleSet read_samples_csv(const std::filesystem::path& path) { return parse_samples_csv(read_file(path)); }

std::string format_matrix_csv(const Eigen::MatrixXd& m, const std::vector<std::string>& names) {
  std::string out;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (j) out += ',';
    out += j < static_cast<Eigen::Index>(names.size()) ? names[j] : "x" + std::to_string(j);
  }
  out += '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

Eigen::MatrixXd parse_matrix_csv(const std::string& text, std::vector<std::string>* names) {
  Table t = parse_table(text);
  Eigen::MatrixXd m(t.rows.size(), t.header.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    for (std::size_t j = 0; j < t.header.size(); ++j) m(i, j) = t.rows[i][j];
  if (names) *names = t.header;
  return m;
}

json graph_to_json(const Graph& g, const std::vector<std::string>& names) {
  json j;
  j["p"] = g.p;
  json edges = json::array();
  for (const auto& [a, b] : g.edges) edges.push_back({a, b});
  j["edges"] = edges;
  if (!names.empty()) j["names"] = names;
  return j;
}

Graph graph_from_json(const json& j) {
  try {
    Graph g(j.at("p").get<int>());
    for (const auto& e : j.at("edges")) g.add_edge(e.at(0).get<int>(), e.at(1).get<int>());
    return g;
  } catch (const json::exception& e) {
    throw IoError(std::string("graph JSON schema mismatch: ") + e.what());
  }
}

std::string format_graph_csv(const Graph& g, const std::vector<std::string>& names) {
  std::string out;
  for (int j = 0; j < g.p; ++j) {
    if (j) out += ',';
    out += j < static_cast<int>(names.size()) ? names[j] : "x" + std::to_string(j);
  }
  out += '\n';
  const Eigen::MatrixXi m = g.adjacency_matrix();
  for (int a = 0; a < g.p; ++a) {
    for (int b = 0; b < g.p; ++b) {
      if (b) out += ',';
      out += std::to_string(m(a, b));
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

json map_to_json(const TriangularMap& map) {
  json j;
  j["dimension"] = map.dimension();
  j["permutation"] = map.pattern().order;
  json comps = json::array();
  for (const auto& c : map.components()) {
    comps.push_back({{"k", c.index()},
                     {"active_inputs", c.active_inputs()},
                     {"beta", c.max_degree()},
                     {"c_coeffs", to_vector(c.c_coeffs())},
                     {"h_coeffs", to_vector(c.h_coeffs())},
                     {"quadrature_order", c.quadrature_order()}});
  }
  j["components"] = comps;
  return j;
}

TriangularMap map_from_json(const json& j) {
  try {
    SparsityPattern pattern;
    pattern.dimension = j.at("dimension").get<int>();
    pattern.order = j.at("permutation").get<std::vector<int>>();
    std::vector<MapComponent> comps;
    for (const auto& cj : j.at("components")) {
      const int k = cj.at("k").get<int>();
      auto active = cj.at("active_inputs").get<std::vector<int>>();
      for (int v = 0; v < k; ++v)
        if (!std::binary_search(active.begin(), active.end(), v)) pattern.inactive.emplace(v, k);
      MapComponent c(k, std::move(active), cj.at("beta").get<int>(), cj.at("quadrature_order").get<int>());
      c.set_coefficients(to_eigen(cj.at("c_coeffs").get<std::vector<double>>()),
                         to_eigen(cj.at("h_coeffs").get<std::vector<double>>()));
      comps.push_back(std::move(c));
    }
    return TriangularMap(std::move(pattern), std::move(comps));
  } catch (const json::exception& e) {
    throw IoError(std::string("map JSON schema mismatch: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw IoError(std::string("map JSON is inconsistent: ") + e.what());
  }
}

json standardization_to_json(const Standardization& s) {
  return {{"mean", to_vector(s.mean)}, {"scale", to_vector(s.scale)}};
}

Standardization standardization_from_json(const json& j) {
  return {to_eigen(j.at("mean").get<std::vector<double>>()), to_eigen(j.at("scale").get<std::vector<double>>())};
}

json fit_to_json(const FitResult& fit) {
  json j;
  j["map"] = map_to_json(fit.map);
  j["n"] = fit.n;
  if (fit.standardization) j["standardization"] = standardization_to_json(*fit.standardization);
  json diags = json::array();
  for (const auto& d : fit.diagnostics) {
    diags.push_back({{"converged", d.converged},
                     {"objective", d.objective},
                     {"gradient_norm", d.gradient_norm},
                     {"iterations", d.iterations}});
  }
  j["diagnostics"] = diags;
  return j;
}

FitResult fit_from_json(const json& j) {
  try {
    FitResult fit{map_from_json(j.at("map")), {}, {}, j.at("n").get<int>(), std::nullopt};
    if (j.contains("standardization")) fit.standardization = standardization_from_json(j.at("standardization"));
    for (const auto& d : j.at("diagnostics")) {
      fit.diagnostics.push_back({d.at("converged").get<bool>(), d.at("objective").get<double>(),
                                 d.at("gradient_norm").get<double>(), d.at("iterations").get<int>()});
    }
    return fit;
  } catch (const json::exception& e) {
    throw IoError(std::string("fit JSON schema mismatch: ") + e.what());
  }
}

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

json precision_to_json(const PrecisionEstimate& est, const std::vector<std::string>& names) {
  json j;
  j["names"] = names;
  j["n"] = est.n;
  j["scale"] = est.standardization ? "standardized" : "raw";
  j["omega"] = matrix_to_json(est.omega);
  j["rho"] = matrix_to_json(est.rho);
  j["pseudo_inverse_used"] = est.pseudo_inverse_used;
  if (est.standardization) j["standardization"] = standardization_to_json(*est.standardization);
  return j;
}

std::string format_trace_jsonl(const SingResult& result, bool include_timing) {
  std::string out;
  for (const auto& it : result.trace) {
    json rec;
    rec["iteration"] = it.iteration;
    rec["permutation"] = it.pattern.order;
    rec["pattern_size"] = it.pattern.inactive.size();
    json inactive = json::array();
    for (const auto& [a, b] : it.pattern.inactive) inactive.push_back({a, b});
    rec["inactive_pairs"] = inactive;
    rec["edge_count"] = it.edges.edge_count();
    rec["edges"] = graph_to_json(it.edges)["edges"];
    rec["omega_checksum"] = matrix_checksum(it.omega);
    rec["rho_checksum"] = matrix_checksum(it.rho);
    bool all_converged = true;
    for (const auto& d : it.diagnostics) all_converged = all_converged && d.converged;
    rec["all_components_converged"] = all_converged;
    rec["pseudo_inverse_used"] = it.pseudo_inverse_used;
    if (include_timing) rec["wall_seconds"] = it.wall_seconds;
    out += rec.dump();
    out += '\n';
  }
  return out;
}

std::vector<json> parse_trace_jsonl(const std::string& text) {
  std::vector<json> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      json rec = json::parse(line);
      if (!rec.contains("iteration") || !rec.contains("edge_count"))
        throw IoError("trace line " + std::to_string(line_no) + " lacks iteration/edge_count");
      out.push_back(std::move(rec));
    } catch (const json::exception& e) {
      throw IoError("trace line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << contents;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    hash ^= b;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace sing::io
