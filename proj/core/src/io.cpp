#include "lina/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace lina {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ifstream open_in(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open " + file.string() + " for reading");
  return in;
}

std::ofstream open_out(const fs::path& file) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot open " + file.string() + " for writing");
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s, const fs::path& file) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IoError("bad number '" + s + "' in " + file.string());
  }
}

}  // namespace

DomainDataset read_domain_csv(const fs::path& file, int domain_id) {
  std::ifstream in = open_in(file);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV " + file.string());

  DomainDataset d;
  d.domain_id = domain_id;
  for (auto& name : split(trim(line), ',')) d.variable_names.push_back(trim(name));
  const size_t p = d.variable_names.size();

  std::vector<std::vector<double>> samples;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto fields = split(t, ',');
    if (fields.size() != p)
      throw IoError("row with " + std::to_string(fields.size()) + " fields, expected " +
                    std::to_string(p) + " in " + file.string());
    std::vector<double> row;
    row.reserve(p);
    for (const auto& f : fields) row.push_back(parse_double(trim(f), file));
    samples.push_back(std::move(row));
  }
  d.data.resize(p, samples.size());
  for (size_t t = 0; t < samples.size(); ++t)
    for (size_t i = 0; i < p; ++i) d.data(i, t) = samples[t][i];
  return d;
}

void write_domain_csv(const fs::path& file, const DomainDataset& d) {
  std::ofstream out = open_out(file);
  for (size_t i = 0; i < d.variable_names.size(); ++i)
    out << (i ? "," : "") << d.variable_names[i];
  out << "\n";
  for (Eigen::Index t = 0; t < d.n(); ++t) {
    for (Eigen::Index i = 0; i < d.p(); ++i)
      out << (i ? "," : "") << format_double(d.data(i, t));
    out << "\n";
  }
}

Matrix read_matrix_csv(const fs::path& file) {
  std::ifstream in = open_in(file);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty()) continue;
    std::vector<double> row;
    for (const auto& f : split(t, ',')) row.push_back(parse_double(trim(f), file));
    if (!rows.empty() && row.size() != rows.front().size())
      throw IoError("ragged matrix in " + file.string());
    rows.push_back(std::move(row));
  }
  Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

void write_matrix_csv(const fs::path& file, const Matrix& m) {
  std::ofstream out = open_out(file);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out << (j ? "," : "") << format_double(m(i, j));
    out << "\n";
  }
}

MultiDomainDataset read_manifest(const fs::path& file) {
  const auto kv = read_keyvalue(file);
  MultiDomainDataset md;
  for (int id = 1;; ++id) {
    const auto it = kv.find("domain." + std::to_string(id));
    if (it == kv.end()) break;
    fs::path p = it->second;
    if (p.is_relative()) p = file.parent_path() / p;
    md.domains.push_back(read_domain_csv(p, id));
  }
  if (md.domains.empty())
    throw IoError("manifest " + file.string() + " lists no domains");
  return md;
}

void write_manifest(const fs::path& file, const std::vector<std::string>& domain_files) {
  std::vector<std::pair<std::string, std::string>> kv;
  for (size_t i = 0; i < domain_files.size(); ++i)
    kv.emplace_back("domain." + std::to_string(i + 1), domain_files[i]);
  write_keyvalue(file, kv);
}

ClusterSpec read_clusters(const fs::path& file,
                          const std::vector<std::string>& variable_names) {
  std::ifstream in = open_in(file);
  ClusterSpec spec;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw IoError("cluster line without '=' in " + file.string());
    std::vector<int> members;
    std::istringstream names(t.substr(eq + 1));
    std::string name;
    while (names >> name) {
      const auto it =
          std::find(variable_names.begin(), variable_names.end(), name);
      if (it == variable_names.end())
        throw IoError("unknown variable '" + name + "' in " + file.string());
      members.push_back(static_cast<int>(it - variable_names.begin()));
    }
    spec.clusters.push_back(std::move(members));
  }
  spec.validate(static_cast<Eigen::Index>(variable_names.size()));
  return spec;
}

void write_clusters(const fs::path& file, const ClusterSpec& spec,
                    const std::vector<std::string>& variable_names) {
  std::ofstream out = open_out(file);
  for (int f = 0; f < spec.q(); ++f) {
    out << "f" << (f + 1) << " =";
    for (int v : spec.clusters[f]) out << " " << variable_names.at(v);
    out << "\n";
  }
}

void write_measurement_model(const fs::path& file, const MeasurementModel& model) {
  std::ofstream out = open_out(file);
  out << "p = " << model.p() << "\n";
  out << "q = " << model.q() << "\n";
  out << "heywood = " << (model.heywood ? 1 : 0) << "\n";
  for (int f = 0; f < model.q(); ++f)
    for (int v : model.clusters.clusters[f])
      out << "loading " << v << " " << f << " " << format_double(model.loadings(v, f))
          << "\n";
  for (Eigen::Index i = 0; i < model.p(); ++i)
    out << "psi " << i << " " << format_double(model.error_variances[i]) << "\n";
}

MeasurementModel read_measurement_model(const fs::path& file) {
  std::ifstream in = open_in(file);
  MeasurementModel model;
  Eigen::Index p = -1, q = -1;
  std::vector<std::tuple<int, int, double>> loadings;
  std::vector<std::pair<int, double>> psis;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty()) continue;
    std::istringstream ss(t);
    std::string head;
    ss >> head;
    if (head == "p") {
      std::string eq;
      ss >> eq >> p;
    } else if (head == "q") {
      std::string eq;
      ss >> eq >> q;
    } else if (head == "heywood") {
      std::string eq;
      int h;
      ss >> eq >> h;
      model.heywood = h != 0;
    } else if (head == "loading") {
      int v, f;
      std::string val;
      ss >> v >> f >> val;
      loadings.emplace_back(v, f, parse_double(val, file));
    } else if (head == "psi") {
      int v;
      std::string val;
      ss >> v >> val;
      psis.emplace_back(v, parse_double(val, file));
    } else {
      throw IoError("unknown record '" + head + "' in " + file.string());
    }
  }
  if (p < 1 || q < 1) throw IoError("missing p/q header in " + file.string());
  model.loadings = Matrix::Zero(p, q);
  model.error_variances = Vector::Zero(p);
  model.clusters.clusters.assign(q, {});
  for (auto [v, f, val] : loadings) {
    model.loadings(v, f) = val;
    model.clusters.clusters[f].push_back(v);
  }
  for (auto [v, val] : psis) model.error_variances[v] = val;
  return model;
}

void write_transform(const fs::path& file, const TransformMatrix& H,
                     const HardAssignment& assignment) {
  std::ofstream out = open_out(file);
  out << "q = " << H.q() << "\n";
  out << "q_tilde = " << H.q_tilde() << "\n";
  for (Eigen::Index i = 0; i < H.q(); ++i)
    for (Eigen::Index j = 0; j < H.q_tilde(); ++j)
      out << "h " << i << " " << j << " " << format_double(H.H(i, j)) << "\n";
  for (size_t i = 0; i < assignment.row_to_interest.size(); ++i)
    out << "assign " << i << " " << assignment.row_to_interest[i] << " "
        << format_double(assignment.kept_weight[i]) << "\n";
}

std::pair<TransformMatrix, HardAssignment> read_transform(const fs::path& file) {
  std::ifstream in = open_in(file);
  Eigen::Index q = -1, qt = -1;
  TransformMatrix H;
  HardAssignment a;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty()) continue;
    std::istringstream ss(t);
    std::string head;
    ss >> head;
    if (head == "q") {
      std::string eq;
      ss >> eq >> q;
    } else if (head == "q_tilde") {
      std::string eq;
      ss >> eq >> qt;
      if (q < 1 || qt < 1) throw IoError("bad dimensions in " + file.string());
      H.H = Matrix::Zero(q, qt);
      a.row_to_interest.assign(q, 0);
      a.kept_weight.assign(q, 0.0);
    } else if (head == "h") {
      int i, j;
      std::string val;
      ss >> i >> j >> val;
      H.H(i, j) = parse_double(val, file);
    } else if (head == "assign") {
      int i, j;
      std::string val;
      ss >> i >> j >> val;
      a.row_to_interest[i] = j;
      a.kept_weight[i] = parse_double(val, file);
    } else {
      throw IoError("unknown record '" + head + "' in " + file.string());
    }
  }
  if (q < 1 || qt < 1) throw IoError("missing dimensions in " + file.string());
  return {H, a};
}

void write_dot(const fs::path& file, const Matrix& B,
               const std::vector<std::string>& names) {
  std::ofstream out = open_out(file);
  out << "digraph latent {\n";
  for (Eigen::Index i = 0; i < B.rows(); ++i)
    out << "  \"" << names.at(i) << "\";\n";
  for (Eigen::Index i = 0; i < B.rows(); ++i)
    for (Eigen::Index j = 0; j < B.cols(); ++j)
      if (i != j && B(i, j) != 0.0)
        out << "  \"" << names.at(j) << "\" -> \"" << names.at(i)
            << "\" [label=\"" << format_double(B(i, j)) << "\"];\n";
  out << "}\n";
}

std::vector<std::tuple<int, int, double>> read_dot_edges(const fs::path& file) {
  std::ifstream in = open_in(file);
  std::vector<std::tuple<int, int, double>> edges;
  std::string line;
  auto node_index = [&](const std::string& name) {
    // Factor names are written as f<index+1>.
    if (name.size() < 2 || name[0] != 'f')
      throw IoError("unparseable node '" + name + "' in " + file.string());
    return std::stoi(name.substr(1)) - 1;
  };
  while (std::getline(in, line)) {
    const auto arrow = line.find("->");
    if (arrow == std::string::npos) continue;
    const auto q1 = line.find('"');
    const auto q2 = line.find('"', q1 + 1);
    const auto q3 = line.find('"', arrow);
    const auto q4 = line.find('"', q3 + 1);
    const auto l1 = line.find("label=\"");
    const auto l2 = line.find('"', l1 + 7);
    if (q1 == std::string::npos || q4 == std::string::npos || l1 == std::string::npos)
      throw IoError("unparseable edge line in " + file.string());
    const int src = node_index(line.substr(q1 + 1, q2 - q1 - 1));
    const int dst = node_index(line.substr(q3 + 1, q4 - q3 - 1));
    const double w = parse_double(line.substr(l1 + 7, l2 - l1 - 7), file);
    edges.emplace_back(dst, src, w);  // back to B(i, j) indexing
  }
  return edges;
}

std::map<std::string, std::string> read_keyvalue(const fs::path& file) {
  std::ifstream in = open_in(file);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw IoError("line without '=' in " + file.string());
    kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return kv;
}

void write_keyvalue(const fs::path& file,
                    const std::vector<std::pair<std::string, std::string>>& kv) {
  std::ofstream out = open_out(file);
  for (const auto& [k, v] : kv) out << k << " = " << v << "\n";
}

}  // namespace lina
