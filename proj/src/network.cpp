#include "rlsm/network.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <utility>

#include "rlsm/errors.hpp"

namespace rlsm {

DirectedNetwork::DirectedNetwork(AdjacencyMatrix adj, std::vector<std::string> labels)
    : adj_(std::move(adj)), labels_(std::move(labels)) {
  if (adj_.rows() != adj_.cols()) throw ValidationError("adjacency matrix must be square");
  if (adj_.rows() < 2) throw ValidationError("network needs at least two nodes");
  if (!labels_.empty() && static_cast<Eigen::Index>(labels_.size()) != adj_.rows())
    throw ValidationError("one label per node required");
  for (Eigen::Index j = 0; j < adj_.cols(); ++j) {
    for (Eigen::Index i = 0; i < adj_.rows(); ++i) {
      const int y = adj_(i, j);
      if (y != 0 && y != 1) throw ValidationError("adjacency entries must be 0 or 1");
      if (i == j && y != 0)
        throw ValidationError("self-loop at node " + std::to_string(i));
    }
  }
}

DirectedNetwork DirectedNetwork::empty(int n) {
  return DirectedNetwork(AdjacencyMatrix::Zero(n, n));
}

NetworkFormat parse_network_format(const std::string& name) {
  if (name == "edge-list" || name == "edgelist") return NetworkFormat::kEdgeList;
  if (name == "dense-matrix" || name == "dense") return NetworkFormat::kDenseMatrix;
  throw ValidationError("unknown network format '" + name + "'");
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

long parse_index(std::string_view field, int line_no) {
  field = trim(field);
  long value = -1;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end || value < 0)
    throw ParseError("expected non-negative integer, got '" + std::string(field) + "'",
                     line_no);
  return value;
}

DirectedNetwork read_edge_list(std::istream& in) {
  std::string raw;
  int line_no = 0;
  long declared_n = -1;
  bool first_content = true;
  std::vector<std::pair<long, long>> edges;
  long max_index = -1;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (first_content && line.starts_with("n=")) {
      declared_n = parse_index(line.substr(2), line_no);
      first_content = false;
      continue;
    }
    first_content = false;
    const auto comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos)
      throw ParseError("expected 'source,target'", line_no);
    const long src = parse_index(line.substr(0, comma), line_no);
    const long dst = parse_index(line.substr(comma + 1), line_no);
    if (src == dst) throw ValidationError("line " + std::to_string(line_no) + ": self-loop " +
                                          std::to_string(src) + "," + std::to_string(dst));
    if (declared_n >= 0 && (src >= declared_n || dst >= declared_n))
      throw RangeError("line " + std::to_string(line_no) + ": node index exceeds n=" +
                       std::to_string(declared_n));
    max_index = std::max({max_index, src, dst});
    edges.emplace_back(src, dst);
  }
  const long n = declared_n >= 0 ? declared_n : max_index + 1;
  if (n < 2) throw ValidationError("network needs at least two nodes");
  AdjacencyMatrix adj = AdjacencyMatrix::Zero(n, n);
  for (auto [i, j] : edges) adj(i, j) = 1;
  return DirectedNetwork(std::move(adj));
}

DirectedNetwork read_dense(std::istream& in) {
  std::string raw;
  int line_no = 0;
  std::vector<std::vector<int>> rows;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    std::vector<int> row;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      std::string_view field = trim(line.substr(start, comma - start));
      if (field != "0" && field != "1")
        throw ParseError("expected 0 or 1, got '" + std::string(field) + "'", line_no);
      row.push_back(field == "1");
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("row length differs from first row", line_no);
    rows.push_back(std::move(row));
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (n == 0 || static_cast<Eigen::Index>(rows.front().size()) != n)
    throw ValidationError("dense matrix must have n rows of n values");
  AdjacencyMatrix adj(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) adj(i, j) = rows[i][j];
  return DirectedNetwork(std::move(adj));
}

}  // namespace

DirectedNetwork read_network(std::istream& in, NetworkFormat format) {
  return format == NetworkFormat::kEdgeList ? read_edge_list(in) : read_dense(in);
}

DirectedNetwork load_network(const std::filesystem::path& path, NetworkFormat format) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open network file " + path.string());
  return read_network(in, format);
}

void write_network(std::ostream& out, const DirectedNetwork& net, NetworkFormat format) {
  const int n = net.size();
  if (format == NetworkFormat::kEdgeList) {
    out << "n=" << n << '\n';
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (net(i, j)) out << i << ',' << j << '\n';
    return;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out << (j ? "," : "") << net(i, j);
    out << '\n';
  }
}

void save_network(const std::filesystem::path& path, const DirectedNetwork& net,
                  NetworkFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_network(out, net, format);
}

DirectedNetwork symmetrize(const DirectedNetwork& net) {
  const AdjacencyMatrix& y = net.adjacency();
  AdjacencyMatrix sym = (y + y.transpose()).unaryExpr([](int v) { return v > 0 ? 1 : 0; });
  return DirectedNetwork(std::move(sym), net.labels());
}

NetworkSummary summarize(const DirectedNetwork& net) {
  NetworkSummary out;
  const int n = net.size();
  out.n = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) ++out.dyad_counts[static_cast<int>(net.dyad(i, j))];
  const long edges = net.edge_count();
  out.density = static_cast<double>(edges) / (static_cast<double>(n) * (n - 1));
  out.mutual_tie_fraction =
      edges == 0 ? 0.0 : 2.0 * static_cast<double>(out.count(DyadValue::kMutual)) / edges;
  return out;
}

double mutual_tie_fraction(const DirectedNetwork& net) {
  long mutual = 0;
  long edges = 0;
  const auto& y = net.adjacency();
  for (int i = 0; i < net.size(); ++i) {
    for (int j = i + 1; j < net.size(); ++j) {
      mutual += y(i, j) & y(j, i);
      edges += y(i, j) + y(j, i);
    }
  }
  return edges == 0 ? 0.0 : 2.0 * static_cast<double>(mutual) / static_cast<double>(edges);
}

std::uint64_t network_hash(const DirectedNetwork& net) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t byte) {
    h ^= byte;
    h *= 1099511628211ULL;
  };
  const auto n = static_cast<std::uint64_t>(net.size());
  for (int k = 0; k < 8; ++k) mix((n >> (8 * k)) & 0xff);
  for (int i = 0; i < net.size(); ++i)
    for (int j = 0; j < net.size(); ++j) mix(static_cast<std::uint64_t>(net(i, j)));
  return h;
}

}  // namespace rlsm
