#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace rlsm {

using AdjacencyMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;

/// State of the ordered pair (y_ij, y_ji) for an unordered node pair.
enum class DyadValue { kMutual = 0, kAsymOut = 1, kAsymIn = 2, kNull = 3 };

inline DyadValue classify_dyad(int y_ij, int y_ji) {
  if (y_ij && y_ji) return DyadValue::kMutual;
  if (y_ij) return DyadValue::kAsymOut;
  if (y_ji) return DyadValue::kAsymIn;
  return DyadValue::kNull;
}

/// Binary directed network without self-loops. Immutable once built.
class DirectedNetwork {
 public:
  /// Throws ValidationError unless `adj` is square, binary, zero-diagonal,
  /// and has at least two nodes.
  explicit DirectedNetwork(AdjacencyMatrix adj, std::vector<std::string> labels = {});

  static DirectedNetwork empty(int n);

  int size() const { return static_cast<int>(adj_.rows()); }
  const AdjacencyMatrix& adjacency() const { return adj_; }
  int operator()(int i, int j) const { return adj_(i, j); }
  const std::vector<std::string>& labels() const { return labels_; }

  DyadValue dyad(int i, int j) const { return classify_dyad(adj_(i, j), adj_(j, i)); }
  long edge_count() const { return adj_.sum(); }
  Eigen::VectorXi out_degrees() const { return adj_.rowwise().sum(); }
  Eigen::VectorXi in_degrees() const { return adj_.colwise().sum().transpose(); }

  friend bool operator==(const DirectedNetwork& a, const DirectedNetwork& b) {
    return a.adj_ == b.adj_;
  }

 private:
  AdjacencyMatrix adj_;
  std::vector<std::string> labels_;
};

struct NetworkSummary {
  int n = 0;
  double density = 0.0;
  // Fraction of directed ties that are reciprocated: 2 * #mutual / #edges.
  // Zero for edgeless networks.
  double mutual_tie_fraction = 0.0;
  // Indexed by DyadValue, counted over unordered pairs i < j.
  std::array<long, 4> dyad_counts{};

  long count(DyadValue v) const { return dyad_counts[static_cast<int>(v)]; }
};

enum class NetworkFormat { kEdgeList, kDenseMatrix };

NetworkFormat parse_network_format(const std::string& name);

DirectedNetwork read_network(std::istream& in, NetworkFormat format);
DirectedNetwork load_network(const std::filesystem::path& path, NetworkFormat format);
void write_network(std::ostream& out, const DirectedNetwork& net, NetworkFormat format);
void save_network(const std::filesystem::path& path, const DirectedNetwork& net,
                  NetworkFormat format);

DirectedNetwork symmetrize(const DirectedNetwork& net);
NetworkSummary summarize(const DirectedNetwork& net);
double mutual_tie_fraction(const DirectedNetwork& net);

/// FNV-1a hash of the adjacency bits; used to match chains to networks.
std::uint64_t network_hash(const DirectedNetwork& net);

}  // namespace rlsm
