#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "geocomm/engine.hpp"
#include "geocomm/metrics.hpp"
#include "geocomm/network.hpp"

namespace geocomm {

/// "<node id><TAB><community id>" per node.
void write_partition(std::ostream& out, const Network& net, const Partition& p);

/// Reads a "<node id><TAB><integer>" file (partition or ground-truth labels)
/// into per-node values. Every node must appear exactly once.
std::vector<std::uint32_t> read_node_labels(const std::filesystem::path& file,
                                            const Network& net);

/// CSV "step,i,j,deltaQ,Q" where i survives and j is absorbed.
void write_dendrogram(std::ostream& out, const Dendrogram& dendrogram);

/// CSV "community,size,span_km,avg_internal_degree".
void write_scores(std::ostream& out, std::span<const CommunityScore> scores);

/// Ordered key=value run description.
class RunManifest {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, std::uint64_t value);
  void write(const std::filesystem::path& file) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::ofstream open_output(const std::filesystem::path& file);

}  // namespace geocomm
