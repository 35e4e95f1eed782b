#include "geocomm/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "geocomm/error.hpp"

namespace geocomm {

std::ofstream open_output(const std::filesystem::path& file) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file);
  if (!out) throw InputError("cannot write " + file.string());
  return out;
}

void write_partition(std::ostream& out, const Network& net, const Partition& p) {
  for (NodeIndex v = 0; v < net.node_count(); ++v) {
    out << net.id(v) << '\t' << p.label(v) << '\n';
  }
}

std::vector<std::uint32_t> read_node_labels(const std::filesystem::path& file,
                                            const Network& net) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open " + file.string());
  std::vector<std::uint32_t> labels(net.node_count());
  std::vector<bool> seen(net.node_count(), false);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    std::string id;
    std::string value;
    std::string extra;
    const auto where = file.string() + ":" + std::to_string(line_no);
    if (!(fields >> id >> value) || (fields >> extra)) {
      throw InputError(where + ": expected '<id><TAB><label>'");
    }
    std::uint32_t label = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), label);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
      throw InputError(where + ": bad label '" + value + "'");
    }
    const auto v = net.index_of(id);
    if (v == Network::npos) throw InputError(where + ": unknown node '" + id + "'");
    if (seen[v]) throw InputError(where + ": node '" + id + "' listed twice");
    seen[v] = true;
    labels[v] = label;
  }
  for (NodeIndex v = 0; v < net.node_count(); ++v) {
    if (!seen[v]) throw InputError(file.string() + ": node '" + net.id(v) + "' has no label");
  }
  return labels;
}

void write_dendrogram(std::ostream& out, const Dendrogram& dendrogram) {
  out.precision(17);
  out << "step,i,j,deltaQ,Q\n";
  for (const auto& m : dendrogram.merges) {
    out << m.step << ',' << m.survivor << ',' << m.absorbed << ',' << m.delta_q << ','
        << m.q_after << '\n';
  }
}

void write_scores(std::ostream& out, std::span<const CommunityScore> scores) {
  out.precision(10);
  out << "community,size,span_km,avg_internal_degree\n";
  for (const auto& s : scores) {
    out << s.community << ',' << s.size << ',' << s.span_km << ',' << s.avg_internal_degree
        << '\n';
  }
}

void RunManifest::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

void RunManifest::set(const std::string& key, double value) {
  std::ostringstream out;
  out.precision(17);
  out << value;
  set(key, out.str());
}

void RunManifest::set(const std::string& key, std::uint64_t value) {
  set(key, std::to_string(value));
}

void RunManifest::write(const std::filesystem::path& file) const {
  auto out = open_output(file);
  for (const auto& [k, v] : entries_) out << k << '=' << v << '\n';
}

}  // namespace geocomm
