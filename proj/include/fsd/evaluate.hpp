#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "fsd/cluster.hpp"
#include "fsd/corpus.hpp"

namespace fsd {

struct PairScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

using IdSet = std::unordered_set<std::string>;
using LabelMap = std::unordered_map<std::string, std::string>;  // doc id -> label

PairScore pair_f1(const IdSet& event_members, const IdSet& cluster_members);
/// Same metric from counts: |event ∩ cluster|, |event|, |cluster|.
PairScore pair_f1(std::size_t overlap, std::size_t event_size, std::size_t cluster_size);

struct EventMatch {
  std::string event_id;
  std::uint32_t cluster_id;
  PairScore score;
};

struct EvalReport {
  double score = 0.0;
  std::vector<EventMatch> per_event;  // sorted by event id
  std::size_t n_events = 0;
  std::size_t n_clusters = 0;  // clusters holding at least one annotated doc

  void check_invariants() const;
  nlohmann::json to_json() const;
  std::string to_table() const;
};

/// Gold labels of the annotated tweets in a corpus.
LabelMap gold_labels(const Corpus& corpus);

/// Matches each gold event to the cluster maximizing pair F1 (ties -> lower
/// cluster id; a cluster may serve several events) and averages the matched
/// F1 values without weighting. Unannotated documents are ignored.
EvalReport best_matching_f1(const ThreadAssignment& assignment, const LabelMap& gold);

/// One-vs-rest F1 per gold class, averaged without weighting.
double macro_f1(const LabelMap& predicted, const LabelMap& gold);

}  // namespace fsd
