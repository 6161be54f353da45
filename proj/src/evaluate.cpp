#include "fsd/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "fsd/error.hpp"

namespace fsd {

PairScore pair_f1(std::size_t overlap, std::size_t event_size, std::size_t cluster_size) {
  if (event_size == 0) throw ValidationError("pair_f1: event has no members");
  PairScore s;
  s.precision = cluster_size == 0 ? 0.0
                                  : static_cast<double>(overlap) / static_cast<double>(cluster_size);
  s.recall = static_cast<double>(overlap) / static_cast<double>(event_size);
  const double denom = s.precision + s.recall;
  s.f1 = denom > 0.0 ? 2.0 * s.precision * s.recall / denom : 0.0;
  return s;
}

PairScore pair_f1(const IdSet& event_members, const IdSet& cluster_members) {
  const IdSet& small = event_members.size() < cluster_members.size() ? event_members : cluster_members;
  const IdSet& large = &small == &event_members ? cluster_members : event_members;
  std::size_t overlap = 0;
  for (const auto& id : small) overlap += large.contains(id);
  return pair_f1(overlap, event_members.size(), cluster_members.size());
}

LabelMap gold_labels(const Corpus& corpus) {
  LabelMap gold;
  for (const auto& t : corpus) {
    if (t.event_id) gold.emplace(t.id, *t.event_id);
  }
  return gold;
}

EvalReport best_matching_f1(const ThreadAssignment& assignment, const LabelMap& gold) {
  if (gold.empty()) throw ValidationError("best_matching_f1: no gold labels");

  // Restrict to annotated documents on both sides.
  std::map<std::string, std::size_t> event_index;
  for (const auto& [id, ev] : gold) event_index.emplace(ev, 0);
  std::size_t k = 0;
  for (auto& [ev, idx] : event_index) idx = k++;
  std::vector<std::string> event_names;
  event_names.reserve(event_index.size());
  for (const auto& [ev, idx] : event_index) event_names.push_back(ev);

  std::vector<std::size_t> event_size(event_index.size(), 0);
  std::unordered_map<std::uint32_t, std::size_t> cluster_size;
  // overlap[event][cluster]
  std::vector<std::map<std::uint32_t, std::size_t>> overlap(event_index.size());
  std::size_t seen = 0;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    auto it = gold.find(assignment.doc_ids[i]);
    if (it == gold.end()) continue;
    ++seen;
    const std::size_t e = event_index.at(it->second);
    const std::uint32_t c = assignment.thread_ids[i];
    ++event_size[e];
    ++cluster_size[c];
    ++overlap[e][c];
  }
  if (seen != gold.size()) {
    for (const auto& [id, ev] : gold) {
      if (std::find(assignment.doc_ids.begin(), assignment.doc_ids.end(), id) ==
          assignment.doc_ids.end()) {
        throw ValidationError("annotated document missing from assignment: " + id);
      }
    }
    throw ValidationError("assignment lists an annotated document more than once");
  }

  EvalReport report;
  report.n_events = event_names.size();
  report.n_clusters = cluster_size.size();
  double total = 0.0;
  for (std::size_t e = 0; e < event_names.size(); ++e) {
    // Clusters with zero overlap score F1 = 0; the map is ordered so the
    // first maximum is the lowest cluster id.
    EventMatch best{event_names[e], 0, PairScore{}};
    bool found = false;
    for (const auto& [c, n] : overlap[e]) {
      const PairScore s = pair_f1(n, event_size[e], cluster_size.at(c));
      if (!found || s.f1 > best.score.f1) {
        best.cluster_id = c;
        best.score = s;
        found = true;
      }
    }
    total += best.score.f1;
    report.per_event.push_back(std::move(best));
  }
  report.score = total / static_cast<double>(report.n_events);
  report.check_invariants();
  return report;
}

void EvalReport::check_invariants() const {
  FSD_CHECK(per_event.size() == n_events, "one match per event");
  FSD_CHECK(score >= 0.0 && score <= 1.0, "score outside [0, 1]");
  double sum = 0.0;
  for (const auto& m : per_event) {
    for (double v : {m.score.precision, m.score.recall, m.score.f1}) {
      FSD_CHECK(v >= 0.0 && v <= 1.0, "pair score outside [0, 1]");
    }
    sum += m.score.f1;
  }
  if (n_events > 0) {
    FSD_CHECK(std::abs(sum / static_cast<double>(n_events) - score) <= 1e-12,
              "score must equal the mean matched F1");
  }
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& m : per_event) {
    rows.push_back({{"event_id", m.event_id},
                    {"cluster_id", m.cluster_id},
                    {"precision", m.score.precision},
                    {"recall", m.score.recall},
                    {"f1", m.score.f1}});
  }
  return {{"metric", "best_matching_f1"},
          {"score", score},
          {"n_events", n_events},
          {"n_clusters", n_clusters},
          {"per_event", std::move(rows)}};
}

std::string EvalReport::to_table() const {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-24s %10s %9s %9s %9s\n", "event", "cluster", "precision",
                "recall", "f1");
  out += buf;
  for (const auto& m : per_event) {
    std::snprintf(buf, sizeof buf, "%-24s %10u %9.4f %9.4f %9.4f\n", m.event_id.c_str(),
                  m.cluster_id, m.score.precision, m.score.recall, m.score.f1);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "best-matching F1 = %.4f (%zu events, %zu clusters)\n", score,
                n_events, n_clusters);
  out += buf;
  return out;
}

double macro_f1(const LabelMap& predicted, const LabelMap& gold) {
  if (gold.empty()) throw ValidationError("macro_f1: no gold labels");
  if (predicted.size() != gold.size()) {
    throw ValidationError("macro_f1: predicted and gold cover different documents");
  }
  std::map<std::string, std::size_t> tp, fp, fn;
  for (const auto& [id, g] : gold) {
    auto it = predicted.find(id);
    if (it == predicted.end()) {
      throw ValidationError("macro_f1: no prediction for document " + id);
    }
    tp.try_emplace(g, 0);
    if (it->second == g) {
      ++tp[g];
    } else {
      ++fn[g];
      ++fp[it->second];
    }
  }
  double total = 0.0;
  for (const auto& [label, t] : tp) {
    const std::size_t p = t + (fp.contains(label) ? fp.at(label) : 0);
    const std::size_t r = t + (fn.contains(label) ? fn.at(label) : 0);
    const double denom = static_cast<double>(p + r);
    total += denom > 0.0 ? 2.0 * static_cast<double>(t) / denom : 0.0;
  }
  return total / static_cast<double>(tp.size());
}

}  // namespace fsd
