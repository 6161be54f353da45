#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fsd/corpus.hpp"
#include "fsd/vector_source.hpp"
#include "fsd/vectors.hpp"
#include "fsd/window.hpp"

namespace fsd {

struct FsdParams {
  double threshold = 0.5;   // merge iff cosine distance < threshold, in [0, 2]
  std::size_t window = 0;   // > 0
  std::size_t batch_size = 8;

  void validate() const;
};

struct FsdOptions {
  SearchBackend backend = SearchBackend::Auto;
  // 0 = hardware concurrency. FSD_STREAM_THREADS caps either choice.
  std::size_t threads = 0;
  // Re-derive the inverted index after every batch and compare (slow).
  bool verify_index = false;
};

/// Requested count (0 = hardware), capped by FSD_STREAM_THREADS.
std::size_t resolve_thread_count(std::size_t requested);

/// Result of the threshold-independent streaming pass: for every document in
/// stream order, its nearest neighbor among the window snapshot at the start
/// of its batch.
struct StreamNeighbors {
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> neighbor;  // stream index, or kNone (empty window)
  std::vector<double> distance;       // 2.0 when kNone
  std::vector<bool> empty;            // the document's own vector is empty
  std::size_t max_window_size = 0;
};

StreamNeighbors stream_neighbors(std::span<const DocVector* const> vectors,
                                 std::size_t window, std::size_t batch_size,
                                 const FsdOptions& options = {});

struct ThreadAssignment {
  std::vector<std::string> doc_ids;        // stream order
  std::vector<std::uint32_t> thread_ids;   // dense, creation ordered
  std::vector<std::size_t> thread_first;   // stream index of each thread's first doc

  std::size_t size() const { return doc_ids.size(); }
  std::size_t thread_count() const { return thread_first.size(); }
  bool is_first(std::size_t i) const { return thread_first[thread_ids[i]] == i; }

  std::string to_tsv() const;
  static ThreadAssignment from_tsv(std::string_view content);
  void check_invariants() const;
};

/// Applies the merge rule to precomputed neighbors.
ThreadAssignment assign_threads(const StreamNeighbors& neighbors,
                                std::vector<std::string> doc_ids,
                                double threshold);

/// Mini-batch First Story Detection over a chronological corpus.
ThreadAssignment fsd_cluster(const Corpus& corpus, const VectorSource& vectors,
                             const FsdParams& params, const FsdOptions& options = {});

struct SweepRow {
  double threshold;
  double f1;
  std::size_t n_clusters;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // ascending threshold
  std::size_t best = 0;        // index into rows; ties -> smallest threshold
};

/// Clusters once per threshold and scores each run with best-matching F1
/// against the gold labels carried by the corpus.
SweepResult sweep_threshold(const Corpus& corpus, const VectorSource& vectors,
                            std::size_t window, std::span<const double> thresholds,
                            std::size_t batch_size = 8,
                            const FsdOptions& options = {});

/// round(#docs / span in days), at least 1.
std::size_t window_for_one_day(const Corpus& corpus);

/// Default sweep grid: 0.02 to 0.80 in steps of 0.01.
std::vector<double> default_threshold_grid();

}  // namespace fsd
