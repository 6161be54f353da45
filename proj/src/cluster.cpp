#include "fsd/cluster.hpp"

#include <algorithm>
#include <barrier>
#include <exception>
#include <functional>
#include <mutex>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "fsd/error.hpp"
#include "fsd/evaluate.hpp"

namespace fsd {

namespace {

// Runs fn(i, scratch) for i in [0, n) across a fixed set of workers. The
// caller thread is worker 0; the others park on a barrier between batches.
class BatchPool {
 public:
  using Task = std::function<void(std::size_t, WindowBuffer::Scratch&)>;

  explicit BatchPool(std::size_t workers)
      : workers_(std::max<std::size_t>(workers, 1)),
        scratch_(workers_),
        start_(static_cast<std::ptrdiff_t>(workers_)),
        done_(static_cast<std::ptrdiff_t>(workers_)) {
    for (std::size_t w = 1; w < workers_; ++w) {
      threads_.emplace_back([this, w] { worker_loop(w); });
    }
  }

  ~BatchPool() {
    if (!threads_.empty()) {
      stop_ = true;
      start_.arrive_and_wait();
      for (auto& t : threads_) t.join();
    }
  }

  BatchPool(const BatchPool&) = delete;
  BatchPool& operator=(const BatchPool&) = delete;

  void run(std::size_t n, const Task& fn) {
    if (workers_ == 1 || n == 1) {
      for (std::size_t i = 0; i < n; ++i) fn(i, scratch_[0]);
      return;
    }
    task_ = &fn;
    count_ = n;
    start_.arrive_and_wait();
    work(0);
    done_.arrive_and_wait();
    task_ = nullptr;
    if (error_) std::rethrow_exception(std::exchange(error_, nullptr));
  }

 private:
  void worker_loop(std::size_t id) {
    while (true) {
      start_.arrive_and_wait();
      if (stop_) return;
      work(id);
      done_.arrive_and_wait();
    }
  }

  void work(std::size_t id) {
    try {
      for (std::size_t i = id; i < count_; i += workers_) (*task_)(i, scratch_[id]);
    } catch (...) {
      std::lock_guard lock(error_mutex_);
      if (!error_) error_ = std::current_exception();
    }
  }

  std::size_t workers_;
  std::vector<WindowBuffer::Scratch> scratch_;
  std::barrier<> start_;
  std::barrier<> done_;
  std::vector<std::thread> threads_;
  const Task* task_ = nullptr;
  std::size_t count_ = 0;
  bool stop_ = false;
  std::mutex error_mutex_;
  std::exception_ptr error_;
};

}  // namespace

void FsdParams::validate() const {
  if (!(threshold >= 0.0 && threshold <= 2.0)) {
    throw ValidationError("threshold must lie in [0, 2]");
  }
  if (window == 0) throw ValidationError("window size must be positive");
  if (batch_size == 0) throw ValidationError("batch size must be >= 1");
}

std::size_t resolve_thread_count(std::size_t requested) {
  std::size_t n = requested;
  if (n == 0) n = std::max<unsigned>(std::thread::hardware_concurrency(), 1u);
  if (const char* env = std::getenv("FSD_STREAM_THREADS"); env && *env) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || cap < 1) {
      throw ValidationError("FSD_STREAM_THREADS must be a positive integer");
    }
    n = std::min(n, static_cast<std::size_t>(cap));
  }
  return std::max<std::size_t>(n, 1);
}

StreamNeighbors stream_neighbors(std::span<const DocVector* const> vectors, std::size_t window,
                                 std::size_t batch_size, const FsdOptions& options) {
  if (window == 0) throw ValidationError("window size must be positive");
  if (batch_size == 0) throw ValidationError("batch size must be >= 1");

  StreamNeighbors out;
  const std::size_t n = vectors.size();
  out.neighbor.assign(n, StreamNeighbors::kNone);
  out.distance.assign(n, 2.0);
  out.empty.assign(n, false);
  if (n == 0) return out;

  const VectorKind kind = kind_of(*vectors[0]);
  for (std::size_t i = 0; i < n; ++i) {
    if (kind_of(*vectors[i]) != kind) {
      throw ValidationError("all documents must use the same vector representation");
    }
    out.empty[i] = is_empty(*vectors[i]);
  }

  SearchBackend backend = options.backend;
  if (backend == SearchBackend::Auto) {
    backend = kind == VectorKind::Sparse ? SearchBackend::InvertedIndex : SearchBackend::FlatScan;
  }

  WindowBuffer buffer(window, kind);
  // Parallel queries only pay off once the window is large enough.
  const std::size_t threads = batch_size > 1 ? resolve_thread_count(options.threads) : 1;
  BatchPool pool(std::min(threads, batch_size));

  for (std::size_t begin = 0; begin < n; begin += batch_size) {
    const std::size_t end = std::min(n, begin + batch_size);
    if (!buffer.empty()) {
      // Every query in the batch sees the same window snapshot.
      pool.run(end - begin, [&](std::size_t k, WindowBuffer::Scratch& scratch) {
        const std::size_t i = begin + k;
        if (out.empty[i]) return;
        if (auto nb = buffer.nearest(*vectors[i], backend, scratch)) {
          out.neighbor[i] = static_cast<std::size_t>(nb->doc);
          out.distance[i] = nb->distance;
        }
      });
    }
    for (std::size_t i = begin; i < end; ++i) {
      buffer.push(i, *vectors[i]);
      FSD_CHECK(buffer.size() <= window, "window exceeded its capacity");
    }
    out.max_window_size = std::max(out.max_window_size, buffer.size());
    if (options.verify_index) {
      FSD_CHECK(buffer.index_consistent(), "inverted index diverged from window contents");
    }
  }
#ifndef NDEBUG
  FSD_CHECK(buffer.index_consistent(), "inverted index diverged from window contents");
#endif
  return out;
}

ThreadAssignment assign_threads(const StreamNeighbors& neighbors, std::vector<std::string> doc_ids,
                                double threshold) {
  const std::size_t n = neighbors.neighbor.size();
  if (doc_ids.size() != n) throw ValidationError("doc id count does not match neighbor count");
  ThreadAssignment a;
  a.doc_ids = std::move(doc_ids);
  a.thread_ids.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t nb = neighbors.neighbor[i];
    if (nb == StreamNeighbors::kNone || neighbors.empty[i] || !(neighbors.distance[i] < threshold)) {
      a.thread_ids[i] = static_cast<std::uint32_t>(a.thread_first.size());
      a.thread_first.push_back(i);
    } else {
      FSD_CHECK(nb < i, "neighbor must precede the document in stream order");
      a.thread_ids[i] = a.thread_ids[nb];
    }
  }
  return a;
}

namespace {

std::vector<const DocVector*> collect_vectors(const Corpus& corpus, const VectorSource& source) {
  std::vector<const DocVector*> vectors;
  vectors.reserve(corpus.size());
  for (const auto& t : corpus) {
    const DocVector* v = source.find(t.id);
    if (v == nullptr) throw MissingResourceError("no vector for document id " + t.id);
    vectors.push_back(v);
  }
  return vectors;
}

std::vector<std::string> collect_ids(const Corpus& corpus) {
  std::vector<std::string> ids;
  ids.reserve(corpus.size());
  for (const auto& t : corpus) ids.push_back(t.id);
  return ids;
}

}  // namespace

ThreadAssignment fsd_cluster(const Corpus& corpus, const VectorSource& vectors,
                             const FsdParams& params, const FsdOptions& options) {
  params.validate();
  auto docs = collect_vectors(corpus, vectors);
  auto nb = stream_neighbors(docs, params.window, params.batch_size, options);
  auto assignment = assign_threads(nb, collect_ids(corpus), params.threshold);
#ifndef NDEBUG
  assignment.check_invariants();
#endif
  return assignment;
}

SweepResult sweep_threshold(const Corpus& corpus, const VectorSource& vectors, std::size_t window,
                            std::span<const double> thresholds, std::size_t batch_size,
                            const FsdOptions& options) {
  if (thresholds.empty()) throw ValidationError("threshold sweep needs at least one value");
  std::vector<double> grid(thresholds.begin(), thresholds.end());
  for (double t : grid) {
    if (!(t >= 0.0 && t <= 2.0)) throw ValidationError("sweep thresholds must lie in [0, 2]");
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const LabelMap gold = gold_labels(corpus);
  if (gold.empty()) throw ValidationError("threshold sweep needs gold event labels");

  // Neighbors do not depend on t, so one streaming pass serves the whole grid;
  // each row is exactly what fsd_cluster would return at that threshold.
  FsdParams probe{grid.front(), window, batch_size};
  probe.validate();
  auto docs = collect_vectors(corpus, vectors);
  auto nb = stream_neighbors(docs, window, batch_size, options);
  const auto ids = collect_ids(corpus);

  SweepResult result;
  for (double t : grid) {
    auto assignment = assign_threads(nb, ids, t);
    auto report = best_matching_f1(assignment, gold);
    result.rows.push_back({t, report.score, assignment.thread_count()});
    if (report.score > result.rows[result.best].f1) result.best = result.rows.size() - 1;
  }
  return result;
}

std::size_t window_for_one_day(const Corpus& corpus) {
  if (corpus.empty()) throw ValidationError("empty corpus");
  const std::int64_t span = corpus.last_timestamp() - corpus.first_timestamp();
  if (span <= 0) throw ValidationError("corpus has zero duration; cannot derive a daily window");
  const double days = static_cast<double>(span) / 86400.0;
  const auto w = std::llround(static_cast<double>(corpus.size()) / days);
  return static_cast<std::size_t>(std::max<long long>(w, 1));
}

std::vector<double> default_threshold_grid() {
  std::vector<double> grid;
  for (int k = 2; k <= 80; ++k) grid.push_back(k / 100.0);
  return grid;
}

std::string ThreadAssignment::to_tsv() const {
  std::string out = "id\tthread_id\tthread_first\n";
  for (std::size_t i = 0; i < doc_ids.size(); ++i) {
    out += doc_ids[i];
    out += '\t';
    out += std::to_string(thread_ids[i]);
    out += is_first(i) ? "\t1\n" : "\t0\n";
  }
  return out;
}

ThreadAssignment ThreadAssignment::from_tsv(std::string_view content) {
  ThreadAssignment a;
  std::size_t start = 0;
  std::size_t line_no = 0;
  bool header = true;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.starts_with("id\t")) continue;
    }
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos) {
      throw ValidationError("assignment line " + std::to_string(line_no) +
                            ": expected id, thread_id, thread_first");
    }
    std::uint32_t thread = 0;
    try {
      thread = static_cast<std::uint32_t>(std::stoul(std::string(line.substr(t1 + 1, t2 - t1 - 1))));
    } catch (const std::exception&) {
      throw ValidationError("assignment line " + std::to_string(line_no) + ": bad thread id");
    }
    const bool first = line.substr(t2 + 1) == "1";
    const std::size_t i = a.doc_ids.size();
    a.doc_ids.emplace_back(line.substr(0, t1));
    a.thread_ids.push_back(thread);
    if (first) {
      if (thread != a.thread_first.size()) {
        throw ValidationError("assignment line " + std::to_string(line_no) +
                              ": thread ids must be dense and creation ordered");
      }
      a.thread_first.push_back(i);
    }
  }
  a.check_invariants();
  return a;
}

void ThreadAssignment::check_invariants() const {
  FSD_CHECK(doc_ids.size() == thread_ids.size(), "one thread id per document");
  std::uint32_t next = 0;
  for (std::size_t i = 0; i < thread_ids.size(); ++i) {
    const std::uint32_t t = thread_ids[i];
    if (t == next) {
      FSD_CHECK(t < thread_first.size() && thread_first[t] == i,
                "thread's first document must be its earliest member");
      ++next;
    } else {
      FSD_CHECK(t < next, "thread ids must be dense and creation ordered");
    }
  }
  FSD_CHECK(next == thread_first.size(), "thread count mismatch");
}

}  // namespace fsd
