#include "cornerlab/reduce.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

namespace cornerlab {

std::string_view to_string(SumMethod m) noexcept {
  switch (m) {
    case SumMethod::direct: return "direct";
    case SumMethod::blocked: return "blocked";
    case SumMethod::parallel: return "parallel";
  }
  return "direct";
}

SumMethod parse_sum_method(std::string_view name) {
  if (name == "direct") return SumMethod::direct;
  if (name == "blocked") return SumMethod::blocked;
  if (name == "parallel") return SumMethod::parallel;
  throw std::invalid_argument("unknown summation method '" + std::string(name) + "'");
}

namespace {
std::string refusal_message(const std::string& what, double tuples, double budget) {
  std::ostringstream os;
  os << what << ": estimated " << tuples << " tuples exceeds budget " << budget
     << " (raise CORNERLAB_BUDGET_TUPLES to override)";
  return os.str();
}
}  // namespace

CostRefusal::CostRefusal(std::string what, double tuples, double budget)
    : std::runtime_error(refusal_message(what, tuples, budget)), tuples_(tuples), budget_(budget) {}

unsigned worker_count() {
  if (const char* env = std::getenv("CORNERLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v <= 0)
      throw std::invalid_argument("CORNERLAB_THREADS must be a positive integer");
    return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

double tuple_budget() {
  if (const char* env = std::getenv("CORNERLAB_BUDGET_TUPLES")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0))
      throw std::invalid_argument("CORNERLAB_BUDGET_TUPLES must be a positive number");
    return v;
  }
  return 1e9;
}

void check_budget(double tuples, std::string_view what) {
  const double budget = tuple_budget();
  if (tuples > budget) throw CostRefusal(std::string(what), tuples, budget);
}

double pairwise_sum(std::span<const double> values) noexcept {
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  if (n == 1) return values[0];
  const std::size_t half = n / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

std::size_t block_count(std::size_t n) noexcept { return (n + kReductionBlock - 1) / kReductionBlock; }

void for_each_block(std::size_t n, SumMethod method,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  if (method == SumMethod::direct) {
    body(0, 0, n);
    return;
  }
  const std::size_t blocks = block_count(n);
  auto run_block = [&](std::size_t b) {
    const std::size_t begin = b * kReductionBlock;
    body(b, begin, std::min(n, begin + kReductionBlock));
  };
  const unsigned workers = method == SumMethod::parallel
                               ? static_cast<unsigned>(std::min<std::size_t>(worker_count(), blocks))
                               : 1u;
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        try {
          for (std::size_t b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) run_block(b);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(blocks);
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

double reduce(std::size_t n, SumMethod method,
              const std::function<double(std::size_t, std::size_t)>& partial) {
  if (n == 0) return 0.0;
  if (method == SumMethod::direct) return partial(0, n);
  std::vector<double> partials(block_count(n), 0.0);
  for_each_block(n, method, [&](std::size_t b, std::size_t begin, std::size_t end) {
    partials[b] = partial(begin, end);
  });
  return pairwise_sum(partials);
}

}  // namespace cornerlab
