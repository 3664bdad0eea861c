#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cornerlab {

/// How a form's outer summation is organised.
///
/// direct   - one running sum in lexicographic order.
/// blocked  - fixed-size blocks of the outer loop, block partials combined
///            by a pairwise tree.
/// parallel - the same blocks as `blocked`, spread over worker threads;
///            bit-identical to `blocked`.
enum class SumMethod { direct, blocked, parallel };

std::string_view to_string(SumMethod m) noexcept;
SumMethod parse_sum_method(std::string_view name);

/// Thrown when an evaluation would exceed the configured tuple budget.
class CostRefusal : public std::runtime_error {
 public:
  CostRefusal(std::string what, double tuples, double budget);
  double tuples() const noexcept { return tuples_; }
  double budget() const noexcept { return budget_; }

 private:
  double tuples_;
  double budget_;
};

/// Worker count from CORNERLAB_THREADS, else hardware concurrency.
unsigned worker_count();
/// Refusal threshold from CORNERLAB_BUDGET_TUPLES, default 1e9.
double tuple_budget();
void check_budget(double tuples, std::string_view what);

/// Pairwise (tree) sum; fixed association for a given length.
double pairwise_sum(std::span<const double> values) noexcept;

/// Items per block for the blocked and parallel methods. Independent of the
/// worker count so that both methods share one association order.
inline constexpr std::size_t kReductionBlock = 256;

std::size_t block_count(std::size_t n) noexcept;

/// Calls `body(block, begin, end)` for every block of [0, n). Blocks run in
/// order for direct and blocked, on worker threads for parallel. For direct
/// the whole range is a single block.
void for_each_block(std::size_t n, SumMethod method,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

/// Sums `partial(begin, end)` over [0, n) according to `method`. `partial`
/// must return the ordered sum over its item range and be safe to call
/// concurrently for disjoint ranges.
double reduce(std::size_t n, SumMethod method,
              const std::function<double(std::size_t, std::size_t)>& partial);

}  // namespace cornerlab
