#include <gtest/gtest.h>

#include <cstdlib>
#include <numeric>
#include <vector>

#include "cornerlab/reduce.hpp"

using namespace cornerlab;

TEST(Reduce, PairwiseSumExactOnIntegers) {
  std::vector<double> v(1000);
  std::iota(v.begin(), v.end(), 1.0);
  EXPECT_EQ(pairwise_sum(v), 500500.0);
  EXPECT_EQ(pairwise_sum(std::span<const double>{}), 0.0);
}

TEST(Reduce, MethodsAgreeAndParallelMatchesBlocked) {
  const std::size_t n = 10007;
  auto partial = [](std::size_t b, std::size_t e) {
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) s += 1.0 / (1.0 + static_cast<double>(i));
    return s;
  };
  const double direct = reduce(n, SumMethod::direct, partial);
  const double blocked = reduce(n, SumMethod::blocked, partial);
  const double parallel = reduce(n, SumMethod::parallel, partial);
  EXPECT_NEAR(direct, blocked, 1e-12);
  EXPECT_EQ(blocked, parallel);
  EXPECT_EQ(block_count(n), (n + kReductionBlock - 1) / kReductionBlock);
}

TEST(Reduce, DirectIsOneBlock) {
  std::size_t calls = 0;
  for_each_block(5000, SumMethod::direct, [&](std::size_t b, std::size_t lo, std::size_t hi) {
    ++calls;
    EXPECT_EQ(b, 0u);
    EXPECT_EQ(lo, 0u);
    EXPECT_EQ(hi, 5000u);
  });
  EXPECT_EQ(calls, 1u);
}

TEST(Reduce, ParallelRethrows) {
  EXPECT_THROW(reduce(4096, SumMethod::parallel,
                      [](std::size_t b, std::size_t) -> double {
                        if (b >= 1024) throw std::runtime_error("boom");
                        return 0.0;
                      }),
               std::runtime_error);
}

TEST(Reduce, ParseMethod) {
  EXPECT_EQ(parse_sum_method("blocked"), SumMethod::blocked);
  EXPECT_EQ(to_string(SumMethod::parallel), "parallel");
  EXPECT_THROW(parse_sum_method("fast"), std::invalid_argument);
}

TEST(Reduce, BudgetFromEnvironment) {
  ::setenv("CORNERLAB_BUDGET_TUPLES", "1000", 1);
  EXPECT_EQ(tuple_budget(), 1000.0);
  EXPECT_NO_THROW(check_budget(999, "small"));
  EXPECT_THROW(check_budget(1001, "large"), CostRefusal);
  ::unsetenv("CORNERLAB_BUDGET_TUPLES");
  EXPECT_EQ(tuple_budget(), 1e9);
}

TEST(Reduce, WorkerCountFromEnvironment) {
  ::setenv("CORNERLAB_THREADS", "3", 1);
  EXPECT_EQ(worker_count(), 3u);
  ::unsetenv("CORNERLAB_THREADS");
  EXPECT_GE(worker_count(), 1u);
}
