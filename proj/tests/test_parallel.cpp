#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "conetrace/oracle.hpp"
#include "conetrace/parallel.hpp"

using namespace conetrace;

TEST_CASE("every index runs exactly once") {
  set_thread_count(4);
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) CHECK(h.load() == 1);
  set_thread_count(0);
}

TEST_CASE("results do not depend on the thread count") {
  const auto ev = doubled_square_spectrum(300.0);
  std::vector<double> t;
  for (int i = 0; i < 64; ++i) t.push_back(1.5 + 0.01 * i);
  set_thread_count(1);
  const auto one = smoothed_wave_trace(ev, 20.0, t).samples;
  set_thread_count(3);
  const auto three = smoothed_wave_trace(ev, 20.0, t).samples;
  set_thread_count(0);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(one[i] == three[i]);
}

TEST_CASE("worker exceptions reach the caller") {
  set_thread_count(3);
  CHECK_THROWS_AS(parallel_for(50, [](std::size_t i) {
                    if (i == 17) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
  set_thread_count(0);
}
