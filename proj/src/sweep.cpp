#include "reso/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "reso/config.hpp"
#include "reso/errors.hpp"

namespace reso {

std::vector<SweepPoint> sweep(const Scenario& base, const std::string& key,
                              const std::vector<double>& values, bool keep_traces,
                              unsigned threads) {
  std::vector<SweepPoint> out(values.size());
  if (values.empty()) return out;
  const Json base_json = scenario_to_json(base);
  for (double v : values)
    if (!std::isfinite(v)) throw InvalidParameter("sweep values must be finite");
  {
    // Throws for a key the scenario does not have.
    Json probe = base_json;
    apply_override(probe, key, Json(values.front()));
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      SweepPoint& p = out[i];
      p.value = values[i];
      try {
        Json j = base_json;
        apply_override(j, key, Json(values[i]));
        const Scenario s = scenario_from_json(j);
        Trace tr = run(s);
        p.metrics = compute_metrics(tr, metrics_options(s));
        if (keep_traces) p.trace = std::move(tr);
        p.ok = true;
      } catch (const std::exception& e) {
        p.error = e.what();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(values.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace reso
