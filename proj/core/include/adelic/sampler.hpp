#pragma once

#include <map>
#include <memory>
#include <span>
#include <vector>

#include "adelic/heat_kernel.hpp"
#include "adelic/padic.hpp"
#include "adelic/rng.hpp"

namespace adelic {

// Path values at finitely many epochs; times[0] = 0 and values[0] = start.
struct PathSkeleton {
  KernelParams params;
  std::vector<double> times;
  std::vector<PAdic> values;
  // Largest radial-window mass left out by any increment draw.
  double truncated_mass = 0.0;

  const PAdic& start() const { return values.front(); }
  const PAdic& end() const { return values.back(); }
};

struct PathEvent {
  double time;
  PAdic position;
};

// Exit-driven path observed at resolution p^r: each event is the first exit
// from the ball of radius p^r around the previous position.
struct EventPath {
  KernelParams params;
  int resolution = 0;
  PAdic start;
  std::vector<PathEvent> events;
  double horizon = 0.0;

  const PAdic& end() const { return events.empty() ? start : events.back().position; }
  // Position held on [event_k, event_{k+1}).
  const PAdic& position_at(double s) const;
};

struct BridgeSpec {
  KernelParams params;
  double t = 1.0;
  PAdic x;
  PAdic y;
};

// Reusable increment sampler: caches one radial law per time step.
class IncrementSampler {
 public:
  explicit IncrementSampler(const KernelParams& params, double coverage = RadialLaw::kDefaultCoverage);
  PAdic sample(double dt, RngStream& rng, int K = kDefaultPrecision);
  const RadialLaw& law(double dt);

 private:
  KernelParams params_;
  double coverage_;
  std::map<double, std::unique_ptr<RadialLaw>> laws_;
};

PAdic sample_increment(const KernelParams& params, double dt, RngStream& rng, int K = kDefaultPrecision);
PathSkeleton sample_skeleton(const KernelParams& params, std::span<const double> epochs, const PAdic& start,
                             RngStream& rng, int K = kDefaultPrecision);
PathSkeleton sample_skeleton(IncrementSampler& inc, std::span<const double> epochs, const PAdic& start,
                             RngStream& rng, int K = kDefaultPrecision);

EventPath sample_event_path(const KernelParams& params, const PAdic& start, double T, int r_min,
                            RngStream& rng);

// True iff some held position leaves B_r(start); needs r >= resolution.
bool sup_norm_exceeds(const EventPath& path, int r);

// Exact draw of z at time s from the density proportional to
// rho(s, z - za) rho(t - s, zb - z), where `left` is the law at s and
// `right` the law at t - s.
PAdic sample_conditional(const RadialLaw& left, const RadialLaw& right, const PAdic& za, const PAdic& zb,
                         RngStream& rng, int K = kDefaultPrecision);

// Bridge skeleton by recursive midpoint conditioning over fixed epochs.
class BridgeSampler {
 public:
  BridgeSampler(const KernelParams& params, double t, std::span<const double> epochs,
                int K = kDefaultPrecision);
  // Values at 0, the epochs, and t.
  PathSkeleton sample(const PAdic& x, const PAdic& y, RngStream& rng) const;

 private:
  struct Step {
    std::size_t lo, mid, hi;
    const RadialLaw* left;
    const RadialLaw* right;
  };
  KernelParams params_;
  std::vector<double> times_;
  int K_;
  std::map<double, std::unique_ptr<RadialLaw>> laws_;
  std::vector<Step> steps_;
};

PathSkeleton sample_bridge(const KernelParams& params, const BridgeSpec& spec, std::span<const double> epochs,
                           RngStream& rng, int K = kDefaultPrecision);

// Exact event-path bridge at resolution p^r: draws free event paths from x
// and accepts them with probability proportional to the conditional density
// of the endpoint y given the coarse path.
class EventBridgeSampler {
 public:
  EventBridgeSampler(const KernelParams& params, const PAdic& x, const PAdic& y, double t, int r,
                     const SeriesPolicy& policy = {});
  EventPath sample(RngStream& rng) const;
  double density() const { return rho_; }
  double acceptance_rate() const { return rho_ / bound_; }

 private:
  KernelParams params_;
  PAdic x_, y_;
  double t_;
  int r_;
  double rho_;
  double f_stay_;
  double f_moved_;
  double bound_;
};

// rho(t, y - x), treating endpoints that agree to their known precision as equal.
double transition_density(const KernelParams& params, double t, const PAdic& x, const PAdic& y,
                          const SeriesPolicy& policy = {});

}  // namespace adelic
