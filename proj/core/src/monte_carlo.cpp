#include "pairstat/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "pairstat/error.hpp"
#include "pairstat/rng.hpp"
#include "pairstat/transition_matrix.hpp"

namespace pairstat {
namespace {

// Per-pair fates, in the order of WindowSampler::cumulative_.
constexpr std::array<DetectorOutcome, 5> kPairFates = {{
    {true, false, true},   // H and A
    {false, true, true},   // H and B
    {false, false, true},  // H only
    {true, false, false},  // A only
    {false, true, false},  // B only
}};

constexpr DetectorOutcome kAllClicked{true, true, true};

unsigned worker_count(unsigned requested, std::uint64_t batches) {
  unsigned n = requested ? requested : std::thread::hardware_concurrency();
  n = std::max(n, 1u);
  return static_cast<unsigned>(std::min<std::uint64_t>(n, batches));
}

}  // namespace

WindowSampler::WindowSampler(const SetupModel& setup,
                             const PairDistribution& dist,
                             std::optional<std::uint64_t> max_pairs)
    : dist_(dist),
      max_pairs_(max_pairs),
      d_h_(setup.darks().d_h()),
      d_a_(setup.darks().d_a()),
      d_b_(setup.darks().d_b()) {
  // Rejects c values that give negative cell probabilities.
  (void)correlated_detection_matrix(setup.transmissions(), setup.c());

  const double h = setup.transmissions().eta_h();
  const double a = setup.transmissions().eta_a();
  const double b = setup.transmissions().eta_b();
  const double c = setup.c();
  const std::array<double, 5> cells = {
      c * h * a, c * h * b, h * (1.0 - c * (a + b)), a * (1.0 - c * h),
      b * (1.0 - c * h)};
  double acc = 0.0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    acc += std::max(cells[i], 0.0);
    cumulative_[i] = acc;
  }

  if (dist.mu() > 0.0) {
    if (dist.kind() == PairDistributionKind::poisson) {
      poisson_ = std::poisson_distribution<long long>(dist.mu());
    } else {
      const double ch = std::cosh(dist.mu());
      geometric_ = std::geometric_distribution<long long>(1.0 / (ch * ch));
    }
  }
}

std::uint64_t WindowSampler::draw_pairs(std::mt19937_64& rng) {
  if (dist_.mu() == 0.0) return 0;
  const long long n = dist_.kind() == PairDistributionKind::poisson
                          ? poisson_(rng)
                          : geometric_(rng);
  auto pairs = static_cast<std::uint64_t>(std::max(n, 0LL));
  if (max_pairs_) pairs = std::min(pairs, *max_pairs_);
  return pairs;
}

DetectorOutcome WindowSampler::operator()(std::mt19937_64& rng) {
  DetectorOutcome state;
  const std::uint64_t pairs = draw_pairs(rng);
  for (std::uint64_t i = 0; i < pairs && !(state == kAllClicked); ++i) {
    const double u = uniform_(rng);
    const auto it =
        std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it != cumulative_.end()) {
      state = state.merged(kPairFates[static_cast<std::size_t>(
          it - cumulative_.begin())]);
    }
  }
  if (d_a_ > 0.0 && uniform_(rng) < d_a_) state.a_clicked = true;
  if (d_b_ > 0.0 && uniform_(rng) < d_b_) state.b_clicked = true;
  if (d_h_ > 0.0 && uniform_(rng) < d_h_) state.h_clicked = true;
  return state;
}

void for_each_window(const SetupModel& setup, const PairDistribution& dist,
                     std::uint64_t n_windows, std::uint64_t seed,
                     const std::function<void(DetectorOutcome)>& visit,
                     const SimulationOptions& options) {
  if (options.batch_size == 0) throw InvalidArgument("batch_size must be > 0");
  for (std::uint64_t start = 0, batch = 0; start < n_windows;
       start += options.batch_size, ++batch) {
    WindowSampler sampler(setup, dist, options.max_pairs_per_window);
    auto rng = make_stream(seed, batch);
    const std::uint64_t end = std::min(n_windows, start + options.batch_size);
    for (std::uint64_t w = start; w < end; ++w) visit(sampler(rng));
  }
}

ClickCounts simulate_windows(const SetupModel& setup,
                             const PairDistribution& dist,
                             std::uint64_t n_windows, std::uint64_t seed,
                             const SimulationOptions& options) {
  if (n_windows < 1) throw InvalidArgument("n_windows must be >= 1");
  if (options.batch_size == 0) throw InvalidArgument("batch_size must be > 0");
  // Validate once up front so worker threads never throw.
  (void)WindowSampler(setup, dist, options.max_pairs_per_window);

  const std::uint64_t batches =
      (n_windows + options.batch_size - 1) / options.batch_size;
  const unsigned workers = worker_count(options.threads, batches);

  std::vector<ClickCounts> partial(workers);
  auto run = [&](unsigned worker) {
    ClickCounts& counts = partial[worker];
    for (std::uint64_t batch = worker; batch < batches; batch += workers) {
      WindowSampler sampler(setup, dist, options.max_pairs_per_window);
      auto rng = make_stream(seed, batch);
      const std::uint64_t start = batch * options.batch_size;
      const std::uint64_t end =
          std::min(n_windows, start + options.batch_size);
      for (std::uint64_t w = start; w < end; ++w) ++counts[sampler(rng)];
    }
  };

  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }

  ClickCounts total;
  for (const auto& p : partial) total += p;
  total.seed = seed;
  return total;
}

G2Estimate simulate_heralded_g2(const SetupModel& setup,
                                const PairDistribution& dist,
                                std::uint64_t n_heralds, std::uint64_t seed,
                                const G2SimulationOptions& options) {
  if (n_heralds < 1) throw InvalidArgument("n_heralds must be >= 1");
  const std::uint64_t batch_size = options.simulation.batch_size;
  if (batch_size == 0) throw InvalidArgument("batch_size must be > 0");

  G2Estimate est;
  bool done = false;
  for (std::uint64_t batch = 0; !done; ++batch) {
    WindowSampler sampler(setup, dist,
                          options.simulation.max_pairs_per_window);
    auto rng = make_stream(seed, batch);
    for (std::uint64_t w = 0; w < batch_size; ++w) {
      if (est.n_windows >= options.max_windows) {
        throw NumericalError(
            "window budget exhausted after " +
            std::to_string(est.n_windows) + " windows with only " +
            std::to_string(est.n_conditioning) + " of " +
            std::to_string(n_heralds) + " conditioning events");
      }
      const DetectorOutcome o = sampler(rng);
      ++est.n_windows;
      if (options.heralded && !o.h_clicked) continue;
      ++est.n_conditioning;
      est.n_a += o.a_clicked ? 1 : 0;
      est.n_b += o.b_clicked ? 1 : 0;
      est.n_ab += (o.a_clicked && o.b_clicked) ? 1 : 0;
      if (est.n_conditioning == n_heralds) {
        done = true;
        break;
      }
    }
  }

  const double n = static_cast<double>(est.n_conditioning);
  const double pa = static_cast<double>(est.n_a) / n;
  const double pb = static_cast<double>(est.n_b) / n;
  const double pab = static_cast<double>(est.n_ab) / n;
  if (pa == 0.0 || pb == 0.0) {
    throw NumericalError("simulated g2 undefined: no A or no B clicks");
  }
  est.g2 = pab / (pa * pb);

  auto rel_var = [n](double p) { return (1.0 - p) / (n * p); };
  if (est.n_ab > 0) {
    est.std_error =
        est.g2 * std::sqrt(rel_var(pab) + rel_var(pa) + rel_var(pb));
  } else {
    // One count's worth of numerator.
    est.std_error = (1.0 / n) / (pa * pb);
  }
  return est;
}

}  // namespace pairstat
