#include "biharm/solve.hpp"

#include <chrono>

namespace biharm {

namespace {

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - start_).count();
    start_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace

Solution solve_scheme(const Smoother& smoother, const SchemeConfig& config, const LoadSpec& load,
                      const SolverOptions& options) {
  Stopwatch clock;
  Solution sol;
  sol.config = config;
  SchemeSystem system = assemble_scheme(smoother.morley_space()->mesh_ptr(), config);
  sol.timings.assemble = clock.lap();

  sol.rhs = smoothed_load_vector(*system.space, smoother, load);
  sol.timings.load = clock.lap();

  SolverOptions opts = options;
  opts.expect_spd = options.expect_spd && system.symmetric;
  Eigen::VectorXd x = solve_linear(system.matrix, sol.rhs, system.symmetric, opts, &sol.stats);
  sol.timings.solve = clock.lap();

  sol.uh = DiscreteFunction(system.space, std::move(x));
  sol.ustar = smoother.apply(sol.uh);
  sol.matrix = std::move(system.matrix);
  sol.timings.postprocess = clock.lap();
  return sol;
}

Solution solve_scheme(std::shared_ptr<const Triangulation> mesh, const SchemeConfig& config,
                      const LoadSpec& load, const SolverOptions& options) {
  const Smoother smoother(std::move(mesh));
  return solve_scheme(smoother, config, load, options);
}

}  // namespace biharm
