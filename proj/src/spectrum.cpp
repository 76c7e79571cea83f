#include "anharmonic/spectrum.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace anharmonic {

namespace {

bool is_zero(const Decimal& d) { return d.sign() == 0; }

// Runs body(i) for i in [0, count) on up to worker_count() threads and
// rethrows the first failure.
template <typename Body>
void parallel_for(std::size_t count, Body body) {
  const std::size_t threads = std::min<std::size_t>(worker_count(), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          const std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

// Truncated energy of global level `level` at one order.
Real sector_energy(const ModelParams& params, const Decimal& omega0, std::size_t level,
                   std::size_t order, const PrecisionContext& ctx) {
  const BasisSpec basis(omega0, parity_of_level(level), order);
  const BandedMatrix h = assemble_hamiltonian(params, basis, ctx);
  return BandedEigenSolver(h, ctx).eigenvalue(level / 2);
}

struct OrderResult {
  ConvergenceRow row;
  std::vector<EigenPair> pairs;
};

OrderResult solve_at_order(const ModelParams& params, const Decimal& omega0,
                           const std::vector<std::size_t>& levels, std::size_t order,
                           const PrecisionContext& ctx) {
  OrderResult out;
  out.row.order = order;
  out.row.energies.resize(levels.size());
  out.pairs.resize(levels.size());
  for (const Parity parity : {Parity::even, Parity::odd}) {
    std::vector<std::size_t> slots;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (parity_of_level(levels[i]) == parity) slots.push_back(i);
    }
    if (slots.empty()) continue;
    const BasisSpec basis(omega0, parity, order);
    const BandedMatrix h = assemble_hamiltonian(params, basis, ctx);
    const BandedEigenSolver solver(h, ctx);
    std::vector<EigenPair> done;
    for (const std::size_t slot : slots) {
      EigenPair pair;
      pair.level = levels[slot];
      pair.value = solver.eigenvalue(levels[slot] / 2);
      pair.vector = solver.eigenvector(pair.value, done);
      done.push_back(pair);
      out.row.energies[slot] = pair.value;
      out.pairs[slot] = std::move(pair);
    }
  }
  return out;
}

bool rows_agree(const ConvergenceRow& a, const ConvergenceRow& b, unsigned decimals) {
  for (std::size_t i = 0; i < a.energies.size(); ++i) {
    if (!agree_to_decimals(a.energies[i], b.energies[i], decimals)) return false;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------

unsigned worker_count() {
  if (const char* env = std::getenv("ANHARM_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return static_cast<unsigned>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

double predict_omega0(double lambda, const Omega0Model& model) {
  if (!(lambda > 0)) throw std::domain_error("omega0 prediction needs lambda > 0");
  const double mu = std::log(lambda);
  if (mu < 0) return std::max(1.0, model.a + model.b * mu);
  return model.a + model.b * mu + model.c * std::pow(mu, model.alpha);
}

double predict_omega0(const ModelParams& params, const Omega0Model& model) {
  const double omega = params.omega().to_double();
  if (is_zero(params.lambda())) return omega;
  const double reduced = params.lambda().to_double() / (omega * omega * omega);
  return omega * predict_omega0(reduced, model);
}

double optimize_omega0(const ModelParams& params, std::size_t order, std::size_t level,
                       const PrecisionContext& ctx) {
  if (order < level / 2 + 2) {
    throw std::invalid_argument("order too small for the requested level");
  }
  const double omega = params.omega().to_double();
  double lo = std::max(omega, 0.5);
  double hi = 3.0 * predict_omega0(params) + 10.0;
  const double tolerance = 0.05;

  // the energy surface is very flat near its minimum, so compare at twice
  // the working digits or the search just follows rounding noise
  const PrecisionContext fine = ctx.widened(ctx.working_digits());
  double best_x = 0;
  Real best_e;
  bool have_best = false;
  auto energy = [&](double x) {
    Real e = sector_energy(params, Decimal(x), level, order, fine);
    if (!have_best || e < best_e) {
      best_x = x;
      best_e = e;
      have_best = true;
    }
    return e;
  };

  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - ratio * (hi - lo);
  double d = lo + ratio * (hi - lo);
  Real fc = energy(c);
  Real fd = energy(d);
  while (hi - lo > tolerance) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - ratio * (hi - lo);
      fc = energy(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + ratio * (hi - lo);
      fd = energy(d);
    }
  }
  // the minimum can sit on the bracket edge (e.g. no coupling)
  energy(lo);
  energy(hi);
  return best_x;
}

double omega0_model_sse(const Omega0Model& model,
                        const std::vector<std::pair<double, double>>& points) {
  double sse = 0;
  for (const auto& [lambda, omega0] : points) {
    const double r = predict_omega0(lambda, model) - omega0;
    sse += r * r;
  }
  return sse;
}

Omega0Model fit_omega0_model(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 5) throw std::invalid_argument("omega0 fit needs at least 5 points");
  for (const auto& point : points) {
    if (!(point.first >= 1.0)) throw std::domain_error("omega0 fit needs every lambda >= 1");
  }
  const auto rows = static_cast<Eigen::Index>(points.size());
  Eigen::VectorXd mu(rows);
  Eigen::VectorXd target(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    mu(i) = std::log(points[static_cast<std::size_t>(i)].first);
    target(i) = points[static_cast<std::size_t>(i)].second;
  }

  Omega0Model best;
  double best_sse = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd design(rows, 3);
  for (int k = 0; k <= 2200; ++k) {
    const double alpha = 1.0 + 0.005 * k;
    for (Eigen::Index i = 0; i < rows; ++i) {
      design(i, 0) = 1.0;
      design(i, 1) = mu(i);
      design(i, 2) = std::pow(mu(i), alpha);
    }
    const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(target);
    const double sse = (design * coef - target).squaredNorm();
    if (sse < best_sse) {
      best_sse = sse;
      best = {coef(0), coef(1), coef(2), alpha};
    }
  }
  return best;
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> order_schedule(std::size_t n_start, std::size_t n_max) {
  std::vector<std::size_t> orders;
  for (std::size_t n = n_start; n <= n_max;) {
    orders.push_back(n);
    const std::size_t next = std::max(n + 1, (5 * n + 3) / 4);
    if (next > n_max && n < n_max) {
      orders.push_back(n_max);
      break;
    }
    n = next;
  }
  return orders;
}

Decimal resolve_omega0(const SolveRequest& request) {
  const ModelParams& params = request.params;
  switch (request.omega0_policy.kind()) {
    case Omega0Policy::Kind::fixed:
      return request.omega0_policy.value();
    case Omega0Policy::Kind::formula:
      if (is_zero(params.lambda())) return params.omega();
      return Decimal(predict_omega0(params));
    case Omega0Policy::Kind::optimize: {
      if (is_zero(params.lambda())) return params.omega();
      const std::size_t top = *std::max_element(request.levels.begin(), request.levels.end());
      const std::size_t order = std::max<std::size_t>(std::min<std::size_t>(request.n_start, 12),
                                                      top / 2 + 2);
      return Decimal(optimize_omega0(params, order, top, make_context(request.target_digits)));
    }
  }
  throw std::logic_error("unknown omega0 policy");
}

SolveResult solve_levels(const SolveRequest& request) {
  if (request.levels.empty()) throw std::invalid_argument("no levels requested");
  if (request.target_digits == 0) throw std::invalid_argument("target digits must be positive");
  const std::size_t top = *std::max_element(request.levels.begin(), request.levels.end());
  const std::size_t n_start = std::max(request.n_start, top / 2 + 2);
  if (request.n_max < n_start) {
    throw std::invalid_argument("n_max is below the smallest order that holds the requested levels");
  }

  const PrecisionContext ctx = make_context(request.target_digits);
  SolveResult result;
  result.omega0_used = resolve_omega0(request);

  std::vector<OrderResult> recent;
  for (const std::size_t order : order_schedule(n_start, request.n_max)) {
    OrderResult current = solve_at_order(request.params, result.omega0_used, request.levels, order, ctx);
    result.history.push_back(current.row);
    recent.push_back(std::move(current));
    if (recent.size() > 3) recent.erase(recent.begin());
    if (recent.size() == 3 &&
        rows_agree(recent[0].row, recent[1].row, request.target_digits) &&
        rows_agree(recent[1].row, recent[2].row, request.target_digits)) {
      result.final_order = recent[0].row.order;
      result.pairs = std::move(recent[0].pairs);
      return result;
    }
  }

  std::vector<ConvergenceRow> last;
  const auto& h = result.history;
  last.assign(h.end() - static_cast<std::ptrdiff_t>(std::min<std::size_t>(2, h.size())), h.end());
  throw ConvergenceError("energies not stable to " + std::to_string(request.target_digits) +
                             " decimals by order " + std::to_string(request.n_max),
                         std::move(last));
}

std::vector<ConvergenceRow> convergence_table(const ModelParams& params, const Decimal& omega0,
                                              const std::vector<std::size_t>& orders,
                                              std::size_t level, unsigned target_digits) {
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (orders[i] < level / 2) throw std::invalid_argument("order too small for the requested level");
    if (i > 0 && orders[i] <= orders[i - 1]) {
      throw std::invalid_argument("orders must be strictly increasing");
    }
  }
  const BasisSpec check(omega0, parity_of_level(level), 0);  // validates omega0
  (void)check;
  const PrecisionContext ctx = make_context(target_digits);
  std::vector<ConvergenceRow> rows(orders.size());
  parallel_for(orders.size(), [&](std::size_t i) {
    rows[i].order = orders[i];
    rows[i].energies = {sector_energy(params, omega0, level, orders[i], ctx)};
  });
  return rows;
}

}  // namespace anharmonic
