#include <algorithm>
#include <cmath>
#include <sstream>

#include "stillwater/solver.hpp"

namespace stillwater {

std::string to_string(Termination t) {
  switch (t) {
    case Termination::target_reached:
      return "target_reached";
    case Termination::blowup_threshold:
      return "blowup_threshold";
    case Termination::step_failure:
      return "step_failure";
  }
  return "unknown";
}

std::vector<double> geometric_schedule(double first, double target, int count) {
  if (!(first > 0) || !(target >= first) || count < 1) throw BadSpec("geometric_schedule: need 0 < first <= target");
  std::vector<double> s{0.0};
  if (count == 1) {
    s.push_back(target);
    return s;
  }
  const double ratio = std::pow(target / first, 1.0 / (count - 1));
  for (int i = 0; i < count - 1; ++i) s.push_back(first * std::pow(ratio, i));
  s.push_back(target);
  return s;
}

namespace {

double state_inner(const State& a, const State& b) {
  const PairSpectrum x = to_spectrum(a), y = to_spectrum(b);
  return sobolev_inner(x.c[0], y.c[0], 1) + sobolev_inner(x.c[1], y.c[1], 1) + sobolev_inner(x.c[2], y.c[2], 2);
}

class Tracker {
 public:
  Tracker(const Problem& prob, const ContinuationSettings& cont, const SolveSettings& settings,
          const BranchObserver& observer)
      : prob_(prob), cont_(cont), settings_(settings), observer_(observer) {}

  // Records an accepted point; returns true when a blowup threshold is crossed.
  bool accept(State x, double kappa, double residual, int iterations, int halvings, double step) {
    BranchPoint pt{std::move(x), kappa, {}, residual, iterations, halvings, step};
    pt.blowup = blowup_monitor(pt.state, prob_.beta(), kappa);
    branch.points.push_back(std::move(pt));
    const BranchPoint& b = branch.points.back();
    if (observer_) observer_(b);
    std::ostringstream os;
    if (b.blowup.eta_max > cont_.eta_max)
      os << "||eta||_inf = " << b.blowup.eta_max << " exceeds " << cont_.eta_max;
    else if (1.0 / b.blowup.inverse_depth < cont_.depth_min)
      os << "min depth " << 1.0 / b.blowup.inverse_depth << " below " << cont_.depth_min;
    else if (b.blowup.kappa_abs > cont_.kappa_max)
      os << "|kappa| = " << b.blowup.kappa_abs << " exceeds " << cont_.kappa_max;
    if (os.str().empty()) return false;
    branch.termination = Termination::blowup_threshold;
    branch.detail = os.str();
    return true;
  }

  void start() {
    State zero = State::zeros(prob_.grid());
    const FixedPointResidual r = fixed_point_residual(zero, 0.0, prob_, settings_.inner_krylov());
    accept(std::move(zero), 0.0, r.relative, 0, 0, 0.0);
  }

  Branch natural() {
    const auto& sched = cont_.schedule;
    if (sched.empty()) throw BadSpec("continue_branch: empty schedule");
    if (!cont_.initial && sched.front() != 0)
      throw BadSpec("continue_branch: schedule must start at kappa = 0 unless an initial state is given");
    const double dir = sched.size() > 1 && sched[1] < sched[0] ? -1.0 : 1.0;
    for (std::size_t i = 1; i < sched.size(); ++i)
      if (!(dir * (sched[i] - sched[i - 1]) > 0)) throw BadSpec("continue_branch: schedule must be strictly monotone");
    if (cont_.initial) {
      const FixedPointResidual r = fixed_point_residual(*cont_.initial, sched.front(), prob_, settings_.inner_krylov());
      if (r.relative > settings_.tol_nonlinear)
        throw BadSpec("continue_branch: initial state does not solve the problem at schedule.front()");
      accept(*cont_.initial, sched.front(), r.relative, 0, 0, 0.0);
    } else {
      start();
    }
    if (branch.termination == Termination::blowup_threshold) return std::move(branch);

    for (std::size_t i = 1; i < sched.size(); ++i) {
      const double target = sched[i];
      double step = target - branch.points.back().kappa;
      const double min_step = std::ldexp(std::abs(step), -cont_.max_halvings);
      int halvings = 0;
      while (dir * (target - branch.points.back().kappa) > 0) {
        const BranchPoint& last = branch.points.back();
        const double k = dir * (last.kappa + step - target) > 0 ? target : last.kappa + step;
        if (std::abs(k) > cont_.kappa_max) {
          branch.termination = Termination::blowup_threshold;
          branch.detail = "next kappa exceeds kappa_max";
          return std::move(branch);
        }
        std::vector<State> guesses;
        if (branch.points.size() >= 2) {
          const BranchPoint& prev = branch.points[branch.points.size() - 2];
          State pred = last.state;
          State diff = last.state;
          diff.axpy(-1.0, prev.state);
          pred.axpy((k - last.kappa) / (last.kappa - prev.kappa), diff);
          guesses.push_back(std::move(pred));
        }
        guesses.push_back(last.state);
        std::string why;
        bool done = false;
        for (const State& guess : guesses) {
          try {
            SolveResult r = newton_solve(k, prob_, guess, settings_);
            if (accept(std::move(r.state), k, r.residual, r.iterations, halvings, k - last.kappa))
              return std::move(branch);
            done = true;
            break;
          } catch (const ConvergenceError& e) {
            why = e.what();
          } catch (const DepthViolation& e) {
            why = e.what();
          } catch (const RangeViolation& e) {
            why = e.what();
          }
        }
        if (done) {
          // Regrow after a reduction; a fold in kappa shows up as steps that
          // keep shrinking until min_step.
          if (halvings > 0) step *= 2;
          halvings = 0;
          continue;
        }
        step *= 0.5;
        ++halvings;
        if (std::abs(step) < min_step) {
          branch.termination = Termination::step_failure;
          std::ostringstream os;
          os << "no convergence towards kappa = " << target << " with steps down to " << min_step
             << " (possible fold in kappa): " << why;
          branch.detail = os.str();
          return std::move(branch);
        }
      }
    }
    branch.termination = Termination::target_reached;
    return std::move(branch);
  }

  Branch arclength() {
    if (!(cont_.ds > 0) || !(cont_.ds_min > 0) || !(cont_.ds_max >= cont_.ds))
      throw BadSpec("continue_branch: need 0 < ds_min, 0 < ds <= ds_max");
    start();
    if (branch.termination == Termination::blowup_threshold) return std::move(branch);
    const Grid& g = prob_.grid();

    // Initial tangent (dx/dkappa, 1) at the trivial solution.
    RhsPair f0{Field(g), forcing_map(Field(g), prob_)};
    State tx = solve_linear(f0, prob_, settings_.krylov());
    double tk = 1.0;
    double ds = cont_.ds;
    int halvings = 0;

    for (int step = 0; step < cont_.max_steps; ++step) {
      const BranchPoint& last = branch.points.back();
      const double wx = 1.0 / (1.0 + state_norm(last.state));
      const double wk = 1.0 / (1.0 + std::abs(last.kappa));
      {
        const double n = std::sqrt(wx * wx * state_inner(tx, tx) + wk * wk * tk * tk);
        tx.u *= 1.0 / n;
        tx.eta *= 1.0 / n;
        tk /= n;
      }
      std::string why;
      int iterations = 0;
      double residual = 0;
      State x = last.state;
      x.axpy(ds, tx);
      double k = last.kappa + ds * tk;
      bool ok = false;
      try {
        for (int it = 0; it <= settings_.max_newton; ++it) {
          const FixedPointResidual G = fixed_point_residual(x, k, prob_, settings_.inner_krylov());
          State off = x;
          off.axpy(-1.0, last.state);
          const double arc = wx * wx * state_inner(tx, off) + wk * wk * tk * (k - last.kappa) - ds;
          residual = G.relative;
          if (G.relative <= settings_.tol_nonlinear && std::abs(arc) <= 1e-6 * ds) {
            ok = true;
            iterations = it;
            break;
          }
          RhsPair r = residual_full(x, k, prob_);
          r.g *= -1.0;
          r.phi *= -1.0;
          const double tol = std::clamp(G.relative, settings_.inner_krylov().tolerance, 1e-3);
          const State a = solve_jacobian(x, k, prob_, r, settings_, tol);
          RhsPair fk{Field(g), forcing_map(x.eta, prob_)};
          const State b = solve_jacobian(x, k, prob_, fk, settings_, tol);
          const double dk = (-arc - wx * wx * state_inner(tx, a)) / (wx * wx * state_inner(tx, b) + wk * wk * tk);
          x.axpy(1.0, a);
          x.axpy(dk, b);
          x.eta = project_mean_zero(x.eta);
          k += dk;
        }
        if (!ok) why = "corrector did not converge";
      } catch (const ConvergenceError& e) {
        why = e.what();
      } catch (const DepthViolation& e) {
        why = e.what();
      } catch (const RangeViolation& e) {
        why = e.what();
      }
      if (!ok) {
        ds *= 0.5;
        if (++halvings > cont_.max_halvings || ds < cont_.ds_min) {
          branch.termination = Termination::step_failure;
          branch.detail = "arclength step failed: " + why;
          return std::move(branch);
        }
        continue;
      }
      // Secant tangent, oriented along the previous one.
      State ntx = x;
      ntx.axpy(-1.0, last.state);
      double ntk = k - last.kappa;
      if (wx * wx * state_inner(ntx, tx) + wk * wk * ntk * tk < 0) {
        ntx.u *= -1.0;
        ntx.eta *= -1.0;
        ntk = -ntk;
      }
      const double used = ds;
      if (accept(std::move(x), k, residual, iterations, halvings, used)) return std::move(branch);
      tx = std::move(ntx);
      tk = ntk;
      halvings = 0;
      if (iterations <= 3) ds = std::min(1.5 * ds, cont_.ds_max);
      if (branch.points.back().kappa >= cont_.kappa_target) {
        branch.termination = Termination::target_reached;
        return std::move(branch);
      }
    }
    branch.termination = Termination::step_failure;
    branch.detail = "arclength step budget exhausted";
    return std::move(branch);
  }

  Branch branch;

 private:
  const Problem& prob_;
  const ContinuationSettings& cont_;
  const SolveSettings& settings_;
  const BranchObserver& observer_;
};

}  // namespace

Branch continue_branch(const Problem& prob, const ContinuationSettings& cont, const SolveSettings& settings,
                       const BranchObserver& observer) {
  settings.validate();
  Tracker t(prob, cont, settings, observer);
  return cont.mode == ContinuationSettings::Mode::natural ? t.natural() : t.arclength();
}

}  // namespace stillwater
